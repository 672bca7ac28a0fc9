//! Receive beamforming for a directional-modulation link under attack by a
//! full-duplex eavesdropper that also jams.
//!
//! A [`Scenario`] bundles the line-of-sight channels, Alice's transmit
//! construction and the resulting covariance matrices. The [`rbf`] module
//! designs Bob's receive weights, [`metrics`] turns them into secrecy rates,
//! and [`montecarlo`] simulates QPSK bit error rates.

// Negated comparisons are used on purpose so that NaN fails every check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod complexity;
mod error;
pub mod metrics;
pub mod montecarlo;
pub mod numerics;
pub mod rbf;
pub mod txmodel;

pub use error::{Error, Result};
pub use metrics::RatePoint;
pub use montecarlo::{BerRun, PerformanceReport, SweepAxis};
pub use numerics::{CMatrix, CVector, Flops, C64};
pub use rbf::{Beamformer, ChainLevel, Method};
pub use txmodel::{Scenario, ScenarioConfig, SnrDefinition};
