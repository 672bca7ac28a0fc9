//! Output SINRs, achievable rates and the secrecy rate.

use crate::error::Result;
use crate::numerics::{CMatrix, CVector};
use crate::rbf::mallory_receiver;
use crate::txmodel::{CovarianceSet, Scenario};

/// Real part of `v^H m v`, clamped at zero against roundoff.
fn quad(m: &CMatrix, v: &CVector) -> f64 {
    v.dot(&(m * v)).re.max(0.0)
}

pub fn sinr_bob(v: &CVector, cov: &CovarianceSet, sigma_b2: f64) -> f64 {
    let signal = quad(&cov.a, v);
    if signal == 0.0 {
        return 0.0;
    }
    signal / (quad(&cov.b, v) + quad(&cov.d, v) + sigma_b2 * v.norm_sqr())
}

pub fn sinr_mallory(v: &CVector, cov: &CovarianceSet, sigma_m2: f64) -> f64 {
    let signal = quad(&cov.e, v);
    if signal == 0.0 {
        return 0.0;
    }
    signal / (quad(&cov.f, v) + quad(&cov.r_m, v) + sigma_m2 * v.norm_sqr())
}

pub fn rate_from_sinr(sinr: f64) -> f64 {
    sinr.ln_1p() / std::f64::consts::LN_2
}

pub fn rate_bob(v: &CVector, cov: &CovarianceSet, sigma_b2: f64) -> f64 {
    rate_from_sinr(sinr_bob(v, cov, sigma_b2))
}

pub fn rate_mallory(v: &CVector, cov: &CovarianceSet, sigma_m2: f64) -> f64 {
    rate_from_sinr(sinr_mallory(v, cov, sigma_m2))
}

pub fn secrecy_rate(rate_bob: f64, rate_mallory: f64) -> f64 {
    (rate_bob - rate_mallory).max(0.0)
}

/// Linear SINRs and rates (bits/s/Hz) for one beamformer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub sinr_bob: f64,
    pub sinr_mallory: f64,
    pub rate_bob: f64,
    pub rate_mallory: f64,
    pub secrecy_rate: f64,
}

impl RatePoint {
    pub fn from_sinrs(sinr_bob: f64, sinr_mallory: f64) -> Self {
        let rate_bob = rate_from_sinr(sinr_bob);
        let rate_mallory = rate_from_sinr(sinr_mallory);
        Self {
            sinr_bob,
            sinr_mallory,
            rate_bob,
            rate_mallory,
            secrecy_rate: secrecy_rate(rate_bob, rate_mallory),
        }
    }
}

/// Rates for Bob's weights `v_br` against Mallory's max-SINR receiver.
pub fn evaluate(sc: &Scenario, v_br: &CVector) -> Result<RatePoint> {
    let v_mr = mallory_receiver(sc)?;
    Ok(evaluate_with(sc, v_br, &v_mr))
}

/// As [`evaluate`] with Mallory's receiver supplied, so it can be shared
/// across methods.
pub fn evaluate_with(sc: &Scenario, v_br: &CVector, v_mr: &CVector) -> RatePoint {
    let cov = &sc.covariances;
    RatePoint::from_sinrs(
        sinr_bob(v_br, cov, sc.config.sigma_b2),
        sinr_mallory(v_mr, cov, sc.config.sigma_m2),
    )
}
