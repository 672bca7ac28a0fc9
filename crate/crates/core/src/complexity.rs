//! Closed-form FLOP polynomials and instrumented counts.

use std::fmt;

use crate::error::Result;
use crate::rbf::Method;
use crate::txmodel::{Scenario, ScenarioConfig};

/// Evaluates the method's cost polynomial literally.
pub fn formula_flops(method: Method, n_a: usize, n_b: usize, n_m: usize) -> u64 {
    let (a, b, m) = (n_a as i128, n_b as i128, n_m as i128);
    let value = match method {
        Method::Mrc => 3 * a * b + 2 * b,
        Method::Wfmrc => b.pow(3) + 4 * a * a + 7 * b * b + 5 * a * b + 3 * b * m - 2 * a - b - 1,
        Method::MaxSr => b.pow(3) + 4 * a * a + 8 * b * b + 5 * a * b + 3 * b * m - 2 * a - b - 1,
        Method::NspMaxWfrp => {
            4 * b.pow(3) + m.pow(3) + 4 * a * a + 7 * b * b + 4 * a * b + 3 * b * m + 3 * m * m
                - 2 * a
                - m
                - 2
        }
        Method::MmseLowComplexity => 36 * b * b + 12 * a * b + 6 * b * m + 3 * a + m - 14 * b - 6,
        Method::MmseConventional => {
            b.pow(3) + 2 * a * a * b + 2 * b * b * a + 7 * b * b + a * b + 2 * b * m - b - 1
        }
    };
    u64::try_from(value.max(0)).unwrap_or(u64::MAX)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Order {
    Linear,
    Quadratic,
    Cubic,
}

impl Order {
    /// Expected growth factor when `N_B` doubles.
    pub fn doubling_factor(self) -> f64 {
        match self {
            Order::Linear => 2.0,
            Order::Quadratic => 4.0,
            Order::Cubic => 8.0,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Order::Linear => "linear",
            Order::Quadratic => "quadratic",
            Order::Cubic => "cubic",
        })
    }
}

/// Growth in `N_B`.
pub fn asymptotic_order(method: Method) -> Order {
    match method {
        Method::Mrc => Order::Linear,
        Method::MmseLowComplexity => Order::Quadratic,
        Method::Wfmrc | Method::MaxSr | Method::MmseConventional | Method::NspMaxWfrp => Order::Cubic,
    }
}

/// FLOPs counted while designing the method's weights for `sc`.
pub fn measured_flops(method: Method, sc: &Scenario) -> Result<u64> {
    Ok(method.design(sc)?.flops)
}

/// `measured(2 N_B) / measured(N_B)` with all other parameters from `cfg`.
pub fn doubling_ratio(method: Method, cfg: &ScenarioConfig, n_b: usize) -> Result<f64> {
    let small = Scenario::new(ScenarioConfig { n_b, ..cfg.clone() })?;
    let large = Scenario::new(ScenarioConfig {
        n_b: 2 * n_b,
        ..cfg.clone()
    })?;
    Ok(measured_flops(method, &large)? as f64 / measured_flops(method, &small)? as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlopReport {
    pub method: Method,
    pub formula_flops: u64,
    pub measured_flops: u64,
    pub n_a: usize,
    pub n_b: usize,
    pub n_m: usize,
}

impl FlopReport {
    pub fn new(method: Method, sc: &Scenario) -> Result<Self> {
        let cfg = &sc.config;
        Ok(Self {
            method,
            formula_flops: formula_flops(method, cfg.n_a, cfg.n_b, cfg.n_m),
            measured_flops: measured_flops(method, sc)?,
            n_a: cfg.n_a,
            n_b: cfg.n_b,
            n_m: cfg.n_m,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_array_values() {
        assert_eq!(formula_flops(Method::Mrc, 4, 4, 4), 56);
        assert_eq!(formula_flops(Method::MmseConventional, 4, 4, 4), 475);
        assert_eq!(formula_flops(Method::MmseLowComplexity, 4, 4, 4), 818);
    }

    #[test]
    fn large_array_chain() {
        let f = |m| formula_flops(m, 64, 64, 64);
        assert!(f(Method::NspMaxWfrp) > f(Method::MmseConventional));
        assert!(f(Method::MmseConventional) > f(Method::MaxSr));
        assert!(f(Method::MaxSr) > f(Method::Wfmrc));
        assert!(f(Method::Wfmrc) > f(Method::MmseLowComplexity));
        assert!(f(Method::MmseLowComplexity) > f(Method::Mrc));
    }

    #[test]
    fn small_array_crossover_is_real() {
        // the low-complexity receiver only pays off for larger arrays
        assert!(formula_flops(Method::MmseLowComplexity, 4, 4, 4) > formula_flops(Method::MmseConventional, 4, 4, 4));
    }

    #[test]
    fn positive_everywhere() {
        for m in Method::ALL {
            for a in 1..6 {
                for b in 1..6 {
                    for c in 1..6 {
                        assert!(formula_flops(m, a, b, c) > 0, "{m} {a} {b} {c}");
                    }
                }
            }
        }
    }

    #[test]
    fn orders() {
        assert_eq!(asymptotic_order(Method::Mrc), Order::Linear);
        assert_eq!(asymptotic_order(Method::MmseLowComplexity), Order::Quadratic);
        assert_eq!(asymptotic_order(Method::Wfmrc), Order::Cubic);
    }

    #[test]
    fn mrc_measured_close_to_formula() {
        let sc = Scenario::new(ScenarioConfig::default()).unwrap();
        let r = FlopReport::new(Method::Mrc, &sc).unwrap();
        assert!(r.measured_flops <= 2 * r.formula_flops && 2 * r.measured_flops >= r.formula_flops);
    }
}
