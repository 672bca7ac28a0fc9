//! Symbol-level QPSK simulation of Bob's receiver.
//!
//! At each sweep point every method sees the same symbols, artificial noise,
//! jamming and thermal noise. Points draw from independent streams of one
//! seeded ChaCha generator, so results do not depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::complexity::formula_flops;
use crate::error::{Error, Result};
use crate::metrics::{evaluate_with, RatePoint};
use crate::numerics::{CVector, C64};
use crate::rbf::{mallory_receiver, Method};
use crate::txmodel::{complex_gaussian, effective_channel, Scenario, ScenarioConfig};

/// Normal quantile for a two-sided 95% interval.
pub const Z95: f64 = 1.96;

/// Wilson score interval `(low, high)` for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerRun {
    pub method: Method,
    pub snr_db: f64,
    pub n_symbols: u64,
    pub rng_seed: u64,
    pub n_errors: u64,
    pub ber: f64,
    /// Wilson 95% interval on the bit error probability.
    pub ci95: (f64, f64),
}

impl BerRun {
    fn new(method: Method, snr_db: f64, n_symbols: u64, rng_seed: u64, n_errors: u64) -> Self {
        let bits = 2 * n_symbols;
        Self {
            method,
            snr_db,
            n_symbols,
            rng_seed,
            n_errors,
            ber: n_errors as f64 / bits as f64,
            ci95: wilson_interval(n_errors, bits, Z95),
        }
    }

    pub fn ci95_half_width(&self) -> f64 {
        (self.ci95.1 - self.ci95.0) / 2.0
    }
}

/// Per-method projections of every received component, so one draw of the
/// random vectors serves all receivers.
struct Projection {
    /// `w^H` times the signal column.
    signal: C64,
    an: Vec<C64>,
    jam: Vec<C64>,
    noise: Vec<C64>,
}

/// Bit-error counts for each weight vector over a common random sequence.
fn count_errors(sc: &Scenario, weights: &[&CVector], n_symbols: u64, rng: &mut ChaCha8Rng) -> Result<Vec<u64>> {
    let cfg = &sc.config;
    let ch = &sc.channels;
    let setup = &sc.setup;

    let signal = effective_channel(ch, setup, &mut Default::default())
        .scale_real((ch.ab.gain * cfg.beta1 * cfg.p_a_watt).sqrt());
    let an = ch
        .ab
        .matrix
        .mul_counted(&setup.t_a_an, &mut Default::default())
        .scale_real((ch.ab.gain * (1.0 - cfg.beta1) * cfg.p_a_watt).sqrt());
    let jam = ch
        .mb
        .matrix
        .mul_counted(&setup.t_m_an, &mut Default::default())
        .scale_real((ch.mb.gain * cfg.p_m_watt).sqrt());
    let noise_std = cfg.sigma_b2.sqrt();

    let projections = weights
        .iter()
        .map(|w| {
            let s = w.dot(&signal);
            if !(s.norm() > 1e-300) {
                return Err(Error::DegenerateChannel("beamformer output carries no signal"));
            }
            let row = |m: &crate::numerics::CMatrix| -> Vec<C64> {
                (0..m.cols()).map(|j| w.dot(&m.column(j))).collect()
            };
            Ok(Projection {
                signal: s,
                an: row(&an),
                jam: row(&jam),
                noise: w.iter().map(|x| x.conj() * noise_std).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut z_a = vec![C64::new(0.0, 0.0); an.cols()];
    let mut z_m = vec![C64::new(0.0, 0.0); jam.cols()];
    let mut n_b = vec![C64::new(0.0, 0.0); cfg.n_b];
    let mut errors = vec![0u64; weights.len()];
    let s = std::f64::consts::FRAC_1_SQRT_2;

    for _ in 0..n_symbols {
        let b0: bool = rng.random();
        let b1: bool = rng.random();
        let d = C64::new(if b0 { -s } else { s }, if b1 { -s } else { s });
        z_a.iter_mut().for_each(|z| *z = complex_gaussian(rng));
        z_m.iter_mut().for_each(|z| *z = complex_gaussian(rng));
        n_b.iter_mut().for_each(|z| *z = complex_gaussian(rng));

        for (p, e) in projections.iter().zip(errors.iter_mut()) {
            let dot = |coef: &[C64], x: &[C64]| coef.iter().zip(x).map(|(a, b)| a * b).sum::<C64>();
            let y = p.signal * d + dot(&p.an, &z_a) + dot(&p.jam, &z_m) + dot(&p.noise, &n_b);
            let eq = y / p.signal;
            *e += u64::from((eq.re < 0.0) != b0) + u64::from((eq.im < 0.0) != b1);
        }
    }
    Ok(errors)
}

fn point_rng(seed: u64, point: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(point);
    rng
}

/// Monte-Carlo BER of one method at one SNR.
pub fn simulate_ber(cfg: &ScenarioConfig, method: Method, snr_db: f64, n_symbols: u64, seed: u64) -> Result<BerRun> {
    if n_symbols == 0 {
        return Err(Error::config("n_symbols", "must be at least 1"));
    }
    let sc = Scenario::new(cfg.with_snr_db(snr_db))?;
    let bf = method.design(&sc)?;
    let errors = count_errors(&sc, &[&bf.weights], n_symbols, &mut point_rng(seed, 0))?;
    Ok(BerRun::new(method, snr_db, n_symbols, seed, errors[0]))
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepAxis {
    SnrDb(Vec<f64>),
    PmWatt(Vec<f64>),
}

impl SweepAxis {
    pub fn values(&self) -> &[f64] {
        match self {
            SweepAxis::SnrDb(v) | SweepAxis::PmWatt(v) => v,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::SnrDb(_) => "snr_db",
            SweepAxis::PmWatt(_) => "p_m_watt",
        }
    }

    fn apply(&self, cfg: &ScenarioConfig, value: f64) -> ScenarioConfig {
        match self {
            SweepAxis::SnrDb(_) => cfg.with_snr_db(value),
            SweepAxis::PmWatt(_) => ScenarioConfig {
                p_m_watt: value,
                ..cfg.clone()
            },
        }
    }
}

/// One method at one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct PerformanceReport {
    pub axis_value: f64,
    pub method: Method,
    pub rates: RatePoint,
    /// `None` when the sweep was run without symbols.
    pub ber: Option<BerRun>,
    pub flops_formula: u64,
    pub flops_measured: u64,
}

/// Evaluates every method at one point; `point` selects the random stream.
pub fn evaluate_point(
    cfg: &ScenarioConfig,
    methods: &[Method],
    axis_value: f64,
    n_symbols: u64,
    seed: u64,
    point: u64,
) -> Result<Vec<PerformanceReport>> {
    if methods.is_empty() {
        return Ok(Vec::new());
    }
    let sc = Scenario::new(cfg.clone())?;
    let v_mr = mallory_receiver(&sc)?;
    let beamformers = methods.iter().map(|m| m.design(&sc)).collect::<Result<Vec<_>>>()?;
    let errors = if n_symbols > 0 {
        let weights: Vec<&CVector> = beamformers.iter().map(|b| &b.weights).collect();
        Some(count_errors(&sc, &weights, n_symbols, &mut point_rng(seed, point))?)
    } else {
        None
    };
    let snr_db = sc.config.snr_db();
    Ok(beamformers
        .iter()
        .enumerate()
        .map(|(i, bf)| PerformanceReport {
            axis_value,
            method: bf.method,
            rates: evaluate_with(&sc, &bf.weights, &v_mr),
            ber: errors
                .as_ref()
                .map(|e| BerRun::new(bf.method, snr_db, n_symbols, seed, e[i])),
            flops_formula: formula_flops(bf.method, cfg.n_a, cfg.n_b, cfg.n_m),
            flops_measured: bf.flops,
        })
        .collect())
}

/// Rates and BER for each (axis value, method) pair, ordered by axis index
/// then by the order of `methods`. Points run in parallel on the current
/// rayon pool; the output does not depend on the pool size.
pub fn sweep(
    cfg: &ScenarioConfig,
    methods: &[Method],
    axis: &SweepAxis,
    n_symbols: u64,
    seed: u64,
) -> Result<Vec<PerformanceReport>> {
    if axis.values().is_empty() {
        return Err(Error::config("sweep axis", "must contain at least one value"));
    }
    cfg.validate()?;
    let per_point = axis
        .values()
        .par_iter()
        .enumerate()
        .map(|(i, &value)| evaluate_point(&axis.apply(cfg, value), methods, value, n_symbols, seed, i as u64))
        .collect::<Result<Vec<_>>>()?;
    Ok(per_point.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::erf::erfc;

    fn q_function(x: f64) -> f64 {
        0.5 * erfc(x / std::f64::consts::SQRT_2)
    }

    #[test]
    fn wilson_known_values() {
        // 10 / 100 at z = 1.96
        let (lo, hi) = wilson_interval(10, 100, Z95);
        assert!((lo - 0.05522).abs() < 1e-4, "{lo}");
        assert!((hi - 0.17436).abs() < 1e-4, "{hi}");
        let (lo, hi) = wilson_interval(0, 1000, Z95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.004);
    }

    #[test]
    fn noiseless_limit_is_error_free() {
        let base = ScenarioConfig {
            p_m_watt: 0.0,
            beta1: 1.0,
            ..ScenarioConfig::default()
        };
        let run = simulate_ber(&base, Method::Mrc, 120.0, 100_000, 1).unwrap();
        assert_eq!(run.n_errors, 0);
        assert_eq!(run.ber, 0.0);
    }

    #[test]
    fn same_seed_same_result() {
        let cfg = ScenarioConfig::default();
        let a = simulate_ber(&cfg, Method::Wfmrc, 0.0, 5_000, 9).unwrap();
        let b = simulate_ber(&cfg, Method::Wfmrc, 0.0, 5_000, 9).unwrap();
        assert_eq!(a, b);
        let c = simulate_ber(&cfg, Method::Wfmrc, 0.0, 5_000, 10).unwrap();
        assert_ne!(a.n_errors, c.n_errors);
    }

    #[test]
    fn mrc_matches_awgn_theory() {
        let cfg = ScenarioConfig {
            p_m_watt: 0.0,
            ..ScenarioConfig::default()
        };
        let snr_db = 5.0;
        let run = simulate_ber(&cfg, Method::Mrc, snr_db, 100_000, 4).unwrap();
        let sc = Scenario::new(cfg.with_snr_db(snr_db)).unwrap();
        let w = crate::rbf::mrc(&sc).unwrap().weights;
        let sinr = crate::metrics::sinr_bob(&w, &sc.covariances, sc.config.sigma_b2);
        let expect = q_function(sinr.sqrt());
        let half = run.ci95_half_width();
        assert!((run.ber - expect).abs() <= 3.0 * half, "{} vs {expect} (+-{half})", run.ber);
    }

    #[test]
    fn zero_symbols_rejected() {
        assert!(simulate_ber(&ScenarioConfig::default(), Method::Mrc, 0.0, 0, 1).is_err());
    }

    #[test]
    fn empty_method_list_gives_empty_report() {
        let axis = SweepAxis::SnrDb(vec![0.0, 5.0]);
        let out = sweep(&ScenarioConfig::default(), &[], &axis, 100, 1).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn empty_axis_rejected() {
        let axis = SweepAxis::PmWatt(vec![]);
        assert!(sweep(&ScenarioConfig::default(), &Method::ALL, &axis, 10, 1).is_err());
    }

    #[test]
    fn sweep_shape_and_order() {
        let axis = SweepAxis::SnrDb(vec![-5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0]);
        let out = sweep(&ScenarioConfig::default(), &Method::ALL, &axis, 200, 3).unwrap();
        assert_eq!(out.len(), 7 * 6);
        for (i, r) in out.iter().enumerate() {
            assert_eq!(r.axis_value, axis.values()[i / 6]);
            assert_eq!(r.method, Method::ALL[i % 6]);
            assert!(r.ber.is_some());
        }
    }

    #[test]
    fn sweep_independent_of_pool_size() {
        let axis = SweepAxis::PmWatt(vec![0.1, 1.0, 10.0, 100.0]);
        let cfg = ScenarioConfig::default().with_snr_db(5.0);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| sweep(&cfg, &Method::ALL, &axis, 2_000, 17).unwrap())
        };
        assert_eq!(run(1), run(3));
    }

    #[test]
    fn common_random_numbers_across_methods() {
        // a method's BER at a point does not depend on which other methods run
        let cfg = ScenarioConfig::default().with_snr_db(0.0);
        let all = evaluate_point(&cfg, &Method::ALL, 0.0, 3_000, 8, 2).unwrap();
        let alone = evaluate_point(&cfg, &[Method::NspMaxWfrp], 0.0, 3_000, 8, 2).unwrap();
        assert_eq!(all[5].ber, alone[0].ber);
    }
}
