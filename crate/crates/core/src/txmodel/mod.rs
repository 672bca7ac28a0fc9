//! Transmit-side constructions and the second-order statistics they induce
//! at Bob and Mallory.

mod config;

pub use config::{LinkAngles, LinkDistances, ScenarioConfig, SnrDefinition, CONFIG_KEYS};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::channel::{
    alice_an_projector, los_channel, steering, ArrayGeometry, LosChannel, PathLoss,
};
use crate::error::{Error, Result};
use crate::numerics::{CMatrix, CVector, Flops, C64};

/// The three line-of-sight links of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Channels {
    /// Alice to Bob, `N_B x N_A`.
    pub ab: LosChannel,
    /// Mallory to Bob, `N_B x N_M`.
    pub mb: LosChannel,
    /// Alice to Mallory, `N_M x N_A`.
    pub am: LosChannel,
}

impl Channels {
    pub fn new(cfg: &ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        let d = cfg.spacing_over_wavelength;
        let alice = ArrayGeometry::new(cfg.n_a, d)?;
        let bob = ArrayGeometry::new(cfg.n_b, d)?;
        let mallory = ArrayGeometry::new(cfg.n_m, d)?;
        let gain = |distance_km| {
            PathLoss {
                alpha_ref: cfg.path_loss_alpha,
                exponent_c: cfg.path_loss_exponent,
                distance_km,
            }
            .gain()
        };
        let a = &cfg.angles_deg;
        Ok(Self {
            ab: los_channel(
                steering(bob, a.r_ab)?,
                steering(alice, a.t_ab)?,
                gain(cfg.distances_km.ab)?,
            )?,
            mb: los_channel(
                steering(bob, a.r_mb)?,
                steering(mallory, a.t_mb)?,
                gain(cfg.distances_km.mb)?,
            )?,
            am: los_channel(
                steering(mallory, a.r_am)?,
                steering(alice, a.t_am)?,
                gain(cfg.distances_km.am)?,
            )?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransmitSetup {
    /// Confidential-message beamformer, unit norm.
    pub v_a: CVector,
    /// Alice's artificial-noise projector, scaled to `tr(T T^H) = 1`.
    pub t_a_an: CMatrix,
    /// Scale applied to the raw null-space projector to obtain `t_a_an`
    /// (`1/sqrt(N_A - 1)`, or 0 when `N_A = 1` leaves no null space).
    pub t_a_an_scale: f64,
    /// Mallory's jamming projector, `N_M x N_J`, `tr(T T^H) = 1`.
    pub t_m_an: CMatrix,
    /// Mallory's self-interference loop channel, applied to her own transmit
    /// signal before the `sqrt(rho)` factor.
    pub h_m_rsi: CMatrix,
}

pub fn build_transmit_setup(cfg: &ScenarioConfig, channels: &Channels) -> Result<TransmitSetup> {
    cfg.validate()?;
    if channels.ab.n_tx() != cfg.n_a || channels.ab.n_rx() != cfg.n_b || channels.mb.n_tx() != cfg.n_m {
        return Err(Error::Dimension {
            context: "transmit setup channels",
            expected: format!("N_A={}, N_B={}, N_M={}", cfg.n_a, cfg.n_b, cfg.n_m),
            found: format!(
                "N_A={}, N_B={}, N_M={}",
                channels.ab.n_tx(),
                channels.ab.n_rx(),
                channels.mb.n_tx()
            ),
        });
    }
    let v_a = channels.ab.tx.entries.clone();

    let projector = alice_an_projector(&channels.ab);
    let power = (&projector * &projector.adjoint()).trace().re;
    let t_a_an_scale = if power > 1e-12 { 1.0 / power.sqrt() } else { 0.0 };
    let t_a_an = projector.scale_real(t_a_an_scale);

    let t_m_an = jamming_projector(&channels.mb.tx.entries, cfg.n_j);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let h_m_rsi = CMatrix::from_fn(cfg.n_m, cfg.n_m, |_, _| complex_gaussian(&mut rng));

    Ok(TransmitSetup {
        v_a,
        t_a_an,
        t_a_an_scale,
        t_m_an,
        h_m_rsi,
    })
}

/// Draws one `CN(0, 1)` sample.
pub(crate) fn complex_gaussian<R: rand::Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// First column points at Bob; the rest complete an orthonormal set. Scaled
/// by `1/sqrt(N_J)` so that `tr(T T^H) = 1`.
fn jamming_projector(toward_bob: &CVector, n_j: usize) -> CMatrix {
    let n = toward_bob.dim();
    let mut columns: Vec<CVector> = vec![toward_bob.normalized(0.0).expect("unit steering vector")];
    for k in 0..n {
        if columns.len() == n_j {
            break;
        }
        let mut candidate = CVector::from_fn(n, |i| C64::new(if i == k { 1.0 } else { 0.0 }, 0.0));
        // two Gram-Schmidt passes
        for _ in 0..2 {
            for c in &columns {
                let proj = c.dot(&candidate);
                candidate = &candidate - &c.scale(proj);
            }
        }
        if let Some(unit) = candidate.normalized(1e-6) {
            columns.push(unit);
        }
    }
    CMatrix::from_columns(&columns).scale_real(1.0 / (n_j as f64).sqrt())
}

/// Quadratic-form matrices of the achievable rates (all in watts).
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceSet {
    /// Confidential signal at Bob.
    pub a: CMatrix,
    /// Alice's artificial noise at Bob.
    pub b: CMatrix,
    /// Mallory's jamming at Bob.
    pub d: CMatrix,
    /// Confidential signal at Mallory.
    pub e: CMatrix,
    /// Alice's artificial noise at Mallory.
    pub f: CMatrix,
    /// Residual self-interference at Mallory.
    pub r_m: CMatrix,
    /// Interference-plus-noise covariance at Bob, `B + D + sigma_B^2 I`.
    pub c_nbar: CMatrix,
}

impl CovarianceSet {
    /// Interference-plus-noise covariance at Mallory, `F + R_M + sigma_M^2 I`.
    pub fn mallory_noise(&self, sigma_m2: f64) -> CMatrix {
        (&self.f + &self.r_m).add_diagonal(sigma_m2)
    }
}

fn check_shape(name: &'static str, m: &CMatrix, rows: usize, cols: usize) -> Result<()> {
    if m.shape() != (rows, cols) {
        return Err(Error::Dimension {
            context: name,
            expected: format!("{rows}x{cols}"),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    Ok(())
}

fn check_setup(cfg: &ScenarioConfig, setup: &TransmitSetup, channels: &Channels) -> Result<()> {
    let (na, nb, nm) = (cfg.n_a, cfg.n_b, cfg.n_m);
    check_shape("H^H(theta_AB)", &channels.ab.matrix, nb, na)?;
    check_shape("H^H(theta_MB)", &channels.mb.matrix, nb, nm)?;
    check_shape("H^H(theta_AM)", &channels.am.matrix, nm, na)?;
    check_shape("T_A,AN", &setup.t_a_an, na, na)?;
    check_shape("T_M,AN", &setup.t_m_an, nm, cfg.n_j)?;
    check_shape("H_M", &setup.h_m_rsi, nm, nm)?;
    if setup.v_a.dim() != na {
        return Err(Error::Dimension {
            context: "v_A",
            expected: na.to_string(),
            found: setup.v_a.dim().to_string(),
        });
    }
    Ok(())
}

/// `H^H(theta_AB) v_A`, the direction of the confidential signal at Bob.
///
/// Evaluated through the rank-one factors as `h_r (h_t^H v_A)`.
pub fn effective_channel(channels: &Channels, setup: &TransmitSetup, flops: &mut Flops) -> CVector {
    let gain = channels.ab.tx.entries.dot_counted(&setup.v_a, flops);
    flops.cmac(channels.ab.n_rx());
    channels.ab.rx.entries.scale(gain)
}

pub(crate) fn an_at_bob(cfg: &ScenarioConfig, setup: &TransmitSetup, channels: &Channels, flops: &mut Flops) -> CMatrix {
    let coef = channels.ab.gain * (1.0 - cfg.beta1) * cfg.p_a_watt;
    channels
        .ab
        .matrix
        .mul_counted(&setup.t_a_an, flops)
        .gram_counted(coef, flops)
}

pub(crate) fn jamming_at_bob(cfg: &ScenarioConfig, setup: &TransmitSetup, channels: &Channels, flops: &mut Flops) -> CMatrix {
    let coef = channels.mb.gain * cfg.p_m_watt;
    channels
        .mb
        .matrix
        .mul_counted(&setup.t_m_an, flops)
        .gram_counted(coef, flops)
}

/// `B + D + sigma_B^2 I`, counting the work.
pub(crate) fn bob_noise_covariance(
    cfg: &ScenarioConfig,
    setup: &TransmitSetup,
    channels: &Channels,
    flops: &mut Flops,
) -> CMatrix {
    let b = an_at_bob(cfg, setup, channels, flops);
    let d = jamming_at_bob(cfg, setup, channels, flops);
    flops.cadd(cfg.n_b * cfg.n_b + cfg.n_b);
    b.add_counted(&d, &mut Flops::new()).add_diagonal(cfg.sigma_b2)
}

pub fn build_covariances(
    cfg: &ScenarioConfig,
    setup: &TransmitSetup,
    channels: &Channels,
) -> Result<CovarianceSet> {
    cfg.validate()?;
    check_setup(cfg, setup, channels)?;
    let mut scratch = Flops::new();
    let f = &mut scratch;

    let signal_coef = cfg.beta1 * cfg.p_a_watt;
    let an_coef = (1.0 - cfg.beta1) * cfg.p_a_watt;

    let h_eff = effective_channel(channels, setup, f).into_column();
    let a = h_eff.gram_counted(channels.ab.gain * signal_coef, f);
    let b = an_at_bob(cfg, setup, channels, f);
    let d = jamming_at_bob(cfg, setup, channels, f);

    let e = channels
        .am
        .matrix
        .mul_vec(&setup.v_a)
        .into_column()
        .gram_counted(channels.am.gain * signal_coef, f);
    let f_an = channels
        .am
        .matrix
        .mul_counted(&setup.t_a_an, f)
        .gram_counted(channels.am.gain * an_coef, f);
    let r_m = setup
        .h_m_rsi
        .mul_counted(&setup.t_m_an, f)
        .gram_counted(cfg.rho * cfg.p_m_watt, f);

    let c_nbar = (&b + &d).add_diagonal(cfg.sigma_b2);
    Ok(CovarianceSet {
        a,
        b,
        d,
        e,
        f: f_an,
        r_m,
        c_nbar,
    })
}

/// Draws a valid configuration for property sweeps: antenna counts from
/// `sizes`, uniform angles, log-uniform powers, `beta1` in `[0.5, 1]` and an
/// SNR between -5 and 25 dB.
pub fn random_config<R: rand::Rng + ?Sized>(rng: &mut R, sizes: &[usize]) -> ScenarioConfig {
    let pick = |rng: &mut R| sizes[rng.random_range(0..sizes.len())];
    let (n_a, n_b, n_m) = (pick(rng), pick(rng), pick(rng));
    let mut angle = || rng.random_range(0.0..=180.0);
    let angles_deg = LinkAngles {
        t_ab: angle(),
        r_ab: angle(),
        t_mb: angle(),
        r_mb: angle(),
        t_am: angle(),
        r_am: angle(),
    };
    let cfg = ScenarioConfig {
        n_a,
        n_b,
        n_m,
        n_j: 1,
        p_a_watt: 10f64.powf(rng.random_range(0.0..2.0)),
        p_m_watt: 10f64.powf(rng.random_range(-1.0..3.0)),
        beta1: rng.random_range(0.5..=1.0),
        rho: 10f64.powf(rng.random_range(-13.0..-9.0)),
        angles_deg,
        distances_km: LinkDistances {
            ab: rng.random_range(0.5..5.0),
            am: rng.random_range(0.5..5.0),
            mb: rng.random_range(0.5..5.0),
        },
        rng_seed: rng.random(),
        ..ScenarioConfig::default()
    };
    cfg.with_snr_db(rng.random_range(-5.0..25.0))
}

/// Everything derived from one [`ScenarioConfig`].
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub channels: Channels,
    pub setup: TransmitSetup,
    pub covariances: CovarianceSet,
}

impl Scenario {
    pub fn new(config: ScenarioConfig) -> Result<Self> {
        let channels = Channels::new(&config)?;
        let setup = build_transmit_setup(&config, &channels)?;
        let covariances = build_covariances(&config, &setup, &channels)?;
        Ok(Self {
            config,
            channels,
            setup,
            covariances,
        })
    }
}
