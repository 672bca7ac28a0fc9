//! The six receive beamformers at Bob, plus Mallory's own receiver.
//!
//! Every method returns unit-norm weights `v` to be applied as `v^H r_B`.
//! Each design is executed against a fresh [`Flops`] counter so that the
//! reported count covers everything the method needs, starting from the
//! channel factors.

use std::fmt;
use std::str::FromStr;

use crate::channel::bob_nsp_projector_counted;
use crate::error::{Error, Result};
use crate::numerics::{
    hermitian_evd_counted, inv_hpd_counted, inv_sqrt_hpd, inv_sqrt_hpd_counted, CMatrix, CVector,
    Flops, C64, HPD_RATIO, NULL_EIGEN_RATIO,
};
use crate::txmodel::{an_at_bob, bob_noise_covariance, effective_channel, jamming_at_bob, Scenario};

/// Vectors shorter than this are treated as zero when normalizing.
const ZERO_NORM: f64 = 1e-300;

/// Sherman-Morrison denominators at or below this modulus are rejected.
pub const UPDATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Mrc,
    Wfmrc,
    MaxSr,
    MmseConventional,
    MmseLowComplexity,
    NspMaxWfrp,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Mrc,
        Method::Wfmrc,
        Method::MaxSr,
        Method::MmseConventional,
        Method::MmseLowComplexity,
        Method::NspMaxWfrp,
    ];

    /// The four methods that all reach the maximum output SINR.
    pub const MAX_SINR: [Method; 4] = [
        Method::Wfmrc,
        Method::MaxSr,
        Method::MmseConventional,
        Method::MmseLowComplexity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Mrc => "mrc",
            Method::Wfmrc => "wfmrc",
            Method::MaxSr => "max-sr",
            Method::MmseConventional => "mmse",
            Method::MmseLowComplexity => "lc-mmse",
            Method::NspMaxWfrp => "nsp-max-wfrp",
        }
    }

    pub fn design(self, sc: &Scenario) -> Result<Beamformer> {
        match self {
            Method::Mrc => mrc(sc),
            Method::Wfmrc => wfmrc(sc),
            Method::MaxSr => max_sr(sc),
            Method::MmseConventional => mmse_conventional(sc),
            Method::MmseLowComplexity => mmse_low_complexity(sc),
            Method::NspMaxWfrp => nsp_max_wfrp(sc),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                let names: Vec<_> = Method::ALL.iter().map(|m| m.name()).collect();
                Error::Unsupported(format!("unknown method '{s}' (expected one of {})", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Beamformer {
    pub method: Method,
    /// Unit-norm receive weights, length `N_B`.
    pub weights: CVector,
    /// FLOPs spent designing the weights.
    pub flops: u64,
}

fn unit(v: &CVector, flops: &mut Flops, what: &'static str) -> Result<CVector> {
    v.normalized_counted(ZERO_NORM, flops)
        .ok_or(Error::DegenerateChannel(what))
}

fn finish(method: Method, v: &CVector, mut flops: Flops) -> Result<Beamformer> {
    let weights = unit(v, &mut flops, "beamformer has zero norm")?;
    if !weights.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(Beamformer {
        method,
        weights,
        flops: flops.count(),
    })
}

fn signal_amplitude(sc: &Scenario) -> f64 {
    let cfg = &sc.config;
    (sc.channels.ab.gain * cfg.beta1 * cfg.p_a_watt).sqrt()
}

/// Maximum-ratio combining: the matched filter `H^H(theta_AB) v_A`.
pub fn mrc(sc: &Scenario) -> Result<Beamformer> {
    let mut flops = Flops::new();
    let h_eff = effective_channel(&sc.channels, &sc.setup, &mut flops);
    if !(h_eff.norm() > 0.0) {
        return Err(Error::DegenerateChannel("H^H(theta_AB) v_A is zero"));
    }
    finish(Method::Mrc, &h_eff, flops)
}

/// `W = Lambda^{-1/2} Q^H` for `c = Q Lambda Q^H`, so that `W c W^H = I`.
pub fn whitening_filter(c_nbar: &CMatrix) -> Result<CMatrix> {
    whitening_filter_counted(c_nbar, &mut Flops::new())
}

fn whitening_filter_counted(c_nbar: &CMatrix, flops: &mut Flops) -> Result<CMatrix> {
    let evd = hermitian_evd_counted(c_nbar, flops)?;
    let (min, max) = (evd.min_eigenvalue(), evd.max_eigenvalue());
    if !(max > 0.0 && min > HPD_RATIO * max) {
        return Err(Error::Conditioning { min, max });
    }
    let n = evd.dim();
    flops.real(2 * n * n + n);
    let q = &evd.eigenvectors;
    let inv_sqrt: Vec<f64> = evd.eigenvalues.iter().map(|l| 1.0 / l.sqrt()).collect();
    Ok(CMatrix::from_fn(n, n, |i, j| q[(j, i)].conj() * inv_sqrt[i]))
}

/// Whitening-filter MRC, folded into a single weight vector
/// `W^H (W h / ||W h||)`, proportional to `C^{-1} h`.
pub fn wfmrc(sc: &Scenario) -> Result<Beamformer> {
    let mut flops = Flops::new();
    let h_eff = effective_channel(&sc.channels, &sc.setup, &mut flops);
    let c = bob_noise_covariance(&sc.config, &sc.setup, &sc.channels, &mut flops);
    let w = whitening_filter_counted(&c, &mut flops)?;
    let matched = unit(&w.mul_vec_counted(&h_eff, &mut flops), &mut flops, "whitened channel is zero")?;
    let v = w.adjoint_mul_vec_counted(&matched, &mut flops);
    finish(Method::Wfmrc, &v, flops)
}

/// The max-SJNR solution together with its eigen-quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxSrSolution {
    pub beamformer: Beamformer,
    /// `sqrt(g beta P_A) C^{-1/2} H^H v_A`.
    pub a: CVector,
    /// The optimal quotient `v^H A v / v^H C v`, equal to `a^H a`.
    pub sjnr: f64,
}

pub fn max_sr(sc: &Scenario) -> Result<Beamformer> {
    max_sr_solution(sc).map(|s| s.beamformer)
}

pub fn max_sr_solution(sc: &Scenario) -> Result<MaxSrSolution> {
    let mut flops = Flops::new();
    let h_eff = effective_channel(&sc.channels, &sc.setup, &mut flops);
    let c = bob_noise_covariance(&sc.config, &sc.setup, &sc.channels, &mut flops);
    let s = inv_sqrt_hpd_counted(&c, &mut flops)?;
    // C^{-1/2} is Hermitian, so its adjoint is itself
    let a = s
        .mul_vec_counted(&h_eff, &mut flops)
        .scale_real_counted(signal_amplitude(sc), &mut flops);
    let sjnr = a.norm_sqr();
    let direction = unit(&a, &mut flops, "whitened channel is zero")?;
    let v = s.mul_vec_counted(&direction, &mut flops);
    Ok(MaxSrSolution {
        beamformer: finish(Method::MaxSr, &v, flops)?,
        a,
        sjnr,
    })
}

/// `O = A + B + D + sigma_B^2 I`.
pub fn mmse_system(sc: &Scenario) -> CMatrix {
    let mut flops = Flops::new();
    let h_eff = effective_channel(&sc.channels, &sc.setup, &mut flops);
    mmse_system_counted(sc, &h_eff, &mut flops)
}

fn mmse_system_counted(sc: &Scenario, h_eff: &CVector, flops: &mut Flops) -> CMatrix {
    let cfg = &sc.config;
    let a = h_eff
        .clone()
        .into_column()
        .gram_counted(sc.channels.ab.gain * cfg.beta1 * cfg.p_a_watt, flops);
    let b = an_at_bob(cfg, &sc.setup, &sc.channels, flops);
    let d = jamming_at_bob(cfg, &sc.setup, &sc.channels, flops);
    a.add_counted(&b, flops)
        .add_counted(&d, flops)
        .add_diagonal(cfg.sigma_b2)
}

/// The unnormalized MMSE solution `sqrt(g beta P_A) O^{-1} H^H v_A`.
pub fn mmse_unnormalized(sc: &Scenario) -> Result<CVector> {
    mmse_conventional_parts(sc).map(|(v, _)| v)
}

fn mmse_conventional_parts(sc: &Scenario) -> Result<(CVector, Flops)> {
    let mut flops = Flops::new();
    let h_eff = effective_channel(&sc.channels, &sc.setup, &mut flops);
    let o = mmse_system_counted(sc, &h_eff, &mut flops);
    let o_inv = inv_hpd_counted(&o, &mut flops)?;
    let v = o_inv
        .mul_vec_counted(&h_eff, &mut flops)
        .scale_real_counted(signal_amplitude(sc), &mut flops);
    Ok((v, flops))
}

pub fn mmse_conventional(sc: &Scenario) -> Result<Beamformer> {
    let (v, flops) = mmse_conventional_parts(sc)?;
    finish(Method::MmseConventional, &v, flops)
}

/// Stages of the rank-one update chain that builds `O^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainLevel {
    N,
    M,
    L,
    K,
    O,
}

impl fmt::Display for ChainLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ChainLevel::N => "N",
            ChainLevel::M => "M",
            ChainLevel::L => "L",
            ChainLevel::K => "K",
            ChainLevel::O => "O",
        };
        f.write_str(s)
    }
}

/// Inverses produced by the five Sherman-Morrison levels.
///
/// `N = sigma^2 I + A` is inverted in closed form. `M`, `L` and `K` add the
/// three rank-one pieces of Alice's artificial noise (`+c`, `-2c`, `+c` along
/// `H^H h_t h_r^H`), and `O` adds Mallory's jamming.
#[derive(Debug, Clone, PartialEq)]
pub struct ShermanMorrisonChain {
    pub n_inv: CMatrix,
    pub m_inv: CMatrix,
    pub l_inv: CMatrix,
    pub k_inv: CMatrix,
    pub o_inv: CMatrix,
}

impl ShermanMorrisonChain {
    pub fn build(sc: &Scenario) -> Result<Self> {
        let mut flops = Flops::new();
        let h_eff = effective_channel(&sc.channels, &sc.setup, &mut flops);
        Self::build_counted(sc, &h_eff, &mut flops)
    }

    pub fn level(&self, level: ChainLevel) -> &CMatrix {
        match level {
            ChainLevel::N => &self.n_inv,
            ChainLevel::M => &self.m_inv,
            ChainLevel::L => &self.l_inv,
            ChainLevel::K => &self.k_inv,
            ChainLevel::O => &self.o_inv,
        }
    }

    fn build_counted(sc: &Scenario, h_eff: &CVector, flops: &mut Flops) -> Result<Self> {
        let cfg = &sc.config;
        let ch = &sc.channels;
        let sigma2 = cfg.sigma_b2;
        let n = cfg.n_b;

        // N^{-1} = s^-1 I - s^-2 c_s h h^H / (1 + s^-1 c_s h^H h)
        let c_s = ch.ab.gain * cfg.beta1 * cfg.p_a_watt;
        let energy = h_eff.norm_counted(flops).powi(2);
        let den = 1.0 + c_s * energy / sigma2;
        if den.abs() <= UPDATE_TOL {
            return Err(Error::UpdateSingular {
                level: ChainLevel::N,
                modulus: den.abs(),
            });
        }
        let mut n_inv = h_eff
            .clone()
            .into_column()
            .gram_counted(-c_s / (sigma2 * sigma2 * den), flops);
        for i in 0..n {
            n_inv[(i, i)] += 1.0 / sigma2;
        }
        flops.real(n);

        // Alice's AN enters through H^H h_t h_r^H, scaled by the trace
        // normalization of the projector.
        let scale2 = sc.setup.t_a_an_scale * sc.setup.t_a_an_scale;
        let c_an = ch.ab.gain * (1.0 - cfg.beta1) * cfg.p_a_watt * scale2;
        let hh_ht = ch.ab.matrix.mul_vec_counted(&ch.ab.tx.entries, flops);
        let hr_row = ch.ab.rx.entries.conj();

        let u_m = hh_ht.scale_real_counted(c_an, flops);
        let m_inv = rank_one_update(&n_inv, &u_m, &hr_row, ChainLevel::M, flops)?;
        let u_l = hh_ht.scale_real_counted(-2.0 * c_an, flops);
        let l_inv = rank_one_update(&m_inv, &u_l, &hr_row, ChainLevel::L, flops)?;
        let k_inv = rank_one_update(&l_inv, &u_m, &hr_row, ChainLevel::K, flops)?;

        let c_j = ch.mb.gain * cfg.p_m_watt;
        let t_m = &sc.setup.t_m_an;
        let (u_o, v_o) = if t_m.cols() == 1 {
            // u = c_j H^H t, v^T = t^H H
            let w = ch.mb.matrix.mul_vec_counted(&t_m.column(0), flops);
            (w.scale_real_counted(c_j, flops), w.conj())
        } else {
            // H^H T T^H h_t collapses the N_J streams onto one direction.
            let proj = t_m.adjoint_mul_vec_counted(&ch.mb.tx.entries, flops);
            let back = t_m.mul_vec_counted(&proj, flops);
            let w = ch.mb.matrix.mul_vec_counted(&back, flops);
            (w.scale_real_counted(c_j, flops), ch.mb.rx.entries.conj())
        };
        let o_inv = rank_one_update(&k_inv, &u_o, &v_o, ChainLevel::O, flops)?;

        Ok(Self {
            n_inv,
            m_inv,
            l_inv,
            k_inv,
            o_inv,
        })
    }
}

/// `(Z + u v^T)^{-1}` from `Z^{-1}`; `v_row` holds the entries of `v^T`.
fn rank_one_update(
    z_inv: &CMatrix,
    u: &CVector,
    v_row: &CVector,
    level: ChainLevel,
    flops: &mut Flops,
) -> Result<CMatrix> {
    let zu = z_inv.mul_vec_counted(u, flops);
    let vz = z_inv.row_mul_counted(v_row, flops);
    flops.cmac(zu.dim());
    let den = C64::new(1.0, 0.0) + v_row.iter().zip(zu.iter()).map(|(a, b)| a * b).sum::<C64>();
    if !(den.norm() > UPDATE_TOL) {
        return Err(Error::UpdateSingular {
            level,
            modulus: den.norm(),
        });
    }
    flops.cmac(zu.dim());
    let left = zu.scale(-1.0 / den);
    let mut out = z_inv.clone();
    out.add_rank_one_counted(&left, &vz, flops);
    Ok(out)
}

/// MMSE weights through the Sherman-Morrison chain; no general inverse is
/// ever formed.
pub fn mmse_low_complexity(sc: &Scenario) -> Result<Beamformer> {
    let mut flops = Flops::new();
    let h_eff = effective_channel(&sc.channels, &sc.setup, &mut flops);
    let chain = ShermanMorrisonChain::build_counted(sc, &h_eff, &mut flops)?;
    let v = chain
        .o_inv
        .mul_vec_counted(&h_eff, &mut flops)
        .scale_real_counted(signal_amplitude(sc), &mut flops);
    finish(Method::MmseLowComplexity, &v, flops)
}

/// Max whitened receive power inside the null space of Mallory's channel.
///
/// `C = G^H (B + sigma^2 I) G` is singular off `range(G)`, so it is whitened
/// on its nonzero eigenspace only.
pub fn nsp_max_wfrp(sc: &Scenario) -> Result<Beamformer> {
    let cfg = &sc.config;
    if cfg.n_b < 2 {
        return Err(Error::Unsupported(
            "null-space beamforming needs N_B >= 2".to_string(),
        ));
    }
    let mut flops = Flops::new();
    let h_eff = effective_channel(&sc.channels, &sc.setup, &mut flops);
    let g = bob_nsp_projector_counted(&sc.channels.mb, &mut flops);

    let projected = g.adjoint_mul_vec_counted(&h_eff, &mut flops);
    if projected.norm_counted(&mut flops) <= 1e-10 * h_eff.norm() {
        return Err(Error::DegenerateGeometry(
            "Bob's channel lies inside Mallory's receive subspace",
        ));
    }

    let b = an_at_bob(cfg, &sc.setup, &sc.channels, &mut flops).add_diagonal(cfg.sigma_b2);
    flops.cadd(cfg.n_b);
    let c = g
        .adjoint()
        .mul_counted(&b, &mut flops)
        .mul_counted(&g, &mut flops);
    let evd = hermitian_evd_counted(&c, &mut flops)?;
    let cutoff = NULL_EIGEN_RATIO * evd.max_eigenvalue();
    let kept: Vec<usize> = (0..evd.dim()).filter(|&k| evd.eigenvalues[k] > cutoff).collect();
    if kept.is_empty() {
        return Err(Error::DegenerateGeometry("whitened covariance vanishes"));
    }

    // b = W G^H h with W = Lambda_r^{-1/2} Q_r^H
    let q = &evd.eigenvectors;
    let n = cfg.n_b;
    flops.cmac(kept.len() * n);
    let whitened = CVector::from_fn(kept.len(), |r| {
        let k = kept[r];
        let s: C64 = (0..n).map(|i| q[(i, k)].conj() * projected[i]).sum();
        s / evd.eigenvalues[k].sqrt()
    });
    let direction = whitened
        .normalized_counted(ZERO_NORM, &mut flops)
        .ok_or(Error::DegenerateGeometry("whitened channel is zero"))?;

    // lift back: G W^H v
    flops.cmac(kept.len() * n);
    let lifted = CVector::from_fn(n, |i| {
        kept.iter()
            .zip(direction.iter())
            .map(|(&k, d)| q[(i, k)] * d / evd.eigenvalues[k].sqrt())
            .sum()
    });
    let v = g.mul_vec_counted(&lifted, &mut flops);
    finish(Method::NspMaxWfrp, &v, flops)
}

/// Mallory's max-SINR receiver, `(F + R_M + sigma_M^2 I)^{-1} H^H(theta_AM) v_A`.
///
/// When Alice's beam has an exact null toward Mallory the signal term vanishes
/// and any receiver is optimal; the steering vector toward Alice is returned.
pub fn mallory_receiver(sc: &Scenario) -> Result<CVector> {
    let am = &sc.channels.am;
    let e = am.rx.entries.scale(am.tx.entries.dot(&sc.setup.v_a));
    let c = sc.covariances.mallory_noise(sc.config.sigma_m2);
    let s = inv_sqrt_hpd(&c)?;
    let v = &s * &(&s * &e);
    match v.normalized(1e-12 * e.norm().max(ZERO_NORM)) {
        Some(v) if e.norm() > 1e-12 => Ok(v),
        _ => Ok(am.rx.entries.clone()),
    }
}
