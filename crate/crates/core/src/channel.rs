//! Uniform linear arrays, line-of-sight channels and null-space projectors.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{pinv_psd_counted, CMatrix, CVector, Flops, C64};

/// An `N`-element uniform linear array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    n_elements: usize,
    spacing_over_wavelength: f64,
}

impl ArrayGeometry {
    pub fn new(n_elements: usize, spacing_over_wavelength: f64) -> Result<Self> {
        if n_elements == 0 {
            return Err(Error::Domain {
                what: "array size",
                value: 0.0,
                range: "[1, inf)",
            });
        }
        if !(spacing_over_wavelength > 0.0 && spacing_over_wavelength.is_finite()) {
            return Err(Error::Domain {
                what: "element spacing d/lambda",
                value: spacing_over_wavelength,
                range: "(0, inf)",
            });
        }
        Ok(Self {
            n_elements,
            spacing_over_wavelength,
        })
    }

    pub fn half_wavelength(n_elements: usize) -> Result<Self> {
        Self::new(n_elements, 0.5)
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn spacing_over_wavelength(&self) -> f64 {
        self.spacing_over_wavelength
    }
}

/// Normalized array response toward one direction.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringVector {
    pub geometry: ArrayGeometry,
    pub angle_deg: f64,
    pub entries: CVector,
}

/// Steering vector with entries `exp(j 2 pi Psi(n)) / sqrt(N)` where
/// `Psi(n) = -(n - (N+1)/2) (d/lambda) cos(theta)`, `n = 1..N`.
pub fn steering(geometry: ArrayGeometry, angle_deg: f64) -> Result<SteeringVector> {
    if !(0.0..=180.0).contains(&angle_deg) {
        return Err(Error::Domain {
            what: "angle (deg)",
            value: angle_deg,
            range: "[0, 180]",
        });
    }
    let n = geometry.n_elements;
    let cos_theta = angle_deg.to_radians().cos();
    let centre = (n as f64 + 1.0) / 2.0;
    let amplitude = 1.0 / (n as f64).sqrt();
    let entries = CVector::from_fn(n, |k| {
        let psi = -((k + 1) as f64 - centre) * geometry.spacing_over_wavelength * cos_theta;
        C64::from_polar(amplitude, 2.0 * PI * psi)
    });
    Ok(SteeringVector {
        geometry,
        angle_deg,
        entries,
    })
}

/// Log-distance path loss `alpha / d^c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLoss {
    pub alpha_ref: f64,
    pub exponent_c: f64,
    pub distance_km: f64,
}

impl PathLoss {
    pub fn gain(&self) -> Result<f64> {
        if !(self.distance_km > 0.0) {
            return Err(Error::Domain {
                what: "distance (km)",
                value: self.distance_km,
                range: "(0, inf)",
            });
        }
        let g = self.alpha_ref / self.distance_km.powf(self.exponent_c);
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::Domain {
                what: "path gain",
                value: g,
                range: "(0, inf)",
            });
        }
        Ok(g)
    }
}

/// Rank-one line-of-sight channel `h(theta_r) h^H(theta_t)`, `N_rx x N_tx`.
///
/// The path gain is kept separately and enters the signal as `sqrt(gain)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LosChannel {
    pub rx: SteeringVector,
    pub tx: SteeringVector,
    pub gain: f64,
    pub matrix: CMatrix,
}

impl LosChannel {
    pub fn rx_angle_deg(&self) -> f64 {
        self.rx.angle_deg
    }

    pub fn tx_angle_deg(&self) -> f64 {
        self.tx.angle_deg
    }

    pub fn n_rx(&self) -> usize {
        self.matrix.rows()
    }

    pub fn n_tx(&self) -> usize {
        self.matrix.cols()
    }
}

pub fn los_channel(rx: SteeringVector, tx: SteeringVector, gain: f64) -> Result<LosChannel> {
    if !(gain >= 0.0 && gain.is_finite()) {
        return Err(Error::Domain {
            what: "path gain",
            value: gain,
            range: "[0, inf)",
        });
    }
    let matrix = rx.entries.outer(&tx.entries);
    Ok(LosChannel {
        rx,
        tx,
        gain,
        matrix,
    })
}

/// `I - H [H^H H]^+ H^H` on Alice's array, where `ch_ab.matrix` is `H^H`.
/// Annihilated by the Alice-to-Bob channel.
pub fn alice_an_projector(ch_ab: &LosChannel) -> CMatrix {
    alice_an_projector_counted(ch_ab, &mut Flops::new())
}

pub(crate) fn alice_an_projector_counted(ch_ab: &LosChannel, flops: &mut Flops) -> CMatrix {
    let hh = &ch_ab.matrix; // N_B x N_A
    let h = hh.adjoint();
    let gram = hh.mul_counted(&h, flops).hermitian_part();
    complement_projector(&h, &gram, hh, flops)
}

/// `I - H^H [H H^H]^+ H` on Bob's array, where `ch_mb.matrix` is `H^H`.
/// Its range is the null space of Mallory's jamming at Bob.
pub fn bob_nsp_projector(ch_mb: &LosChannel) -> CMatrix {
    bob_nsp_projector_counted(ch_mb, &mut Flops::new())
}

pub(crate) fn bob_nsp_projector_counted(ch_mb: &LosChannel, flops: &mut Flops) -> CMatrix {
    let hh = &ch_mb.matrix; // N_B x N_M
    let h = hh.adjoint();
    let gram = h.mul_counted(hh, flops).hermitian_part();
    complement_projector(hh, &gram, &h, flops)
}

/// `I - left gram^+ right`.
fn complement_projector(left: &CMatrix, gram: &CMatrix, right: &CMatrix, flops: &mut Flops) -> CMatrix {
    // Gram matrices of finite steering outer products are always Hermitian and
    // finite, so the pseudo-inverse cannot fail here.
    let pinv = pinv_psd_counted(gram, flops).expect("Gram matrix of a finite channel");
    let inner = left.mul_counted(&pinv, flops).mul_counted(right, flops);
    let n = inner.rows();
    flops.cadd(n * n);
    (&CMatrix::identity(n) - &inner).hermitian_part()
}
