//! Complex dense linear algebra: exactly what the beamformers need.

mod evd;
mod flops;
mod matrix;

pub use evd::{hermitian_evd, hermitian_evd_counted, symmetrize, HermitianEvd, HERMITIAN_TOL};
pub use flops::Flops;
pub use matrix::{CMatrix, CVector};
pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Smallest admissible `lambda_min / lambda_max` for an HPD operand.
pub const HPD_RATIO: f64 = 1e-14;

/// Eigenvalues below this fraction of the largest are treated as zero by the
/// pseudo-inverse and the pseudo-whitening.
pub const NULL_EIGEN_RATIO: f64 = 1e-12;

fn check_hpd(evd: &HermitianEvd) -> Result<()> {
    let (min, max) = (evd.min_eigenvalue(), evd.max_eigenvalue());
    if !(max > 0.0) || !(min > HPD_RATIO * max) {
        return Err(Error::Conditioning { min, max });
    }
    Ok(())
}

fn conditioning_error(m: &CMatrix) -> Error {
    match hermitian_evd(m) {
        Ok(evd) => Error::Conditioning {
            min: evd.min_eigenvalue(),
            max: evd.max_eigenvalue(),
        },
        Err(e) => e,
    }
}

/// Inverse of a Hermitian positive definite matrix via Cholesky.
pub fn inv_hpd(m: &CMatrix) -> Result<CMatrix> {
    inv_hpd_counted(m, &mut Flops::new())
}

pub fn inv_hpd_counted(m: &CMatrix, flops: &mut Flops) -> Result<CMatrix> {
    let a = symmetrize(m)?;
    let n = a.rows();

    // a = L L^H
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        flops.cmac(j);
        let mut pivot = a[(j, j)].re;
        for k in 0..j {
            pivot -= l[(j, k)].norm_sqr();
        }
        if !(pivot > 0.0) {
            return Err(conditioning_error(&a));
        }
        let ljj = pivot.sqrt();
        l[(j, j)] = C64::new(ljj, 0.0);
        for i in j + 1..n {
            flops.cmac(j + 1);
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }

    // L^-1, lower triangular
    let mut linv = CMatrix::zeros(n, n);
    for j in 0..n {
        linv[(j, j)] = C64::new(1.0 / l[(j, j)].re, 0.0);
        for i in j + 1..n {
            flops.cmac(i - j + 1);
            let mut s = C64::new(0.0, 0.0);
            for k in j..i {
                s += l[(i, k)] * linv[(k, j)];
            }
            linv[(i, j)] = -s / l[(i, i)].re;
        }
    }

    // a^-1 = L^-H L^-1
    let mut inv = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            flops.cmac(n - j);
            let mut s = C64::new(0.0, 0.0);
            for k in j..n {
                s += linv[(k, i)].conj() * linv[(k, j)];
            }
            inv[(i, j)] = s;
            inv[(j, i)] = s.conj();
        }
    }

    // ||a||_F ||a^-1||_F bounds the 2-norm condition number from above; only
    // when the bound is loose do we pay for the exact spectrum.
    flops.real(8 * n * n);
    let bound = a.frobenius_norm() * inv.frobenius_norm();
    if !(bound.is_finite() && bound * HPD_RATIO <= 1.0) {
        let evd = hermitian_evd(&a)?;
        check_hpd(&evd)?;
    }
    Ok(inv)
}

/// Moore-Penrose pseudo-inverse of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues at or below `NULL_EIGEN_RATIO * lambda_max` are treated as zero,
/// which makes the rank-one Gram matrices of line-of-sight channels invertible
/// on their range.
pub fn pinv_psd(m: &CMatrix) -> Result<CMatrix> {
    pinv_psd_counted(m, &mut Flops::new())
}

pub fn pinv_psd_counted(m: &CMatrix, flops: &mut Flops) -> Result<CMatrix> {
    let evd = hermitian_evd_counted(m, flops)?;
    let cutoff = NULL_EIGEN_RATIO * evd.max_eigenvalue();
    Ok(evd.spectral_map_counted(|l| if l > cutoff && l > 0.0 { 1.0 / l } else { 0.0 }, flops))
}

/// Hermitian inverse square root `Q Lambda^{-1/2} Q^H`.
pub fn inv_sqrt_hpd(m: &CMatrix) -> Result<CMatrix> {
    inv_sqrt_hpd_counted(m, &mut Flops::new())
}

pub fn inv_sqrt_hpd_counted(m: &CMatrix, flops: &mut Flops) -> Result<CMatrix> {
    let evd = hermitian_evd_counted(m, flops)?;
    check_hpd(&evd)?;
    Ok(evd.spectral_map_counted(|l| 1.0 / l.sqrt(), flops))
}
