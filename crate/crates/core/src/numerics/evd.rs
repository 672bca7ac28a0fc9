//! Hermitian eigen-decomposition.
//!
//! The matrix is reduced to Hermitian tridiagonal form with complex
//! Householder reflectors, the off-diagonal phases are rotated out to leave a
//! real symmetric tridiagonal, and that is diagonalized with implicit QL
//! iterations (the classic `tql2` scheme).

use super::{CMatrix, Flops, C64};
use crate::error::{Error, Result};

/// Relative asymmetry above which an input is rejected instead of symmetrized.
pub const HERMITIAN_TOL: f64 = 1e-12;

const MAX_QL_ITERATIONS: usize = 64;

/// Eigen-pairs of a Hermitian matrix, eigenvalues descending.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEvd {
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix whose columns are the eigenvectors.
    pub eigenvectors: CMatrix,
}

impl HermitianEvd {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `Q diag(f(lambda)) Q^H`.
    pub fn spectral_map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        self.spectral_map_counted(f, &mut Flops::new())
    }

    pub(crate) fn spectral_map_counted(&self, f: impl Fn(f64) -> f64, flops: &mut Flops) -> CMatrix {
        let q = &self.eigenvectors;
        let n = self.dim();
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        flops.cmac(n * n * (n + 1) / 2);
        let mut out = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut s = C64::new(0.0, 0.0);
                for (k, &w) in weights.iter().enumerate() {
                    if w != 0.0 {
                        s += q[(i, k)] * q[(j, k)].conj() * w;
                    }
                }
                out[(i, j)] = s;
                out[(j, i)] = s.conj();
            }
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.spectral_map(|l| l)
    }
}

/// Validates squareness, finiteness and Hermitian symmetry, then returns
/// `(m + m^H)/2` to absorb roundoff.
pub fn symmetrize(m: &CMatrix) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension {
            context: "Hermitian input",
            expected: "square matrix".into(),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let scale = m.max_abs();
    if scale > 0.0 {
        let asymmetry = m.hermitian_defect() / scale;
        if asymmetry > HERMITIAN_TOL {
            return Err(Error::NotHermitian { asymmetry });
        }
    }
    Ok(m.hermitian_part())
}

pub fn hermitian_evd(m: &CMatrix) -> Result<HermitianEvd> {
    hermitian_evd_counted(m, &mut Flops::new())
}

pub fn hermitian_evd_counted(m: &CMatrix, flops: &mut Flops) -> Result<HermitianEvd> {
    let mut a = symmetrize(m)?;
    let n = a.rows();

    let reflectors = tridiagonalize(&mut a, flops);
    let mut basis = accumulate_reflectors(n, &reflectors, flops);

    let mut diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut off = vec![0.0; n];
    let mut phase = C64::new(1.0, 0.0);
    for i in 0..n.saturating_sub(1) {
        let e = a[(i + 1, i)];
        let r = e.norm();
        off[i] = r;
        if r > 0.0 {
            phase *= e / r;
        }
        for row in 0..n {
            basis[(row, i + 1)] *= phase;
        }
    }
    flops.cmac(n * n);

    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tql2(&mut diag, &mut off, &mut z, n, flops)?;

    // eigenvectors = basis * z (complex times real)
    flops.real(4 * n * n * n);
    let mut vectors = CMatrix::zeros(n, n);
    for i in 0..n {
        for k in 0..n {
            let b = basis[(i, k)];
            for j in 0..n {
                let zk = z[k * n + j];
                if zk != 0.0 {
                    vectors[(i, j)] += b * zk;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| diag[y].total_cmp(&diag[x]));
    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]);
    Ok(HermitianEvd {
        eigenvalues,
        eigenvectors,
    })
}

struct Reflector {
    offset: usize,
    v: Vec<C64>,
    tau: f64,
}

/// Overwrites `a` with a Hermitian tridiagonal matrix `U^H a U`; returns the
/// reflectors defining `U`.
fn tridiagonalize(a: &mut CMatrix, flops: &mut Flops) -> Vec<Reflector> {
    let n = a.rows();
    let mut out = Vec::new();
    for k in 0..n.saturating_sub(2) {
        let off = k + 1;
        let m = n - off;
        let mut v: Vec<C64> = (off..n).map(|i| a[(i, k)]).collect();
        flops.cmac(m);
        let alpha = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let beta = -phase * alpha;
        v[0] -= beta;
        flops.cmac(m);
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let tau = 2.0 / vnorm2;

        // p = tau * A22 v
        flops.cmac(m * m);
        let p: Vec<C64> = (0..m)
            .map(|i| {
                let s: C64 = (0..m).map(|j| a[(off + i, off + j)] * v[j]).sum();
                s * tau
            })
            .collect();
        flops.cmac(2 * m);
        let vhp: C64 = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
        let mu = 0.5 * tau * vhp.re;
        let q: Vec<C64> = p.iter().zip(&v).map(|(pi, vi)| pi - vi * mu).collect();

        // A22 -= v q^H + q v^H
        flops.cmac(2 * m * m);
        for i in 0..m {
            for j in 0..m {
                a[(off + i, off + j)] -= v[i] * q[j].conj() + q[i] * v[j].conj();
            }
        }
        a[(off, k)] = beta;
        a[(k, off)] = beta.conj();
        for i in off + 1..n {
            a[(i, k)] = C64::new(0.0, 0.0);
            a[(k, i)] = C64::new(0.0, 0.0);
        }
        out.push(Reflector { offset: off, v, tau });
    }
    out
}

fn accumulate_reflectors(n: usize, reflectors: &[Reflector], flops: &mut Flops) -> CMatrix {
    let mut u = CMatrix::identity(n);
    for r in reflectors.iter().rev() {
        let off = r.offset;
        let m = n - off;
        flops.cmac(2 * m * m);
        for j in off..n {
            let s: C64 = (0..m).map(|i| r.v[i].conj() * u[(off + i, j)]).sum();
            if s == C64::new(0.0, 0.0) {
                continue;
            }
            let s = s * r.tau;
            for i in 0..m {
                u[(off + i, j)] -= r.v[i] * s;
            }
        }
    }
    u
}

/// Implicit QL on a symmetric tridiagonal (`d` diagonal, `e[i]` couples
/// `i` and `i+1`), accumulating rotations into the row-major `z`.
fn tql2(d: &mut [f64], e: &mut [f64], z: &mut [f64], n: usize, flops: &mut Flops) -> Result<()> {
    if n < 2 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let mut total_iter = 0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                total_iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(Error::NoConvergence {
                        iterations: total_iter,
                    });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    flops.real(6 * n + 20);
                    for k in 0..n {
                        let zi = z[k * n + i];
                        let zi1 = z[k * n + i + 1];
                        z[k * n + i + 1] = s * zi + c * zi1;
                        z[k * n + i] = c * zi - s * zi1;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn rel_residual(m: &CMatrix, evd: &HermitianEvd) -> f64 {
        (&evd.reconstruct() - m).frobenius_norm() / m.frobenius_norm().max(f64::MIN_POSITIVE)
    }

    fn unitarity_defect(q: &CMatrix) -> f64 {
        (&(&q.adjoint() * q) - &CMatrix::identity(q.rows())).frobenius_norm()
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let evd = hermitian_evd(&CMatrix::identity(4)).unwrap();
        assert_eq!(evd.eigenvalues, vec![1.0; 4]);
        assert!(unitarity_defect(&evd.eigenvectors) < 1e-14);
    }

    #[test]
    fn diagonal_sorted_descending() {
        let evd = hermitian_evd(&CMatrix::from_real_diagonal(&[1.0, 3.0])).unwrap();
        assert_eq!(evd.eigenvalues, vec![3.0, 1.0]);
        assert!((evd.eigenvectors[(1, 0)].norm() - 1.0).abs() < 1e-15);
        assert!((evd.eigenvectors[(0, 1)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dense_complex_matrix() {
        // 5x5 Hermitian with all-complex off-diagonals
        let n = 5;
        let m = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                c(1.0 + i as f64, 0.0)
            } else {
                let (a, b) = (i.min(j) as f64, i.max(j) as f64);
                let z = c(0.3 * a - 0.1 * b, 0.2 + 0.05 * a * b);
                if i < j {
                    z
                } else {
                    z.conj()
                }
            }
        });
        let evd = hermitian_evd(&m).unwrap();
        assert!(rel_residual(&m, &evd) < 1e-13);
        assert!(unitarity_defect(&evd.eigenvectors) < 1e-13);
        assert!(evd.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        // trace is preserved
        let tr: f64 = evd.eigenvalues.iter().sum();
        assert!((tr - m.trace().re).abs() < 1e-12);
    }

    #[test]
    fn rank_one_plus_scaled_identity() {
        let w = crate::numerics::CVector::from_fn(6, |k| c((k as f64).cos(), (0.7 * k as f64).sin()));
        let m = w.outer(&w).add_diagonal(0.25);
        let evd = hermitian_evd(&m).unwrap();
        assert!((evd.max_eigenvalue() - (w.norm_sqr() + 0.25)).abs() < 1e-12);
        for &l in &evd.eigenvalues[1..] {
            assert!((l - 0.25).abs() < 1e-13);
        }
        assert!(rel_residual(&m, &evd) < 1e-13);
    }

    #[test]
    fn rejects_non_square_and_asymmetric() {
        assert!(matches!(
            hermitian_evd(&CMatrix::zeros(2, 3)),
            Err(Error::Dimension { .. })
        ));
        let mut m = CMatrix::identity(2);
        m[(0, 1)] = c(1e-3, 0.0);
        assert!(matches!(hermitian_evd(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn tiny_asymmetry_is_repaired() {
        let mut m = CMatrix::identity(3).scale_real(2.0);
        m[(0, 2)] = c(0.5, 0.5);
        m[(2, 0)] = c(0.5, -0.5 + 1e-15);
        let evd = hermitian_evd(&m).unwrap();
        assert!(rel_residual(&m.hermitian_part(), &evd) < 1e-14);
    }

    #[test]
    fn ties_keep_algorithm_order() {
        let evd = hermitian_evd(&CMatrix::from_real_diagonal(&[2.0, 5.0, 2.0])).unwrap();
        assert_eq!(evd.eigenvalues, vec![5.0, 2.0, 2.0]);
        assert!((evd.eigenvectors[(0, 1)].norm() - 1.0).abs() < 1e-15);
        assert!((evd.eigenvectors[(2, 2)].norm() - 1.0).abs() < 1e-15);
    }
}
