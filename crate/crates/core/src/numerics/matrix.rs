use std::ops::{Add, Index, IndexMut, Mul, Sub};

use super::{Flops, C64};

/// Dense complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector(Vec<C64>);

impl CVector {
    pub fn zeros(dim: usize) -> Self {
        Self(vec![C64::new(0.0, 0.0); dim])
    }

    pub fn from_vec(entries: Vec<C64>) -> Self {
        Self(entries)
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize) -> C64) -> Self {
        Self((0..dim).map(f).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, C64> {
        self.0.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Hermitian inner product `self^H other`.
    pub fn dot(&self, other: &CVector) -> C64 {
        self.dot_counted(other, &mut Flops::new())
    }

    pub fn dot_counted(&self, other: &CVector, flops: &mut Flops) -> C64 {
        assert_eq!(self.dim(), other.dim(), "dot: dimension mismatch");
        flops.cmac(self.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(C64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_counted(&self, flops: &mut Flops) -> f64 {
        flops.real(4 * self.dim());
        self.norm()
    }

    pub fn scale(&self, s: C64) -> CVector {
        Self(self.0.iter().map(|z| z * s).collect())
    }

    pub fn scale_real(&self, s: f64) -> CVector {
        Self(self.0.iter().map(|z| z * s).collect())
    }

    pub fn scale_real_counted(&self, s: f64, flops: &mut Flops) -> CVector {
        flops.real(2 * self.dim());
        self.scale_real(s)
    }

    pub fn conj(&self) -> CVector {
        Self(self.0.iter().map(|z| z.conj()).collect())
    }

    /// Unit-norm copy, or `None` when the norm is below `tol`.
    pub fn normalized(&self, tol: f64) -> Option<CVector> {
        let n = self.norm();
        (n > tol && n.is_finite()).then(|| self.scale_real(1.0 / n))
    }

    pub fn normalized_counted(&self, tol: f64, flops: &mut Flops) -> Option<CVector> {
        let n = self.norm_counted(flops);
        if n > tol && n.is_finite() {
            Some(self.scale_real_counted(1.0 / n, flops))
        } else {
            None
        }
    }

    /// Outer product `self other^H`.
    pub fn outer(&self, other: &CVector) -> CMatrix {
        CMatrix::from_fn(self.dim(), other.dim(), |i, j| self.0[i] * other.0[j].conj())
    }

    pub fn into_column(self) -> CMatrix {
        let rows = self.dim();
        CMatrix {
            rows,
            cols: 1,
            data: self.0,
        }
    }
}

impl Index<usize> for CVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for CVector {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.0[i]
    }
}

impl Add for &CVector {
    type Output = CVector;
    fn add(self, rhs: &CVector) -> CVector {
        assert_eq!(self.dim(), rhs.dim(), "add: dimension mismatch");
        CVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &CVector {
    type Output = CVector;
    fn sub(self, rhs: &CVector) -> CVector {
        assert_eq!(self.dim(), rhs.dim(), "sub: dimension mismatch");
        CVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row slices. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn from_columns(columns: &[CVector]) -> Self {
        let rows = columns.first().map_or(0, CVector::dim);
        assert!(columns.iter().all(|c| c.dim() == rows), "ragged columns");
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn column(&self, j: usize) -> CVector {
        CVector::from_fn(self.rows, |i| self[(i, j)])
    }

    pub fn row(&self, i: usize) -> CVector {
        CVector::from_vec(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn adjoint(&self) -> CMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> CMatrix {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `|m_ij - conj(m_ji)|`. Panics when not square.
    pub fn hermitian_defect(&self) -> f64 {
        assert!(self.is_square());
        let n = self.rows;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(m + m^H) / 2`.
    pub fn hermitian_part(&self) -> CMatrix {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    pub fn mul_vec(&self, v: &CVector) -> CVector {
        self.mul_vec_counted(v, &mut Flops::new())
    }

    pub fn mul_vec_counted(&self, v: &CVector, flops: &mut Flops) -> CVector {
        assert_eq!(self.cols, v.dim(), "mul_vec: dimension mismatch");
        flops.cmac(self.rows * self.cols);
        CVector::from_fn(self.rows, |i| {
            self.data[i * self.cols..(i + 1) * self.cols]
                .iter()
                .zip(v.iter())
                .fold(C64::new(0.0, 0.0), |acc, (a, b)| acc + a * b)
        })
    }

    /// `self^H v` without forming the adjoint.
    pub fn adjoint_mul_vec_counted(&self, v: &CVector, flops: &mut Flops) -> CVector {
        assert_eq!(self.rows, v.dim(), "adjoint_mul_vec: dimension mismatch");
        flops.cmac(self.rows * self.cols);
        let mut out = CVector::zeros(self.cols);
        for i in 0..self.rows {
            let vi = v[i];
            for j in 0..self.cols {
                out[j] += self[(i, j)].conj() * vi;
            }
        }
        out
    }

    /// Row vector `v^T self`, returned as a column of its entries.
    pub fn row_mul_counted(&self, v_row: &CVector, flops: &mut Flops) -> CVector {
        assert_eq!(self.rows, v_row.dim(), "row_mul: dimension mismatch");
        flops.cmac(self.rows * self.cols);
        let mut out = CVector::zeros(self.cols);
        for i in 0..self.rows {
            let vi = v_row[i];
            for j in 0..self.cols {
                out[j] += vi * self[(i, j)];
            }
        }
        out
    }

    pub fn mul_counted(&self, rhs: &CMatrix, flops: &mut Flops) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "mul: dimension mismatch");
        flops.cmac(self.rows * self.cols * rhs.cols);
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let rrow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `coef * X X^H` for any `X`; only the upper triangle is computed.
    pub fn gram_counted(&self, coef: f64, flops: &mut Flops) -> CMatrix {
        let n = self.rows;
        flops.cmac(n * (n + 1) / 2 * self.cols);
        let mut out = CMatrix::zeros(n, n);
        for i in 0..n {
            let ri = &self.data[i * self.cols..(i + 1) * self.cols];
            for j in i..n {
                let rj = &self.data[j * self.cols..(j + 1) * self.cols];
                let s: C64 = ri.iter().zip(rj).map(|(a, b)| a * b.conj()).sum();
                out[(i, j)] = s * coef;
                out[(j, i)] = (s * coef).conj();
            }
            out[(i, i)].im = 0.0;
        }
        out
    }

    pub fn add_counted(&self, rhs: &CMatrix, flops: &mut Flops) -> CMatrix {
        assert_eq!(self.shape(), rhs.shape(), "add: dimension mismatch");
        flops.cadd(self.data.len());
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    /// `self + s I`. Panics when not square.
    pub fn add_diagonal(&self, s: f64) -> CMatrix {
        assert!(self.is_square());
        let mut out = self.clone();
        for i in 0..self.rows {
            out[(i, i)] += s;
        }
        out
    }

    /// In-place rank-one update `self += u w^T`, with `w` given as raw row entries.
    pub fn add_rank_one_counted(&mut self, u: &CVector, w_row: &CVector, flops: &mut Flops) {
        assert_eq!((self.rows, self.cols), (u.dim(), w_row.dim()));
        flops.cmac(self.rows * self.cols);
        for i in 0..self.rows {
            let ui = u[i];
            for j in 0..self.cols {
                self.data[i * self.cols + j] += ui * w_row[j];
            }
        }
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.mul_counted(rhs, &mut Flops::new())
    }
}

impl Mul<&CVector> for &CMatrix {
    type Output = CVector;
    fn mul(self, rhs: &CVector) -> CVector {
        self.mul_vec(rhs)
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        self.add_counted(rhs, &mut Flops::new())
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.shape(), rhs.shape(), "sub: dimension mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn adjoint_and_products_agree() {
        let a = CMatrix::from_rows(&[vec![c(1.0, 2.0), c(0.0, -1.0)], vec![c(3.0, 0.5), c(2.0, 2.0)]]);
        let v = CVector::from_vec(vec![c(1.0, 1.0), c(-2.0, 0.0)]);
        let mut f = Flops::new();
        let direct = a.adjoint().mul_vec(&v);
        let fused = a.adjoint_mul_vec_counted(&v, &mut f);
        assert!((&direct - &fused).norm() < 1e-15);
        assert_eq!(f.count(), 8 * 4);
    }

    #[test]
    fn gram_is_hermitian_product() {
        let x = CMatrix::from_fn(3, 2, |i, j| c(i as f64 - j as f64, 0.3 * (i + j) as f64));
        let g = x.gram_counted(2.0, &mut Flops::new());
        let reference = (&x * &x.adjoint()).scale_real(2.0);
        assert!((&g - &reference).frobenius_norm() < 1e-14);
        assert_eq!(g.hermitian_defect(), 0.0);
    }

    #[test]
    fn row_mul_matches_transpose_product() {
        let a = CMatrix::from_fn(2, 3, |i, j| c((i * 3 + j) as f64, 1.0));
        let w = CVector::from_vec(vec![c(0.5, -1.0), c(2.0, 0.0)]);
        let out = a.row_mul_counted(&w, &mut Flops::new());
        for j in 0..3 {
            let expect = w[0] * a[(0, j)] + w[1] * a[(1, j)];
            assert!((out[j] - expect).norm() < 1e-15);
        }
    }
}
