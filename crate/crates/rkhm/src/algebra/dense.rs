//! The C*-algebra `C^(p x p)` of dense complex matrices.
//!
//! Product, involution (conjugate transpose), trace, and the operator norm
//! (largest singular value). Storage is a flat row-major vector; the matrices
//! in this crate are small enough that no blocked or sparse layout is
//! warranted.

use super::eigen;
use crate::error::{Error, Result};
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DenseOperator {
    p: usize,
    data: Vec<Complex64>,
}

impl DenseOperator {
    pub fn zeros(p: usize) -> Self {
        DenseOperator { p, data: vec![Complex64::new(0.0, 0.0); p * p] }
    }

    pub fn identity(p: usize) -> Self {
        let mut m = Self::zeros(p);
        for i in 0..p {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let p = rows.len();
        if p == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        let mut data = Vec::with_capacity(p * p);
        for row in &rows {
            if row.len() != p {
                return Err(Error::DimensionMismatch { expected: p, got: row.len() });
            }
            data.extend_from_slice(row);
        }
        if data.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Domain("non-finite matrix entry".into()));
        }
        Ok(DenseOperator { p, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Complex64::new(v, 0.0)).collect())
                .collect(),
        )
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.p + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.p + j] = v;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.p).map(|i| self.data[i * self.p..(i + 1) * self.p].to_vec()).collect()
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.p..(i + 1) * self.p]
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::DimensionMismatch { expected: self.p, got: other.p });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let p = self.p;
        let mut out = Self::zeros(p);
        for i in 0..p {
            for k in 0..p {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..p {
                    out.data[i * p + j] += a * other.data[k * p + j];
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let p = self.p;
        let mut out = Self::zeros(p);
        for i in 0..p {
            for j in 0..p {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.p).map(|i| self.get(i, i)).sum()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(DenseOperator {
            p: self.p,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(DenseOperator {
            p: self.p,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        DenseOperator { p: self.p, data: self.data.iter().map(|v| v * s).collect() }
    }

    /// Adds `s` to every diagonal entry.
    pub fn shift_diag(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for i in 0..self.p {
            let v = out.get(i, i);
            out.set(i, i, v + s);
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum, used by the matrix exponential scaling.
    pub fn one_norm(&self) -> f64 {
        (0..self.p)
            .map(|j| (0..self.p).map(|i| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Operator norm: the largest singular value, computed as the square
    /// root of the top eigenvalue of the Hermitian product `a* a`.
    pub fn operator_norm(&self) -> f64 {
        if self.max_abs() == 0.0 {
            return 0.0;
        }
        let gram = self.adjoint().mul(self).expect("square");
        let eig = eigen::eigen_hermitian(&gram);
        eig.eigenvalues.last().copied().unwrap_or(0.0).max(0.0).sqrt()
    }

    pub fn hermitian_part(&self) -> Self {
        let at = self.adjoint();
        let mut out = self.add(&at).expect("square");
        out = out.scale(Complex64::new(0.5, 0.0));
        out
    }

    /// Operator-norm distance from self-adjointness, `|a - a*|`.
    pub fn hermitian_deviation(&self) -> f64 {
        self.sub(&self.adjoint()).expect("square").operator_norm()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_with_identity() {
        let a = DenseOperator::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let id = DenseOperator::identity(2);
        assert_eq!(a.mul(&id).unwrap(), a);
        assert_eq!(id.mul(&a).unwrap(), a);
    }

    #[test]
    fn adjoint_conjugates_and_transposes() {
        let a = DenseOperator::from_rows(vec![
            vec![c(1.0, 1.0), c(2.0, 0.0)],
            vec![c(0.0, -3.0), c(4.0, 2.0)],
        ])
        .unwrap();
        let at = a.adjoint();
        assert_eq!(at.get(0, 0), c(1.0, -1.0));
        assert_eq!(at.get(0, 1), c(0.0, 3.0));
        assert_eq!(at.get(1, 0), c(2.0, 0.0));
        assert_eq!(at.adjoint(), a);
    }

    #[test]
    fn operator_norm_of_diagonal_is_max_modulus() {
        let a = DenseOperator::diag(&[c(1.0, 0.0), c(-3.0, 0.0), c(2.0, 0.0)]);
        assert!((a.operator_norm() - 3.0).abs() < 1e-10);
    }

    #[test]
    fn trace_sums_diagonal() {
        let a = DenseOperator::from_real_rows(&[&[1.0, 9.0], &[7.0, 2.5]]).unwrap();
        assert_eq!(a.trace(), c(3.5, 0.0));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = DenseOperator::identity(2);
        let b = DenseOperator::identity(3);
        assert!(matches!(a.mul(&b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(a.add(&b), Err(Error::DimensionMismatch { .. })));
    }
}
