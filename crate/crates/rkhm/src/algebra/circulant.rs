//! The group C*-algebra on `Z/pZ`, stored as length-`p` coefficient vectors.
//!
//! An element is a map `x: Z/pZ -> C` with
//!
//! * product `(x.y)(z) = sum_w x(z-w) y(w)` (cyclic convolution),
//! * involution `x*(z) = conj(x(-z))`,
//! * norm `|x| = max_n |sum_z x(z) omega^(z n)|` with `omega = e^(2 pi i/p)`.
//!
//! Identifying `x` with the circulant matrix whose first row is
//! `(x(0), ..., x(p-1))` is a C*-isomorphism onto `Circ(p)`, and the DFT
//! diagonalizes every such matrix. The eigenvalue vector ("spectrum") is
//! cached on first use; values are immutable so the cache never invalidates,
//! and concurrent racers write identical bits.

use super::dense::DenseOperator;
use super::fft;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::sync::OnceLock;

#[derive(Debug, Default)]
pub struct CirculantElement {
    coeffs: Vec<Complex64>,
    spectrum: OnceLock<Vec<Complex64>>,
}

impl Clone for CirculantElement {
    fn clone(&self) -> Self {
        let out = CirculantElement {
            coeffs: self.coeffs.clone(),
            spectrum: OnceLock::new(),
        };
        if let Some(sp) = self.spectrum.get() {
            let _ = out.spectrum.set(sp.clone());
        }
        out
    }
}

impl PartialEq for CirculantElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl CirculantElement {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Domain("non-finite coefficient".into()));
        }
        Ok(CirculantElement { coeffs, spectrum: OnceLock::new() })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&r| Complex64::new(r, 0.0)).collect())
    }

    /// `delta_k`: the indicator of the group element `k`. `delta_0` is the unit.
    pub fn delta(p: usize, k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); p];
        coeffs[k % p] = Complex64::new(1.0, 0.0);
        CirculantElement { coeffs, spectrum: OnceLock::new() }
    }

    pub fn identity(p: usize) -> Self {
        Self::delta(p, 0)
    }

    pub fn zeros(p: usize) -> Self {
        CirculantElement { coeffs: vec![Complex64::new(0.0, 0.0); p], spectrum: OnceLock::new() }
    }

    /// Builds the element whose DFT spectrum is `spectrum`; the cache is
    /// seeded with the supplied values.
    pub fn from_spectrum(spectrum: Vec<Complex64>) -> Self {
        let coeffs = fft::idft(&spectrum);
        let out = CirculantElement { coeffs, spectrum: OnceLock::new() };
        let _ = out.spectrum.set(spectrum);
        out
    }

    pub fn p(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Eigenvalues `sum_z x(z) omega^(z n)` for `n = 0..p-1`, lazily cached.
    pub fn spectrum(&self) -> &[Complex64] {
        self.spectrum.get_or_init(|| fft::dft(&self.coeffs))
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.p() != other.p() {
            return Err(Error::DimensionMismatch { expected: self.p(), got: other.p() });
        }
        Ok(())
    }

    /// Cyclic convolution, evaluated as an elementwise product of spectra
    /// followed by the inverse transform.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let prod: Vec<Complex64> = self
            .spectrum()
            .iter()
            .zip(other.spectrum())
            .map(|(a, b)| a * b)
            .collect();
        Ok(Self::from_spectrum(prod))
    }

    /// Involution `x*(z) = conj(x(-z))`, exact (index reflection plus
    /// conjugation only).
    pub fn adjoint(&self) -> Self {
        let p = self.p();
        let coeffs = (0..p).map(|z| self.coeffs[(p - z) % p].conj()).collect();
        CirculantElement { coeffs, spectrum: OnceLock::new() }
    }

    /// C*-norm: the largest spectrum modulus.
    pub fn norm(&self) -> f64 {
        self.spectrum().iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Self::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Self::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        CirculantElement {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            spectrum: OnceLock::new(),
        }
    }

    /// Trace of the circulant matrix representation: `p * x(0)`.
    pub fn trace(&self) -> Complex64 {
        self.coeffs[0] * self.p() as f64
    }

    /// The circulant matrix `circ(x(0), ..., x(p-1))`: entry `(i, j)` is
    /// `x((j - i) mod p)`, so row `i` is the cyclic right-shift of the
    /// coefficients by `i`.
    pub fn to_dense(&self) -> DenseOperator {
        let p = self.p();
        let mut m = DenseOperator::zeros(p);
        for i in 0..p {
            for j in 0..p {
                m.set(i, j, self.coeffs[(p + j - i) % p]);
            }
        }
        m
    }
}
