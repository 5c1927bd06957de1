//! The two concrete C*-algebras everything else is built on: the group
//! C*-algebra `C*(Z/pZ)` (equivalently `Circ(p)`, the circulant matrices)
//! and the full matrix algebra `C^(p x p)`, together with the positivity
//! calculus shared by both.
//!
//! `AlgebraValue` is the tagged union the solver dispatches on. The circulant
//! algebra is a subalgebra of the dense one via `CirculantElement::to_dense`,
//! and mixed-variant arithmetic promotes to the dense side.

mod circulant;
mod dense;
mod eigen;
mod expm;
pub(crate) mod fft;
mod lu;
mod qr;
mod serde_impl;

pub use circulant::CirculantElement;
pub use dense::DenseOperator;
pub use eigen::{eigen_hermitian, HermitianEigen};
pub use expm::expm;
pub use fft::{dft, idft, transform_cost};
pub use qr::qr_decompose;
pub(crate) use lu::lu_solve_in_place;

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Default relative tolerance for numerical positivity decisions. The scale
/// reference is `max(1, |a|)`, so the tolerance acts absolutely near zero
/// and relatively for large elements.
pub const DEFAULT_POSITIVITY_TOL: f64 = 1e-8;

/// An element of either concrete algebra.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraValue {
    Circulant(CirculantElement),
    Dense(DenseOperator),
}

impl From<CirculantElement> for AlgebraValue {
    fn from(x: CirculantElement) -> Self {
        AlgebraValue::Circulant(x)
    }
}

impl From<DenseOperator> for AlgebraValue {
    fn from(x: DenseOperator) -> Self {
        AlgebraValue::Dense(x)
    }
}

impl AlgebraValue {
    pub fn p(&self) -> usize {
        match self {
            AlgebraValue::Circulant(x) => x.p(),
            AlgebraValue::Dense(x) => x.p(),
        }
    }

    pub fn is_circulant(&self) -> bool {
        matches!(self, AlgebraValue::Circulant(_))
    }

    pub fn as_circulant(&self) -> Option<&CirculantElement> {
        match self {
            AlgebraValue::Circulant(x) => Some(x),
            AlgebraValue::Dense(_) => None,
        }
    }

    pub fn to_dense(&self) -> DenseOperator {
        match self {
            AlgebraValue::Circulant(x) => x.to_dense(),
            AlgebraValue::Dense(x) => x.clone(),
        }
    }

    pub fn dense_identity(p: usize) -> Self {
        AlgebraValue::Dense(DenseOperator::identity(p))
    }

    pub fn circulant_identity(p: usize) -> Self {
        AlgebraValue::Circulant(CirculantElement::identity(p))
    }

    pub fn zeros_like(&self) -> Self {
        match self {
            AlgebraValue::Circulant(x) => AlgebraValue::Circulant(CirculantElement::zeros(x.p())),
            AlgebraValue::Dense(x) => AlgebraValue::Dense(DenseOperator::zeros(x.p())),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (AlgebraValue::Circulant(a), AlgebraValue::Circulant(b)) => {
                Ok(AlgebraValue::Circulant(a.mul(b)?))
            }
            _ => Ok(AlgebraValue::Dense(self.to_dense().mul(&other.to_dense())?)),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (AlgebraValue::Circulant(a), AlgebraValue::Circulant(b)) => {
                Ok(AlgebraValue::Circulant(a.add(b)?))
            }
            _ => Ok(AlgebraValue::Dense(self.to_dense().add(&other.to_dense())?)),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (AlgebraValue::Circulant(a), AlgebraValue::Circulant(b)) => {
                Ok(AlgebraValue::Circulant(a.sub(b)?))
            }
            _ => Ok(AlgebraValue::Dense(self.to_dense().sub(&other.to_dense())?)),
        }
    }

    pub fn adjoint(&self) -> Self {
        match self {
            AlgebraValue::Circulant(x) => AlgebraValue::Circulant(x.adjoint()),
            AlgebraValue::Dense(x) => AlgebraValue::Dense(x.adjoint()),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        match self {
            AlgebraValue::Circulant(x) => AlgebraValue::Circulant(x.scale(s)),
            AlgebraValue::Dense(x) => AlgebraValue::Dense(x.scale(s)),
        }
    }

    /// C*-norm (operator norm in the dense representation).
    pub fn norm(&self) -> f64 {
        match self {
            AlgebraValue::Circulant(x) => x.norm(),
            AlgebraValue::Dense(x) => x.operator_norm(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        match self {
            AlgebraValue::Circulant(x) => x.trace(),
            AlgebraValue::Dense(x) => x.trace(),
        }
    }
}

/// Whether `a` is positive (of the form `b* b`) up to `tol`, checked as:
/// the deviation from self-adjointness is at most `tol * max(1, |a|)` and
/// the spectrum of the Hermitian part stays above `-tol * max(1, |a|)`.
/// For circulant elements the spectrum is the DFT, so the check is direct.
pub fn is_positive(a: &AlgebraValue, tol: f64) -> bool {
    match a {
        AlgebraValue::Circulant(x) => {
            let scale = x.norm().max(1.0);
            x.spectrum()
                .iter()
                .all(|l| l.im.abs() <= tol * scale && l.re >= -tol * scale)
        }
        AlgebraValue::Dense(m) => {
            let scale = m.operator_norm().max(1.0);
            if m.hermitian_deviation() > tol * scale {
                return false;
            }
            let eig = eigen_hermitian(m);
            eig.eigenvalues.first().map_or(true, |&lo| lo >= -tol * scale)
        }
    }
}

/// The partial order `a <= b` iff `b - a` is positive.
pub fn partial_order_leq(a: &AlgebraValue, b: &AlgebraValue, tol: f64) -> Result<bool> {
    Ok(is_positive(&b.sub(a)?, tol))
}

/// The positive square root of a positive element, via the Hermitian
/// eigendecomposition (dense) or the DFT spectrum (circulant). Eigenvalues
/// within the tolerance below zero are clamped to zero; anything further
/// negative is a domain error.
pub fn positive_sqrt(a: &AlgebraValue) -> Result<AlgebraValue> {
    positive_sqrt_with_tol(a, DEFAULT_POSITIVITY_TOL)
}

pub fn positive_sqrt_with_tol(a: &AlgebraValue, tol: f64) -> Result<AlgebraValue> {
    if !is_positive(a, tol) {
        return Err(Error::NotPositive(format!(
            "positive_sqrt requires a positive element (norm {:.3e})",
            a.norm()
        )));
    }
    match a {
        AlgebraValue::Circulant(x) => {
            let spec: Vec<Complex64> = x
                .spectrum()
                .iter()
                .map(|l| Complex64::new(l.re.max(0.0).sqrt(), 0.0))
                .collect();
            Ok(AlgebraValue::Circulant(CirculantElement::from_spectrum(spec)))
        }
        AlgebraValue::Dense(m) => {
            let eig = eigen_hermitian(m);
            let root = DenseOperator::diag(
                &eig.eigenvalues
                    .iter()
                    .map(|&l| Complex64::new(l.max(0.0).sqrt(), 0.0))
                    .collect::<Vec<_>>(),
            );
            let out = eig.vectors.mul(&root)?.mul(&eig.vectors.adjoint())?;
            Ok(AlgebraValue::Dense(out))
        }
    }
}

/// The algebra absolute value `|a| = (a* a)^(1/2)`.
pub fn abs_a(a: &AlgebraValue) -> AlgebraValue {
    let gram = a.adjoint().mul(a).expect("same dimension");
    // a* a is positive by construction; any tolerance failure is rounding.
    positive_sqrt_with_tol(&gram, 1e-6).expect("a* a is positive")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rand_dense(p: usize, seed: u64) -> DenseOperator {
        let mut s = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(p as u64);
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut a = DenseOperator::zeros(p);
        for i in 0..p {
            for j in 0..p {
                a.set(i, j, Complex64::new(next(), next()));
            }
        }
        a
    }

    #[test]
    fn identity_is_positive_negated_is_not() {
        let id = AlgebraValue::dense_identity(3);
        assert!(is_positive(&id, 1e-10));
        let neg = id.scale(Complex64::new(-1.0, 0.0));
        assert!(!is_positive(&neg, 1e-10));
    }

    #[test]
    fn b_star_b_is_positive() {
        for seed in 0..5 {
            let b = AlgebraValue::Dense(rand_dense(4, seed));
            let a = b.adjoint().mul(&b).unwrap();
            assert!(is_positive(&a, 1e-10));
        }
        // Circulant variant of the same construction.
        let b = AlgebraValue::Circulant(
            CirculantElement::new(vec![
                Complex64::new(1.0, 0.5),
                Complex64::new(-0.3, 0.2),
                Complex64::new(0.1, -0.7),
            ])
            .unwrap(),
        );
        let a = b.adjoint().mul(&b).unwrap();
        assert!(is_positive(&a, 1e-10));
    }

    #[test]
    fn order_examples() {
        let a = AlgebraValue::Dense(rand_dense(3, 9));
        let herm = AlgebraValue::Dense(a.to_dense().hermitian_part());
        assert!(partial_order_leq(&herm, &herm, 1e-10).unwrap());

        let b = AlgebraValue::Dense(rand_dense(3, 11));
        let bsb = b.adjoint().mul(&b).unwrap();
        let zero = bsb.zeros_like();
        assert!(partial_order_leq(&zero, &bsb, 1e-10).unwrap());

        // diag(2, 0) vs diag(1, 1): the difference has eigenvalues (-1, 1).
        let lhs = AlgebraValue::Dense(DenseOperator::diag(&[
            Complex64::new(2.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]));
        let rhs = AlgebraValue::Dense(DenseOperator::diag(&[
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]));
        assert!(!partial_order_leq(&lhs, &rhs, 1e-10).unwrap());
    }

    #[test]
    fn sqrt_examples() {
        let id = AlgebraValue::dense_identity(2);
        let r = positive_sqrt(&id).unwrap();
        assert!(r.sub(&id).unwrap().norm() < 1e-12);

        let a = AlgebraValue::Dense(DenseOperator::diag(&[
            Complex64::new(4.0, 0.0),
            Complex64::new(9.0, 0.0),
        ]));
        let r = positive_sqrt(&a).unwrap().to_dense();
        assert!((r.get(0, 0) - Complex64::new(2.0, 0.0)).norm() < 1e-10);
        assert!((r.get(1, 1) - Complex64::new(3.0, 0.0)).norm() < 1e-10);

        for seed in 0..5 {
            let b = rand_dense(4, 100 + seed);
            let psd = AlgebraValue::Dense(b.adjoint().mul(&b).unwrap());
            let r = positive_sqrt(&psd).unwrap();
            assert!(is_positive(&r, 1e-8));
            let back = r.mul(&r).unwrap();
            let rel = back.sub(&psd).unwrap().norm() / psd.norm().max(1.0);
            assert!(rel < 1e-8, "sqrt squared back rel err {rel:.3e}");
        }

        let neg = AlgebraValue::Dense(DenseOperator::diag(&[Complex64::new(-1.0, 0.0)]));
        assert!(matches!(positive_sqrt(&neg), Err(Error::NotPositive(_))));
    }

    #[test]
    fn abs_examples() {
        // A unitary u has |u| = I.
        let h = rand_dense(3, 5).hermitian_part();
        let u = expm(&h.scale(Complex64::new(0.0, 1.0)));
        let a = abs_a(&AlgebraValue::Dense(u));
        let err = a.sub(&AlgebraValue::dense_identity(3)).unwrap().norm();
        assert!(err < 1e-10, "|unitary| = I error {err:.3e}");

        let d = AlgebraValue::Dense(DenseOperator::diag(&[
            Complex64::new(-2.0, 0.0),
            Complex64::new(3.0, 0.0),
        ]));
        let ad = abs_a(&d).to_dense();
        assert!((ad.get(0, 0) - Complex64::new(2.0, 0.0)).norm() < 1e-10);
        assert!((ad.get(1, 1) - Complex64::new(3.0, 0.0)).norm() < 1e-10);

        let z = AlgebraValue::Dense(DenseOperator::zeros(2));
        assert!(abs_a(&z).norm() < 1e-12);
    }

    #[test]
    fn mixed_arithmetic_promotes_to_dense() {
        let c = AlgebraValue::Circulant(CirculantElement::from_real(&[1.0, 2.0]).unwrap());
        let d = AlgebraValue::Dense(DenseOperator::identity(2));
        let prod = c.mul(&d).unwrap();
        assert!(!prod.is_circulant());
        assert!(prod.sub(&AlgebraValue::Dense(c.to_dense())).unwrap().norm() < 1e-12);
    }
}
