//! The nested circulant-valued kernel
//!
//! ```text
//! k_1 = sigma_1(b_1* b_1 + x* a_1* a_1 y)
//! k_j = sigma_j(b_j* b_j + k_{j-1} a_j* a_j),   j = 2..L,
//! ```
//!
//! where each activation `sigma_j(t) = sum_l alpha_{j,l} t^l` is a power
//! series with nonnegative coefficients and degrees >= 1 (the condition
//! under which the композition of a positive definite kernel stays positive
//! definite). `a_j* a_j` acts as a convolution filter and `b_j* b_j` as a
//! bias. Powers of a circulant element are computed on its spectrum.

use crate::algebra::CirculantElement;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Applies the power series `sum alpha_l t^l` to a circulant element by
/// pointwise evaluation on the DFT spectrum.
pub fn apply_power_series(series: &[(u32, f64)], x: &CirculantElement) -> CirculantElement {
    let spec: Vec<Complex64> = x
        .spectrum()
        .iter()
        .map(|&lambda| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(degree, coeff) in series {
                acc += complex_power(lambda, degree) * coeff;
            }
            acc
        })
        .collect();
    CirculantElement::from_spectrum(spec)
}

fn complex_power(base: Complex64, exp: u32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut b = base;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= b;
        }
        b *= b;
        e >>= 1;
    }
    acc
}

pub fn eval_cnn_nested(
    a: &[CirculantElement],
    b: &[CirculantElement],
    activations: &[Vec<(u32, f64)>],
    x: &CirculantElement,
    y: &CirculantElement,
) -> Result<CirculantElement> {
    let p = a[0].p();
    if x.p() != p || y.p() != p {
        return Err(Error::DimensionMismatch { expected: p, got: x.p().max(y.p()) });
    }
    let filter = |j: usize| -> Result<CirculantElement> { a[j].adjoint().mul(&a[j]) };
    let bias = |j: usize| -> Result<CirculantElement> { b[j].adjoint().mul(&b[j]) };

    let inner = x.adjoint().mul(&filter(0)?)?.mul(y)?;
    let mut k = apply_power_series(&activations[0], &bias(0)?.add(&inner)?);
    for j in 1..a.len() {
        let arg = bias(j)?.add(&k.mul(&filter(j)?)?)?;
        k = apply_power_series(&activations[j], &arg);
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_layer_identity_activation_reduces_to_linear() {
        // L=1, sigma = t, a_1 = delta_0, b_1 = 0: k(x, y) = x* y.
        let p = 3;
        let a = [CirculantElement::identity(p)];
        let b = [CirculantElement::zeros(p)];
        let acts = [vec![(1u32, 1.0)]];
        let x = CirculantElement::from_real(&[0.4, -0.2, 0.9]).unwrap();
        let y = CirculantElement::from_real(&[0.1, 0.8, -0.5]).unwrap();
        let k = eval_cnn_nested(&a, &b, &acts, &x, &y).unwrap();
        let want = x.adjoint().mul(&y).unwrap();
        for (got, want) in k.coeffs().iter().zip(want.coeffs()) {
            assert!((got - want).norm() < 1e-12);
        }
    }

    #[test]
    fn scalar_square_activation() {
        // p=1, sigma(t) = t^2, x = 2, y = 3: k = (2*3)^2 = 36.
        let a = [CirculantElement::identity(1)];
        let b = [CirculantElement::zeros(1)];
        let acts = [vec![(2u32, 1.0)]];
        let x = CirculantElement::from_real(&[2.0]).unwrap();
        let y = CirculantElement::from_real(&[3.0]).unwrap();
        let k = eval_cnn_nested(&a, &b, &acts, &x, &y).unwrap();
        assert!((k.coeffs()[0] - Complex64::new(36.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn power_series_matches_repeated_convolution() {
        // x^3 via spectrum exponentiation equals x * x * x.
        let x = CirculantElement::from_real(&[0.5, -0.3, 0.2, 0.7]).unwrap();
        let cubed = apply_power_series(&[(3, 1.0)], &x);
        let direct = x.mul(&x).unwrap().mul(&x).unwrap();
        for (a, b) in cubed.coeffs().iter().zip(direct.coeffs()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
