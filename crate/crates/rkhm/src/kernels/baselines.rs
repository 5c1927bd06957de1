//! Vector-valued baseline kernels: a scalar kernel either multiplied by a
//! fixed positive mixing matrix (`k = ktilde T`, with `T = I` as the special
//! case) or spread across coordinates in the non-separable form
//! `k(x, y)[i][j] = ktilde(x_i, y_j)`.

use super::ScalarKernel;
use crate::algebra::DenseOperator;
use crate::error::{Error, Result};
use num_complex::Complex64;

impl ScalarKernel {
    /// Evaluation on real vectors.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            ScalarKernel::Gaussian { c } => {
                let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                (-c * d2).exp()
            }
            ScalarKernel::Laplacian { c } => {
                let d: f64 =
                    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                (-c * d).exp()
            }
            ScalarKernel::Polynomial { c } => {
                let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
                let base = 1.0 - c * dot;
                base + base * base + base * base * base
            }
        }
    }

    /// The one-dimensional specialization used entrywise by the
    /// non-separable form.
    pub fn eval1(&self, x: f64, y: f64) -> f64 {
        self.eval(&[x], &[y])
    }
}

pub fn eval_separable(
    scalar: &ScalarKernel,
    mixer: &DenseOperator,
    x: &[f64],
    y: &[f64],
) -> Result<DenseOperator> {
    let k = scalar.eval(x, y);
    Ok(mixer.scale(Complex64::new(k, 0.0)))
}

pub fn eval_nonseparable(scalar: &ScalarKernel, x: &[f64], y: &[f64]) -> Result<DenseOperator> {
    if x.is_empty() {
        return Err(Error::InputMismatch("empty vector input".into()));
    }
    let p = x.len();
    let mut out = DenseOperator::zeros(p);
    for i in 0..p {
        for j in 0..p {
            out.set(i, j, Complex64::new(scalar.eval1(x[i], y[j]), 0.0));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_at_equal_points_returns_mixer() {
        let t = DenseOperator::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        let x = [0.3, 0.8];
        let k = eval_separable(&ScalarKernel::Gaussian { c: 2.0 }, &t, &x, &x).unwrap();
        assert!(k.sub(&t).unwrap().frobenius_norm() < 1e-14);
    }

    #[test]
    fn laplacian_arithmetic() {
        // c=1 and |x - y| = ln 2 gives ktilde = 1/2.
        let k = ScalarKernel::Laplacian { c: 1.0 };
        let d = 2.0f64.ln();
        assert!((k.eval(&[0.0, 0.0], &[d, 0.0]) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn polynomial_is_three_term_sum() {
        let k = ScalarKernel::Polynomial { c: 0.5 };
        let x = [1.0, 2.0];
        let y = [0.5, 1.0];
        let base: f64 = 1.0 - 0.5 * (1.0 * 0.5 + 2.0 * 1.0);
        let want = base + base.powi(2) + base.powi(3);
        assert!((k.eval(&x, &y) - want).abs() < 1e-14);
    }

    #[test]
    fn nonseparable_with_equal_coordinates_is_constant_matrix() {
        let scalar = ScalarKernel::Gaussian { c: 1.0 };
        let x = [0.4, 0.4];
        let y = [0.4, 0.4];
        let k = eval_nonseparable(&scalar, &x, &y).unwrap();
        let want = scalar.eval1(0.4, 0.4);
        for i in 0..2 {
            for j in 0..2 {
                assert!((k.get(i, j).re - want).abs() < 1e-14);
            }
        }
    }
}
