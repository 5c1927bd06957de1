//! The structure-oblivious baseline: flatten to `np x np` and eliminate.

use super::{flatten_targets, FitOutput, FlopCounter, GramMatrix};
use crate::algebra::{lu_solve_in_place, AlgebraValue, DenseOperator};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Solves `(G + lambda I) c = y` by pivoted elimination on the flattened
/// system. Works for any block structure; costs `O(n^3 p^3)`. The recorded
/// residual is `|(G + lambda I) c - y|_F / |y|_F`.
pub fn fit_direct_dense(
    gram: &GramMatrix,
    ys: &[AlgebraValue],
    lambda: f64,
) -> Result<FitOutput> {
    if ys.len() != gram.n() {
        return Err(Error::DimensionMismatch { expected: gram.n(), got: ys.len() });
    }
    if lambda < 0.0 {
        return Err(Error::Domain(format!("lambda must be nonnegative, got {lambda}")));
    }
    let n = gram.n();
    let p = gram.p();
    let dim = n * p;
    let counter = FlopCounter::new();
    counter.record_solve_dim(dim);

    let mut a = gram.flatten(lambda);
    let mut rhs = flatten_targets(ys, p)?;
    let rhs_orig = rhs.clone();
    let stats = lu_solve_in_place(&mut a, dim, &mut rhs, p, "dense direct solve")?;
    counter.add_mul_adds(stats.mul_adds);

    // Residual against a fresh copy of the system.
    let a0 = gram.flatten(lambda);
    let mut num = 0.0;
    let mut den = 0.0;
    for r in 0..dim {
        for c in 0..p {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 0..dim {
                acc += a0[r * dim + m] * rhs[m * p + c];
            }
            num += (acc - rhs_orig[r * p + c]).norm_sqr();
            den += rhs_orig[r * p + c].norm_sqr();
        }
    }
    let residual = if den > 0.0 { (num / den).sqrt() } else { num.sqrt() };

    let coeffs = (0..n)
        .map(|j| {
            let mut block = DenseOperator::zeros(p);
            for r in 0..p {
                for c in 0..p {
                    block.set(r, c, rhs[(j * p + r) * p + c]);
                }
            }
            AlgebraValue::Dense(block)
        })
        .collect();
    Ok(FitOutput { coeffs, counter, residual, iterations: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CirculantElement;
    use crate::rng::StreamRng;

    fn identity_gram(n: usize, p: usize) -> GramMatrix {
        let mut blocks = Vec::new();
        for i in 0..n {
            for j in 0..n {
                blocks.push(if i == j {
                    AlgebraValue::dense_identity(p)
                } else {
                    AlgebraValue::Dense(DenseOperator::zeros(p))
                });
            }
        }
        GramMatrix::from_blocks(n, blocks).unwrap()
    }

    #[test]
    fn identity_kernel_interpolates_exactly() {
        // n=1, k(x, x) = I, lambda = 0: c = y.
        let gram = identity_gram(1, 3);
        let mut rng = StreamRng::new(1);
        let y = AlgebraValue::Dense(rng.random_dense(3));
        let fit = fit_direct_dense(&gram, std::slice::from_ref(&y), 0.0).unwrap();
        assert!(fit.coeffs[0].sub(&y).unwrap().norm() < 1e-12);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn blockwise_identity_with_ridge_shrinks() {
        // G = I blockwise: c = y / (1 + lambda).
        let gram = identity_gram(3, 2);
        let mut rng = StreamRng::new(2);
        let ys: Vec<AlgebraValue> =
            (0..3).map(|_| AlgebraValue::Dense(rng.random_dense(2))).collect();
        for lambda in [0.0, 0.5, 2.0] {
            let fit = fit_direct_dense(&gram, &ys, lambda).unwrap();
            for (c, y) in fit.coeffs.iter().zip(&ys) {
                let want = y.scale(Complex64::new(1.0 / (1.0 + lambda), 0.0));
                assert!(c.sub(&want).unwrap().norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rank_deficient_system_reports_singularity() {
        // Duplicated training point makes G singular at lambda = 0.
        let one = AlgebraValue::Circulant(CirculantElement::identity(2));
        let blocks = vec![one.clone(), one.clone(), one.clone(), one.clone()];
        let gram = GramMatrix::from_blocks(2, blocks).unwrap();
        let ys = vec![
            AlgebraValue::Circulant(CirculantElement::from_real(&[1.0, 0.0]).unwrap()),
            AlgebraValue::Circulant(CirculantElement::from_real(&[0.0, 1.0]).unwrap()),
        ];
        let err = fit_direct_dense(&gram, &ys, 0.0).unwrap_err();
        assert!(matches!(err, Error::Singular { .. }), "got {err:?}");
        // A positive ridge restores solvability.
        assert!(fit_direct_dense(&gram, &ys, 0.1).is_ok());
    }
}
