//! Partially pivoted LU solves for small dense complex systems, with exact
//! multiply-add counting for the solver instrumentation.

use crate::error::{Error, Result};
use num_complex::Complex64;

#[derive(Debug)]
pub struct LuStats {
    pub mul_adds: u64,
}

/// Solves `a x = rhs` in place for `k` right-hand sides.
///
/// `a` is `n x n` row-major and is destroyed; `rhs` is `n x k` row-major and
/// is overwritten with the solution. A pivot smaller than
/// `1e-12 * max|a_ij|` (of the input matrix) aborts with a singularity error
/// that reports the failing pivot magnitude.
pub fn lu_solve_in_place(
    a: &mut [Complex64],
    n: usize,
    rhs: &mut [Complex64],
    k: usize,
    context: &'static str,
) -> Result<LuStats> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(rhs.len(), n * k);
    let mut mul_adds: u64 = 0;
    let max_abs = a.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let threshold = 1e-12 * max_abs;

    for col in 0..n {
        // Partial pivoting.
        let mut pivot_row = col;
        let mut pivot_mag = a[col * n + col].norm();
        for r in (col + 1)..n {
            let mag = a[r * n + col].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = r;
            }
        }
        if pivot_mag <= threshold || pivot_mag == 0.0 {
            return Err(Error::Singular { context, pivot: pivot_mag, frequency: None });
        }
        if pivot_row != col {
            for j in 0..n {
                a.swap(col * n + j, pivot_row * n + j);
            }
            for j in 0..k {
                rhs.swap(col * k + j, pivot_row * k + j);
            }
        }
        let pivot = a[col * n + col];
        for r in (col + 1)..n {
            let factor = a[r * n + col] / pivot;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            a[r * n + col] = Complex64::new(0.0, 0.0);
            for j in (col + 1)..n {
                a[r * n + j] -= factor * a[col * n + j];
            }
            for j in 0..k {
                rhs[r * k + j] -= factor * rhs[col * k + j];
            }
            mul_adds += (n - col - 1) as u64 + k as u64 + 1;
        }
    }
    // Back substitution.
    for col in (0..n).rev() {
        let pivot = a[col * n + col];
        for j in 0..k {
            let mut acc = rhs[col * k + j];
            for m in (col + 1)..n {
                acc -= a[col * n + m] * rhs[m * k + j];
            }
            rhs[col * k + j] = acc / pivot;
        }
        mul_adds += ((n - col - 1) as u64 + 1) * k as u64;
    }
    Ok(LuStats { mul_adds })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        // [[2, 1], [1, 3]] x = [5, 10] -> x = (1, 3)
        let mut a = vec![
            Complex64::new(2.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(3.0, 0.0),
        ];
        let mut rhs = vec![Complex64::new(5.0, 0.0), Complex64::new(10.0, 0.0)];
        let stats = lu_solve_in_place(&mut a, 2, &mut rhs, 1, "test").unwrap();
        assert!((rhs[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((rhs[1] - Complex64::new(3.0, 0.0)).norm() < 1e-12);
        assert!(stats.mul_adds > 0);
    }

    #[test]
    fn reports_singularity() {
        let mut a = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(4.0, 0.0),
        ];
        let mut rhs = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        let err = lu_solve_in_place(&mut a, 2, &mut rhs, 1, "test").unwrap_err();
        match err {
            Error::Singular { pivot, .. } => assert!(pivot < 1e-10),
            other => panic!("expected singularity, got {other:?}"),
        }
    }

    #[test]
    fn multiple_right_hand_sides() {
        let a = vec![
            Complex64::new(0.0, 1.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        // Solve against identity to get the inverse.
        let mut rhs = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        lu_solve_in_place(&mut a.clone(), 2, &mut rhs, 2, "test").unwrap();
        // Verify A * X = I for the original A.
        let a0 = [
            Complex64::new(0.0, 1.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for m in 0..2 {
                    acc += a0[i * 2 + m] * rhs[m * 2 + j];
                }
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((acc - Complex64::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }
}
