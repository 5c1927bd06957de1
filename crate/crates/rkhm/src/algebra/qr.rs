//! Householder QR with a fixed uniqueness convention.
//!
//! `qr_decompose(x) = (Q, R)` with `Q` unitary and `R` upper triangular whose
//! diagonal is real and nonnegative. For invertible `x` this pins the
//! factorization uniquely; for singular `x` the deterministic Householder
//! sequence (columns left to right, reflector phase taken from the leading
//! entry) fixes one particular output. Downstream kernels depend on `(Q, R)`
//! values, so the convention is part of the contract.

use super::dense::DenseOperator;
use num_complex::Complex64;

pub fn qr_decompose(x: &DenseOperator) -> (DenseOperator, DenseOperator) {
    let n = x.p();
    let mut r = x.clone();
    let mut q = DenseOperator::identity(n);

    for k in 0..n {
        let m = n - k;
        let mut v = vec![Complex64::new(0.0, 0.0); m];
        for i in 0..m {
            v[i] = r.get(k + i, k);
        }
        let norm_x = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm_x < 1e-300 {
            continue;
        }
        let phase = if v[0].norm() > 0.0 { v[0] / v[0].norm() } else { Complex64::new(1.0, 0.0) };
        v[0] += phase * norm_x;
        let vnorm2 = v.iter().map(|c| c.norm_sqr()).sum::<f64>();
        if vnorm2 < 1e-300 {
            continue;
        }
        let beta = 2.0 / vnorm2;

        // R <- (I - beta v v*) R on rows k..n.
        for j in 0..n {
            let mut t = Complex64::new(0.0, 0.0);
            for i in 0..m {
                t += v[i].conj() * r.get(k + i, j);
            }
            t *= beta;
            for i in 0..m {
                let cur = r.get(k + i, j);
                r.set(k + i, j, cur - t * v[i]);
            }
        }
        // Q <- Q (I - beta v v*) on columns k..n.
        for i in 0..n {
            let mut t = Complex64::new(0.0, 0.0);
            for j in 0..m {
                t += q.get(i, k + j) * v[j];
            }
            t *= beta;
            for j in 0..m {
                let cur = q.get(i, k + j);
                q.set(i, k + j, cur - t * v[j].conj());
            }
        }
        for i in (k + 1)..n {
            r.set(i, k, Complex64::new(0.0, 0.0));
        }
    }

    // Rotate each row of R so the diagonal is real nonnegative.
    for i in 0..n {
        let d = r.get(i, i);
        let mag = d.norm();
        if mag > 0.0 {
            let ph = d / mag;
            for j in i..n {
                let cur = r.get(i, j);
                r.set(i, j, cur * ph.conj());
            }
            r.set(i, i, Complex64::new(mag, 0.0));
            for row in 0..n {
                let cur = q.get(row, i);
                q.set(row, i, cur * ph);
            }
        }
    }
    (q, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pseudo_random(n: usize, seed: u64) -> DenseOperator {
        let mut s = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(n as u64);
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut a = DenseOperator::zeros(n);
        for i in 0..n {
            for j in 0..n {
                a.set(i, j, Complex64::new(next(), next()));
            }
        }
        a
    }

    fn check_qr(x: &DenseOperator, tol: f64) {
        let n = x.p();
        let (q, r) = qr_decompose(x);
        let qq = q.adjoint().mul(&q).unwrap();
        let orth = qq.sub(&DenseOperator::identity(n)).unwrap().frobenius_norm();
        assert!(orth <= tol, "Q*Q deviation {orth:.3e}");
        let recon = q.mul(&r).unwrap().sub(x).unwrap().frobenius_norm();
        assert!(recon <= tol * x.frobenius_norm().max(1.0), "QR recon {recon:.3e}");
        for i in 0..n {
            let d = r.get(i, i);
            assert!(d.im == 0.0 && d.re >= 0.0, "diagonal convention violated: {d}");
            for j in 0..i {
                assert!(r.get(i, j).norm() == 0.0);
            }
        }
    }

    #[test]
    fn identity_decomposes_trivially() {
        let (q, r) = qr_decompose(&DenseOperator::identity(3));
        assert!(q.sub(&DenseOperator::identity(3)).unwrap().frobenius_norm() < 1e-14);
        assert!(r.sub(&DenseOperator::identity(3)).unwrap().frobenius_norm() < 1e-14);
    }

    #[test]
    fn sign_convention_on_negative_scalar() {
        let x = DenseOperator::from_real_rows(&[&[-2.0]]).unwrap();
        let (q, r) = qr_decompose(&x);
        assert!((q.get(0, 0) - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        assert!((r.get(0, 0) - Complex64::new(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn random_matrices_reconstruct() {
        for n in [1, 2, 3, 5, 8] {
            for seed in 0..6 {
                check_qr(&pseudo_random(n, seed), 1e-10);
            }
        }
    }

    #[test]
    fn singular_input_is_deterministic() {
        let mut x = DenseOperator::zeros(3);
        x.set(0, 0, Complex64::new(1.0, 0.0));
        x.set(0, 1, Complex64::new(2.0, 0.0));
        check_qr(&x, 1e-10);
        let (q1, r1) = qr_decompose(&x);
        let (q2, r2) = qr_decompose(&x);
        assert_eq!(q1, q2);
        assert_eq!(r1, r2);
    }
}
