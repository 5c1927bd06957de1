//! Hermitian eigendecomposition.
//!
//! Two deterministic paths: cyclic Jacobi rotations up to dimension 64
//! (high accuracy at the small sizes this crate mostly sees), and Householder
//! tridiagonalization followed by implicit-shift QL above that. Both return
//! eigenvalues sorted ascending with matching eigenvector columns.

use super::dense::DenseOperator;
use num_complex::Complex64;

pub struct HermitianEigen {
    /// Eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix whose column `k` is the eigenvector of `eigenvalues[k]`.
    pub vectors: DenseOperator,
}

const JACOBI_LIMIT: usize = 64;

/// Eigendecomposition of the Hermitian part of `a`. Callers pass Hermitian
/// matrices; the explicit symmetrization only removes rounding drift.
pub fn eigen_hermitian(a: &DenseOperator) -> HermitianEigen {
    let h = a.hermitian_part();
    let n = h.p();
    if n == 1 {
        return HermitianEigen {
            eigenvalues: vec![h.get(0, 0).re],
            vectors: DenseOperator::identity(1),
        };
    }
    let (mut vals, mut vecs) = if n <= JACOBI_LIMIT { jacobi(h) } else { tridiag_ql(h) };
    sort_pairs(&mut vals, &mut vecs);
    HermitianEigen { eigenvalues: vals, vectors: vecs }
}

fn sort_pairs(vals: &mut [f64], vecs: &mut DenseOperator) {
    let n = vals.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).expect("finite eigenvalues"));
    let old_vals = vals.to_vec();
    let old_vecs = vecs.clone();
    for (new_col, &old_col) in order.iter().enumerate() {
        vals[new_col] = old_vals[old_col];
        for r in 0..n {
            vecs.set(r, new_col, old_vecs.get(r, old_col));
        }
    }
}

/// Cyclic Jacobi for complex Hermitian matrices.
fn jacobi(mut a: DenseOperator) -> (Vec<f64>, DenseOperator) {
    let n = a.p();
    let mut v = DenseOperator::identity(n);
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        return (vec![0.0; n], v);
    }
    let target = (1e-15 * scale).powi(2);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a.get(p, q).norm_sqr();
            }
        }
        if 2.0 * off <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    let vals = (0..n).map(|i| a.get(i, i).re).collect();
    (vals, v)
}

/// One Jacobi rotation zeroing the `(p, q)` entry of the Hermitian matrix.
fn rotate(a: &mut DenseOperator, vacc: &mut DenseOperator, p: usize, q: usize) {
    let apq = a.get(p, q);
    let g = apq.norm();
    if g < 1e-300 {
        return;
    }
    let u = apq / g;
    let alpha = a.get(p, p).re;
    let beta = a.get(q, q).re;
    let tau = (beta - alpha) / (2.0 * g);
    let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
    let t = sign / (tau.abs() + (1.0 + tau * tau).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let n = a.p();
    let su = Complex64::new(s, 0.0) * u;
    let suc = su.conj();

    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = a.get(r, p);
        let arq = a.get(r, q);
        let new_rp = arp * c - arq * suc;
        let new_rq = arp * su + arq * c;
        a.set(r, p, new_rp);
        a.set(r, q, new_rq);
        a.set(p, r, new_rp.conj());
        a.set(q, r, new_rq.conj());
    }
    a.set(p, p, Complex64::new(alpha - t * g, 0.0));
    a.set(q, q, Complex64::new(beta + t * g, 0.0));
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));

    for r in 0..n {
        let vrp = vacc.get(r, p);
        let vrq = vacc.get(r, q);
        vacc.set(r, p, vrp * c - vrq * suc);
        vacc.set(r, q, vrp * su + vrq * c);
    }
}

/// Householder reduction to real symmetric tridiagonal form followed by
/// implicit-shift QL iteration.
fn tridiag_ql(mut a: DenseOperator) -> (Vec<f64>, DenseOperator) {
    let n = a.p();
    let mut q = DenseOperator::identity(n);

    // Householder: zero out column k below the first subdiagonal.
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1; // length of the column segment below the diagonal
        let mut x = vec![Complex64::new(0.0, 0.0); m];
        for i in 0..m {
            x[i] = a.get(k + 1 + i, k);
        }
        let norm_x = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if norm_x < 1e-300 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { Complex64::new(1.0, 0.0) };
        let mut v = x;
        v[0] += phase * norm_x;
        let vnorm2 = v.iter().map(|w| w.norm_sqr()).sum::<f64>();
        if vnorm2 < 1e-300 {
            continue;
        }
        let beta = 2.0 / vnorm2;

        // Hermitian rank-2 update of the trailing block: A <- P A P.
        let mut u = vec![Complex64::new(0.0, 0.0); m];
        for i in 0..m {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..m {
                acc += a.get(k + 1 + i, k + 1 + j) * v[j];
            }
            u[i] = acc * beta;
        }
        let vu: Complex64 = v.iter().zip(&u).map(|(vi, ui)| vi.conj() * ui).sum();
        let kappa = vu * (beta / 2.0);
        let w: Vec<Complex64> = u.iter().zip(&v).map(|(ui, vi)| ui - kappa * vi).collect();
        for i in 0..m {
            for j in 0..m {
                let upd = v[i] * w[j].conj() + w[i] * v[j].conj();
                let cur = a.get(k + 1 + i, k + 1 + j);
                a.set(k + 1 + i, k + 1 + j, cur - upd);
            }
        }
        let sub = -phase * norm_x;
        a.set(k + 1, k, sub);
        a.set(k, k + 1, sub.conj());
        for i in 1..m {
            a.set(k + 1 + i, k, Complex64::new(0.0, 0.0));
            a.set(k, k + 1 + i, Complex64::new(0.0, 0.0));
        }

        // Q <- Q P.
        for r in 0..n {
            let mut t = Complex64::new(0.0, 0.0);
            for j in 0..m {
                t += q.get(r, k + 1 + j) * v[j];
            }
            t *= beta;
            for j in 0..m {
                let cur = q.get(r, k + 1 + j);
                q.set(r, k + 1 + j, cur - t * v[j].conj());
            }
        }
    }

    // Phase similarity making the subdiagonal real nonnegative.
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut phi = Complex64::new(1.0, 0.0);
    for i in 0..n {
        d[i] = a.get(i, i).re;
    }
    for k in 0..n - 1 {
        // With D = diag(phi_0..phi_{n-1}), phi_{k+1} = phi_k * phase(e_k)
        // makes (D* T D) have real nonnegative subdiagonal |e_k|.
        let ek = a.get(k + 1, k);
        let mag = ek.norm();
        e[k] = mag;
        let unit = if mag > 0.0 { ek / mag } else { Complex64::new(1.0, 0.0) };
        phi *= unit;
        for r in 0..n {
            let cur = q.get(r, k + 1);
            q.set(r, k + 1, cur * phi);
        }
    }

    ql_implicit(&mut d, &mut e, &mut q);
    (d, q)
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix, accumulating the
/// real rotations into the complex column matrix `z`.
fn ql_implicit(d: &mut [f64], e: &mut [f64], z: &mut DenseOperator) {
    let n = d.len();
    if n == 0 {
        return;
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 60, "QL iteration failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let fz = z.get(k, i + 1);
                    let zi = z.get(k, i);
                    z.set(k, i + 1, zi * s + fz * c);
                    z.set(k, i, zi * c - fz * s);
                }
                if i == l {
                    d[l] -= p;
                    e[l] = g;
                    e[m] = 0.0;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pseudo_random_hermitian(n: usize, seed: u64) -> DenseOperator {
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
        a.hermitian_part()
    }

    fn check_decomposition(a: &DenseOperator, tol: f64) {
        let n = a.p();
        let eig = eigen_hermitian(a);
        let lambda = DenseOperator::diag(
            &eig.eigenvalues.iter().map(|&v| Complex64::new(v, 0.0)).collect::<Vec<_>>(),
        );
        let recon = eig
            .vectors
            .mul(&lambda)
            .unwrap()
            .mul(&eig.vectors.adjoint())
            .unwrap();
        let err = recon.sub(a).unwrap().frobenius_norm();
        let scale = a.frobenius_norm().max(1.0);
        assert!(err <= tol * scale, "n={n} reconstruction err {err:.3e}");
        let vv = eig.vectors.adjoint().mul(&eig.vectors).unwrap();
        let orth = vv.sub(&DenseOperator::identity(n)).unwrap().frobenius_norm();
        assert!(orth <= tol * (n as f64), "n={n} orthogonality err {orth:.3e}");
        for w in eig.eigenvalues.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn diagonal_matrix_eigenvalues() {
        let a = DenseOperator::diag(&[
            Complex64::new(3.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(2.0, 0.0),
        ]);
        let eig = eigen_hermitian(&a);
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] - 2.0).abs() < 1e-12);
        assert!((eig.eigenvalues[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn random_hermitian_small_sizes() {
        for n in [2, 3, 5, 8, 16] {
            for seed in 0..4 {
                check_decomposition(&pseudo_random_hermitian(n, seed), 1e-11);
            }
        }
    }

    #[test]
    fn random_hermitian_ql_path() {
        // Above the Jacobi limit, exercising tridiagonalization + QL.
        check_decomposition(&pseudo_random_hermitian(80, 1), 1e-9);
        check_decomposition(&pseudo_random_hermitian(70, 2), 1e-9);
    }

    #[test]
    fn zero_matrix() {
        let eig = eigen_hermitian(&DenseOperator::zeros(5));
        assert!(eig.eigenvalues.iter().all(|&v| v == 0.0));
    }
}
