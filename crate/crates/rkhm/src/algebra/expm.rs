//! Matrix exponential by scaling-and-squaring with a degree-13 Pade
//! approximant (Higham's constants), accurate to roughly 1e-12 relative for
//! the operator sizes used here.

use super::dense::DenseOperator;
use super::lu;
use num_complex::Complex64;

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const THETA13: f64 = 5.371920351148152;

pub fn expm(a: &DenseOperator) -> DenseOperator {
    let p = a.p();
    let norm = a.one_norm();
    let s = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let scaled = a.scale(Complex64::new(0.5f64.powi(s), 0.0));

    let ident = DenseOperator::identity(p);
    let a2 = scaled.mul(&scaled).expect("square");
    let a4 = a2.mul(&a2).expect("square");
    let a6 = a4.mul(&a2).expect("square");

    let b = &PADE13;
    let u_inner = a6
        .scale(Complex64::new(b[13], 0.0))
        .add(&a4.scale(Complex64::new(b[11], 0.0)))
        .unwrap()
        .add(&a2.scale(Complex64::new(b[9], 0.0)))
        .unwrap();
    let u_poly = a6
        .mul(&u_inner)
        .unwrap()
        .add(&a6.scale(Complex64::new(b[7], 0.0)))
        .unwrap()
        .add(&a4.scale(Complex64::new(b[5], 0.0)))
        .unwrap()
        .add(&a2.scale(Complex64::new(b[3], 0.0)))
        .unwrap()
        .add(&ident.scale(Complex64::new(b[1], 0.0)))
        .unwrap();
    let u = scaled.mul(&u_poly).unwrap();

    let v_inner = a6
        .scale(Complex64::new(b[12], 0.0))
        .add(&a4.scale(Complex64::new(b[10], 0.0)))
        .unwrap()
        .add(&a2.scale(Complex64::new(b[8], 0.0)))
        .unwrap();
    let v = a6
        .mul(&v_inner)
        .unwrap()
        .add(&a6.scale(Complex64::new(b[6], 0.0)))
        .unwrap()
        .add(&a4.scale(Complex64::new(b[4], 0.0)))
        .unwrap()
        .add(&a2.scale(Complex64::new(b[2], 0.0)))
        .unwrap()
        .add(&ident.scale(Complex64::new(b[0], 0.0)))
        .unwrap();

    // (V - U) X = (V + U)
    let mut lhs = v.sub(&u).unwrap().data().to_vec();
    let mut rhs = v.add(&u).unwrap().data().to_vec();
    lu::lu_solve_in_place(&mut lhs, p, &mut rhs, p, "matrix exponential")
        .expect("Pade denominator is well conditioned inside the scaling radius");
    let mut out = DenseOperator::zeros(p);
    for i in 0..p {
        for j in 0..p {
            out.set(i, j, rhs[i * p + j]);
        }
    }
    for _ in 0..s {
        out = out.mul(&out).expect("square");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_zero_is_identity() {
        let e = expm(&DenseOperator::zeros(3));
        let err = e.sub(&DenseOperator::identity(3)).unwrap().frobenius_norm();
        assert!(err < 1e-14);
    }

    #[test]
    fn exp_of_diagonal() {
        let a = DenseOperator::diag(&[Complex64::new(1.0, 0.0), Complex64::new(-2.0, 0.5)]);
        let e = expm(&a);
        let want0 = Complex64::new(1.0f64.exp(), 0.0);
        let want1 = Complex64::new(-2.0, 0.5).exp();
        assert!((e.get(0, 0) - want0).norm() < 1e-12);
        assert!((e.get(1, 1) - want1).norm() < 1e-12);
        assert!(e.get(0, 1).norm() < 1e-13);
    }

    #[test]
    fn exp_of_skew_hermitian_is_unitary() {
        // exp(i H) for Hermitian H is unitary.
        let h = DenseOperator::from_rows(vec![
            vec![Complex64::new(0.3, 0.0), Complex64::new(1.0, 2.0)],
            vec![Complex64::new(1.0, -2.0), Complex64::new(-0.7, 0.0)],
        ])
        .unwrap();
        let e = expm(&h.scale(Complex64::new(0.0, 1.0)));
        let prod = e.adjoint().mul(&e).unwrap();
        let err = prod.sub(&DenseOperator::identity(2)).unwrap().frobenius_norm();
        assert!(err < 1e-12, "unitarity error {err:.3e}");
    }

    #[test]
    fn scaling_branch_matches_series() {
        // A matrix with norm above the Pade radius: check against the
        // squared half-exponential identity exp(A) = exp(A/2)^2.
        let a = DenseOperator::from_real_rows(&[&[4.0, 3.0], &[1.0, 5.0]]).unwrap();
        let whole = expm(&a);
        let half = expm(&a.scale(Complex64::new(0.5, 0.0)));
        let sq = half.mul(&half).unwrap();
        let rel = whole.sub(&sq).unwrap().frobenius_norm() / whole.frobenius_norm();
        assert!(rel < 1e-12, "rel err {rel:.3e}");
    }
}
