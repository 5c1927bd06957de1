//! Property-based invariants for the algebra layer and the wire formats.

use num_complex::Complex64;
use proptest::prelude::*;
use rkhm::algebra::{
    abs_a, eigen_hermitian, is_positive, partial_order_leq, positive_sqrt, AlgebraValue,
    CirculantElement, DenseOperator,
};

fn complex_strategy() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn circulant_strategy(max_p: usize) -> impl Strategy<Value = CirculantElement> {
    prop::collection::vec(complex_strategy(), 1..=max_p)
        .prop_map(|coeffs| CirculantElement::new(coeffs).unwrap())
}

fn dense_strategy(p: usize) -> impl Strategy<Value = DenseOperator> {
    prop::collection::vec(complex_strategy(), p * p).prop_map(move |data| {
        let mut m = DenseOperator::zeros(p);
        for i in 0..p {
            for j in 0..p {
                m.set(i, j, data[i * p + j]);
            }
        }
        m
    })
}

fn pair_same_p() -> impl Strategy<Value = (CirculantElement, CirculantElement)> {
    (1usize..=9).prop_flat_map(|p| {
        (
            prop::collection::vec(complex_strategy(), p)
                .prop_map(|c| CirculantElement::new(c).unwrap()),
            prop::collection::vec(complex_strategy(), p)
                .prop_map(|c| CirculantElement::new(c).unwrap()),
        )
    })
}

proptest! {
    // C* identity |a* a| = |a|^2 in both algebras.
    #[test]
    fn cstar_identity_circulant(x in circulant_strategy(9)) {
        let lhs = x.adjoint().mul(&x).unwrap().norm();
        let rhs = x.norm() * x.norm();
        prop_assert!((lhs - rhs).abs() <= 1e-8 * rhs.max(1.0));
    }

    #[test]
    fn cstar_identity_dense(a in dense_strategy(4)) {
        let lhs = a.adjoint().mul(&a).unwrap().operator_norm();
        let rhs = a.operator_norm().powi(2);
        prop_assert!((lhs - rhs).abs() <= 1e-8 * rhs.max(1.0));
    }

    // Submultiplicativity |a b| <= |a| |b|.
    #[test]
    fn submultiplicative((x, y) in pair_same_p()) {
        let prod = x.mul(&y).unwrap().norm();
        prop_assert!(prod <= x.norm() * y.norm() + 1e-10);
    }

    #[test]
    fn submultiplicative_dense(a in dense_strategy(3), b in dense_strategy(3)) {
        let prod = a.mul(&b).unwrap().operator_norm();
        prop_assert!(prod <= a.operator_norm() * b.operator_norm() + 1e-10);
    }

    // Involution laws: (ab)* = b* a*, (a*)* = a.
    #[test]
    fn involution_laws((x, y) in pair_same_p()) {
        let lhs = x.mul(&y).unwrap().adjoint();
        let rhs = y.adjoint().mul(&x.adjoint()).unwrap();
        let gap: f64 = lhs
            .coeffs()
            .iter()
            .zip(rhs.coeffs())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        prop_assert!(gap <= 1e-12 * lhs.norm().max(1.0));
        prop_assert_eq!(x.adjoint().adjoint(), x);
    }

    // Isomorphism with the circulant matrices.
    #[test]
    fn circulant_dense_isomorphism((x, y) in pair_same_p()) {
        let via_algebra = x.mul(&y).unwrap().to_dense();
        let via_matrices = x.to_dense().mul(&y.to_dense()).unwrap();
        let gap = via_algebra.sub(&via_matrices).unwrap().frobenius_norm();
        prop_assert!(gap <= 1e-10 * via_matrices.frobenius_norm().max(1.0));
        let norm_gap = (x.norm() - x.to_dense().operator_norm()).abs();
        prop_assert!(norm_gap <= 1e-10 * x.norm().max(1.0));
    }

    // Spectrum cache matches a fresh transform of the coefficients.
    #[test]
    fn spectrum_cache_invariant(x in circulant_strategy(9)) {
        let cached = x.spectrum().to_vec();
        let fresh = rkhm::algebra::dft(x.coeffs());
        for (a, b) in cached.iter().zip(&fresh) {
            prop_assert!((a - b).norm() <= 1e-12 * b.norm().max(1.0));
        }
    }

    // Trace monotonicity: a <= b implies tr a <= tr b for Hermitian parts.
    #[test]
    fn trace_monotone(a in dense_strategy(3), c in dense_strategy(3)) {
        let herm = a.hermitian_part();
        let bump = c.adjoint().mul(&c).unwrap();
        let b = herm.add(&bump).unwrap();
        prop_assert!(partial_order_leq(
            &AlgebraValue::Dense(herm.clone()),
            &AlgebraValue::Dense(b.clone()),
            1e-8
        ).unwrap());
        prop_assert!(herm.trace().re <= b.trace().re + 1e-10);
    }

    // For real matrices, tr(a) <= tr(|a|).
    #[test]
    fn trace_dominated_by_absolute_value(data in prop::collection::vec(-1.0f64..1.0, 9)) {
        let mut a = DenseOperator::zeros(3);
        for i in 0..3 {
            for j in 0..3 {
                a.set(i, j, Complex64::new(data[i * 3 + j], 0.0));
            }
        }
        let abs = abs_a(&AlgebraValue::Dense(a.clone()));
        prop_assert!(a.trace().re <= abs.trace().re + 1e-8);
    }

    // positive_sqrt returns a positive element that squares back.
    #[test]
    fn sqrt_squares_back(b in dense_strategy(3)) {
        let psd = AlgebraValue::Dense(b.adjoint().mul(&b).unwrap());
        let root = positive_sqrt(&psd).unwrap();
        prop_assert!(is_positive(&root, 1e-8));
        let back = root.mul(&root).unwrap();
        let rel = back.sub(&psd).unwrap().norm() / psd.norm().max(1.0);
        prop_assert!(rel <= 1e-8);
    }

    // Eigendecomposition reconstructs Hermitian matrices.
    #[test]
    fn eigen_reconstructs(a in dense_strategy(4)) {
        let h = a.hermitian_part();
        let eig = eigen_hermitian(&h);
        let lambda = DenseOperator::diag(
            &eig.eigenvalues.iter().map(|&v| Complex64::new(v, 0.0)).collect::<Vec<_>>(),
        );
        let recon = eig.vectors.mul(&lambda).unwrap().mul(&eig.vectors.adjoint()).unwrap();
        let gap = recon.sub(&h).unwrap().frobenius_norm();
        prop_assert!(gap <= 1e-10 * h.frobenius_norm().max(1.0));
    }

    // Wire formats round-trip bit-exactly through JSON.
    #[test]
    fn algebra_json_round_trip(x in circulant_strategy(6), a in dense_strategy(3)) {
        for value in [AlgebraValue::Circulant(x), AlgebraValue::Dense(a)] {
            let json = serde_json::to_string(&value).unwrap();
            let back: AlgebraValue = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, value);
        }
    }
}
