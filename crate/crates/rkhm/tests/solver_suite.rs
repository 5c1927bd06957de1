//! Solver-level contracts: interpolation, shrinkage, the objective algebra,
//! Gram positivity across kernel families, and optimality spot checks.

use num_complex::Complex64;
use rkhm::algebra::{eigen_hermitian, AlgebraValue, DenseOperator};
use rkhm::kernels::{KernelSpec, Point, ScalarKernel};
use rkhm::rng::StreamRng;
use rkhm::solver::{
    assemble_gram, fit_block_cg, fit_circulant_fast, fit_direct_dense, objective_with_gram, Model,
};

fn random_circulant_poly_problem(
    n: usize,
    p: usize,
    seed: u64,
) -> (KernelSpec, Vec<Point>, Vec<AlgebraValue>) {
    let mut rng = StreamRng::new(seed);
    let spec = KernelSpec::Polynomial {
        d: 1,
        q: 2,
        a: vec![vec![
            AlgebraValue::Circulant(rng.random_unit_circulant(p)),
            AlgebraValue::Circulant(rng.random_unit_circulant(p)),
            AlgebraValue::Circulant(rng.random_unit_circulant(p)),
        ]],
    };
    let inputs: Vec<Point> = (0..n)
        .map(|_| Point::Tuple(vec![AlgebraValue::Circulant(rng.random_unit_circulant(p))]))
        .collect();
    let ys: Vec<AlgebraValue> =
        (0..n).map(|_| AlgebraValue::Circulant(rng.random_circulant(p))).collect();
    (spec, inputs, ys)
}

#[test]
fn interpolation_at_zero_ridge() {
    // A strictly positive definite Gram with lambda = 0 reproduces the
    // training targets through the fitted model.
    let mut rng = StreamRng::new(41);
    let spec = KernelSpec::SeparableScalar {
        scalar: ScalarKernel::Gaussian { c: 1.0 },
        mixer: DenseOperator::identity(2),
    };
    let xs: Vec<Point> = (0..5)
        .map(|_| Point::Vector(vec![rng.uniform01(), rng.uniform01()]))
        .collect();
    let ys: Vec<AlgebraValue> = (0..5).map(|_| AlgebraValue::Dense(rng.random_dense(2))).collect();
    let gram = assemble_gram(&spec, &xs).unwrap();
    let fit = fit_direct_dense(&gram, &ys, 0.0).unwrap();
    let model = Model::from_fit(spec, xs.clone(), 0.0, "dense", &fit);
    for (x, y) in xs.iter().zip(&ys) {
        let pred = model.predict(x).unwrap();
        let rel = pred.sub(y).unwrap().norm() / y.norm().max(1.0);
        assert!(rel <= 1e-6, "training point not reproduced: {rel:.3e}");
    }
}

#[test]
fn cross_solver_oracle_on_circulant_blocks() {
    let (spec, inputs, ys) = random_circulant_poly_problem(4, 4, 99);
    let gram = assemble_gram(&spec, &inputs).unwrap();
    let dense = fit_direct_dense(&gram, &ys, 0.1).unwrap();
    let fast = fit_circulant_fast(&gram, &ys, 0.1).unwrap();
    let cg = fit_block_cg(&gram, &ys, 0.1, 1e-10, 5_000).unwrap();
    for (a, b) in dense.coeffs.iter().zip(&fast.coeffs) {
        let gap = a.sub(b).unwrap().norm() / b.norm().max(1.0);
        assert!(gap <= 1e-8, "dense vs fast gap {gap:.3e}");
    }
    for (a, b) in dense.coeffs.iter().zip(&cg.coeffs) {
        let gap = a.sub(b).unwrap().norm() / b.norm().max(1.0);
        assert!(gap <= 1e-6, "dense vs cg gap {gap:.3e}");
    }
    assert!(dense.residual <= 1e-10);
    assert!(fast.residual <= 1e-10);
}

#[test]
fn shrinkage_is_monotone_in_lambda() {
    let (spec, inputs, ys) = random_circulant_poly_problem(6, 4, 7);
    let gram = assemble_gram(&spec, &inputs).unwrap();
    let mut last_data_trace = -1.0f64;
    for lambda in [0.0, 0.1, 1.0, 10.0] {
        let fit = fit_direct_dense(&gram, &ys, lambda).unwrap();
        let obj = objective_with_gram(&gram, &ys, &fit.coeffs, lambda).unwrap();
        let data_trace = obj.data_term.trace().re;
        assert!(
            data_trace >= last_data_trace - 1e-9,
            "data term decreased when lambda grew: {last_data_trace} -> {data_trace}"
        );
        last_data_trace = data_trace;
    }
}

#[test]
fn objective_expansion_identity() {
    // The quartic expansion c*G^2c - c*Gy - y*Gc + lambda c*Gc equals the
    // direct objective minus the constant sum of |y_i|^2 traces.
    let (spec, inputs, ys) = random_circulant_poly_problem(4, 4, 21);
    let gram = assemble_gram(&spec, &inputs).unwrap();
    let lambda = 0.3;
    let fit = fit_direct_dense(&gram, &ys, lambda).unwrap();
    let coeffs = &fit.coeffs;
    let n = gram.n();

    let obj = objective_with_gram(&gram, &ys, coeffs, lambda).unwrap();
    let y_const: f64 = ys.iter().map(|y| y.adjoint().mul(y).unwrap().trace().re).sum();

    // Expanded form, assembled blockwise.
    let gc: Vec<AlgebraValue> = (0..n)
        .map(|i| {
            let mut acc: Option<AlgebraValue> = None;
            for j in 0..n {
                let term = gram.block(i, j).mul(&coeffs[j]).unwrap();
                acc = Some(match acc {
                    Some(cur) => cur.add(&term).unwrap(),
                    None => term,
                });
            }
            acc.unwrap()
        })
        .collect();
    // c* G^2 c comes from |(G c)_i|^2; the two cross terms are conjugate,
    // so their trace sum is 2 Re tr(y_i* (G c)_i); the ridge term reuses gc.
    let mut expanded = 0.0;
    for i in 0..n {
        expanded += gc[i].adjoint().mul(&gc[i]).unwrap().trace().re;
    }
    let mut cross = 0.0;
    let mut reg = 0.0;
    for i in 0..n {
        cross += 2.0 * ys[i].adjoint().mul(&gc[i]).unwrap().trace().re;
        reg += coeffs[i].adjoint().mul(&gc[i]).unwrap().trace().re;
    }
    let expanded_total = expanded - cross + lambda * reg;
    let direct_total = obj.trace_total - y_const;
    let scale = obj.trace_total.abs().max(1.0);
    assert!(
        (expanded_total - direct_total).abs() <= 1e-8 * scale,
        "expansion mismatch: {expanded_total} vs {direct_total}"
    );
}

#[test]
fn fitted_coefficients_are_trace_optimal_among_perturbations() {
    let (spec, inputs, ys) = random_circulant_poly_problem(4, 4, 33);
    let gram = assemble_gram(&spec, &inputs).unwrap();
    let lambda = 0.2;
    let fit = fit_direct_dense(&gram, &ys, lambda).unwrap();
    let base = objective_with_gram(&gram, &ys, &fit.coeffs, lambda).unwrap().trace_total;
    let mut rng = StreamRng::new(55);
    for _ in 0..20 {
        let perturbed: Vec<AlgebraValue> = fit
            .coeffs
            .iter()
            .map(|c| {
                let noise =
                    AlgebraValue::Dense(rng.random_dense(gram.p()).scale(Complex64::new(0.1, 0.0)));
                c.add(&noise).unwrap()
            })
            .collect();
        let perturbed_total =
            objective_with_gram(&gram, &ys, &perturbed, lambda).unwrap().trace_total;
        assert!(
            base <= perturbed_total + 1e-9 * base.abs().max(1.0),
            "perturbation improved the objective: {base} vs {perturbed_total}"
        );
    }
}

#[test]
fn gram_is_hermitian_psd_across_kernel_families() {
    let mut rng = StreamRng::new(66);
    let four_circ = |rng: &mut StreamRng, p: usize| -> Vec<Point> {
        (0..4).map(|_| Point::Tuple(vec![AlgebraValue::Circulant(rng.random_circulant(p))])).collect()
    };
    let cases: Vec<(KernelSpec, Vec<Point>)> = vec![
        (
            KernelSpec::Linear {
                d: 1,
                a1: vec![AlgebraValue::Circulant(rng.random_circulant(4))],
                a2: vec![AlgebraValue::Circulant(rng.random_circulant(4))],
            },
            four_circ(&mut rng, 4),
        ),
        (
            KernelSpec::QrPoly { c: 0.6, degree: 3 },
            (0..4).map(|_| Point::Operator(AlgebraValue::Dense(rng.random_dense(3)))).collect(),
        ),
        (
            KernelSpec::NonSeparable { scalar: ScalarKernel::Laplacian { c: 1.0 } },
            (0..4).map(|_| Point::Vector(vec![rng.uniform01(), rng.uniform01()])).collect(),
        ),
        (
            KernelSpec::ConvCirculant {
                beta: 1.0,
                sigma: 1.0,
                grid: (0..5).map(|z| vec![z]).collect(),
            },
            (0..4)
                .map(|_| {
                    Point::Image(
                        rkhm::kernels::ImageSample::new(
                            (0..5).map(|_| rng.complex_gaussian()).collect(),
                            (0..5).map(|z| vec![z]).collect(),
                        )
                        .unwrap(),
                    )
                })
                .collect(),
        ),
    ];
    for (spec, points) in cases {
        let gram = assemble_gram(&spec, &points).unwrap();
        let n = gram.n();
        let p = gram.p();
        let dim = n * p;
        let flat = gram.flatten(0.0);
        let mut m = DenseOperator::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m.set(r, c, flat[r * dim + c]);
            }
        }
        let dev = m.hermitian_deviation();
        let scale = m.operator_norm().max(1.0);
        assert!(dev <= 1e-10 * scale, "{spec:?}: hermitian deviation {dev:.3e}");
        let eig = eigen_hermitian(&m);
        assert!(
            eig.eigenvalues[0] >= -1e-8 * scale,
            "{spec:?}: min eigenvalue {:.3e}",
            eig.eigenvalues[0]
        );
    }
}
