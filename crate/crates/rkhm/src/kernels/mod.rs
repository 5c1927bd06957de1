//! C*-algebra-valued positive definite kernels.
//!
//! A kernel here is a map `k: X x X -> A` with `k(x, y) = k(y, x)*` and
//! `sum_{i,j} c_i* k(x_i, x_j) c_j >= 0` in the algebra order for all finite
//! coefficient tuples. The families:
//!
//! * [`standard`] — linear, polynomial, and (finite-atomic) Gaussian kernels
//!   over tuples of algebra elements, and the QR polynomial kernel used by
//!   the synthetic benchmark.
//! * [`cnn`] — the nested kernel built from convolution filters, biases, and
//!   nonnegative power-series activations.
//! * [`conv`] — the convolutional image kernels: the scalar form, its
//!   circulant-valued lift with closed-form entries, the grid-valued form,
//!   and the operator-valued generalization with four dense parameters.
//! * [`baselines`] — the separable and non-separable vector-valued kernels
//!   used as comparison methods.
//!
//! [`check_positive_definite`] verifies the quadratic-form condition
//! empirically on random coefficient draws.

pub mod baselines;
pub mod cnn;
pub mod conv;
pub mod standard;

pub use conv::{GridFunction, ImageSample};

use crate::algebra::{eigen_hermitian, AlgebraValue, CirculantElement, DenseOperator};
use crate::error::{Error, Result};
use crate::rng::StreamRng;
use serde::{Deserialize, Serialize};

/// One atom of the finite operator-valued measure behind the Gaussian
/// kernel: a positive weight and the exponent parameters `a_{i,1}, a_{i,2}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianAtom {
    pub weight: DenseOperator,
    pub a1: Vec<DenseOperator>,
    pub a2: Vec<DenseOperator>,
}

/// Scalar kernel used by the vector-valued baselines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScalarKernel {
    /// `exp(-c |x - y|^2)`
    Gaussian { c: f64 },
    /// `exp(-c |x - y|)`
    Laplacian { c: f64 },
    /// `sum_{i=1}^3 (1 - c x.y)^i`
    Polynomial { c: f64 },
}

/// A kernel family plus its parameters. Serializes with a `variant` tag; see
/// the book's file-format chapter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum KernelSpec {
    /// `k(x, y) = sum_i a1[i]* x_i* a2[i]* a2[i] y_i a1[i]` on `A^d` tuples.
    Linear { d: usize, a1: Vec<AlgebraValue>, a2: Vec<AlgebraValue> },
    /// Degree-`q` product kernel; `a[i]` holds `a_{i,1} .. a_{i,q+1}`.
    Polynomial { d: usize, q: usize, a: Vec<Vec<AlgebraValue>> },
    /// Finite-atomic operator-valued Gaussian kernel.
    GaussianAtomic { d: usize, atoms: Vec<GaussianAtom> },
    /// Nested filter/bias/activation kernel over the circulant algebra.
    /// Activations are power series given as `(degree, coefficient)` pairs
    /// with degree >= 1 and coefficient >= 0.
    CnnNested {
        a: Vec<CirculantElement>,
        b: Vec<CirculantElement>,
        activations: Vec<Vec<(u32, f64)>>,
    },
    /// Scalar convolutional kernel over images on a fixed grid in `Z^m`.
    ConvScalar { beta: f64, sigma: f64, grid: Vec<Vec<i64>> },
    /// Circulant-valued lift of the convolutional kernel (closed-form
    /// entries; averaging or summing a row recovers the scalar kernel).
    ConvCirculant { beta: f64, sigma: f64, grid: Vec<Vec<i64>> },
    /// Grid-function-valued convolutional kernel; `psi[z][w]` is the grid
    /// index of the shift map applied to `(grid[z], grid[w])`.
    ConvGrid { beta: f64, sigma: f64, grid: Vec<Vec<i64>>, psi: Vec<Vec<usize>> },
    /// Operator-valued convolutional kernel with dense parameters a1..a4.
    ConvGeneral {
        beta: f64,
        sigma: f64,
        grid: Vec<Vec<i64>>,
        psi: Vec<Vec<usize>>,
        a1: DenseOperator,
        a2: DenseOperator,
        a3: DenseOperator,
        a4: DenseOperator,
    },
    /// `k(x, y) = sum_{i=1}^degree R_x* (I - c Q_x*)^i (I - c Q_y)^i R_y`
    /// where `x = Q_x R_x` is the QR decomposition.
    QrPoly { c: f64, degree: usize },
    /// Separable vector-valued baseline `k(x, y) = ktilde(x, y) T`.
    SeparableScalar { scalar: ScalarKernel, mixer: DenseOperator },
    /// Non-separable baseline `k(x, y)[i][j] = ktilde(x_i, y_j)`.
    NonSeparable { scalar: ScalarKernel },
}

/// An input point; which variant conforms depends on the kernel family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    /// A single algebra element (nested and QR kernels).
    Operator(AlgebraValue),
    /// An image on the kernel's grid (convolutional kernels).
    Image(ImageSample),
    /// A tuple in `A^d` (linear / polynomial / Gaussian kernels).
    Tuple(Vec<AlgebraValue>),
    /// A real vector (baseline kernels).
    Vector(Vec<f64>),
}

impl KernelSpec {
    /// Checks the structural invariants of the parameters.
    pub fn validate(&self) -> Result<()> {
        match self {
            KernelSpec::Linear { d, a1, a2 } => {
                if *d == 0 || a1.len() != *d || a2.len() != *d {
                    return Err(Error::InvalidSpec(format!(
                        "linear kernel declares d={d} but has {} / {} parameters",
                        a1.len(),
                        a2.len()
                    )));
                }
                check_common_p(a1.iter().chain(a2.iter()).map(|a| a.p()))
            }
            KernelSpec::Polynomial { d, q, a } => {
                if *d == 0 || *q == 0 || a.len() != *d {
                    return Err(Error::InvalidSpec(format!(
                        "polynomial kernel declares d={d}, q={q} with {} parameter rows",
                        a.len()
                    )));
                }
                for row in a {
                    if row.len() != q + 1 {
                        return Err(Error::InvalidSpec(format!(
                            "polynomial kernel row has {} entries, expected q+1={}",
                            row.len(),
                            q + 1
                        )));
                    }
                }
                check_common_p(a.iter().flatten().map(|v| v.p()))
            }
            KernelSpec::GaussianAtomic { d, atoms } => {
                if atoms.is_empty() {
                    return Err(Error::InvalidSpec(
                        "gaussian kernel needs at least one atom".into(),
                    ));
                }
                for atom in atoms {
                    if atom.a1.len() != *d || atom.a2.len() != *d {
                        return Err(Error::InvalidSpec(format!(
                            "gaussian atom has {} / {} parameters, expected d={d}",
                            atom.a1.len(),
                            atom.a2.len()
                        )));
                    }
                    if !crate::algebra::is_positive(
                        &AlgebraValue::Dense(atom.weight.clone()),
                        1e-10,
                    ) {
                        return Err(Error::InvalidSpec(
                            "gaussian atom weight is not positive".into(),
                        ));
                    }
                }
                check_common_p(atoms.iter().flat_map(|atom| {
                    std::iter::once(atom.weight.p())
                        .chain(atom.a1.iter().map(|m| m.p()))
                        .chain(atom.a2.iter().map(|m| m.p()))
                }))
            }
            KernelSpec::CnnNested { a, b, activations } => {
                if a.is_empty() || a.len() != b.len() || a.len() != activations.len() {
                    return Err(Error::InvalidSpec(format!(
                        "nested kernel needs equal nonempty layer lists (got {}, {}, {})",
                        a.len(),
                        b.len(),
                        activations.len()
                    )));
                }
                for series in activations {
                    for &(degree, coeff) in series {
                        if degree == 0 {
                            return Err(Error::InvalidSpec("activation term of degree 0".into()));
                        }
                        if !(coeff >= 0.0) {
                            return Err(Error::InvalidSpec(format!(
                                "negative activation coefficient {coeff}"
                            )));
                        }
                    }
                }
                check_common_p(a.iter().chain(b.iter()).map(|x| x.p()))
            }
            KernelSpec::ConvScalar { beta, sigma, grid }
            | KernelSpec::ConvCirculant { beta, sigma, grid } => validate_grid(*beta, *sigma, grid),
            KernelSpec::ConvGrid { beta, sigma, grid, psi } => {
                validate_grid(*beta, *sigma, grid)?;
                validate_psi(grid, psi)
            }
            KernelSpec::ConvGeneral { beta, sigma, grid, psi, a1, a2, a3, a4 } => {
                validate_grid(*beta, *sigma, grid)?;
                validate_psi(grid, psi)?;
                let p = grid.len();
                for (name, m) in [("a1", a1), ("a2", a2), ("a3", a3), ("a4", a4)] {
                    if m.p() != p {
                        return Err(Error::InvalidSpec(format!(
                            "{name} has dimension {}, expected grid size {p}",
                            m.p()
                        )));
                    }
                }
                Ok(())
            }
            KernelSpec::QrPoly { degree, .. } => {
                if *degree == 0 {
                    return Err(Error::InvalidSpec("qr-poly degree must be >= 1".into()));
                }
                Ok(())
            }
            KernelSpec::SeparableScalar { mixer, .. } => {
                if !crate::algebra::is_positive(&AlgebraValue::Dense(mixer.clone()), 1e-8) {
                    return Err(Error::InvalidSpec(
                        "separable mixer T is not positive semidefinite".into(),
                    ));
                }
                Ok(())
            }
            KernelSpec::NonSeparable { .. } => Ok(()),
        }
    }

    /// Dimension of the algebra the kernel takes values in, when the
    /// parameters determine it (`None` when it follows the input length).
    pub fn output_p(&self) -> Option<usize> {
        match self {
            KernelSpec::Linear { a1, .. } => a1.first().map(|a| a.p()),
            KernelSpec::Polynomial { a, .. } => a.first().and_then(|r| r.first()).map(|v| v.p()),
            KernelSpec::GaussianAtomic { atoms, .. } => atoms.first().map(|a| a.weight.p()),
            KernelSpec::CnnNested { a, .. } => a.first().map(|x| x.p()),
            KernelSpec::ConvScalar { .. } => Some(1),
            KernelSpec::ConvCirculant { grid, .. }
            | KernelSpec::ConvGrid { grid, .. }
            | KernelSpec::ConvGeneral { grid, .. } => Some(grid.len()),
            KernelSpec::QrPoly { .. } => None,
            KernelSpec::SeparableScalar { mixer, .. } => Some(mixer.p()),
            KernelSpec::NonSeparable { .. } => None,
        }
    }
}

fn check_common_p(mut dims: impl Iterator<Item = usize>) -> Result<()> {
    let first = match dims.next() {
        Some(p) => p,
        None => return Ok(()),
    };
    for p in dims {
        if p != first {
            return Err(Error::DimensionMismatch { expected: first, got: p });
        }
    }
    Ok(())
}

fn validate_grid(beta: f64, sigma: f64, grid: &[Vec<i64>]) -> Result<()> {
    if !(beta > 0.0) || !(sigma > 0.0) {
        return Err(Error::InvalidSpec(format!(
            "convolutional kernel needs beta, sigma > 0 (got {beta}, {sigma})"
        )));
    }
    if grid.is_empty() {
        return Err(Error::InvalidSpec("empty grid".into()));
    }
    let m = grid[0].len();
    if grid.iter().any(|z| z.len() != m) {
        return Err(Error::InvalidSpec("grid points of mixed dimension".into()));
    }
    Ok(())
}

fn validate_psi(grid: &[Vec<i64>], psi: &[Vec<usize>]) -> Result<()> {
    let p = grid.len();
    if psi.len() != p || psi.iter().any(|row| row.len() != p) {
        return Err(Error::InvalidSpec(format!("psi table must be {p} x {p}")));
    }
    if let Some(bad) = psi.iter().flatten().find(|&&idx| idx >= p) {
        return Err(Error::InvalidSpec(format!("psi output index {bad} outside the grid")));
    }
    // psi(z, 0) = z whenever the zero point is on the grid.
    if let Some(w0) = grid.iter().position(|z| z.iter().all(|&c| c == 0)) {
        for (zi, row) in psi.iter().enumerate() {
            if row[w0] != zi {
                return Err(Error::InvalidSpec(format!(
                    "psi(z, 0) must be z: psi[{zi}][{w0}] = {}",
                    row[w0]
                )));
            }
        }
    }
    Ok(())
}

/// Evaluates `k(x, y)`, validating the spec and input conformance first.
pub fn eval_kernel(spec: &KernelSpec, x: &Point, y: &Point) -> Result<AlgebraValue> {
    spec.validate()?;
    eval_kernel_unchecked(spec, x, y)
}

/// Evaluation without re-validating the spec (Gram assembly validates once).
pub(crate) fn eval_kernel_unchecked(
    spec: &KernelSpec,
    x: &Point,
    y: &Point,
) -> Result<AlgebraValue> {
    match spec {
        KernelSpec::Linear { .. }
        | KernelSpec::Polynomial { .. }
        | KernelSpec::GaussianAtomic { .. } => {
            let (xs, ys) = match (x, y) {
                (Point::Tuple(a), Point::Tuple(b)) => (a, b),
                _ => {
                    return Err(Error::InputMismatch(
                        "expected tuples of algebra elements".into(),
                    ))
                }
            };
            match spec {
                KernelSpec::Linear { d, a1, a2 } => standard::eval_linear(*d, a1, a2, xs, ys),
                KernelSpec::Polynomial { d, q, a } => standard::eval_polynomial(*d, *q, a, xs, ys),
                KernelSpec::GaussianAtomic { d, atoms } => {
                    standard::eval_gaussian_atomic(*d, atoms, xs, ys).map(AlgebraValue::Dense)
                }
                _ => unreachable!(),
            }
        }
        KernelSpec::CnnNested { a, b, activations } => {
            let (xc, yc) = match (x, y) {
                (
                    Point::Operator(AlgebraValue::Circulant(xc)),
                    Point::Operator(AlgebraValue::Circulant(yc)),
                ) => (xc, yc),
                _ => {
                    return Err(Error::InputMismatch(
                        "nested kernel expects circulant algebra elements".into(),
                    ))
                }
            };
            cnn::eval_cnn_nested(a, b, activations, xc, yc).map(AlgebraValue::Circulant)
        }
        KernelSpec::ConvScalar { beta, sigma, grid } => {
            let (xi, yi) = conform_images(grid, x, y)?;
            let value = conv::eval_conv_scalar(*beta, *sigma, xi, yi);
            Ok(AlgebraValue::Circulant(
                CirculantElement::new(vec![num_complex::Complex64::new(value, 0.0)])
                    .expect("p=1"),
            ))
        }
        KernelSpec::ConvCirculant { beta, sigma, grid } => {
            let (xi, yi) = conform_images(grid, x, y)?;
            Ok(AlgebraValue::Dense(conv::eval_conv_circulant(*beta, *sigma, xi, yi)))
        }
        KernelSpec::ConvGrid { beta, sigma, grid, psi } => {
            let (xi, yi) = conform_images(grid, x, y)?;
            let f = conv::eval_conv_grid(*beta, *sigma, psi, xi, yi);
            // Embed the grid function as a diagonal operator: the pointwise
            // algebra of functions on the grid sits inside C^(p x p) as the
            // diagonal subalgebra, which preserves Hermitian symmetry and
            // positive definiteness of the quadratic forms.
            Ok(AlgebraValue::Dense(f.into_diag_operator()))
        }
        KernelSpec::ConvGeneral { beta, sigma, grid, psi, a1, a2, a3, a4 } => {
            let (xi, yi) = conform_images(grid, x, y)?;
            conv::eval_conv_general(*beta, *sigma, psi, [a1, a2, a3, a4], xi, yi)
                .map(AlgebraValue::Dense)
        }
        KernelSpec::QrPoly { c, degree } => {
            let (xo, yo) = match (x, y) {
                (Point::Operator(a), Point::Operator(b)) => (a.to_dense(), b.to_dense()),
                _ => {
                    return Err(Error::InputMismatch(
                        "qr-poly kernel expects operator inputs".into(),
                    ))
                }
            };
            standard::eval_qr_poly(*c, *degree, &xo, &yo).map(AlgebraValue::Dense)
        }
        KernelSpec::SeparableScalar { scalar, mixer } => {
            let (xv, yv) = conform_vectors(x, y)?;
            baselines::eval_separable(scalar, mixer, xv, yv).map(AlgebraValue::Dense)
        }
        KernelSpec::NonSeparable { scalar } => {
            let (xv, yv) = conform_vectors(x, y)?;
            baselines::eval_nonseparable(scalar, xv, yv).map(AlgebraValue::Dense)
        }
    }
}

fn conform_images<'a>(
    grid: &[Vec<i64>],
    x: &'a Point,
    y: &'a Point,
) -> Result<(&'a ImageSample, &'a ImageSample)> {
    let (xi, yi) = match (x, y) {
        (Point::Image(a), Point::Image(b)) => (a, b),
        _ => {
            return Err(Error::InputMismatch(
                "convolutional kernel expects image samples".into(),
            ))
        }
    };
    for img in [xi, yi] {
        if img.grid() != grid {
            return Err(Error::InputMismatch("image grid differs from the kernel grid".into()));
        }
    }
    Ok((xi, yi))
}

fn conform_vectors<'a>(x: &'a Point, y: &'a Point) -> Result<(&'a [f64], &'a [f64])> {
    let (xv, yv) = match (x, y) {
        (Point::Vector(a), Point::Vector(b)) => (a.as_slice(), b.as_slice()),
        _ => return Err(Error::InputMismatch("baseline kernel expects real vectors".into())),
    };
    if xv.len() != yv.len() {
        return Err(Error::DimensionMismatch { expected: xv.len(), got: yv.len() });
    }
    Ok((xv, yv))
}

/// Report of the empirical positive-definiteness check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PdReport {
    /// Most negative quadratic-form eigenvalue seen, relative to
    /// `max(1, |Q|)` for its quadratic form `Q`.
    pub min_quadratic_eigenvalue: f64,
    /// Largest relative deviation of any quadratic form from
    /// self-adjointness.
    pub max_hermitian_deviation: f64,
    pub trials: usize,
    pub pass: bool,
}

/// Draws `trials` random coefficient tuples `(c_i)` and checks that every
/// quadratic form `sum c_i* k(x_i, x_j) c_j` stays positive up to `tol`.
/// Draws come from a fixed internal stream so the report is deterministic.
pub fn check_positive_definite(
    spec: &KernelSpec,
    points: &[Point],
    trials: usize,
    tol: f64,
) -> Result<PdReport> {
    spec.validate()?;
    if trials == 0 {
        return Err(Error::Domain("trials must be >= 1".into()));
    }
    check_pd_with(|x, y| eval_kernel_unchecked(spec, x, y), points, trials, tol)
}

/// The same harness over an arbitrary evaluation closure (used by tests to
/// inject deliberately broken kernels as negative controls).
pub fn check_pd_with(
    eval: impl Fn(&Point, &Point) -> Result<AlgebraValue>,
    points: &[Point],
    trials: usize,
    tol: f64,
) -> Result<PdReport> {
    if points.is_empty() {
        return Err(Error::Domain("need at least one point".into()));
    }
    let n = points.len();
    let mut values = Vec::with_capacity(n * n);
    for xi in points {
        for yj in points {
            values.push(eval(xi, yj)?);
        }
    }
    let p = values[0].p();
    let all_circulant = values.iter().all(|v| v.is_circulant());

    let mut rng = StreamRng::new(0xC57A11CE);
    let mut min_eig = f64::INFINITY;
    let mut max_dev = 0.0f64;
    for _ in 0..trials {
        let coeffs: Vec<AlgebraValue> = (0..n)
            .map(|_| {
                if all_circulant {
                    AlgebraValue::Circulant(rng.random_circulant(p))
                } else {
                    AlgebraValue::Dense(rng.random_dense(p))
                }
            })
            .collect();
        let mut quad: Option<AlgebraValue> = None;
        for i in 0..n {
            for j in 0..n {
                let term = coeffs[i].adjoint().mul(&values[i * n + j])?.mul(&coeffs[j])?;
                quad = Some(match quad {
                    Some(acc) => acc.add(&term)?,
                    None => term,
                });
            }
        }
        let quad = quad.expect("nonempty");
        let scale = quad.norm().max(1.0);
        let (dev, lo) = match &quad {
            AlgebraValue::Circulant(c) => {
                let dev = c.spectrum().iter().map(|l| l.im.abs()).fold(0.0, f64::max);
                let lo = c.spectrum().iter().map(|l| l.re).fold(f64::INFINITY, f64::min);
                (dev, lo)
            }
            AlgebraValue::Dense(m) => {
                let dev = m.hermitian_deviation();
                let eig = eigen_hermitian(m);
                (dev, eig.eigenvalues[0])
            }
        };
        min_eig = min_eig.min(lo / scale);
        max_dev = max_dev.max(dev / scale);
    }
    Ok(PdReport {
        min_quadratic_eigenvalue: min_eig,
        max_hermitian_deviation: max_dev,
        trials,
        pass: min_eig >= -tol && max_dev <= tol.max(1e-10),
    })
}
