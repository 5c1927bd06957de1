//! The synthetic regression benchmark and the solver complexity benchmark.
//!
//! The regression task: draw `n` points uniformly on the unit square,
//! perturb each with Gaussian noise of standard deviation 0.1, and emit the
//! two-component target
//!
//! ```text
//! y = [sin(v1 + v2), sin(v1 + v2) + sin(0.5 (v1 + v2))]
//! ```
//!
//! at the *noisy* point `v`, so the labels carry the noise while the stored
//! inputs stay clean. Test targets (100 points) use the noise-free formula.
//! Training embeds both inputs and targets into 2x2 circulant matrices;
//! predictions decode back to vectors by averaging the diagonal for the
//! first component and the off-diagonal for the second. Every method —
//! the QR polynomial kernel and nine vector-valued baselines — runs through
//! the same block ridge solver, so the comparison isolates the kernel.

mod benchmark;

pub use benchmark::{
    random_circulant_problem, run_benchmark, BenchCase, BenchmarkReport, SlopeFit, SolverKind,
    SolverRun,
};

use crate::algebra::{AlgebraValue, CirculantElement, DenseOperator};
use crate::error::{Error, Result};
use crate::kernels::{ImageSample, KernelSpec, Point, ScalarKernel};
use crate::rng::StreamRng;
use crate::solver::{assemble_gram, fit_direct_dense, Model};
use serde::{Deserialize, Serialize};

/// Default cross-validation grids; the paper-style run overrides nothing.
pub const DEFAULT_C_GRID: [f64; 6] = [0.01, 0.1, 0.5, 1.0, 2.0, 5.0];
pub const DEFAULT_LAMBDA_GRID: [f64; 5] = [1e-4, 1e-3, 1e-2, 1e-1, 1.0];
pub const DEFAULT_FOLDS: usize = 5;
pub const TEST_SET_SIZE: usize = 100;

/// One synthetic draw: clean inputs, the noisy inputs the labels were
/// generated from, labels, and a noise-free test set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticDataset {
    pub seed: u64,
    pub n: usize,
    pub train_x: Vec<[f64; 2]>,
    pub train_x_noisy: Vec<[f64; 2]>,
    pub train_y: Vec<[f64; 2]>,
    pub test_x: Vec<[f64; 2]>,
    pub test_y: Vec<[f64; 2]>,
}

fn target(v: [f64; 2]) -> [f64; 2] {
    let s = v[0] + v[1];
    [s.sin(), s.sin() + (0.5 * s).sin()]
}

/// Deterministic generation: uniforms for the training inputs, one
/// Box-Muller pair per training point for the noise, then the test inputs.
pub fn gen_synthetic(n: usize, seed: u64) -> Result<SyntheticDataset> {
    if n == 0 {
        return Err(Error::Domain("need at least one training sample".into()));
    }
    let mut rng = StreamRng::new(seed);
    let mut train_x = Vec::with_capacity(n);
    for _ in 0..n {
        train_x.push([rng.uniform01(), rng.uniform01()]);
    }
    let mut train_x_noisy = Vec::with_capacity(n);
    for x in &train_x {
        let (g1, g2) = rng.gaussian_pair();
        train_x_noisy.push([x[0] + 0.1 * g1, x[1] + 0.1 * g2]);
    }
    let train_y = train_x_noisy.iter().map(|&v| target(v)).collect();
    let mut test_x = Vec::with_capacity(TEST_SET_SIZE);
    for _ in 0..TEST_SET_SIZE {
        test_x.push([rng.uniform01(), rng.uniform01()]);
    }
    let test_y = test_x.iter().map(|&v| target(v)).collect();
    Ok(SyntheticDataset { seed, n, train_x, train_x_noisy, train_y, test_x, test_y })
}

/// `circ(v)` for a two-component vector, as a dense 2x2 operator.
pub fn embed_circulant(v: [f64; 2]) -> DenseOperator {
    CirculantElement::from_real(&v).expect("length 2").to_dense()
}

/// Inverse of the embedding on predictions: the first component is the mean
/// of the diagonal entries, the second the mean of the off-diagonal ones
/// (real parts).
pub fn decode_output(m: &DenseOperator) -> Result<[f64; 2]> {
    if m.p() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: m.p() });
    }
    Ok([
        0.5 * (m.get(0, 0).re + m.get(1, 1).re),
        0.5 * (m.get(0, 1).re + m.get(1, 0).re),
    ])
}

/// The ten methods of the comparison table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    RkhmQrPoly,
    VvGaussianI,
    VvGaussianT,
    VvGaussianNonsep,
    VvLaplacianI,
    VvLaplacianT,
    VvLaplacianNonsep,
    VvPolyI,
    VvPolyT,
    VvPolyNonsep,
}

impl Method {
    pub fn all() -> [Method; 10] {
        [
            Method::RkhmQrPoly,
            Method::VvGaussianI,
            Method::VvGaussianT,
            Method::VvGaussianNonsep,
            Method::VvLaplacianI,
            Method::VvLaplacianT,
            Method::VvLaplacianNonsep,
            Method::VvPolyI,
            Method::VvPolyT,
            Method::VvPolyNonsep,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::RkhmQrPoly => "rkhm_qr_poly",
            Method::VvGaussianI => "vv_gaussian_I",
            Method::VvGaussianT => "vv_gaussian_T",
            Method::VvGaussianNonsep => "vv_gaussian_nonsep",
            Method::VvLaplacianI => "vv_laplacian_I",
            Method::VvLaplacianT => "vv_laplacian_T",
            Method::VvLaplacianNonsep => "vv_laplacian_nonsep",
            Method::VvPolyI => "vv_poly_I",
            Method::VvPolyT => "vv_poly_T",
            Method::VvPolyNonsep => "vv_poly_nonsep",
        }
    }

    pub fn parse(s: &str) -> Result<Method> {
        Method::all()
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown method '{s}'")))
    }

    fn mixer_t() -> DenseOperator {
        DenseOperator::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).expect("2x2")
    }

    fn scalar(&self, c: f64) -> ScalarKernel {
        match self {
            Method::VvGaussianI | Method::VvGaussianT | Method::VvGaussianNonsep => {
                ScalarKernel::Gaussian { c }
            }
            Method::VvLaplacianI | Method::VvLaplacianT | Method::VvLaplacianNonsep => {
                ScalarKernel::Laplacian { c }
            }
            Method::VvPolyI | Method::VvPolyT | Method::VvPolyNonsep => {
                ScalarKernel::Polynomial { c }
            }
            Method::RkhmQrPoly => unreachable!("no scalar kernel"),
        }
    }

    pub fn kernel_spec(&self, c: f64) -> KernelSpec {
        match self {
            Method::RkhmQrPoly => KernelSpec::QrPoly { c, degree: 3 },
            Method::VvGaussianI | Method::VvLaplacianI | Method::VvPolyI => {
                KernelSpec::SeparableScalar {
                    scalar: self.scalar(c),
                    mixer: DenseOperator::identity(2),
                }
            }
            Method::VvGaussianT | Method::VvLaplacianT | Method::VvPolyT => {
                KernelSpec::SeparableScalar { scalar: self.scalar(c), mixer: Self::mixer_t() }
            }
            Method::VvGaussianNonsep | Method::VvLaplacianNonsep | Method::VvPolyNonsep => {
                KernelSpec::NonSeparable { scalar: self.scalar(c) }
            }
        }
    }
}

/// Adapts a plain vector sample to the input space of a kernel family.
pub fn encode_input(spec: &KernelSpec, x: &[f64]) -> Result<Point> {
    match spec {
        KernelSpec::QrPoly { .. } => {
            let circ = CirculantElement::from_real(x)?;
            Ok(Point::Operator(AlgebraValue::Dense(circ.to_dense())))
        }
        KernelSpec::CnnNested { .. } => {
            Ok(Point::Operator(AlgebraValue::Circulant(CirculantElement::from_real(x)?)))
        }
        KernelSpec::Linear { d, .. }
        | KernelSpec::Polynomial { d, .. }
        | KernelSpec::GaussianAtomic { d, .. } => {
            if *d != 1 {
                return Err(Error::InputMismatch(format!(
                    "cannot adapt a flat vector to a d={d} tuple kernel"
                )));
            }
            Ok(Point::Tuple(vec![AlgebraValue::Circulant(CirculantElement::from_real(x)?)]))
        }
        KernelSpec::ConvScalar { grid, .. }
        | KernelSpec::ConvCirculant { grid, .. }
        | KernelSpec::ConvGrid { grid, .. }
        | KernelSpec::ConvGeneral { grid, .. } => {
            Ok(Point::Image(ImageSample::from_real(x, grid.clone())?))
        }
        KernelSpec::SeparableScalar { .. } | KernelSpec::NonSeparable { .. } => {
            Ok(Point::Vector(x.to_vec()))
        }
    }
}

/// Embeds a vector target as a circulant matrix in the kernel's output
/// algebra (circulant element for circulant-valued kernels, dense otherwise).
pub fn encode_target(spec: &KernelSpec, y: &[f64]) -> Result<AlgebraValue> {
    let circ = CirculantElement::from_real(y)?;
    let circulant_output = matches!(
        spec,
        KernelSpec::CnnNested { .. } | KernelSpec::ConvScalar { .. }
    );
    Ok(if circulant_output {
        AlgebraValue::Circulant(circ)
    } else {
        AlgebraValue::Dense(circ.to_dense())
    })
}

/// Fits one method at fixed hyperparameters on explicit training data.
pub fn fit_method(
    method: Method,
    c: f64,
    lambda: f64,
    xs: &[[f64; 2]],
    ys: &[[f64; 2]],
) -> Result<Model> {
    let spec = method.kernel_spec(c);
    let inputs: Vec<Point> =
        xs.iter().map(|x| encode_input(&spec, x)).collect::<Result<_>>()?;
    let targets: Vec<AlgebraValue> =
        ys.iter().map(|y| encode_target(&spec, y)).collect::<Result<_>>()?;
    let gram = assemble_gram(&spec, &inputs)?;
    let fit = fit_direct_dense(&gram, &targets, lambda)?;
    Ok(Model::from_fit(spec, inputs, lambda, "dense", &fit))
}

/// Decoded vector prediction of a fitted model at a raw sample.
pub fn predict_vec(model: &Model, x: &[f64; 2]) -> Result<[f64; 2]> {
    let point = encode_input(&model.kernel, x)?;
    decode_output(&model.predict(&point)?.to_dense())
}

fn mean_vec_error(model: &Model, xs: &[[f64; 2]], ys: &[[f64; 2]]) -> Result<f64> {
    let mut acc = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let pred = predict_vec(model, x)?;
        acc += ((pred[0] - y[0]).powi(2) + (pred[1] - y[1]).powi(2)).sqrt();
    }
    Ok(acc / xs.len() as f64)
}

/// The evaluation metric: the mean Euclidean distance between decoded
/// predictions and targets over the test set.
pub fn mean_test_error(model: &Model, dataset: &SyntheticDataset) -> Result<f64> {
    mean_vec_error(model, &dataset.test_x, &dataset.test_y)
}

/// Exhaustive grid search with deterministic `index mod folds` assignment.
/// Ties are broken toward the smaller lambda, then the smaller c.
pub fn cross_validate(
    method: Method,
    dataset: &SyntheticDataset,
    c_grid: &[f64],
    lambda_grid: &[f64],
    folds: usize,
) -> Result<(f64, f64)> {
    let n = dataset.n;
    if c_grid.is_empty() || lambda_grid.is_empty() {
        return Err(Error::Domain("empty hyperparameter grid".into()));
    }
    if folds < 2 || folds > n {
        return Err(Error::Domain(format!(
            "folds must lie in [2, n]; got folds={folds}, n={n}"
        )));
    }
    let mut best: Option<(f64, f64, f64)> = None; // (error, lambda, c)
    for &c in c_grid {
        for &lambda in lambda_grid {
            let mut fold_errors = Vec::with_capacity(folds);
            for fold in 0..folds {
                let mut tr_x = Vec::new();
                let mut tr_y = Vec::new();
                let mut va_x = Vec::new();
                let mut va_y = Vec::new();
                for i in 0..n {
                    if i % folds == fold {
                        va_x.push(dataset.train_x[i]);
                        va_y.push(dataset.train_y[i]);
                    } else {
                        tr_x.push(dataset.train_x[i]);
                        tr_y.push(dataset.train_y[i]);
                    }
                }
                if va_x.is_empty() || tr_x.is_empty() {
                    return Err(Error::Domain(format!("fold {fold} is degenerate")));
                }
                let model = fit_method(method, c, lambda, &tr_x, &tr_y)?;
                fold_errors.push(mean_vec_error(&model, &va_x, &va_y)?);
            }
            let err = fold_errors.iter().sum::<f64>() / folds as f64;
            let better = match best {
                None => true,
                Some((be, bl, bc)) => {
                    err < be || (err == be && (lambda < bl || (lambda == bl && c < bc)))
                }
            };
            if better {
                best = Some((err, lambda, c));
            }
        }
    }
    let (_, lambda, c) = best.expect("nonempty grids");
    Ok((c, lambda))
}

/// Per-seed outcome inside a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedOutcome {
    pub seed: u64,
    pub best_c: f64,
    pub best_lambda: f64,
    pub test_error: f64,
}

/// Aggregated result of one method across seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub method: String,
    /// Hyperparameters of the best (lowest-error) seed.
    pub best_c: f64,
    pub best_lambda: f64,
    pub mean_test_error: f64,
    /// Sample standard deviation across seeds (0 for a single seed).
    pub std_over_seeds: f64,
    pub per_seed: Vec<SeedOutcome>,
}

impl ExperimentReport {
    pub fn csv_header() -> &'static str {
        "method,seed,best_c,best_lambda,test_error"
    }

    pub fn csv_rows(&self) -> String {
        self.per_seed
            .iter()
            .map(|s| {
                format!(
                    "{},{},{},{},{}",
                    self.method, s.seed, s.best_c, s.best_lambda, s.test_error
                )
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Grid-search configuration for the table run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableConfig {
    pub c_grid: Vec<f64>,
    pub lambda_grid: Vec<f64>,
    pub folds: usize,
}

impl Default for TableConfig {
    fn default() -> Self {
        TableConfig {
            c_grid: DEFAULT_C_GRID.to_vec(),
            lambda_grid: DEFAULT_LAMBDA_GRID.to_vec(),
            folds: DEFAULT_FOLDS,
        }
    }
}

/// For each method and seed: generate data, grid-search by cross-validation,
/// refit on the full training set, and score on the noise-free test set.
pub fn run_table1(
    methods: &[Method],
    n: usize,
    seeds: &[u64],
    config: &TableConfig,
) -> Result<Vec<ExperimentReport>> {
    if methods.is_empty() || seeds.is_empty() {
        return Err(Error::Domain("need at least one method and one seed".into()));
    }
    let mut reports = Vec::with_capacity(methods.len());
    for &method in methods {
        let mut per_seed = Vec::with_capacity(seeds.len());
        for &seed in seeds {
            let dataset = gen_synthetic(n, seed)?;
            let (c, lambda) = cross_validate(
                method,
                &dataset,
                &config.c_grid,
                &config.lambda_grid,
                config.folds,
            )?;
            let model = fit_method(method, c, lambda, &dataset.train_x, &dataset.train_y)?;
            let err = mean_test_error(&model, &dataset)?;
            per_seed.push(SeedOutcome { seed, best_c: c, best_lambda: lambda, test_error: err });
        }
        let k = per_seed.len() as f64;
        let mean = per_seed.iter().map(|s| s.test_error).sum::<f64>() / k;
        let std = if per_seed.len() > 1 {
            (per_seed.iter().map(|s| (s.test_error - mean).powi(2)).sum::<f64>() / (k - 1.0))
                .sqrt()
        } else {
            0.0
        };
        let best = per_seed
            .iter()
            .min_by(|a, b| a.test_error.partial_cmp(&b.test_error).expect("finite"))
            .expect("nonempty");
        reports.push(ExperimentReport {
            method: method.name().to_string(),
            best_c: best.best_c,
            best_lambda: best.best_lambda,
            mean_test_error: mean,
            std_over_seeds: std,
            per_seed,
        });
    }
    Ok(reports)
}
