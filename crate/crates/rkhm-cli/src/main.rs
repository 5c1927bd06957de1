//! Batch CLI for learning in reproducing kernel Hilbert C*-modules.
//!
//! Subcommands: `gen` (synthetic dataset), `train`, `predict`, `eval`,
//! `bound`, `bench`, `selftest`, and `table1` (the full method comparison).
//! Exit codes are stable: 0 success, 1 property/test failure, 2 numerical
//! failure (singular system, no convergence), 3 usage or contract error.
//!
//! File formats: datasets are line-delimited JSON (`{"split": "train",
//! "x": ..., "y": ...}` per sample), kernel specs and models are single JSON
//! documents, tabular reports are CSV. All outputs are written atomically
//! (temp file + rename). `RKHM_THREADS` caps worker parallelism; the current
//! implementation executes sequentially, so any positive value is accepted
//! and has no effect.

use clap::{Args, Parser, Subcommand};
use rkhm::algebra::{AlgebraValue, CirculantElement, DenseOperator};
use rkhm::bounds::{
    empirical_rademacher_mc, generalization_bound, lipschitz_constant, measure_sign_second_moment,
    model_ball_radius, rademacher_bound, BoundInputs, BoundReport,
};
use rkhm::error::Error as RkhmError;
use rkhm::experiments::{
    decode_output, encode_input, encode_target, gen_synthetic, run_benchmark, Method, SolverKind,
    SyntheticDataset, TableConfig, DEFAULT_C_GRID, DEFAULT_FOLDS, DEFAULT_LAMBDA_GRID,
};
use rkhm::kernels::{eval_kernel, KernelSpec, Point, ScalarKernel};
use rkhm::selftest;
use rkhm::solver::{
    assemble_gram, fit_block_cg, fit_circulant_fast, fit_direct_dense, FitOutput, Model,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_PROPERTY_FAILURE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "rkhm", version, about = "Kernel ridge regression in reproducing kernel Hilbert C*-modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the synthetic regression dataset.
    Gen(GenArgs),
    /// Fit a model on a dataset's training split.
    Train(TrainArgs),
    /// Write predictions for one split of a dataset.
    Predict(PredictArgs),
    /// Print the mean test error of a model on a dataset split.
    Eval(EvalArgs),
    /// Evaluate the generalization-bound report for a model on a dataset.
    Bound(BoundArgs),
    /// Sweep the solvers over random circulant problems and report counts.
    Bench(BenchArgs),
    /// Run the property suites; exits 1 if any family fails.
    Selftest(SelftestArgs),
    /// Run the full method comparison on synthetic data.
    Table1(Table1Args),
}

#[derive(Args)]
struct GenArgs {
    /// Number of training samples.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output dataset path (JSON lines).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    /// Input dataset path.
    #[arg(long = "in")]
    input: PathBuf,
    /// Kernel: a preset name (qr-poly, cnn-nested, conv-circulant,
    /// gaussian-atomic, vv-gaussian-I, vv-gaussian-T, nonsep) or a path to a
    /// kernel spec JSON file.
    #[arg(long)]
    kernel: String,
    /// Algebra dimension for presets that need one.
    #[arg(long, default_value_t = 2)]
    p: usize,
    #[arg(long, default_value_t = 0.1)]
    lambda: f64,
    /// Solver: dense, circulant, or cg.
    #[arg(long, default_value = "dense")]
    solver: String,
    /// Convergence tolerance (cg only).
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Iteration cap (cg only).
    #[arg(long = "max-iter", default_value_t = 10_000)]
    max_iter: usize,
    /// Output model path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long = "in")]
    input: PathBuf,
    /// Which split to predict on.
    #[arg(long, default_value = "test")]
    split: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value = "test")]
    split: String,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Monte-Carlo draws for the empirical complexity estimate.
    #[arg(long, default_value_t = 200)]
    draws: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Optional output path for the JSON report (also printed).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated sample counts.
    #[arg(long = "n-list", default_value = "4,8,16")]
    n_list: String,
    /// Comma-separated algebra dimensions.
    #[arg(long = "p-list", default_value = "8,16,32")]
    p_list: String,
    /// Comma-separated solvers to run.
    #[arg(long, default_value = "dense,circulant,cg")]
    solvers: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 0.1)]
    lambda: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Draw count for the Monte-Carlo quadrature family.
    #[arg(long = "mc-draws", default_value_t = 1_000_000)]
    mc_draws: usize,
}

#[derive(Args)]
struct Table1Args {
    /// "all" or a comma-separated method list (e.g. rkhm_qr_poly,vv_gaussian_I).
    #[arg(long, default_value = "all")]
    methods: String,
    #[arg(long, default_value_t = 30)]
    n: usize,
    /// Comma-separated seeds.
    #[arg(long, default_value = "1,2,3,4,5")]
    seeds: String,
    #[arg(long, default_value_t = DEFAULT_FOLDS)]
    folds: usize,
    /// Comma-separated kernel-parameter grid.
    #[arg(long = "c-grid")]
    c_grid: Option<String>,
    /// Comma-separated regularization grid.
    #[arg(long = "lambda-grid")]
    lambda_grid: Option<String>,
    /// CSV output (one row per method and seed).
    #[arg(long = "out-csv")]
    out_csv: Option<PathBuf>,
    /// JSON summary output.
    #[arg(long = "out-json")]
    out_json: Option<PathBuf>,
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<RkhmError> for CliError {
    fn from(e: RkhmError) -> Self {
        let code = match &e {
            RkhmError::Singular { .. } | RkhmError::NoConvergence { .. } => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::usage(format!("I/O error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::usage(format!("JSON error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    if let Ok(threads) = std::env::var("RKHM_THREADS") {
        match threads.parse::<usize>() {
            Ok(t) if t >= 1 => {}
            _ => {
                eprintln!("error: RKHM_THREADS must be a positive integer, got '{threads}'");
                return ExitCode::from(EXIT_USAGE);
            }
        }
    }
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Train(args) => cmd_train(args),
        Command::Predict(args) => cmd_predict(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Bound(args) => cmd_bound(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Selftest(args) => cmd_selftest(args),
        Command::Table1(args) => cmd_table1(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

// ---------------------------------------------------------------------------
// Dataset format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct DatasetRecord {
    split: String,
    x: Point,
    y: Point,
}

fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let tmp = path.with_extension(format!(
        "tmp.{}",
        std::process::id()
    ));
    {
        let mut file = std::fs::File::create(&tmp)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", tmp.display())))?;
        file.write_all(contents.as_bytes())?;
        file.sync_all()?;
    }
    std::fs::rename(&tmp, path)
        .map_err(|e| CliError::usage(format!("cannot move output into {}: {e}", path.display())))?;
    Ok(())
}

fn read_dataset(path: &Path) -> Result<Vec<DatasetRecord>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let mut records = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: DatasetRecord = serde_json::from_str(line).map_err(|e| {
            CliError::usage(format!("{}:{}: bad record: {e}", path.display(), lineno + 1))
        })?;
        records.push(record);
    }
    if records.is_empty() {
        return Err(CliError::usage(format!("{} contains no records", path.display())));
    }
    Ok(records)
}

fn dataset_to_lines(dataset: &SyntheticDataset) -> Result<String, CliError> {
    let mut out = String::new();
    for (x, y) in dataset.train_x.iter().zip(&dataset.train_y) {
        let record = DatasetRecord {
            split: "train".into(),
            x: Point::Vector(x.to_vec()),
            y: Point::Vector(y.to_vec()),
        };
        out.push_str(&serde_json::to_string(&record)?);
        out.push('\n');
    }
    for (x, y) in dataset.test_x.iter().zip(&dataset.test_y) {
        let record = DatasetRecord {
            split: "test".into(),
            x: Point::Vector(x.to_vec()),
            y: Point::Vector(y.to_vec()),
        };
        out.push_str(&serde_json::to_string(&record)?);
        out.push('\n');
    }
    Ok(out)
}

fn vector_of(point: &Point, what: &str) -> Result<Vec<f64>, CliError> {
    match point {
        Point::Vector(v) => Ok(v.clone()),
        _ => Err(CliError::usage(format!("{what} must be a plain vector in this dataset"))),
    }
}

/// Adapts a dataset point to the kernel's input space: vectors are encoded
/// per kernel family, anything else passes through for the kernel itself to
/// validate.
fn adapt_input(spec: &KernelSpec, point: &Point) -> Result<Point, CliError> {
    match point {
        Point::Vector(v) => match spec {
            KernelSpec::SeparableScalar { .. } | KernelSpec::NonSeparable { .. } => {
                Ok(point.clone())
            }
            _ => Ok(encode_input(spec, v)?),
        },
        other => Ok(other.clone()),
    }
}

fn adapt_target(spec: &KernelSpec, point: &Point) -> Result<AlgebraValue, CliError> {
    match point {
        Point::Vector(v) => Ok(encode_target(spec, v)?),
        Point::Operator(a) => Ok(a.clone()),
        _ => Err(CliError::usage("targets must be vectors or algebra elements")),
    }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn cmd_gen(args: GenArgs) -> Result<ExitCode, CliError> {
    if args.n == 0 {
        return Err(CliError::usage("--n must be at least 1"));
    }
    let dataset = gen_synthetic(args.n, args.seed)?;
    let lines = dataset_to_lines(&dataset)?;
    write_atomic(&args.out, &lines)?;
    let digest = Sha256::digest(lines.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    println!(
        "generated n={} test={} seed={} sha256={hex} -> {}",
        dataset.n,
        dataset.test_x.len(),
        dataset.seed,
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn preset_spec(name: &str, p: usize) -> Result<KernelSpec, CliError> {
    if p == 0 {
        return Err(CliError::usage("--p must be at least 1"));
    }
    let spec = match name {
        "qr-poly" => KernelSpec::QrPoly { c: 0.5, degree: 3 },
        "cnn-nested" => KernelSpec::CnnNested {
            a: vec![CirculantElement::identity(p), CirculantElement::delta(p, 1 % p)],
            b: vec![CirculantElement::zeros(p), CirculantElement::identity(p)],
            activations: vec![vec![(1, 1.0), (2, 0.5)], vec![(1, 1.0)]],
        },
        "conv-circulant" => KernelSpec::ConvCirculant {
            beta: 1.0,
            sigma: 1.0,
            grid: (0..p as i64).map(|z| vec![z]).collect(),
        },
        "gaussian-atomic" => KernelSpec::GaussianAtomic {
            d: 1,
            atoms: vec![rkhm::kernels::GaussianAtom {
                weight: DenseOperator::identity(p),
                a1: vec![DenseOperator::identity(p)],
                a2: vec![DenseOperator::identity(p)],
            }],
        },
        "vv-gaussian-I" => KernelSpec::SeparableScalar {
            scalar: ScalarKernel::Gaussian { c: 1.0 },
            mixer: DenseOperator::identity(p),
        },
        "vv-gaussian-T" => KernelSpec::SeparableScalar {
            scalar: ScalarKernel::Gaussian { c: 1.0 },
            mixer: ones_matrix(p),
        },
        "nonsep" => KernelSpec::NonSeparable { scalar: ScalarKernel::Gaussian { c: 1.0 } },
        other => {
            // Not a preset: treat as a path to a kernel spec file.
            let text = std::fs::read_to_string(other).map_err(|e| {
                CliError::usage(format!(
                    "'{other}' is neither a preset nor a readable kernel file: {e}"
                ))
            })?;
            serde_json::from_str(&text)?
        }
    };
    Ok(spec)
}

fn ones_matrix(p: usize) -> DenseOperator {
    CirculantElement::from_real(&vec![1.0; p]).expect("p >= 1").to_dense()
}

fn cmd_train(args: TrainArgs) -> Result<ExitCode, CliError> {
    let spec = preset_spec(&args.kernel, args.p)?;
    spec.validate()?;
    let records = read_dataset(&args.input)?;
    let mut inputs = Vec::new();
    let mut targets = Vec::new();
    for record in records.iter().filter(|r| r.split == "train") {
        inputs.push(adapt_input(&spec, &record.x)?);
        targets.push(adapt_target(&spec, &record.y)?);
    }
    if inputs.is_empty() {
        return Err(CliError::usage("dataset has no training records"));
    }
    let gram = assemble_gram(&spec, &inputs)?;
    let fit: FitOutput = match args.solver.as_str() {
        "dense" => fit_direct_dense(&gram, &targets, args.lambda)?,
        "circulant" => fit_circulant_fast(&gram, &targets, args.lambda)?,
        "cg" => fit_block_cg(&gram, &targets, args.lambda, args.tol, args.max_iter)?,
        other => return Err(CliError::usage(format!("unknown solver '{other}'"))),
    };
    let report = fit.counter.snapshot();
    let model = Model::from_fit(spec, inputs, args.lambda, &args.solver, &fit);
    write_atomic(&args.out, &serde_json::to_string_pretty(&model)?)?;
    print!(
        "trained n={} p={} solver={} residual={:.3e} complex_mul_adds={} fft_calls={}",
        model.inputs.len(),
        gram.p(),
        args.solver,
        fit.residual,
        report.complex_mul_adds,
        report.fft_calls
    );
    if let Some(iters) = fit.iterations {
        print!(" iterations={iters}");
    }
    println!(" -> {}", args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn read_model(path: &Path) -> Result<Model, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

#[derive(Serialize, Deserialize)]
struct PredictionRecord {
    prediction: AlgebraValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    decoded: Option<[f64; 2]>,
}

fn cmd_predict(args: PredictArgs) -> Result<ExitCode, CliError> {
    let model = read_model(&args.model)?;
    let records = read_dataset(&args.input)?;
    let mut out = String::new();
    let mut count = 0;
    for record in records.iter().filter(|r| r.split == args.split) {
        let x = adapt_input(&model.kernel, &record.x)?;
        let prediction = model.predict(&x)?;
        let decoded = if prediction.p() == 2 {
            Some(decode_output(&prediction.to_dense())?)
        } else {
            None
        };
        out.push_str(&serde_json::to_string(&PredictionRecord { prediction, decoded })?);
        out.push('\n');
        count += 1;
    }
    if count == 0 {
        return Err(CliError::usage(format!("no records in split '{}'", args.split)));
    }
    write_atomic(&args.out, &out)?;
    println!("predicted {} records ({}) -> {}", count, args.split, args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_eval(args: EvalArgs) -> Result<ExitCode, CliError> {
    let model = read_model(&args.model)?;
    let records = read_dataset(&args.input)?;
    let mut acc = 0.0;
    let mut count = 0usize;
    for record in records.iter().filter(|r| r.split == args.split) {
        let x = adapt_input(&model.kernel, &record.x)?;
        let y = vector_of(&record.y, "eval target")?;
        if y.len() != 2 {
            return Err(CliError::usage("eval expects two-component targets"));
        }
        let pred = decode_output(&model.predict(&x)?.to_dense())?;
        acc += ((pred[0] - y[0]).powi(2) + (pred[1] - y[1]).powi(2)).sqrt();
        count += 1;
    }
    if count == 0 {
        return Err(CliError::usage(format!("no records in split '{}'", args.split)));
    }
    println!("mean_test_error={:.6} split={} count={}", acc / count as f64, args.split, count);
    Ok(ExitCode::SUCCESS)
}

fn cmd_bound(args: BoundArgs) -> Result<ExitCode, CliError> {
    let model = read_model(&args.model)?;
    let records = read_dataset(&args.input)?;
    let spec = &model.kernel;

    let b = model_ball_radius(&model)?;
    let mut d_sup = 0.0f64;
    let mut e_sup = 0.0f64;
    let mut train_points = Vec::new();
    let mut diag_norms = Vec::new();
    for record in &records {
        let x = adapt_input(spec, &record.x)?;
        let diag = eval_kernel(spec, &x, &x)?.norm();
        d_sup = d_sup.max(diag);
        e_sup = e_sup.max(adapt_target(spec, &record.y)?.norm());
        if record.split == "train" {
            train_points.push(x);
            diag_norms.push(diag);
        }
    }
    if train_points.is_empty() {
        return Err(CliError::usage("dataset has no training records"));
    }
    let p = model
        .kernel
        .output_p()
        .unwrap_or_else(|| model.coeffs.first().map(|c| c.p()).unwrap_or(1));
    let n = train_points.len();
    let c = measure_sign_second_moment(p, args.draws.max(1), args.seed);
    let estimate = empirical_rademacher_mc(
        std::slice::from_ref(&model),
        &train_points,
        args.draws.max(1),
        args.seed,
    )?;
    let rad = rademacher_bound(b.max(1e-12), c, &diag_norms, n)?;
    let inputs = BoundInputs {
        b: b.max(1e-12),
        c,
        d: d_sup.max(1e-12),
        e: e_sup,
        p,
        n,
        delta: args.delta,
        diag_norms,
    };
    let gen = generalization_bound(&inputs)?;
    let report = BoundReport {
        b: inputs.b,
        c,
        d: inputs.d,
        e: e_sup,
        p,
        n,
        delta: args.delta,
        rademacher_bound: rad,
        lipschitz: lipschitz_constant(inputs.b, inputs.d, e_sup),
        generalization_bound: gen,
        empirical_estimate_trace: estimate.mean.trace().re,
    };
    let json = serde_json::to_string_pretty(&report)?;
    if let Some(path) = &args.out {
        write_atomic(path, &json)?;
    }
    println!("{json}");
    Ok(ExitCode::SUCCESS)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|_| CliError::usage(format!("bad {what} entry '{t}'"))))
        .collect()
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode, CliError> {
    let n_list: Vec<usize> = parse_list(&args.n_list, "--n-list")?;
    let p_list: Vec<usize> = parse_list(&args.p_list, "--p-list")?;
    let solvers = args
        .solvers
        .split(',')
        .map(|s| SolverKind::parse(s.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    let report = run_benchmark(&n_list, &p_list, &solvers, args.seed, args.lambda)?;
    for case in &report.cases {
        for run in &case.runs {
            println!(
                "n={} p={} solver={} complex_mul_adds={} fft_calls={} wall_ms={:.2} residual={:.2e}",
                case.n, case.p, run.solver, run.flops.complex_mul_adds, run.flops.fft_calls,
                run.wall_ms, run.residual
            );
        }
        println!(
            "n={} p={} cross_solver_rel_diff={:.2e}",
            case.n, case.p, case.max_cross_solver_rel_diff
        );
    }
    for slope in &report.slopes {
        println!("solver={} axis={} loglog_slope={:.2}", slope.solver, slope.axis, slope.slope);
    }
    if let Some(path) = &args.out {
        write_atomic(path, &serde_json::to_string_pretty(&report)?)?;
        println!("report -> {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_selftest(args: SelftestArgs) -> Result<ExitCode, CliError> {
    selftest::algebra_smoke()?;
    let results = selftest::run_all(args.mc_draws)?;
    let mut all_pass = true;
    for r in &results {
        println!(
            "[{}] {}: checks={} worst={:.3e} threshold={:.3e}{}",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.checks,
            r.worst,
            r.threshold,
            if r.pass { String::new() } else { format!(" ({})", r.note) }
        );
        all_pass &= r.pass;
    }
    if all_pass {
        println!("all {} property families passed", results.len());
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(EXIT_PROPERTY_FAILURE))
    }
}

fn cmd_table1(args: Table1Args) -> Result<ExitCode, CliError> {
    let methods: Vec<Method> = if args.methods == "all" {
        Method::all().to_vec()
    } else {
        args.methods
            .split(',')
            .map(|s| Method::parse(s.trim()))
            .collect::<Result<Vec<_>, _>>()?
    };
    let seeds: Vec<u64> = parse_list(&args.seeds, "--seeds")?;
    let config = TableConfig {
        c_grid: match &args.c_grid {
            Some(s) => parse_list(s, "--c-grid")?,
            None => DEFAULT_C_GRID.to_vec(),
        },
        lambda_grid: match &args.lambda_grid {
            Some(s) => parse_list(s, "--lambda-grid")?,
            None => DEFAULT_LAMBDA_GRID.to_vec(),
        },
        folds: args.folds,
    };
    let reports = rkhm::experiments::run_table1(&methods, args.n, &seeds, &config)?;
    println!("{:<22} {:>12} {:>12} {:>8} {:>10}", "method", "mean_error", "std", "best_c", "best_l");
    for r in &reports {
        println!(
            "{:<22} {:>12.4} {:>12.4} {:>8} {:>10}",
            r.method, r.mean_test_error, r.std_over_seeds, r.best_c, r.best_lambda
        );
    }
    if let Some(path) = &args.out_csv {
        let mut csv = String::from(rkhm::experiments::ExperimentReport::csv_header());
        csv.push('\n');
        for r in &reports {
            csv.push_str(&r.csv_rows());
            csv.push('\n');
        }
        write_atomic(path, &csv)?;
        println!("csv -> {}", path.display());
    }
    if let Some(path) = &args.out_json {
        write_atomic(path, &serde_json::to_string_pretty(&reports)?)?;
        println!("json -> {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}
