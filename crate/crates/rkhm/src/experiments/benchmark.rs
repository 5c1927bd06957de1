//! Solver complexity benchmark on random circulant kernel problems.
//!
//! For each `(n, p)` in the sweep the harness builds a positive definite
//! all-circulant Gram (a linear kernel with random circulant parameters on
//! random circulant inputs, plus a fixed ridge), runs the requested solvers,
//! and records the deterministic operation counts, wall time, and
//! cross-solver agreement. Log-log slopes of the counts against `n` and `p`
//! summarize the scaling.

use crate::algebra::AlgebraValue;
use crate::error::{Error, Result};
use crate::kernels::{KernelSpec, Point};
use crate::rng::StreamRng;
use crate::solver::{
    assemble_gram, fit_block_cg, fit_circulant_fast, fit_direct_dense, FitOutput, FlopReport,
    GramMatrix,
};
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    Dense,
    Circulant,
    Cg,
}

impl SolverKind {
    pub fn all() -> [SolverKind; 3] {
        [SolverKind::Dense, SolverKind::Circulant, SolverKind::Cg]
    }

    pub fn name(&self) -> &'static str {
        match self {
            SolverKind::Dense => "dense",
            SolverKind::Circulant => "circulant",
            SolverKind::Cg => "cg",
        }
    }

    pub fn parse(s: &str) -> Result<SolverKind> {
        SolverKind::all()
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown solver '{s}'")))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolverRun {
    pub solver: String,
    pub flops: FlopReport,
    pub wall_ms: f64,
    pub iterations: Option<usize>,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchCase {
    pub n: usize,
    pub p: usize,
    /// Largest relative coefficient disagreement across the solvers run.
    pub max_cross_solver_rel_diff: f64,
    pub runs: Vec<SolverRun>,
}

/// Least-squares slope of `log2(flops)` against `log2(axis value)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SlopeFit {
    pub solver: String,
    pub axis: String,
    pub slope: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub seed: u64,
    pub lambda: f64,
    pub cases: Vec<BenchCase>,
    pub slopes: Vec<SlopeFit>,
}

/// A positive definite all-circulant problem: linear kernel with random
/// circulant parameters, random circulant inputs and targets.
pub fn random_circulant_problem(
    n: usize,
    p: usize,
    rng: &mut StreamRng,
) -> Result<(GramMatrix, Vec<AlgebraValue>)> {
    let spec = KernelSpec::Linear {
        d: 1,
        a1: vec![AlgebraValue::Circulant(rng.random_unit_circulant(p))],
        a2: vec![AlgebraValue::Circulant(rng.random_unit_circulant(p))],
    };
    let inputs: Vec<Point> = (0..n)
        .map(|_| Point::Tuple(vec![AlgebraValue::Circulant(rng.random_unit_circulant(p))]))
        .collect();
    let gram = assemble_gram(&spec, &inputs)?;
    let ys: Vec<AlgebraValue> =
        (0..n).map(|_| AlgebraValue::Circulant(rng.random_circulant(p))).collect();
    Ok((gram, ys))
}

fn rel_diff(a: &[AlgebraValue], b: &[AlgebraValue]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in a.iter().zip(b) {
        let dx = x.to_dense();
        let dy = y.to_dense();
        num += dx.sub(&dy).expect("same p").frobenius_norm().powi(2);
        den += dx.frobenius_norm().powi(2);
    }
    if den > 0.0 {
        (num / den).sqrt()
    } else {
        num.sqrt()
    }
}

pub fn run_benchmark(
    n_list: &[usize],
    p_list: &[usize],
    solvers: &[SolverKind],
    seed: u64,
    lambda: f64,
) -> Result<BenchmarkReport> {
    if n_list.is_empty() || p_list.is_empty() || solvers.is_empty() {
        return Err(Error::Domain("benchmark needs nonempty sweeps and solvers".into()));
    }
    let mut rng = StreamRng::new(seed);
    let mut cases = Vec::new();
    for &n in n_list {
        for &p in p_list {
            let (gram, ys) = random_circulant_problem(n, p, &mut rng)?;
            let mut runs = Vec::new();
            let mut coeff_sets: Vec<Vec<AlgebraValue>> = Vec::new();
            for kind in solvers {
                let start = Instant::now();
                let fit: FitOutput = match kind {
                    SolverKind::Dense => fit_direct_dense(&gram, &ys, lambda)?,
                    SolverKind::Circulant => fit_circulant_fast(&gram, &ys, lambda)?,
                    SolverKind::Cg => fit_block_cg(&gram, &ys, lambda, 1e-10, 10 * n * p)?,
                };
                let wall_ms = start.elapsed().as_secs_f64() * 1e3;
                runs.push(SolverRun {
                    solver: kind.name().to_string(),
                    flops: fit.counter.snapshot(),
                    wall_ms,
                    iterations: fit.iterations,
                    residual: fit.residual,
                });
                coeff_sets.push(fit.coeffs);
            }
            let mut max_diff = 0.0f64;
            for i in 0..coeff_sets.len() {
                for j in (i + 1)..coeff_sets.len() {
                    max_diff = max_diff.max(rel_diff(&coeff_sets[i], &coeff_sets[j]));
                }
            }
            cases.push(BenchCase { n, p, max_cross_solver_rel_diff: max_diff, runs });
        }
    }
    let slopes = fit_slopes(&cases, solvers, n_list, p_list);
    Ok(BenchmarkReport { seed, lambda, cases, slopes })
}

fn fit_slopes(
    cases: &[BenchCase],
    solvers: &[SolverKind],
    n_list: &[usize],
    p_list: &[usize],
) -> Vec<SlopeFit> {
    let mut out = Vec::new();
    let max_p = *p_list.iter().max().expect("nonempty");
    let max_n = *n_list.iter().max().expect("nonempty");
    for kind in solvers {
        for (axis, fixed_other) in [("n", max_p), ("p", max_n)] {
            let pts: Vec<(f64, f64)> = cases
                .iter()
                .filter(|c| if axis == "n" { c.p == fixed_other } else { c.n == fixed_other })
                .filter_map(|c| {
                    let run = c.runs.iter().find(|r| r.solver == kind.name())?;
                    let x = if axis == "n" { c.n } else { c.p } as f64;
                    Some((x.log2(), (run.flops.complex_mul_adds.max(1)) as f64))
                })
                .map(|(x, f)| (x, f.log2()))
                .collect();
            if pts.len() >= 2 {
                out.push(SlopeFit {
                    solver: kind.name().to_string(),
                    axis: axis.to_string(),
                    slope: least_squares_slope(&pts),
                });
            }
        }
    }
    out
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|(x, _)| x).sum();
    let sy: f64 = pts.iter().map(|(_, y)| y).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| x * y).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solvers_agree_on_benchmark_instances() {
        let report =
            run_benchmark(&[2, 4], &[4], &SolverKind::all(), 77, 0.1).unwrap();
        for case in &report.cases {
            assert!(
                case.max_cross_solver_rel_diff <= 1e-6,
                "disagreement {} at (n={}, p={})",
                case.max_cross_solver_rel_diff,
                case.n,
                case.p
            );
        }
    }

    #[test]
    fn counters_are_reproducible_across_runs() {
        let a = run_benchmark(&[2, 4], &[4, 8], &[SolverKind::Circulant], 5, 0.1).unwrap();
        let b = run_benchmark(&[2, 4], &[4, 8], &[SolverKind::Circulant], 5, 0.1).unwrap();
        for (ca, cb) in a.cases.iter().zip(&b.cases) {
            assert_eq!(ca.runs[0].flops, cb.runs[0].flops);
        }
    }

    #[test]
    fn dense_slope_in_p_is_roughly_cubic() {
        let report = run_benchmark(&[4], &[4, 8, 16], &[SolverKind::Dense], 3, 0.1).unwrap();
        let slope = report
            .slopes
            .iter()
            .find(|s| s.solver == "dense" && s.axis == "p")
            .expect("slope present")
            .slope;
        assert!(slope > 2.5 && slope < 3.5, "dense p-slope {slope}");
    }
}
