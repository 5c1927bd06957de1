//! Closed-form generalization bounds and a Monte-Carlo sanity estimator.
//!
//! For the hypothesis ball of module norm at most `B`, the empirical
//! Rademacher complexity is bounded by
//!
//! ```text
//! (B sqrt(C) / n) (sum_i |k(x_i, x_i)|)^(1/2) I,
//! ```
//!
//! where `C` is the second moment of the random sign operators. With
//! `|k(x, x)| <= D`, outputs bounded by `E`, and the induced Lipschitz
//! constant `L = 2 sqrt(2) (B sqrt(D) + E)`, the trace of the gap between
//! expected and empirical squared loss is, with probability `1 - delta`, at
//! most
//!
//! ```text
//! 2 L B sqrt(D) p / sqrt(n)  +  3 sqrt(2 D) p sqrt(log(2/delta) / n).
//! ```
//!
//! The supremum over an infinite ball is not computable, so the Monte-Carlo
//! estimator takes a finite candidate family and selects, per draw, the
//! trace-maximal algebra absolute value; the closed forms above remain the
//! primary artifact. A true least upper bound in the operator order may not
//! even exist for a finite family, which is why the trace proxy is used.

use crate::algebra::{abs_a, AlgebraValue, DenseOperator};
use crate::error::{Error, Result};
use crate::kernels::Point;
use crate::rng::StreamRng;
use crate::solver::Model;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Problem constants entering the generalization bound.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundInputs {
    /// Hypothesis ball radius `|f|_k <= B`.
    pub b: f64,
    /// Second moment of the sign operators, `E |sigma|^2`.
    pub c: f64,
    /// Supremum of `|k(x, x)|`.
    pub d: f64,
    /// Output norm bound `|y| <= E`.
    pub e: f64,
    /// Matrix dimension.
    pub p: usize,
    /// Sample count.
    pub n: usize,
    /// Failure probability, in (0, 1).
    pub delta: f64,
    /// Per-point diagonal kernel norms `|k(x_i, x_i)|`.
    pub diag_norms: Vec<f64>,
}

impl BoundInputs {
    fn validate(&self) -> Result<()> {
        for (name, v) in [("B", self.b), ("C", self.c), ("D", self.d)] {
            if !(v > 0.0) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        if self.e < 0.0 {
            return Err(Error::Domain(format!("E must be nonnegative, got {}", self.e)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Domain(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if self.p == 0 || self.n == 0 {
            return Err(Error::Domain("p and n must be >= 1".into()));
        }
        if self.diag_norms.iter().any(|&d| d > self.d + 1e-10) {
            return Err(Error::Domain(
                "a diagonal kernel norm exceeds the declared supremum D".into(),
            ));
        }
        Ok(())
    }
}

/// The scalar multiplying the identity in the Rademacher complexity bound:
/// `(B sqrt(C) / n) (sum diag_norms)^(1/2)`.
pub fn rademacher_bound(b: f64, c: f64, diag_norms: &[f64], n: usize) -> Result<f64> {
    if diag_norms.len() != n || n == 0 {
        return Err(Error::Domain(format!(
            "need n = len(diag_norms) >= 1, got n={n}, len={}",
            diag_norms.len()
        )));
    }
    if !(b > 0.0) || !(c > 0.0) || diag_norms.iter().any(|&d| d < 0.0) {
        return Err(Error::Domain("rademacher_bound needs positive B, C and nonnegative norms".into()));
    }
    let sum: f64 = diag_norms.iter().sum();
    Ok(b * c.sqrt() / n as f64 * sum.sqrt())
}

/// `L = 2 sqrt(2) (B sqrt(D) + E)`.
pub fn lipschitz_constant(b: f64, d: f64, e: f64) -> f64 {
    2.0 * std::f64::consts::SQRT_2 * (b * d.sqrt() + e)
}

/// The high-probability bound on `tr(E[loss] - empirical loss)`.
pub fn generalization_bound(inputs: &BoundInputs) -> Result<f64> {
    inputs.validate()?;
    let l = lipschitz_constant(inputs.b, inputs.d, inputs.e);
    let n = inputs.n as f64;
    let p = inputs.p as f64;
    let first = 2.0 * l * inputs.b * inputs.d.sqrt() * p / n.sqrt();
    let second = 3.0 * (2.0 * inputs.d).sqrt() * p * ((2.0 / inputs.delta).ln() / n).sqrt();
    Ok(first + second)
}

/// Measures the sign-operator second moment `C = E |sigma|^2` empirically
/// over `draws` Rademacher matrices.
pub fn measure_sign_second_moment(p: usize, draws: usize, seed: u64) -> f64 {
    let mut rng = StreamRng::new(seed);
    let mut acc = 0.0;
    for _ in 0..draws {
        let sigma = rng.rademacher_matrix(p);
        let norm = sigma.operator_norm();
        acc += norm * norm;
    }
    acc / draws as f64
}

/// Monte-Carlo estimate of the empirical complexity of a finite candidate
/// family together with the standard error of its trace.
pub struct RademacherEstimate {
    pub mean: DenseOperator,
    pub trace_std_error: f64,
    pub draws: usize,
}

/// Averages, over `num_draws` sign-operator tuples, the trace-maximal value
/// of `| (1/n) sum_i f(x_i)* sigma_i |` across the candidate models.
pub fn empirical_rademacher_mc(
    candidates: &[Model],
    points: &[Point],
    num_draws: usize,
    seed: u64,
) -> Result<RademacherEstimate> {
    if candidates.is_empty() {
        return Err(Error::Domain("need at least one candidate model".into()));
    }
    if points.is_empty() || num_draws == 0 {
        return Err(Error::Domain("need points and at least one draw".into()));
    }
    let n = points.len();
    // Candidate values f(x_i), dense, computed once.
    let mut values: Vec<Vec<DenseOperator>> = Vec::with_capacity(candidates.len());
    for model in candidates {
        let mut row = Vec::with_capacity(n);
        for x in points {
            row.push(model.predict(x)?.to_dense());
        }
        values.push(row);
    }
    let p = values[0][0].p();
    let inv_n = Complex64::new(1.0 / n as f64, 0.0);

    let mut rng = StreamRng::new(seed);
    let mut mean = DenseOperator::zeros(p);
    let mut trace_sum = 0.0;
    let mut trace_sq_sum = 0.0;
    for _ in 0..num_draws {
        let sigmas: Vec<DenseOperator> = (0..n).map(|_| rng.rademacher_matrix(p)).collect();
        let mut best: Option<(f64, DenseOperator)> = None;
        for row in &values {
            let mut acc = DenseOperator::zeros(p);
            for (fx, sigma) in row.iter().zip(&sigmas) {
                acc = acc.add(&fx.adjoint().mul(sigma)?)?;
            }
            let abs = abs_a(&AlgebraValue::Dense(acc.scale(inv_n))).to_dense();
            let tr = abs.trace().re;
            if best.as_ref().map_or(true, |(t, _)| tr > *t) {
                best = Some((tr, abs));
            }
        }
        let (tr, abs) = best.expect("nonempty candidates");
        mean = mean.add(&abs)?;
        trace_sum += tr;
        trace_sq_sum += tr * tr;
    }
    let m = num_draws as f64;
    let mean = mean.scale(Complex64::new(1.0 / m, 0.0));
    let var = (trace_sq_sum / m - (trace_sum / m).powi(2)).max(0.0);
    let trace_std_error = (var / m).sqrt();
    Ok(RademacherEstimate { mean, trace_std_error, draws: num_draws })
}

/// The ball radius of a fitted model: `B = | (c* G c)^(1/2) |`, computed
/// from the Gram machinery.
pub fn model_ball_radius(model: &Model) -> Result<f64> {
    let gram = crate::solver::assemble_gram(&model.kernel, &model.inputs)?;
    let n = gram.n();
    if model.coeffs.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: model.coeffs.len() });
    }
    let mut quad: Option<AlgebraValue> = None;
    for i in 0..n {
        for j in 0..n {
            let term = model.coeffs[i].adjoint().mul(gram.block(i, j))?.mul(&model.coeffs[j])?;
            quad = Some(match quad {
                Some(acc) => acc.add(&term)?,
                None => term,
            });
        }
    }
    let quad = quad.expect("n >= 1");
    // Clamp tiny negative rounding before the square root.
    Ok(crate::algebra::positive_sqrt_with_tol(&quad, 1e-6)?.norm())
}

/// The record emitted by the `bound` command.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundReport {
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub p: usize,
    pub n: usize,
    pub delta: f64,
    pub rademacher_bound: f64,
    pub lipschitz: f64,
    pub generalization_bound: f64,
    pub empirical_estimate_trace: f64,
}
