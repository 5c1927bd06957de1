//! Deterministic operation counters.
//!
//! Wall time depends on the machine; these counters do not. Every solver
//! records complex multiply-adds, transform invocations, and the dimensions
//! of the linear systems it factored, and the counts are identical across
//! runs for a fixed `(n, p, structure, solver)`. Transforms are charged via
//! the cost model in `algebra::fft::transform_cost`, independent of spectrum
//! caching. Updates are atomic and purely additive, so concurrent solver
//! internals may share one counter.

use crate::algebra;
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

#[derive(Debug, Default)]
pub struct FlopCounter {
    complex_mul_adds: AtomicU64,
    fft_calls: AtomicU64,
    solve_dims: Mutex<Vec<usize>>,
}

impl FlopCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_mul_adds(&self, n: u64) {
        self.complex_mul_adds.fetch_add(n, Ordering::Relaxed);
    }

    /// Charges one length-`p` transform at its model cost.
    pub fn add_fft(&self, p: usize) {
        self.fft_calls.fetch_add(1, Ordering::Relaxed);
        self.complex_mul_adds.fetch_add(algebra::fft::transform_cost(p), Ordering::Relaxed);
    }

    pub fn record_solve_dim(&self, dim: usize) {
        self.solve_dims.lock().expect("counter lock").push(dim);
    }

    pub fn complex_mul_adds(&self) -> u64 {
        self.complex_mul_adds.load(Ordering::Relaxed)
    }

    pub fn fft_calls(&self) -> u64 {
        self.fft_calls.load(Ordering::Relaxed)
    }

    pub fn snapshot(&self) -> FlopReport {
        FlopReport {
            complex_mul_adds: self.complex_mul_adds(),
            fft_calls: self.fft_calls(),
            solve_dim_history: self.solve_dims.lock().expect("counter lock").clone(),
        }
    }
}

/// Serializable snapshot of a counter, embedded in benchmark reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlopReport {
    pub complex_mul_adds: u64,
    pub fft_calls: u64,
    pub solve_dim_history: Vec<usize>,
}
