//! Supervised learning in reproducing kernel Hilbert C*-modules.
//!
//! Ordinary kernel ridge regression learns a complex- or vector-valued
//! function from a positive definite kernel. This crate replaces the scalars
//! with elements of a C*-algebra: kernels take values in the circulant
//! algebra `C*(Z/pZ)` or in the full matrix algebra `C^(p x p)`, the Gram
//! matrix is a block matrix over that algebra, and the regressor's
//! coefficients are algebra elements themselves. The payoff is structural:
//! circulant parameters act like convolution filters (each Fourier component
//! scaled independently), while dense parameters mix Fourier components, a
//! strictly larger model class.
//!
//! The crate is organized by layer:
//!
//! * [`algebra`] — the two concrete C*-algebras, DFT diagonalization,
//!   positivity and order, square roots, QR, and the matrix exponential.
//! * [`kernels`] — every kernel family: linear / polynomial / Gaussian over
//!   operator tuples, the nested convolution-style kernel, the convolutional
//!   image kernels, the QR polynomial kernel, and the vector-valued
//!   baselines, plus an empirical positive-definiteness checker.
//! * [`solver`] — block Gram assembly and three interchangeable regularized
//!   solvers (dense direct, circulant/FFT fast path, conjugate gradient)
//!   with deterministic operation counters.
//! * [`bounds`] — closed-form Rademacher and generalization bounds and a
//!   Monte-Carlo estimator for the empirical complexity.
//! * [`experiments`] — the synthetic regression benchmark and the solver
//!   complexity benchmark.
//! * [`selftest`] — the property suites behind the `rkhm selftest` command.
//!
//! The accompanying book (see `book/` in the repository) walks through the
//! same material chapter by chapter; its code listings are compiled as
//! doc-tests.

pub mod algebra;
pub mod bounds;
pub mod error;
pub mod experiments;
pub mod kernels;
pub mod rng;
pub mod selftest;
pub mod solver;

pub use error::{Error, Result};
