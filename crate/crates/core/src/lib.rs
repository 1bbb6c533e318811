//! Value-of-information engine for stochastic decision problems.
//!
//! A [`DecisionProblem`] couples a finite action set with a reproducible
//! parameter sampler and a utility function. The solvers in [`solve`] estimate
//! the prior optimum, the perfect-information value and the expected value of
//! perfect information (EVPI) by Monte Carlo over a single shared sample
//! stream, so the EVPI estimate is a mean of pointwise non-negative regrets.
//! [`TabularProblem`] admits exact enumeration and serves as an oracle.
//!
//! The [`cases`] module ships three building-energy decision problems:
//! ventilation scheduling, heat-pump maintenance and borehole sizing.
//!
//! The crate is `no_std` (with `alloc`) unless the `std` feature is enabled.
//! The `parallel` feature evaluates sample blocks on a rayon pool; results are
//! bit-identical to serial evaluation.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod cases;
mod error;
pub mod math;
mod problem;
mod reduce;
pub mod rng;
pub mod solve;

pub use error::{VoiError, VoiResult};
pub use problem::{Action, DecisionProblem, FnProblem, Sense, TabularProblem};
pub use rng::{sample_index_rng, SampleRng};
pub use solve::{
    convergence_trace, solve_exact, solve_preposterior_perfect, solve_prior, solve_voi, ActionValue, Execution,
    MonteCarlo, PriorSolution, TraceRow, VoiEstimate,
};

/// Sample budget used by the reference analyses.
pub const DEFAULT_SAMPLES: usize = 1_000_000;
