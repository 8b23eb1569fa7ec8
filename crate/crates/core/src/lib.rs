//! Significant-digit statistics and the random models behind them.
//!
//! This crate is `no_std` (it needs `alloc`). It contains:
//!
//! - [`digits`]: exact significant-digit extraction, Benford reference
//!   probabilities and digit histograms;
//! - [`gof`]: goodness-of-fit statistics (chi-square, MAD, total variation)
//!   and the combined [`gof::FitReport`];
//! - [`special`]: regularized incomplete gamma and the chi-square survival
//!   function;
//! - [`rng`]: the seeded, splittable [`rng::RandomStream`];
//! - [`samplers`]: Porter-Thomas, exponential, log-normal and multiplicative
//!   cascade strength generators;
//! - [`linalg`]: symmetric matrices and a cyclic Jacobi eigensolver;
//! - [`rmt`]: GOE / bi-Gaussian Hamiltonians and simulated transition arrays.
//!
//! File formats and the command-line tool live in the `digitlaw` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod digits;
mod error;
pub mod gof;
pub mod linalg;
pub mod rmt;
pub mod rng;
pub mod samplers;
pub mod special;

pub use crate::digits::{
    benford_prob_first, benford_prob_ndigits, digit_histogram, first_digit, significant_digits,
    significant_digits_scaled, DigitDistribution, DigitHistogram, DigitTuple,
};
pub use crate::error::{Error, Result};
pub use crate::gof::{conformance_report, FitReport};
pub use crate::linalg::{symmetric_eigen, EigenDecomposition, SymMatrix};
pub use crate::rmt::{simulate_transition_array, Ensemble, GoeConfig, Line, TransitionArray};
pub use crate::rng::RandomStream;
pub use crate::samplers::{FactorLaw, StrengthLaw, StrengthSample};
