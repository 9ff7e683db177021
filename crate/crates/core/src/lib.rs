//! Tail-probability bounds for nonnegative random variables.
//!
//! Alongside the classical Markov, moment and Chernoff bounds this crate
//! computes their restricted-expectation versions, which replace `E(φ(X))`
//! by `E(φ(X)·1{X > ν})` and always sit between the true tail and the
//! classical bound:
//!
//! ```text
//! Pr{X > ν} ≤ E(φ(X)·1{X > ν}) / φ(ν) ≤ E(φ(X)) / φ(ν)
//! ```
//!
//! ```
//! use tailbound::{markov_bounds, Distribution};
//!
//! let x = Distribution::exponential(1.0).unwrap();
//! let row = markov_bounds(&x, 6.908).unwrap();
//! assert!(row.tail <= row.enhanced && row.enhanced <= row.traditional);
//! assert!(row.traditional / row.enhanced > 100.0);
//! ```

pub mod bounds;
pub mod distribution;
pub mod empirical;
pub mod error;
pub mod numerics;

pub use bounds::{
    chernoff_bounds, markov_bounds, moment_bounds, optimize_chernoff, BoundKind, ChernoffResult,
    ChernoffVariant, ComparisonRow,
};
pub use distribution::{Distribution, MomentOrder, Shape};
pub use empirical::{
    empirical_bounds, empirical_restricted_moment, monte_carlo_verify, Sample, VerificationReport,
    VerificationRow,
};
pub use error::{Error, Result};
pub use numerics::QuadratureConfig;
