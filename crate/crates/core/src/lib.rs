//! Exact matrix models for the Jucys–Murphy element `X = Σ_j (j, n+1)` and the
//! corner projection `P` over the group algebra of `S_n`, with the free
//! probability machinery needed to compare their mixed moments against a
//! free pair.
//!
//! The core is generic over the coefficient type ([`Scalar`] /
//! [`ExactScalar`]); the aliases below fix the exact big-rational instances
//! used throughout the CLI and the acceptance suite.

pub mod characters;
pub mod error;
pub mod free_prob;
pub mod model;
pub mod partitions;
pub mod scalar;
pub mod symmetric;

pub use error::{Error, Result};
pub use scalar::{ExactScalar, Scalar};

/// Arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

pub type Element = symmetric::GroupAlgebraElement<Rational>;
pub type Measure = free_prob::AtomicMeasure<Rational>;
pub type Moments = free_prob::MomentSequence<Rational>;
pub type Cumulants = free_prob::CumulantSequence<Rational>;
pub type Matrix = model::JmMatrix<Rational>;

pub type Measure64 = free_prob::AtomicMeasure<f64>;
pub type Moments64 = free_prob::MomentSequence<f64>;
pub type Cumulants64 = free_prob::CumulantSequence<f64>;
