//! Exact and Monte Carlo laboratory for the distributions on Boolean
//! functions induced by uniform random And/Or trees.
//!
//! Two models are covered throughout:
//!
//! * [`ModelTag::G`]: uniform over labelled trees of size `n` whose leaves
//!   carry literals on the variables `x1..xk`;
//! * [`ModelTag::E`]: uniform over equivalence classes of such trees, where
//!   two trees are equivalent when one can be relabelled and negated, without
//!   collision, into the other.
//!
//! All counts and probabilities are exact ([`BigCount`], [`ExactRatio`]);
//! floating point only shows up in reports and asymptotic comparisons.

pub mod boolfn;
pub mod cli;
pub mod combinatorics;
pub mod distribution;
mod error;
pub mod patterns;
pub mod quotient;
pub mod report;
pub mod sampling;
pub mod tree;
pub mod verify;

pub use boolfn::{FunctionClassKey, TruthTable};
pub use combinatorics::{BigCount, ExactRatio, ModelTag};
pub use error::{Error, Result};
pub use quotient::TreeClassKey;
pub use tree::{AndOrTree, Assignment, Connective, Literal, Shape};

/// Default cap on the number of objects an exhaustive enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 100_000_000;
