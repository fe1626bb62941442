//! Exact rate-distortion-cost computations for lossy source coding when the
//! decoder's side information comes from an action-controlled channel (a side
//! information "vending machine").
//!
//! The crate evaluates single-letter rate regions over finite alphabets and
//! searches auxiliary-variable schemes for their boundary points:
//!
//! * [`info`] — labeled joint pmfs and exact information measures, the carrier
//!   for every rate expression below.
//! * [`problem`] — declarative problem descriptions: two distributed encoders
//!   or a three-node cascade, each with an action-dependent side-information
//!   channel, per-symbol action costs, and distortion budgets.
//! * [`search`] — deterministic simplex-grid enumeration plus seeded local
//!   refinement, the generic optimizer behind all solvers.
//! * [`distributed`] — the two-encoder regions: non-causal and causal side
//!   information, the encoder-1-controlled-action variant with one lossless
//!   source, contra-polymatroid corner points, and convexification.
//! * [`cascade`] — the cascade region with causal side information at the
//!   last node.
//! * [`dsbs`] — the doubly symmetric binary source example with a switched
//!   side-information channel, in closed form and as a constructed problem.
//!
//! Information-measure and problem types are generic over the scalar via
//! [`Scalar`]; the solvers work in `f64`. The `*64`/`*32` aliases below pick
//! a concrete scalar.

pub mod cascade;
pub mod distributed;
pub mod dsbs;
pub mod info;
pub mod problem;
pub mod report;
pub mod scalar;
pub mod search;

pub use report::{RatePoint, SearchStats, SolveReport};
pub use scalar::Scalar;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A pmf or table failed a construction invariant.
    #[error("invalid distribution: {0}")]
    InvalidPmf(String),
    /// A query named unknown, overlapping, or empty variable sets.
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    /// A chain-rule composition was ill-formed.
    #[error("composition error: {0}")]
    Composition(String),
    /// A deterministic-map enumeration would exceed the configured cap.
    #[error("enumeration budget exceeded: {needed} maps > cap {cap}; reduce auxiliary cardinalities")]
    BudgetExceeded { needed: u128, cap: u128 },
    /// An operation was called outside its contract.
    #[error("contract violation: {0}")]
    Contract(String),
    /// A numeric argument was outside its domain.
    #[error("domain error: {0}")]
    Domain(String),
}

/// Concrete `f64` aliases (the precision all solvers use).
pub type JointPmf64 = info::JointPmf<f64>;
pub type ConditionalPmf64 = info::ConditionalPmf<f64>;
pub type DistributedProblem64 = problem::DistributedProblem<f64>;
pub type CascadeProblem64 = problem::CascadeProblem<f64>;
pub type DistortionTable64 = problem::DistortionTable<f64>;

/// Concrete `f32` aliases for the measure kernel.
pub type JointPmf32 = info::JointPmf<f32>;
pub type ConditionalPmf32 = info::ConditionalPmf<f32>;
