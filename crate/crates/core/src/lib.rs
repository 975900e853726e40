//! Non-monotone submodular maximization under a knapsack constraint with
//! low adaptive complexity.
//!
//! The main entry point is [`ast::ast`], the alternate-threshold algorithm: it
//! grows two disjoint solutions against a geometric grid of density
//! thresholds, each step delegating to the [`randbatch`] threshold sampler,
//! then boosts every prefix of the two solutions with its best single
//! augmentation. All oracle access goes through [`oracle::CountingOracle`],
//! which counts queries and adaptive rounds.

pub mod ast;
pub mod baselines;
pub mod error;
pub mod estimator;
pub mod instance;
pub mod objectives;
pub mod oracle;
pub mod randbatch;
pub mod unsubmax;

pub use error::{Error, Result};
pub use instance::{ElementId, ElementSet, KnapsackInstance};
pub use oracle::{CountingOracle, Evaluator, Objective, QueryLedger};
