//! Single-setting randomized-measurement estimation of nonlinear state
//! properties from collision statistics.
//!
//! A fixed random unitary is applied to many copies of a state and each copy
//! is measured in the computational basis. Coincidences among the outcomes
//! estimate `Tr(ρᵗ)`, `Tr(Oρᵗ)` and partial-transpose moments. Everything here
//! is simulated exactly at desk scale and checked against brute-force oracles.

// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod estimators;
pub mod inversion;
pub mod models;
pub mod oracle;
pub mod protocol;
pub mod qcore;
pub mod randomness;
pub mod sampler;

pub use error::{Error, Result};

/// Crate version, recorded in run summaries.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

// The guide's snippets run as doc-tests.
#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/quantum-objects.md")]
    mod quantum_objects {}
    #[doc = include_str!("../../../book/src/collision-estimators.md")]
    mod collision_estimators {}
    #[doc = include_str!("../../../book/src/inversion.md")]
    mod inversion {}
    #[doc = include_str!("../../../book/src/observables.md")]
    mod observables {}
    #[doc = include_str!("../../../book/src/partial-transpose.md")]
    mod partial_transpose {}
    #[doc = include_str!("../../../book/src/applications.md")]
    mod applications {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/reproducibility.md")]
    mod reproducibility {}
}
