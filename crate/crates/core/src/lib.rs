//! Exact setfunction oracles, quotient profile sets and Hausdorff
//! diagnostics for quotient-convergence experiments.
//!
//! Subsets of a ground set `{0, …, n−1}` are `u64` bit masks. A quotient
//! point on `k` parts stores its value at `I ⊆ [k]` at index
//! `Σ_{i∈I} 2^{i−1}`; parts are 1-based in the text and 0-based bits in
//! code.

pub mod error;
pub mod field;
pub mod graphlim;
pub mod io;
pub mod limits;
pub mod matroid;
pub mod metric;
pub mod profiles;
pub mod rational;
pub mod setfn;

pub use error::{Error, Result};
pub use limits::Limits;
pub use rational::Rational;
