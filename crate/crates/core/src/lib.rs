//! Local dampening and shifted local dampening for differentially private
//! selection, with exponential-mechanism and permute-and-flip baselines.
//!
//! Modules:
//! - [`mechanism`]: problems, the dampening function, the four mechanisms and a budget accountant.
//! - [`sensitivity`]: sensitivity functions, wrappers, brute-force oracles and analysis checks.
//! - [`percentile`]: percentile selection over bounded numeric data.
//! - [`graph`]: egocentric betweenness centrality and private top-k.
//! - [`tree`]: private ID3 induction.
//! - [`harness`]: dataset loading, experiment grids, output and check suites.

pub mod error;
pub mod graph;
pub mod harness;
pub mod mechanism;
pub mod percentile;
pub mod rng;
pub mod sensitivity;
pub mod tree;

pub use error::{Error, Result};
