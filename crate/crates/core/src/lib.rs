//! Numerical toolkit for the random subsequence model.
//!
//! The model counts order-preserving embeddings of a binary string `y` into a
//! longer binary string `x`. This crate provides exact and log-domain partition
//! functions, disorder samplers for the null and planted laws, closed-form
//! annealed free energies, deletion-channel capacity bounds, Monte Carlo
//! estimators of quenched free energies and block-alignment statistics.
//!
//! All free energies and capacities are in nats. String positions are 0-based.

pub mod alignment;
pub mod annealed;
mod bitstring;
pub mod capacity;
mod error;
pub mod model;
pub mod montecarlo;
pub mod partition;
pub mod special;

pub use bitstring::BitString;
pub use error::{Error, Result};
pub use model::Seed;
