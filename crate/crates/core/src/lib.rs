//! Divergence-minimization fits on two non-statistical settings.
//!
//! * [`bose_model`] and [`bose_geometry`]: occupation-number data for an ideal
//!   Bose gas, fitted to the grand-canonical family in `(beta, mu)` by
//!   minimizing `ln Z(beta, mu) + beta * sum_j n_j (eps_j - mu)`, together with
//!   the metric and connection of the resulting two-dimensional manifold.
//! * [`density_core`], [`quantum_model`] and [`weak_measurement`]: finite
//!   dimensional density matrices, the quantum relative entropy, the
//!   diagonal conditional expectation, quantum exponential families and
//!   weak values of pre/post-selected states.
//!
//! [`schema`] holds the JSON wire types shared with the command-line tool.

pub mod bose_geometry;
pub mod bose_model;
pub mod density_core;
mod error;
pub mod quantum_model;
pub mod random;
pub mod schema;
pub mod weak_measurement;

pub use error::{Error, Result};
