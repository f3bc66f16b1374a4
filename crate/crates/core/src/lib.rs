//! Stochastic proximal point methods with heavy-ball momentum.
//!
//! * [`numcore`]: dense linear algebra, seeded randomness, conditioned problems
//! * [`problems`]: quadratics and generalized linear models
//! * [`optimizers`]: SGD, SGDM, PPA, PPAM, SPPA, SPPAM and a common driver
//! * [`theory`]: stability predicates and contraction bounds
//! * [`harness`]: region sweeps, GLM benchmarks and the verification suite

// `!(x > 0.0)` is used on purpose so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod harness;
pub mod numcore;
pub mod optimizers;
pub mod problems;
pub mod theory;

pub use error::{Error, Result};
