//! Objectives and stochastic oracles.

mod glm;
mod noise;
mod quadratic;

pub use glm::{glm_grad, make_glm, GlmDataset, MeanFn, POISSON_MAX_LINEAR_PREDICTOR};
pub use noise::{draw_noise, NoiseModel};
pub use quadratic::{quad_grad, quad_value, QuadraticProblem};
