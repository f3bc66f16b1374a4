use crate::numcore::{DenseVector, Rng};

/// Additive gradient noise `ε` with `𝔼ε = 0` and `𝔼‖ε‖² = σ²`, realised as an
/// isotropic Gaussian with per-coordinate variance `σ²/p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub sigma: f64,
}

impl NoiseModel {
    pub fn new(sigma: f64) -> Self {
        assert!(sigma >= 0.0, "noise level must be >= 0");
        Self { sigma }
    }

    pub fn draw(&self, p: usize, rng: &mut Rng) -> DenseVector {
        draw_noise(*self, p, rng)
    }
}

pub fn draw_noise(model: NoiseModel, p: usize, rng: &mut Rng) -> DenseVector {
    if model.sigma == 0.0 {
        return DenseVector::zeros(p);
    }
    let sd = model.sigma / (p as f64).sqrt();
    DenseVector::from_vec((0..p).map(|_| sd * rng.normal()).collect())
}
