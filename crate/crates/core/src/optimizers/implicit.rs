use super::{IterateState, OptimizerSpec};
use crate::error::{Error, Result};
use crate::numcore::{DenseVector, Lu, Rng};
use crate::problems::{draw_noise, NoiseModel, QuadraticProblem};

/// Pivot threshold (relative to `‖I + ηA‖_max`) below which the proximal system is
/// reported as singular.
const PIVOT_TOL: f64 = 1e-14;

/// Cached factorization of `I + ηA` for repeated proximal steps.
#[derive(Debug, Clone)]
pub struct ImplicitQuadratic {
    eta: f64,
    lu: Lu,
}

impl ImplicitQuadratic {
    /// Fails with [`Error::Singular`] when `1 + ηλ ≈ 0` for some eigenvalue.
    pub fn new(prob: &QuadraticProblem, eta: f64) -> Result<Self> {
        let m = prob.a().shifted_identity(eta);
        Ok(Self {
            eta,
            lu: Lu::factor(&m, PIVOT_TOL)?,
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    fn check(&self, spec: &OptimizerSpec) -> Result<()> {
        if spec.eta != self.eta {
            return Err(Error::InvalidArgument(format!(
                "factorization built for eta = {}, spec has {}",
                self.eta, spec.eta
            )));
        }
        Ok(())
    }

    fn finish(
        &self,
        state: &IterateState,
        mut x: DenseVector,
        spec: &OptimizerSpec,
        rng: &mut Rng,
    ) -> IterateState {
        if spec.noise_sigma > 0.0 {
            let eps = draw_noise(NoiseModel::new(spec.noise_sigma), x.len(), rng);
            x.axpy(-spec.eta, &eps);
        }
        state.advance(x)
    }

    /// `(I + ηA) x_{t+1} = x_t + ηb`, then `x_{t+1} −= η ε_t` when noise is on.
    pub fn ppa_step(
        &self,
        state: &IterateState,
        prob: &QuadraticProblem,
        spec: &OptimizerSpec,
        rng: &mut Rng,
    ) -> Result<IterateState> {
        self.check(spec)?;
        let rhs: Vec<f64> = state
            .x_curr
            .iter()
            .zip(prob.b().iter())
            .map(|(x, b)| x + spec.eta * b)
            .collect();
        let x = self.lu.solve(&rhs.into())?;
        Ok(self.finish(state, x, spec, rng))
    }

    /// `(I + ηA) x_{t+1} = (1+β) x_t − β x_{t−1} + ηb`, then `x_{t+1} −= η ε_t`.
    pub fn ppam_step(
        &self,
        state: &IterateState,
        prob: &QuadraticProblem,
        spec: &OptimizerSpec,
        rng: &mut Rng,
    ) -> Result<IterateState> {
        self.check(spec)?;
        let beta = spec.beta;
        let rhs: Vec<f64> = state
            .x_curr
            .iter()
            .zip(state.x_prev.iter())
            .zip(prob.b().iter())
            .map(|((x, xp), b)| ((1.0 + beta) * x - beta * xp) + spec.eta * b)
            .collect();
        let x = self.lu.solve(&rhs.into())?;
        Ok(self.finish(state, x, spec, rng))
    }
}

/// One proximal step on a quadratic. Factors `I + ηA` on every call; the driver
/// caches it via [`ImplicitQuadratic`].
pub fn ppa_step_quadratic(
    state: &IterateState,
    prob: &QuadraticProblem,
    spec: &OptimizerSpec,
    rng: &mut Rng,
) -> Result<IterateState> {
    ImplicitQuadratic::new(prob, spec.eta)?.ppa_step(state, prob, spec, rng)
}

/// One proximal step with heavy-ball momentum on a quadratic.
pub fn ppam_step_quadratic(
    state: &IterateState,
    prob: &QuadraticProblem,
    spec: &OptimizerSpec,
    rng: &mut Rng,
) -> Result<IterateState> {
    ImplicitQuadratic::new(prob, spec.eta)?.ppam_step(state, prob, spec, rng)
}
