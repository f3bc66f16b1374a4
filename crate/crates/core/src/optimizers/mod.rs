//! Update rules and the common driver.
//!
//! | algo  | quadratic                         | GLM                              |
//! |-------|-----------------------------------|----------------------------------|
//! | SGD   | full gradient step                | mini-batch gradient step         |
//! | SGDM  | heavy-ball step                   | mini-batch heavy-ball step       |
//! | PPA   | `(I+ηA)⁻¹(x + ηb)` (+ noise)      | rejected                         |
//! | PPAM  | `(I+ηA)⁻¹((1+β)x − βx₋ + ηb)`     | rejected                         |
//! | SPPA  | PPA with additive noise           | exact implicit mini-batch step   |
//! | SPPAM | PPAM with additive noise          | exact implicit momentum step     |

mod driver;
mod explicit;
mod glm_implicit;
mod implicit;

use std::fmt;
use std::str::FromStr;

pub use driver::{run, run_with_timing, write_trajectory_csv, Termination, Trajectory};
pub use explicit::{sgd_step, sgdm_step};
pub use glm_implicit::{
    glm_implicit_scalar, solve_batch_implicit, sppa_glm_step, sppam_glm_step, BatchImplicit,
    ImplicitScalar, MAX_BRACKET_DOUBLINGS,
};
pub use implicit::{ppa_step_quadratic, ppam_step_quadratic, ImplicitQuadratic};

use crate::error::{Error, Result};
use crate::numcore::DenseVector;
use crate::problems::{GlmDataset, QuadraticProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algo {
    Sgd,
    Sgdm,
    Ppa,
    Ppam,
    Sppa,
    Sppam,
}

impl Algo {
    pub const ALL: [Algo; 6] = [
        Algo::Sgd,
        Algo::Sgdm,
        Algo::Ppa,
        Algo::Ppam,
        Algo::Sppa,
        Algo::Sppam,
    ];

    pub fn has_momentum(self) -> bool {
        matches!(self, Algo::Sgdm | Algo::Ppam | Algo::Sppam)
    }

    pub fn is_implicit(self) -> bool {
        !matches!(self, Algo::Sgd | Algo::Sgdm)
    }

    pub fn name(self) -> &'static str {
        match self {
            Algo::Sgd => "sgd",
            Algo::Sgdm => "sgdm",
            Algo::Ppa => "ppa",
            Algo::Ppam => "ppam",
            Algo::Sppa => "sppa",
            Algo::Sppam => "sppam",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sgd" | "gd" => Ok(Algo::Sgd),
            "sgdm" | "gdm" => Ok(Algo::Sgdm),
            "ppa" | "igd" => Ok(Algo::Ppa),
            "ppam" => Ok(Algo::Ppam),
            "sppa" | "isgd" => Ok(Algo::Sppa),
            "sppam" => Ok(Algo::Sppam),
            other => Err(Error::InvalidArgument(format!(
                "unknown algorithm '{other}'"
            ))),
        }
    }
}

/// Hyperparameters shared by every update rule.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerSpec {
    pub algo: Algo,
    /// Step size. Negative values are allowed on quadratics for region sweeps.
    pub eta: f64,
    /// Momentum; ignored (and required to be 0) for SGD, PPA and SPPA.
    pub beta: f64,
    pub batch_size: usize,
    /// Standard deviation scale of the additive noise for implicit quadratic methods.
    pub noise_sigma: f64,
    pub max_iters: usize,
    /// Divergence is declared when `‖x‖_∞` exceeds this or goes non-finite.
    pub divergence_threshold: f64,
    /// Residual tolerance of the implicit GLM solves.
    pub root_tol: f64,
    /// Stop once the tracked metric (precision for GLMs, squared error for
    /// quadratics) reaches this level.
    pub target: Option<f64>,
}

impl OptimizerSpec {
    pub fn new(algo: Algo, eta: f64) -> Self {
        Self {
            algo,
            eta,
            beta: 0.0,
            batch_size: 1,
            noise_sigma: 0.0,
            max_iters: 1000,
            divergence_threshold: 1e10,
            root_tol: 1e-12,
            target: None,
        }
    }

    pub fn beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn batch_size(mut self, m: usize) -> Self {
        self.batch_size = m;
        self
    }

    pub fn noise_sigma(mut self, sigma: f64) -> Self {
        self.noise_sigma = sigma;
        self
    }

    pub fn max_iters(mut self, iters: usize) -> Self {
        self.max_iters = iters;
        self
    }

    pub fn target(mut self, target: f64) -> Self {
        self.target = Some(target);
        self
    }

    pub fn root_tol(mut self, tol: f64) -> Self {
        self.root_tol = tol;
        self
    }

    /// Same spec with a different algorithm, keeping every other field.
    pub fn with_algo(&self, algo: Algo) -> Self {
        Self {
            algo,
            ..self.clone()
        }
    }

    /// Checks the spec against a problem. Called once by the driver.
    pub fn validate(&self, problem: &Problem<'_>) -> Result<()> {
        if !self.eta.is_finite() || !self.beta.is_finite() {
            return Err(Error::InvalidArgument("eta and beta must be finite".into()));
        }
        if !self.algo.has_momentum() && self.beta != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "{} has no momentum term; beta must be 0",
                self.algo
            )));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidArgument("batch size must be >= 1".into()));
        }
        if !(self.noise_sigma >= 0.0) {
            return Err(Error::InvalidArgument("noise sigma must be >= 0".into()));
        }
        if !(self.root_tol > 0.0) {
            return Err(Error::InvalidArgument("root tolerance must be > 0".into()));
        }
        match problem {
            Problem::Quadratic(_) => {
                if !self.algo.is_implicit() && self.noise_sigma > 0.0 {
                    return Err(Error::Incompatible(
                        "additive noise is only modelled for implicit quadratic methods".into(),
                    ));
                }
            }
            Problem::Glm(data) => {
                if matches!(self.algo, Algo::Ppa | Algo::Ppam) {
                    return Err(Error::Incompatible(format!(
                        "{} is deterministic; use {} on GLM data",
                        self.algo,
                        if self.algo == Algo::Ppa {
                            "sppa"
                        } else {
                            "sppam"
                        }
                    )));
                }
                if self.batch_size > data.n() {
                    return Err(Error::InvalidArgument(format!(
                        "batch size {} exceeds n = {}",
                        self.batch_size,
                        data.n()
                    )));
                }
                if self.noise_sigma > 0.0 {
                    return Err(Error::Incompatible(
                        "GLM runs draw their noise from mini-batch sampling".into(),
                    ));
                }
                if self.algo.is_implicit() && !(self.eta > 0.0) {
                    return Err(Error::InvalidArgument(
                        "implicit GLM updates require eta > 0".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Problem handed to the step functions and the driver.
#[derive(Debug, Clone, Copy)]
pub enum Problem<'a> {
    Quadratic(&'a QuadraticProblem),
    Glm(&'a GlmDataset),
}

impl<'a> Problem<'a> {
    pub fn dim(&self) -> usize {
        match self {
            Problem::Quadratic(q) => q.dim(),
            Problem::Glm(d) => d.p(),
        }
    }

    pub fn x_star(&self) -> Option<&'a DenseVector> {
        match self {
            Problem::Quadratic(q) => Some(q.x_star()),
            Problem::Glm(d) => d.x_star(),
        }
    }
}

impl<'a> From<&'a QuadraticProblem> for Problem<'a> {
    fn from(q: &'a QuadraticProblem) -> Self {
        Problem::Quadratic(q)
    }
}

impl<'a> From<&'a GlmDataset> for Problem<'a> {
    fn from(d: &'a GlmDataset) -> Self {
        Problem::Glm(d)
    }
}

/// The two most recent iterates.
#[derive(Debug, Clone, PartialEq)]
pub struct IterateState {
    pub x_curr: DenseVector,
    pub x_prev: DenseVector,
    pub t: usize,
}

impl IterateState {
    /// Starts with `x_{-1} = x_0`.
    pub fn new(x0: DenseVector) -> Self {
        Self {
            x_prev: x0.clone(),
            x_curr: x0,
            t: 0,
        }
    }

    pub(crate) fn advance(&self, x_next: DenseVector) -> Self {
        Self {
            x_prev: self.x_curr.clone(),
            x_curr: x_next,
            t: self.t + 1,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x_curr.is_finite()
    }
}
