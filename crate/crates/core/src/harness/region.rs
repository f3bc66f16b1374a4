use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numcore::{make_quadratic, DenseVector, Rng};
use crate::optimizers::{run, Algo, OptimizerSpec, Problem};
use crate::problems::QuadraticProblem;
use crate::theory::{gd_stable, gdm_stable, ppa_stable, ppam_stable, StabilityVerdict};

/// Closed grid `lo, lo + step, …` up to `hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl GridRange {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !lo.is_finite() || !hi.is_finite() || hi < lo {
            return Err(Error::InvalidArgument(format!(
                "bad grid range [{lo}, {hi}] with step {step}"
            )));
        }
        Ok(Self { lo, hi, step })
    }

    /// `⌊(hi − lo)/step + 1⌋`, with a little slack for decimal steps.
    pub fn count(&self) -> usize {
        ((self.hi - self.lo) / self.step + 1.0 + 1e-9).floor() as usize
    }

    pub fn value(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.step
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count()).map(|i| self.value(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionSweepConfig {
    pub p: usize,
    pub kappa: f64,
    pub eta_range: GridRange,
    pub beta_range: GridRange,
    pub iters: usize,
    /// Ceiling of the reported metric.
    pub clip: f64,
    pub seed: u64,
}

impl RegionSweepConfig {
    /// `η, β ∈ [−5, 5]` in steps of 0.2, 100 iterations, clip at 10.
    pub fn figure_scale(p: usize, kappa: f64, seed: u64) -> Self {
        let r = GridRange {
            lo: -5.0,
            hi: 5.0,
            step: 0.2,
        };
        Self {
            p,
            kappa,
            eta_range: r,
            beta_range: r,
            iters: 100,
            clip: 10.0,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionCell {
    pub eta: f64,
    pub beta: f64,
    /// Final `‖x_T − x*‖²`, clipped to `[0, clip]`.
    pub metric: f64,
    /// `metric < clip` and the final error is below the initial one.
    pub empirical_converged: bool,
    pub theoretical: StabilityVerdict,
}

impl RegionCell {
    /// Empirical outcome equals the predicate.
    pub fn agrees(&self) -> bool {
        self.empirical_converged == self.theoretical.predicate
    }
}

#[derive(Debug, Clone)]
pub struct RegionGrid {
    pub algo: Algo,
    pub n_eta: usize,
    pub n_beta: usize,
    pub initial_error: f64,
    /// η-major: cell `(i, j)` sits at index `i * n_beta + j`.
    pub cells: Vec<RegionCell>,
}

impl RegionGrid {
    pub fn cell(&self, i_eta: usize, j_beta: usize) -> &RegionCell {
        &self.cells[i_eta * self.n_beta + j_beta]
    }

    /// Fraction of non-boundary cells where empirical and theoretical agree, with
    /// the number of cells counted.
    pub fn agreement(&self) -> (f64, usize) {
        let judged: Vec<&RegionCell> = self
            .cells
            .iter()
            .filter(|c| !c.theoretical.boundary)
            .collect();
        let agree = judged.iter().filter(|c| c.agrees()).count();
        (agree as f64 / judged.len().max(1) as f64, judged.len())
    }

    /// `eta,beta,metric,empirical,theoretical,boundary`
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "eta,beta,metric,empirical,theoretical,boundary")?;
        for c in &self.cells {
            writeln!(
                w,
                "{},{},{:e},{},{},{}",
                fmt_axis(c.eta),
                fmt_axis(c.beta),
                c.metric,
                c.empirical_converged as u8,
                c.theoretical.predicate as u8,
                c.theoretical.boundary as u8
            )?;
        }
        Ok(())
    }
}

/// Grid coordinates rounded to 12 significant decimals so `0.1 * 3` prints as `0.3`.
fn fmt_axis(v: f64) -> String {
    let r = (v * 1e12).round() / 1e12;
    if r == 0.0 {
        "0".to_string()
    } else {
        format!("{r}")
    }
}

fn verdict(algo: Algo, eta: f64, beta: f64, prob: &QuadraticProblem) -> StabilityVerdict {
    let s = prob.spectrum();
    match algo {
        Algo::Sgd => gd_stable(eta, s),
        Algo::Sgdm => gdm_stable(eta, beta, s),
        Algo::Ppa => ppa_stable(eta, s),
        _ => ppam_stable(eta, beta, s),
    }
}

/// Runs a deterministic method over an `(η, β)` grid on one shared quadratic
/// from one shared Gaussian start. GD and PPA ignore the β axis.
pub fn region_sweep(algo: Algo, config: &RegionSweepConfig) -> Result<RegionGrid> {
    if !matches!(algo, Algo::Sgd | Algo::Sgdm | Algo::Ppa | Algo::Ppam) {
        return Err(Error::Incompatible(format!(
            "region sweeps take gd, gdm, ppa or ppam, got {algo}"
        )));
    }
    if !(config.clip > 0.0) {
        return Err(Error::InvalidArgument("clip must be > 0".into()));
    }
    let prob = make_quadratic(config.p, config.kappa, &mut Rng::derive(config.seed, &[0]))?;
    let x0 = DenseVector::from_vec(Rng::derive(config.seed, &[1]).normal_vec(config.p));
    let initial_error = x0.dist_sq(prob.x_star());
    let etas = config.eta_range.values();
    let betas = config.beta_range.values();
    let n_beta = betas.len();
    let cells = (0..etas.len() * n_beta)
        .into_par_iter()
        .map(|k| {
            let (eta, beta_axis) = (etas[k / n_beta], betas[k % n_beta]);
            let beta = if algo.has_momentum() { beta_axis } else { 0.0 };
            let spec = OptimizerSpec::new(algo, eta)
                .beta(beta)
                .max_iters(config.iters);
            let mut rng = Rng::derive(config.seed, &[2, k as u64]);
            let final_error = match run(Problem::Quadratic(&prob), &spec, x0.clone(), &mut rng) {
                Ok(t) => t.final_error().unwrap_or(f64::INFINITY),
                // 1 + ηλ = 0: the step is undefined
                Err(Error::Singular { .. }) => f64::INFINITY,
                Err(e) => return Err(e),
            };
            let metric = if final_error.is_nan() {
                config.clip
            } else {
                final_error.min(config.clip)
            };
            Ok(RegionCell {
                eta,
                beta: beta_axis,
                metric,
                empirical_converged: metric < config.clip && final_error < initial_error,
                theoretical: verdict(algo, eta, beta, &prob),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RegionGrid {
        algo,
        n_eta: etas.len(),
        n_beta,
        initial_error,
        cells,
    })
}
