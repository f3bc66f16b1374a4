use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numcore::{DenseVector, Rng};
use crate::optimizers::{run, Algo, OptimizerSpec, Problem};
use crate::problems::{make_glm, MeanFn};

/// Where each run starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartPoint {
    Zero,
    /// The generating parameter `x*`.
    Truth,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlmBenchConfig {
    pub p: usize,
    pub n: usize,
    pub kappa: f64,
    pub mean_fn: MeanFn,
    pub noise_level: f64,
    pub batch_size: usize,
    pub beta: f64,
    pub eta_list: Vec<f64>,
    pub max_iters: usize,
    pub precision_target: f64,
    /// Must be odd.
    pub trials: usize,
    pub seed: u64,
    pub algos: Vec<Algo>,
    pub start: StartPoint,
}

impl GlmBenchConfig {
    /// Four methods, batch 10, `β = 0.9`, `η ∈ {10⁻³, …, 10³}`, target `ε = 0.01`
    /// within `10⁴` iterations, five trials.
    pub fn figure_protocol(p: usize, n: usize, kappa: f64, mean_fn: MeanFn, seed: u64) -> Self {
        Self {
            p,
            n,
            kappa,
            mean_fn,
            noise_level: if mean_fn == MeanFn::Identity {
                1e-3
            } else {
                0.0
            },
            batch_size: 10,
            beta: 0.9,
            eta_list: decade_etas(-3, 3),
            max_iters: 10_000,
            precision_target: 0.01,
            trials: 5,
            seed,
            algos: vec![Algo::Sppam, Algo::Sppa, Algo::Sgdm, Algo::Sgd],
            start: StartPoint::Zero,
        }
    }

    /// Value recorded for a trial that never reached the target.
    pub fn sentinel(&self) -> usize {
        self.max_iters + 1
    }

    fn validate(&self) -> Result<()> {
        if self.eta_list.is_empty() {
            return Err(Error::InvalidArgument("eta list is empty".into()));
        }
        if self.trials == 0 || self.trials % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "trials must be odd, got {}",
                self.trials
            )));
        }
        if self.algos.is_empty() {
            return Err(Error::InvalidArgument("no algorithms selected".into()));
        }
        if let Some(a) = self
            .algos
            .iter()
            .find(|a| matches!(a, Algo::Ppa | Algo::Ppam))
        {
            return Err(Error::Incompatible(format!("{a} does not run on GLM data")));
        }
        Ok(())
    }
}

/// `10^lo, 10^(lo+1), …, 10^hi`
pub fn decade_etas(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi)
        .map(|k| format!("1e{k}").parse().unwrap())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub algo: Algo,
    pub eta: f64,
    pub trial: usize,
    /// Steps to reach the target; `None` if it was never reached.
    pub iters: Option<usize>,
    pub final_precision: f64,
    pub diverged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSummary {
    pub algo: Algo,
    pub eta: f64,
    /// Median over trials, counting misses as `max_iters + 1`.
    pub median_iters: usize,
    pub reached: usize,
    pub diverged: usize,
}

impl BenchSummary {
    pub fn all_reached(&self, trials: usize) -> bool {
        self.reached == trials
    }
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub config: GlmBenchConfig,
    /// Ordered by algorithm, then η, then trial.
    pub rows: Vec<BenchRow>,
    /// Ordered by algorithm, then η.
    pub summary: Vec<BenchSummary>,
}

impl BenchReport {
    pub fn summary_for(&self, algo: Algo, eta: f64) -> Option<&BenchSummary> {
        self.summary.iter().find(|s| s.algo == algo && s.eta == eta)
    }

    /// `algo,eta,trial,iters,final_precision,diverged`; misses are written with
    /// the sentinel `max_iters + 1`.
    pub fn write_rows_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "algo,eta,trial,iters,final_precision,diverged")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{:e},{},{},{:e},{}",
                r.algo,
                r.eta,
                r.trial,
                r.iters.unwrap_or(self.config.sentinel()),
                r.final_precision,
                r.diverged as u8
            )?;
        }
        Ok(())
    }

    /// `algo,eta,median_iters`
    pub fn write_summary_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "algo,eta,median_iters")?;
        for s in &self.summary {
            writeln!(w, "{},{:e},{}", s.algo, s.eta, s.median_iters)?;
        }
        Ok(())
    }
}

fn median(mut v: Vec<usize>) -> usize {
    v.sort_unstable();
    v[v.len() / 2]
}

/// Runs every algorithm at every step size on `trials` freshly generated datasets.
/// Within a trial all runs share the dataset and the mini-batch stream.
pub fn glm_bench(config: &GlmBenchConfig) -> Result<BenchReport> {
    config.validate()?;
    let datasets = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            make_glm(
                config.p,
                config.n,
                config.kappa,
                config.mean_fn,
                config.noise_level,
                &mut Rng::derive(config.seed, &[0, t as u64]),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let n_eta = config.eta_list.len();
    let jobs: Vec<(usize, usize, usize)> = (0..config.algos.len())
        .flat_map(|a| (0..n_eta).flat_map(move |e| (0..config.trials).map(move |t| (a, e, t))))
        .collect();
    let rows = jobs
        .into_par_iter()
        .map(|(a, e, t)| {
            let algo = config.algos[a];
            let eta = config.eta_list[e];
            let data = &datasets[t];
            let spec = OptimizerSpec::new(algo, eta)
                .beta(if algo.has_momentum() {
                    config.beta
                } else {
                    0.0
                })
                .batch_size(config.batch_size)
                .max_iters(config.max_iters)
                .target(config.precision_target);
            let x0 = match config.start {
                StartPoint::Zero => DenseVector::zeros(config.p),
                StartPoint::Truth => data
                    .x_star()
                    .cloned()
                    .ok_or_else(|| Error::InvalidArgument("dataset has no x*".into()))?,
            };
            let mut rng = Rng::derive(config.seed, &[1, t as u64, e as u64]);
            let traj = run(Problem::Glm(data), &spec, x0, &mut rng)?;
            Ok(BenchRow {
                algo,
                eta,
                trial: t,
                iters: traj.iters_to_tol,
                final_precision: traj.final_precision().unwrap_or(f64::INFINITY),
                diverged: traj.diverged(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = rows
        .chunks(config.trials)
        .map(|chunk| BenchSummary {
            algo: chunk[0].algo,
            eta: chunk[0].eta,
            median_iters: median(
                chunk
                    .iter()
                    .map(|r| r.iters.unwrap_or(config.sentinel()))
                    .collect(),
            ),
            reached: chunk.iter().filter(|r| r.iters.is_some()).count(),
            diverged: chunk.iter().filter(|r| r.diverged).count(),
        })
        .collect();
    Ok(BenchReport {
        config: config.clone(),
        rows,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(start: StartPoint) -> GlmBenchConfig {
        GlmBenchConfig {
            p: 5,
            n: 30,
            kappa: 2.0,
            mean_fn: MeanFn::Identity,
            noise_level: 0.0,
            batch_size: 5,
            beta: 0.5,
            eta_list: vec![0.01, 1.0],
            max_iters: 300,
            precision_target: 0.01,
            trials: 3,
            seed: 9,
            algos: vec![Algo::Sppam, Algo::Sgd],
            start,
        }
    }

    #[test]
    fn decades() {
        assert_eq!(
            decade_etas(-3, 3),
            vec![1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3]
        );
    }

    #[test]
    fn start_at_truth_needs_no_steps() {
        let r = glm_bench(&tiny(StartPoint::Truth)).unwrap();
        assert!(r.rows.iter().all(|row| row.iters == Some(0)));
        assert!(r.summary.iter().all(|s| s.median_iters == 0));
    }

    #[test]
    fn shape_and_sentinel() {
        let cfg = tiny(StartPoint::Zero);
        let r = glm_bench(&cfg).unwrap();
        assert_eq!(r.rows.len(), 2 * 2 * 3);
        assert_eq!(r.summary.len(), 4);
        for s in &r.summary {
            assert!(s.median_iters <= cfg.sentinel());
            if s.reached == 3 {
                assert!(s.median_iters < cfg.sentinel());
            }
            if s.reached == 0 {
                assert_eq!(s.median_iters, cfg.sentinel());
            }
        }
        let mut out = Vec::new();
        r.write_rows_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap().lines().count(), 13);
    }

    #[test]
    fn median_counts_misses() {
        assert_eq!(median(vec![5, 301, 301]), 301);
        assert_eq!(median(vec![7, 3, 301]), 7);
    }

    #[test]
    fn even_trials_rejected() {
        let mut cfg = tiny(StartPoint::Zero);
        cfg.trials = 4;
        assert!(glm_bench(&cfg).is_err());
    }

    #[test]
    fn reproducible() {
        let a = glm_bench(&tiny(StartPoint::Zero)).unwrap();
        let b = glm_bench(&tiny(StartPoint::Zero)).unwrap();
        assert_eq!(a.rows, b.rows);
    }
}
