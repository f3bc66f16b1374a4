use std::io::Write;
use std::time::Instant;

use super::{
    sgd_step, sgdm_step, sppa_glm_step, sppam_glm_step, Algo, ImplicitQuadratic, IterateState,
    OptimizerSpec, Problem,
};
use crate::error::{Error, Result};
use crate::numcore::{DenseVector, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Termination {
    ReachedTol,
    MaxIters,
    Diverged,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::ReachedTol => "reached_tol",
            Termination::MaxIters => "max_iters",
            Termination::Diverged => "diverged",
        }
    }
}

/// Per-step record of one run. Index `k` of `errors`/`precisions` belongs to
/// iterate `x_{k+1}`; the starting point is kept separately.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// `‖x_0 − x*‖²`, when `x*` is known.
    pub initial_error: Option<f64>,
    /// Precision of `x_0` (GLM only).
    pub initial_precision: Option<f64>,
    /// `‖x_t − x*‖²` for `t ≥ 1`; empty when `x*` is unknown.
    pub errors: Vec<f64>,
    /// `‖b − b̂‖²/‖b‖²` for `t ≥ 1`; empty for quadratics.
    pub precisions: Vec<f64>,
    pub termination: Termination,
    /// Number of steps taken when the target was reached.
    pub iters_to_tol: Option<usize>,
    pub final_x: DenseVector,
    /// Implicit-solver failure that ended the run, reported as divergence.
    pub breakdown: Option<Error>,
}

impl Trajectory {
    pub fn steps(&self) -> usize {
        self.errors.len().max(self.precisions.len())
    }

    pub fn final_error(&self) -> Option<f64> {
        self.errors.last().copied().or(self.initial_error)
    }

    pub fn final_precision(&self) -> Option<f64> {
        self.precisions.last().copied().or(self.initial_precision)
    }

    pub fn diverged(&self) -> bool {
        self.termination == Termination::Diverged
    }
}

enum Stepper<'a> {
    Explicit(Problem<'a>),
    Implicit(&'a crate::problems::QuadraticProblem, ImplicitQuadratic),
    Glm(&'a crate::problems::GlmDataset),
}

impl<'a> Stepper<'a> {
    fn new(problem: Problem<'a>, spec: &OptimizerSpec) -> Result<Self> {
        Ok(match (problem, spec.algo.is_implicit()) {
            (_, false) => Stepper::Explicit(problem),
            (Problem::Quadratic(q), true) => {
                Stepper::Implicit(q, ImplicitQuadratic::new(q, spec.eta)?)
            }
            (Problem::Glm(d), true) => Stepper::Glm(d),
        })
    }

    fn step(
        &self,
        state: &IterateState,
        spec: &OptimizerSpec,
        rng: &mut Rng,
    ) -> Result<IterateState> {
        match (self, spec.algo) {
            (Stepper::Explicit(p), Algo::Sgd) => sgd_step(state, p, spec, rng),
            (Stepper::Explicit(p), _) => sgdm_step(state, p, spec, rng),
            (Stepper::Implicit(q, solver), Algo::Ppa | Algo::Sppa) => {
                solver.ppa_step(state, q, spec, rng)
            }
            (Stepper::Implicit(q, solver), _) => solver.ppam_step(state, q, spec, rng),
            (Stepper::Glm(d), Algo::Sppa) => sppa_glm_step(state, d, spec, rng),
            (Stepper::Glm(d), _) => sppam_glm_step(state, d, spec, rng),
        }
    }
}

fn metrics(problem: &Problem<'_>, x: &DenseVector) -> Result<(Option<f64>, Option<f64>)> {
    let err = problem.x_star().map(|xs| {
        let e = x.dist_sq(xs);
        if e.is_nan() {
            f64::INFINITY
        } else {
            e
        }
    });
    let prec = match problem {
        Problem::Glm(d) => Some(d.precision(x)?),
        Problem::Quadratic(_) => None,
    };
    Ok((err, prec))
}

/// Metric compared against `spec.target`: precision on GLMs, squared error on
/// quadratics.
fn tracked(problem: &Problem<'_>, err: Option<f64>, prec: Option<f64>) -> Option<f64> {
    match problem {
        Problem::Glm(_) => prec,
        Problem::Quadratic(_) => err,
    }
}

fn exceeds(x: &DenseVector, threshold: f64) -> bool {
    !x.is_finite() || x.norm_inf() > threshold
}

fn run_inner(
    problem: Problem<'_>,
    spec: &OptimizerSpec,
    x0: DenseVector,
    rng: &mut Rng,
    mut clock: Option<(&Instant, &mut Vec<u64>)>,
) -> Result<Trajectory> {
    spec.validate(&problem)?;
    if x0.len() != problem.dim() {
        return Err(Error::DimensionMismatch {
            expected: problem.dim(),
            found: x0.len(),
        });
    }
    let stepper = Stepper::new(problem, spec)?;
    let (initial_error, initial_precision) = metrics(&problem, &x0)?;
    let mut traj = Trajectory {
        initial_error,
        initial_precision,
        errors: Vec::new(),
        precisions: Vec::new(),
        termination: Termination::MaxIters,
        iters_to_tol: None,
        final_x: x0.clone(),
        breakdown: None,
    };
    let reached = |m: Option<f64>| matches!((m, spec.target), (Some(v), Some(t)) if v <= t);
    if spec.max_iters > 0 && reached(tracked(&problem, initial_error, initial_precision)) {
        traj.termination = Termination::ReachedTol;
        traj.iters_to_tol = Some(0);
        return Ok(traj);
    }
    let mut state = IterateState::new(x0);
    for t in 1..=spec.max_iters {
        let next = match stepper.step(&state, spec, rng) {
            Ok(s) => s,
            Err(e @ (Error::NoConvergence { .. } | Error::BracketExpansion { .. })) => {
                traj.breakdown = Some(e);
                traj.termination = Termination::Diverged;
                break;
            }
            Err(e) => return Err(e),
        };
        state = next;
        let (err, prec) = metrics(&problem, &state.x_curr)?;
        traj.errors.extend(err);
        traj.precisions.extend(prec);
        if let Some((start, ns)) = clock.as_mut() {
            ns.push(start.elapsed().as_nanos() as u64);
        }
        if exceeds(&state.x_curr, spec.divergence_threshold) {
            traj.termination = Termination::Diverged;
            break;
        }
        if reached(tracked(&problem, err, prec)) {
            traj.termination = Termination::ReachedTol;
            traj.iters_to_tol = Some(t);
            break;
        }
    }
    traj.final_x = state.x_curr;
    Ok(traj)
}

/// Runs `spec.max_iters` steps from `x_0` (with `x_{−1} = x_0`), stopping early on
/// reaching `spec.target` or on divergence.
///
/// Implicit-solver breakdowns (no convergence, failed bracket) end the run as
/// diverged and are kept in [`Trajectory::breakdown`]; other errors propagate.
pub fn run(
    problem: Problem<'_>,
    spec: &OptimizerSpec,
    x0: DenseVector,
    rng: &mut Rng,
) -> Result<Trajectory> {
    run_inner(problem, spec, x0, rng, None)
}

/// Like [`run`], also returning cumulative wall time in nanoseconds after each step.
pub fn run_with_timing(
    problem: Problem<'_>,
    spec: &OptimizerSpec,
    x0: DenseVector,
    rng: &mut Rng,
) -> Result<(Trajectory, Vec<u64>)> {
    let start = Instant::now();
    let mut ns = Vec::new();
    let traj = run_inner(problem, spec, x0, rng, Some((&start, &mut ns)))?;
    Ok((traj, ns))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

/// Writes `t,error_sq,precision,wall_ns`, starting with the `t = 0` row. Missing
/// metrics are left empty; `wall_ns` is empty when no timing is supplied.
pub fn write_trajectory_csv<W: Write>(
    traj: &Trajectory,
    wall_ns: Option<&[u64]>,
    mut w: W,
) -> Result<()> {
    writeln!(w, "t,error_sq,precision,wall_ns")?;
    let time = |t: usize| match wall_ns {
        Some(_) if t == 0 => "0".to_string(),
        Some(ns) => ns.get(t - 1).map(|v| v.to_string()).unwrap_or_default(),
        None => String::new(),
    };
    writeln!(
        w,
        "0,{},{},{}",
        fmt_opt(traj.initial_error),
        fmt_opt(traj.initial_precision),
        time(0)
    )?;
    for t in 1..=traj.steps() {
        writeln!(
            w,
            "{t},{},{},{}",
            fmt_opt(traj.errors.get(t - 1).copied()),
            fmt_opt(traj.precisions.get(t - 1).copied()),
            time(t)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::make_quadratic;
    use crate::problems::{make_glm, MeanFn};

    #[test]
    fn zero_iterations() {
        let prob = make_quadratic(4, 2.0, &mut Rng::new(0)).unwrap();
        let spec = OptimizerSpec::new(Algo::Sgd, 0.1).max_iters(0);
        let t = run(
            (&prob).into(),
            &spec,
            DenseVector::zeros(4),
            &mut Rng::new(1),
        )
        .unwrap();
        assert!(t.errors.is_empty());
        assert_eq!(t.termination, Termination::MaxIters);
        assert_eq!(t.iters_to_tol, None);
    }

    #[test]
    fn ppa_large_step_contracts_monotonically() {
        let prob = make_quadratic(10, 10.0, &mut Rng::new(2)).unwrap();
        let spec = OptimizerSpec::new(Algo::Ppa, 100.0).max_iters(20);
        let t = run(
            (&prob).into(),
            &spec,
            DenseVector::zeros(10),
            &mut Rng::new(0),
        )
        .unwrap();
        let factor = 1.0 / (1.0 + 100.0 * prob.spectrum().min());
        let mut prev = t.initial_error.unwrap();
        for &e in &t.errors {
            if prev < 1e-28 {
                break;
            }
            assert!(e <= prev * factor * factor * (1.0 + 1e-6) + 1e-30);
            prev = e;
        }
    }

    #[test]
    fn sgd_huge_step_diverges_on_linear_glm() {
        let data = make_glm(50, 50, 10.0, MeanFn::Identity, 0.01, &mut Rng::new(3)).unwrap();
        let spec = OptimizerSpec::new(Algo::Sgd, 1e3).max_iters(500);
        let t = run(
            (&data).into(),
            &spec,
            DenseVector::zeros(50),
            &mut Rng::new(4),
        )
        .unwrap();
        assert_eq!(t.termination, Termination::Diverged);
        assert!(exceeds(&t.final_x, 1e10));
    }

    #[test]
    fn target_reached_counts_steps() {
        let data = make_glm(5, 100, 2.0, MeanFn::Identity, 0.0, &mut Rng::new(5)).unwrap();
        let spec = OptimizerSpec::new(Algo::Sppa, 1.0)
            .batch_size(10)
            .target(1e-3)
            .max_iters(5000);
        let t = run(
            (&data).into(),
            &spec,
            DenseVector::zeros(5),
            &mut Rng::new(6),
        )
        .unwrap();
        assert_eq!(t.termination, Termination::ReachedTol);
        let k = t.iters_to_tol.unwrap();
        assert_eq!(t.precisions.len(), k);
        assert!(t.precisions[k - 1] <= 1e-3);
        assert!(t.precisions[..k - 1].iter().all(|&p| p > 1e-3));
    }

    #[test]
    fn rejects_incompatible_pairs() {
        let data = make_glm(3, 10, 2.0, MeanFn::Identity, 0.0, &mut Rng::new(7)).unwrap();
        let spec = OptimizerSpec::new(Algo::Ppa, 1.0);
        assert!(matches!(
            run(
                (&data).into(),
                &spec,
                DenseVector::zeros(3),
                &mut Rng::new(0)
            ),
            Err(Error::Incompatible(_))
        ));
        let spec = OptimizerSpec::new(Algo::Sgd, 1.0).batch_size(11);
        assert!(run(
            (&data).into(),
            &spec,
            DenseVector::zeros(3),
            &mut Rng::new(0)
        )
        .is_err());
        let spec = OptimizerSpec::new(Algo::Sgd, 1.0).beta(0.5);
        assert!(run(
            (&data).into(),
            &spec,
            DenseVector::zeros(3),
            &mut Rng::new(0)
        )
        .is_err());
        let spec = OptimizerSpec::new(Algo::Sppa, -1.0);
        assert!(run(
            (&data).into(),
            &spec,
            DenseVector::zeros(3),
            &mut Rng::new(0)
        )
        .is_err());
    }

    #[test]
    fn csv_has_one_row_per_step_plus_start() {
        let prob = make_quadratic(3, 2.0, &mut Rng::new(8)).unwrap();
        let spec = OptimizerSpec::new(Algo::Sgdm, 0.2).beta(0.5).max_iters(7);
        let (t, ns) = run_with_timing(
            (&prob).into(),
            &spec,
            DenseVector::zeros(3),
            &mut Rng::new(0),
        )
        .unwrap();
        assert_eq!(ns.len(), 7);
        assert!(ns.windows(2).all(|w| w[0] <= w[1]));
        let mut out = Vec::new();
        write_trajectory_csv(&t, Some(&ns), &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,error_sq,precision,wall_ns");
        assert_eq!(lines.len(), 9);
        assert!(lines[1].starts_with("0,"));
        assert_eq!(lines[8].split(',').count(), 4);
    }
}
