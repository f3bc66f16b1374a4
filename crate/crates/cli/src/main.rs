mod config;
mod theory;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sppam::harness::{
    decade_etas, glm_bench, region_sweep, run_check, GlmBenchConfig, GridRange, RegionSweepConfig,
    StartPoint, VerifyConfig, CHECK_COUNT,
};
use sppam::numcore::Rng;
use sppam::optimizers::Algo;
use sppam::problems::{make_glm, MeanFn};
use sppam::Error;

/// Stability regions, GLM benchmarks and theory checks for proximal point
/// methods with momentum.
#[derive(Parser, Debug)]
#[command(name = "sppam", version)]
struct Cli {
    /// Worker threads for sweeps and benchmarks (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// File of `key = value` lines, one per flag of the chosen subcommand.
    /// Flags given on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a synthetic GLM dataset as CSV (`a1..ap,b`).
    Gen(GenArgs),
    /// Sweep a deterministic method over an (eta, beta) grid on a quadratic.
    Region(RegionArgs),
    /// Iterations-to-target benchmark on linear or Poisson regression.
    GlmBench(BenchArgs),
    /// Evaluate a closed-form predicate, rate or bound.
    Theory(theory::TheoryArgs),
    /// Run the acceptance checks.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Model {
    Linear,
    Poisson,
}

impl Model {
    fn mean_fn(self) -> MeanFn {
        match self {
            Model::Linear => MeanFn::Identity,
            Model::Poisson => MeanFn::Exponential,
        }
    }
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct GenArgs {
    #[arg(long, value_enum, default_value = "linear")]
    model: Model,
    #[arg(long, default_value_t = 50)]
    p: usize,
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long, default_value_t = 5.0)]
    kappa: f64,
    /// Label noise sd for the linear model (default 1e-3; Poisson ignores it).
    #[arg(long)]
    noise: Option<f64>,
    #[arg(long, env = "SPPAM_SEED", default_value_t = 1)]
    seed: u64,
    /// Output path; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct RegionArgs {
    /// gd, gdm, ppa or ppam.
    #[arg(long)]
    algo: Algo,
    #[arg(long, default_value_t = 20)]
    p: usize,
    #[arg(long, default_value_t = 10.0)]
    kappa: f64,
    /// Bounds of the eta axis (and the beta axis unless --beta-range is given).
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true,
          default_values_t = [-5.0, 5.0])]
    range: Vec<f64>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    beta_range: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.2)]
    step: f64,
    #[arg(long, default_value_t = 100)]
    iters: usize,
    /// Ceiling of the reported squared error.
    #[arg(long, default_value_t = 10.0)]
    clip: f64,
    #[arg(long, env = "SPPAM_SEED", default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct BenchArgs {
    #[arg(long, value_enum, default_value = "linear")]
    model: Model,
    #[arg(long, default_value_t = 50)]
    p: usize,
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long, default_value_t = 5.0)]
    kappa: f64,
    #[arg(long, default_value_t = 10)]
    batch: usize,
    #[arg(long, default_value_t = 0.9)]
    beta: f64,
    /// Comma-separated step sizes (default 1e-3,1e-2,...,1e3).
    #[arg(long, value_delimiter = ',')]
    etas: Option<Vec<f64>>,
    /// Comma-separated subset of sppam,sppa,sgdm,sgd.
    #[arg(long, value_delimiter = ',', default_value = "sppam,sppa,sgdm,sgd")]
    algos: Vec<Algo>,
    /// Odd number of independent datasets.
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 10_000)]
    max_iters: usize,
    #[arg(long, default_value_t = 0.01)]
    target: f64,
    /// Label noise sd for the linear model (default 1e-3).
    #[arg(long)]
    noise: Option<f64>,
    /// Start every run at the generating parameter instead of 0.
    #[arg(long)]
    from_truth: bool,
    #[arg(long, env = "SPPAM_SEED", default_value_t = 1)]
    seed: u64,
    /// Per-trial rows; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Medians per (algo, eta); printed to stderr if omitted.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct VerifyArgs {
    #[arg(long, env = "SPPAM_SEED", default_value_t = 1)]
    seed: u64,
    /// Run only these checks (comma-separated, 1-based).
    #[arg(long, value_delimiter = ',')]
    only: Option<Vec<usize>>,
    /// Override the reference eta*mu threshold of check 1.
    #[arg(long)]
    golden_tau: Option<f64>,
}

/// Failure after parsing: bad values are usage errors, the rest are runtime.
enum Failure {
    Usage(String),
    Runtime(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_)
            | Error::Incompatible(_)
            | Error::DimensionMismatch { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

/// Stdout that treats a closed pipe (`sppam ... | head`) as a sink.
pub struct PipeOut(io::StdoutLock<'static>);

impl Write for PipeOut {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        match self.0.write(buf) {
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(buf.len()),
            r => r,
        }
    }

    fn flush(&mut self) -> io::Result<()> {
        match self.0.flush() {
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
            r => r,
        }
    }
}

pub fn stdout() -> PipeOut {
    PipeOut(io::stdout().lock())
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            Failure::Runtime(format!("cannot create {}: {e}", p.display()))
        })?)),
        None => Box::new(BufWriter::new(stdout())),
    })
}

fn gen(a: GenArgs) -> Result<(), Failure> {
    let noise = match a.model {
        Model::Linear => a.noise.unwrap_or(1e-3),
        Model::Poisson => 0.0,
    };
    let data = make_glm(
        a.p,
        a.n,
        a.kappa,
        a.model.mean_fn(),
        noise,
        &mut Rng::new(a.seed),
    )?;
    let mut w = open_out(a.out.as_deref())?;
    data.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}

fn region(a: RegionArgs) -> Result<(), Failure> {
    let eta_range = GridRange::new(a.range[0], a.range[1], a.step)?;
    let beta_range = match &a.beta_range {
        Some(r) => GridRange::new(r[0], r[1], a.step)?,
        None => eta_range,
    };
    let cfg = RegionSweepConfig {
        p: a.p,
        kappa: a.kappa,
        eta_range,
        beta_range,
        iters: a.iters,
        clip: a.clip,
        seed: a.seed,
    };
    let grid = region_sweep(a.algo, &cfg)?;
    let mut w = open_out(a.out.as_deref())?;
    grid.write_csv(&mut w)?;
    w.flush()?;
    let (agree, judged) = grid.agreement();
    eprintln!(
        "{}: {}x{} cells, agreement with predicate {:.2}% of {judged} non-boundary cells",
        a.algo,
        grid.n_eta,
        grid.n_beta,
        agree * 100.0
    );
    Ok(())
}

fn bench(a: BenchArgs) -> Result<(), Failure> {
    let mean_fn = a.model.mean_fn();
    let mut cfg = GlmBenchConfig::figure_protocol(a.p, a.n, a.kappa, mean_fn, a.seed);
    cfg.batch_size = a.batch;
    cfg.beta = a.beta;
    cfg.eta_list = a.etas.unwrap_or_else(|| decade_etas(-3, 3));
    cfg.algos = a.algos;
    cfg.trials = a.trials;
    cfg.max_iters = a.max_iters;
    cfg.precision_target = a.target;
    if let (Model::Linear, Some(s)) = (a.model, a.noise) {
        cfg.noise_level = s;
    }
    if a.from_truth {
        cfg.start = StartPoint::Truth;
    }
    let report = glm_bench(&cfg)?;
    let mut w = open_out(a.out.as_deref())?;
    report.write_rows_csv(&mut w)?;
    w.flush()?;
    match &a.summary {
        Some(p) => {
            let mut s = open_out(Some(p))?;
            report.write_summary_csv(&mut s)?;
            s.flush()?;
        }
        None => report.write_summary_csv(io::stderr().lock())?,
    }
    Ok(())
}

fn verify(a: VerifyArgs) -> Result<(), Failure> {
    let mut cfg = VerifyConfig::new(a.seed);
    if let Some(t) = a.golden_tau {
        cfg.golden.tau_threshold = t;
    }
    let ids = a.only.unwrap_or_else(|| (1..=CHECK_COUNT).collect());
    if let Some(bad) = ids.iter().find(|&&id| id == 0 || id > CHECK_COUNT) {
        return Err(Failure::Usage(format!(
            "no check {bad}; valid ids are 1..={CHECK_COUNT}"
        )));
    }
    let mut out = stdout();
    let mut failed = 0;
    for &id in &ids {
        let c = run_check(id, &cfg).expect("id checked above");
        writeln!(out, "{c}")?;
        failed += usize::from(!c.passed);
    }
    writeln!(out, "{} of {} checks passed", ids.len() - failed, ids.len())?;
    if failed > 0 {
        return Err(Failure::Checks);
    }
    Ok(())
}

fn main() -> ExitCode {
    let mut argv: Vec<String> = std::env::args().collect();
    // the file may supply required flags, so expand before clap validates
    if let Some(path) = config::find_path(&argv) {
        argv = match config::expand(&argv, Path::new(&path)) {
            Ok(v) => v,
            Err(msg) => {
                eprintln!("error: {msg}");
                return ExitCode::from(2);
            }
        };
    }
    let cli = Cli::parse_from(&argv);
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let outcome = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Region(a) => region(a),
        Command::GlmBench(a) => bench(a),
        Command::Theory(a) => theory::run(a).map_err(Failure::from),
        Command::Verify(a) => verify(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
