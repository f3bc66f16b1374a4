use std::io::Write;

use clap::{Args, ValueEnum};

use sppam::numcore::Spectrum;
use sppam::theory::{
    acceleration_condition, discount_condition, gd_stable, gdm_stable, ppa_stable, ppam_stable,
    sgdm_rho, sgdm_rho_crossings, sppam_contraction, tstep_bound, StabilityVerdict,
};
use sppam::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum What {
    Gd,
    Ppa,
    Gdm,
    Ppam,
    SppamSigma,
    Discount,
    Accel,
    SgdmRho,
    Bound,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct TheoryArgs {
    #[arg(long, value_enum)]
    what: What,
    /// Step size. Required unless --grid is given; for sgdm-rho, omitting it
    /// prints where rho crosses 1 in eta*lambda.
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta: f64,
    /// Strong convexity constant.
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    /// Comma-separated eigenvalues for the quadratic predicates.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    lambda: Vec<f64>,
    /// Noise sd.
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    /// Initial squared error for the T-step bound.
    #[arg(long, default_value_t = 1.0)]
    init: f64,
    /// Horizon for the T-step bound.
    #[arg(long, default_value_t = 100)]
    t: u32,
    /// Evaluate at every eta in LO, LO+STEP, ..., HI instead of a single --eta.
    #[arg(long, num_args = 3, value_names = ["LO", "HI", "STEP"], allow_negative_numbers = true)]
    grid: Option<Vec<f64>>,
}

fn verdict_line(v: &StabilityVerdict) -> String {
    format!(
        "predicate={} spectral_radius={} boundary={} pole={}",
        v.predicate, v.spectral_radius, v.boundary, v.pole
    )
}

fn eval(a: &TheoryArgs, eta: f64) -> Result<String> {
    let spectrum = || Spectrum::new(a.lambda.clone());
    Ok(match a.what {
        What::Gd => verdict_line(&gd_stable(eta, &spectrum())),
        What::Ppa => verdict_line(&ppa_stable(eta, &spectrum())),
        What::Gdm => verdict_line(&gdm_stable(eta, a.beta, &spectrum())),
        What::Ppam => verdict_line(&ppam_stable(eta, a.beta, &spectrum())),
        What::SppamSigma => {
            let k = sppam_contraction(eta, a.beta, a.mu)?;
            format!(
                "sigma1={} sigma2={} tau={} theta={}",
                k.sigma1, k.sigma2, k.tau, k.theta
            )
        }
        What::Discount => {
            let d = discount_condition(eta, a.beta, a.mu)?;
            format!("satisfied={} C={} tau={}", d.satisfied, d.c, d.tau)
        }
        What::Accel => {
            let c = acceleration_condition(eta, a.beta, a.mu)?;
            format!(
                "satisfied={} loose_form={} precondition={} lhs={} rhs={}",
                c.satisfied, c.loose_form, c.precondition, c.lhs, c.rhs
            )
        }
        What::SgdmRho => {
            let rho = a
                .lambda
                .iter()
                .map(|&l| sgdm_rho(eta, a.beta, l))
                .fold(0.0, f64::max);
            format!("rho={rho} stable={}", rho < 1.0)
        }
        What::Bound => {
            let b = tstep_bound(eta, a.beta, a.mu, a.sigma, a.init, a.t)?;
            format!("value={} vacuous={} theta={}", b.value, b.vacuous, b.theta)
        }
    })
}

pub fn run(a: TheoryArgs) -> Result<()> {
    let mut out = crate::stdout();
    if let Some(g) = &a.grid {
        let range = sppam::harness::GridRange::new(g[0], g[1], g[2])?;
        for eta in range.values() {
            writeln!(out, "eta={eta} {}", eval(&a, eta)?)?;
        }
        return Ok(());
    }
    match (a.eta, a.what) {
        (Some(eta), _) => writeln!(out, "{}", eval(&a, eta)?)?,
        (None, What::SgdmRho) => {
            let c = sgdm_rho_crossings(a.beta, -0.5, 10.0, 2000, 1e-12);
            let list: Vec<String> = c
                .iter()
                .map(|v| format!("{:.10}", (v * 1e10).round() / 1e10 + 0.0))
                .collect();
            writeln!(out, "crossings={}", list.join(","))?;
        }
        (None, _) => {
            return Err(Error::InvalidArgument("--eta or --grid is required".into()));
        }
    }
    Ok(())
}
