use crate::error::{Error, Result};
use crate::numcore::eig2x2_entries;

use super::stability::Mat2;

/// Two-step contraction of the expected squared error of SPPAM on a
/// `μ`-strongly convex quadratic:
///
/// ```text
/// [e_{t+1}]   [4s   4β²s/(4−(1+β)²)] [e_t    ]
/// [e_t    ] ≤ [1    0              ] [e_{t−1}] + [η²σ², 0]ᵀ,   s = 1/(1+ημ)²
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SppamContraction {
    pub eta: f64,
    pub beta: f64,
    pub mu: f64,
    pub matrix_a: Mat2,
    pub sigma1: f64,
    pub sigma2: f64,
    pub tau: f64,
    /// Sum of the first-row entries of `matrix_a`.
    pub theta: f64,
}

impl SppamContraction {
    /// `1/(1+ημ)²`
    pub fn s(&self) -> f64 {
        self.matrix_a[0][0] / 4.0
    }

    /// Largest eigenvalue of `matrix_a` computed numerically.
    pub fn oracle_sigma1(&self) -> f64 {
        let m = self.matrix_a;
        let (l1, _) = eig2x2_entries(m[0][0], m[0][1], m[1][0], m[1][1]);
        l1.re
    }
}

fn check_domain(eta: f64, beta: f64, mu: f64) -> Result<()> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "eta must be > 0, got {eta}"
        )));
    }
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidArgument(format!("mu must be > 0, got {mu}")));
    }
    if !(0.0..1.0).contains(&beta) {
        return Err(Error::InvalidArgument(format!(
            "momentum must lie in [0, 1), got {beta}"
        )));
    }
    Ok(())
}

/// Builds the contraction matrix and its spectrum `σ₁,₂ = 2s ± τ`,
/// `τ = √(4s² + 4β²s/(4−(1+β)²))`.
pub fn sppam_contraction(eta: f64, beta: f64, mu: f64) -> Result<SppamContraction> {
    check_domain(eta, beta, mu)?;
    let s = 1.0 / ((1.0 + eta * mu) * (1.0 + eta * mu));
    let a11 = 4.0 * s;
    let a12 = 4.0 * beta * beta * s / (4.0 - (1.0 + beta) * (1.0 + beta));
    let tau = (4.0 * s * s + a12).sqrt();
    Ok(SppamContraction {
        eta,
        beta,
        mu,
        matrix_a: [[a11, a12], [1.0, 0.0]],
        sigma1: 2.0 * s + tau,
        sigma2: 2.0 * s - tau,
        tau,
        theta: a11 + a12,
    })
}

/// Right-hand side of the one-step invariant:
/// `4s·err_t + 4β²s/(4−(1+β)²)·err_{t−1} + η²σ²`.
pub fn sppam_invariant_rhs(
    eta: f64,
    beta: f64,
    mu: f64,
    sigma: f64,
    err_t: f64,
    err_tm1: f64,
) -> Result<f64> {
    let c = sppam_contraction(eta, beta, mu)?;
    let a = c.matrix_a;
    Ok(a[0][0] * err_t + a[0][1] * err_tm1 + eta * eta * sigma * sigma)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscountCondition {
    /// `τ < 1/2`
    pub satisfied: bool,
    /// `C = 2s + τ`, the per-step discount of the initial error.
    pub c: f64,
    pub tau: f64,
}

pub fn discount_condition(eta: f64, beta: f64, mu: f64) -> Result<DiscountCondition> {
    let k = sppam_contraction(eta, beta, mu)?;
    Ok(DiscountCondition {
        satisfied: k.tau < 0.5,
        c: k.sigma1,
        tau: k.tau,
    })
}

/// Smallest `ημ` with `τ < 1/2` for momentum `β`, by bisection to `tol`.
pub fn discount_threshold(beta: f64, tol: f64) -> Result<f64> {
    let tau = |x: f64| sppam_contraction(x, beta, 1.0).map(|k| k.tau);
    let (mut lo, mut hi) = (1e-9, 1.0);
    while tau(hi)? >= 0.5 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::NoConvergence {
                residual: tau(hi)? - 0.5,
            });
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if tau(mid)? < 0.5 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccelerationCondition {
    /// `4β²/(4−(1+β)²) < (η²μ² − 6ημ − 3)/(1+2ημ)²`. Together with
    /// `precondition` this is equivalent to `σ₁ < 1/(1+2ημ)`.
    pub satisfied: bool,
    /// The same inequality with `(1+ημ)²` in the denominator. It is weaker and
    /// does not by itself imply the smaller contraction factor.
    pub loose_form: bool,
    /// `ημ > 1`, needed to square both sides of `σ₁ < 1/(1+2ημ)`.
    pub precondition: bool,
    pub lhs: f64,
    pub rhs: f64,
}

pub fn acceleration_condition(eta: f64, beta: f64, mu: f64) -> Result<AccelerationCondition> {
    check_domain(eta, beta, mu)?;
    let x = eta * mu;
    let lhs = 4.0 * beta * beta / (4.0 - (1.0 + beta) * (1.0 + beta));
    let num = x * x - 6.0 * x - 3.0;
    let rhs = num / ((1.0 + 2.0 * x) * (1.0 + 2.0 * x));
    Ok(AccelerationCondition {
        satisfied: lhs < rhs,
        loose_form: lhs < num / ((1.0 + x) * (1.0 + x)),
        precondition: x > 1.0,
        lhs,
        rhs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TStepBound {
    /// `+∞` when `vacuous`.
    pub value: f64,
    /// `θ ≥ 1`: the noise term has no finite geometric sum.
    pub vacuous: bool,
    pub theta: f64,
}

/// Bound on `E‖x_T − x*‖²` from `x_0 = x_{−1}`:
/// `(σ₁ᵀ/τ)·(init + η²σ²/(1−θ))(1+θ) + η²σ²/(1−θ)`.
pub fn tstep_bound(
    eta: f64,
    beta: f64,
    mu: f64,
    sigma: f64,
    init_err: f64,
    t: u32,
) -> Result<TStepBound> {
    let k = sppam_contraction(eta, beta, mu)?;
    if k.theta >= 1.0 {
        return Ok(TStepBound {
            value: f64::INFINITY,
            vacuous: true,
            theta: k.theta,
        });
    }
    let noise = eta * eta * sigma * sigma / (1.0 - k.theta);
    let transient = k.sigma1.powi(t as i32) / k.tau * (init_err + noise) * (1.0 + k.theta);
    Ok(TStepBound {
        value: transient + noise,
        vacuous: false,
        theta: k.theta,
    })
}
