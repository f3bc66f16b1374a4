use super::{IterateState, OptimizerSpec};
use crate::error::{Error, Result};
use crate::numcore::{dot, DenseMatrix, DenseVector, Lu, Rng};
use crate::problems::{GlmDataset, MeanFn};

/// Cap on geometric expansions of the far end of the scalar bracket.
pub const MAX_BRACKET_DOUBLINGS: usize = 60;

const MAX_SCALAR_ITERS: usize = 500;
const MAX_NEWTON_ITERS: usize = 100;
const MAX_FIXED_POINT_ITERS: usize = 20_000;

/// Scalar implicit equation `g(ξ) = ξ − η(b − h(y + ξ s)) = 0`, with `y = ⟨a, y⟩`
/// at the extrapolated point and `s = ‖a‖²`.
///
/// `g' = 1 + η h'(·) s ≥ 1` whenever `η > 0`, so the root is unique.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImplicitScalar {
    pub y_dot: f64,
    pub b: f64,
    pub a_norm_sq: f64,
    pub eta: f64,
    pub mean_fn: MeanFn,
}

impl ImplicitScalar {
    pub fn new(y_dot: f64, b: f64, a_norm_sq: f64, eta: f64, mean_fn: MeanFn) -> Result<Self> {
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "implicit GLM solve needs a finite eta > 0, got {eta}"
            )));
        }
        if !(a_norm_sq >= 0.0) || !a_norm_sq.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "squared feature norm must be finite and >= 0, got {a_norm_sq}"
            )));
        }
        if !y_dot.is_finite() || !b.is_finite() {
            return Err(Error::InvalidArgument(
                "non-finite inner product or label in implicit solve".into(),
            ));
        }
        Ok(Self {
            y_dot,
            b,
            a_norm_sq,
            eta,
            mean_fn,
        })
    }

    #[inline]
    pub fn residual(&self, xi: f64) -> f64 {
        xi - self.eta * (self.b - self.mean_fn.h(self.y_dot + xi * self.a_norm_sq))
    }

    #[inline]
    pub fn derivative(&self, xi: f64) -> f64 {
        1.0 + self.eta * self.mean_fn.h_prime(self.y_dot + xi * self.a_norm_sq) * self.a_norm_sq
    }

    /// Bracket `[lo, hi]` with `g(lo) ≤ 0 ≤ g(hi)`, built from `0` and the hint.
    /// When the hint sits on the wrong side of the root the far end is doubled.
    pub fn bracket(&self, hint: f64) -> Result<(f64, f64)> {
        let g0 = self.residual(0.0);
        if g0.is_nan() {
            return Err(Error::NoConvergence { residual: g0 });
        }
        if g0 == 0.0 {
            return Ok((0.0, 0.0));
        }
        // g increasing: g(0) < 0 puts the root to the right
        let dir = if g0 < 0.0 { 1.0 } else { -1.0 };
        let mut far = if hint.is_finite() && hint * dir > 0.0 {
            hint
        } else {
            dir * hint.abs().clamp(1.0, 1e300)
        };
        let mut doublings = 0;
        loop {
            let gf = self.residual(far);
            if !gf.is_nan() && gf * dir >= 0.0 {
                break;
            }
            if doublings == MAX_BRACKET_DOUBLINGS || !far.is_finite() {
                return Err(Error::BracketExpansion { doublings });
            }
            far *= 2.0;
            doublings += 1;
        }
        Ok(if dir > 0.0 { (0.0, far) } else { (far, 0.0) })
    }

    /// Newton safeguarded by bisection inside `[lo, hi]`, assuming
    /// `g(lo) ≤ 0 ≤ g(hi)`. Stops once `|g| ≤ tol`, or when the bracket has shrunk
    /// to adjacent floats, returning the endpoint with the smaller residual.
    /// The result always lies in `[lo, hi]`.
    pub fn solve_in_bracket(&self, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
        debug_assert!(lo <= hi);
        let mut g_lo = self.residual(lo);
        let mut g_hi = self.residual(hi);
        if g_lo.abs() <= tol {
            return lo;
        }
        if g_hi.abs() <= tol {
            return hi;
        }
        let mut x = if lo < 0.0 && 0.0 < hi {
            0.0
        } else {
            lo + 0.5 * (hi - lo)
        };
        let mut width = hi - lo;
        for _ in 0..MAX_SCALAR_ITERS {
            let gx = self.residual(x);
            if gx.abs() <= tol {
                return x;
            }
            if gx < 0.0 {
                lo = x;
                g_lo = gx;
            } else {
                hi = x;
                g_hi = gx;
            }
            // Newton only while the bracket keeps halving; on the steep side of
            // e^γ it can crawl in steps of about 1/‖a‖².
            let halved = hi - lo <= 0.5 * width;
            width = hi - lo;
            let newton = x - gx / self.derivative(x);
            x = if halved && newton.is_finite() && lo < newton && newton < hi {
                newton
            } else {
                let mid = lo + 0.5 * (hi - lo);
                if mid <= lo || mid >= hi {
                    break;
                }
                mid
            };
        }
        if g_lo.abs() <= g_hi.abs() {
            lo
        } else {
            hi
        }
    }

    /// Root of `g` starting from the bracket `[0, hint]`.
    pub fn solve(&self, hint: f64, tol: f64) -> Result<f64> {
        let (lo, hi) = self.bracket(hint)?;
        if lo == hi {
            return Ok(lo);
        }
        Ok(self.solve_in_bracket(lo, hi, tol))
    }
}

/// Solves `ξ = η(b − h(y_dot + ξ‖a‖²))`.
///
/// The initial bracket is `[0, η(b − h(y_dot))]`.
pub fn glm_implicit_scalar(
    y_dot: f64,
    b: f64,
    a_norm_sq: f64,
    eta: f64,
    mean_fn: MeanFn,
    root_tol: f64,
) -> Result<f64> {
    let eq = ImplicitScalar::new(y_dot, b, a_norm_sq, eta, mean_fn)?;
    eq.solve(eta * (b - mean_fn.h(y_dot)), root_tol)
}

/// Mini-batch implicit system `F(ξ)_j = ξ_j − c(b_j − h(u_j + (Gξ)_j)) = 0` with
/// `c = η/m` and `G` the Gram matrix of the batch features.
#[derive(Debug, Clone)]
pub struct BatchImplicit {
    gram: DenseMatrix,
    u: Vec<f64>,
    b: Vec<f64>,
    c: f64,
    mean_fn: MeanFn,
}

impl BatchImplicit {
    pub fn new(
        gram: DenseMatrix,
        u: Vec<f64>,
        b: Vec<f64>,
        c: f64,
        mean_fn: MeanFn,
    ) -> Result<Self> {
        let m = u.len();
        if gram.rows() != m || gram.cols() != m || b.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: gram.rows(),
            });
        }
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "implicit GLM solve needs a finite eta > 0, got scale {c}"
            )));
        }
        if u.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "non-finite inner product or label in implicit solve".into(),
            ));
        }
        Ok(Self {
            gram,
            u,
            b,
            c,
            mean_fn,
        })
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }

    fn linear_predictor(&self, xi: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|j| self.u[j] + dot(self.gram.row(j), xi))
            .collect()
    }

    pub fn residual(&self, xi: &[f64]) -> Vec<f64> {
        self.linear_predictor(xi)
            .iter()
            .enumerate()
            .map(|(j, g)| xi[j] - self.c * (self.b[j] - self.mean_fn.h(*g)))
            .collect()
    }

    /// `I + c·diag(h')·G`
    pub fn jacobian(&self, xi: &[f64]) -> DenseMatrix {
        let m = self.dim();
        let gamma = self.linear_predictor(xi);
        let mut j = DenseMatrix::identity(m);
        for r in 0..m {
            let w = self.c * self.mean_fn.h_prime(gamma[r]);
            for k in 0..m {
                j[(r, k)] += w * self.gram[(r, k)];
            }
        }
        j
    }

    /// Damped Newton with Armijo backtracking on `½‖F‖²`; falls back to a damped
    /// fixed-point iteration if Newton stalls.
    pub fn solve(&self, tol: f64) -> Result<Vec<f64>> {
        let m = self.dim();
        let mut xi = vec![0.0; m];
        let mut f = self.residual(&xi);
        for _ in 0..MAX_NEWTON_ITERS {
            let norm = inf_norm(&f);
            if norm <= tol {
                return Ok(xi);
            }
            if !norm.is_finite() {
                break;
            }
            let step = match Lu::factor(&self.jacobian(&xi), 1e-14)
                .and_then(|lu| lu.solve(&DenseVector::from_vec(f.clone())))
            {
                Ok(s) => s,
                Err(_) => break,
            };
            let phi = sq_norm(&f);
            let mut alpha = 1.0;
            let mut accepted = None;
            for _ in 0..50 {
                let trial: Vec<f64> = xi
                    .iter()
                    .zip(step.iter())
                    .map(|(x, d)| x - alpha * d)
                    .collect();
                let ft = self.residual(&trial);
                let phi_t = sq_norm(&ft);
                if phi_t.is_finite() && phi_t <= (1.0 - 1e-4 * alpha) * phi {
                    accepted = Some((trial, ft));
                    break;
                }
                alpha *= 0.5;
            }
            match accepted {
                Some((x, ft)) => {
                    xi = x;
                    f = ft;
                }
                None => break,
            }
        }
        if inf_norm(&f) <= tol {
            return Ok(xi);
        }
        self.fixed_point(xi, tol)
    }

    fn fixed_point(&self, mut xi: Vec<f64>, tol: f64) -> Result<Vec<f64>> {
        let gram_row_sum = (0..self.dim())
            .map(|r| self.gram.row(r).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let mut f = self.residual(&xi);
        for _ in 0..MAX_FIXED_POINT_ITERS {
            if !f.iter().all(|v| v.is_finite()) {
                // restart from the origin, where F is finite for valid inputs
                xi.iter_mut().for_each(|v| *v = 0.0);
                f = self.residual(&xi);
                if !f.iter().all(|v| v.is_finite()) {
                    break;
                }
            }
            if inf_norm(&f) <= tol {
                return Ok(xi);
            }
            let hmax = self
                .linear_predictor(&xi)
                .iter()
                .map(|g| self.mean_fn.h_prime(*g))
                .fold(0.0, f64::max);
            let omega = 1.0 / (1.0 + self.c * hmax * gram_row_sum);
            for (x, r) in xi.iter_mut().zip(&f) {
                *x -= omega * r;
            }
            f = self.residual(&xi);
        }
        Err(Error::NoConvergence {
            residual: inf_norm(&f),
        })
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(
        0.0,
        |m, x| if x.is_nan() { f64::NAN } else { m.max(x.abs()) },
    )
}

fn sq_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Solves the implicit system for a mini-batch, where `u_j` is the linear
/// predictor of sample `batch[j]` at the extrapolated point.
pub fn solve_batch_implicit(
    data: &GlmDataset,
    batch: &[usize],
    u: Vec<f64>,
    eta: f64,
    root_tol: f64,
) -> Result<Vec<f64>> {
    let m = batch.len();
    let mut gram = DenseMatrix::zeros(m, m);
    for r in 0..m {
        for k in r..m {
            let v = dot(data.feature(batch[r]), data.feature(batch[k]));
            gram[(r, k)] = v;
            gram[(k, r)] = v;
        }
    }
    let b = batch.iter().map(|&i| data.labels()[i]).collect();
    BatchImplicit::new(gram, u, b, eta / m as f64, data.mean_fn())?.solve(root_tol)
}

fn implicit_glm_step(
    state: &IterateState,
    data: &GlmDataset,
    spec: &OptimizerSpec,
    beta: f64,
    rng: &mut Rng,
) -> Result<IterateState> {
    if state.x_curr.len() != data.p() {
        return Err(Error::DimensionMismatch {
            expected: data.p(),
            found: state.x_curr.len(),
        });
    }
    let batch = rng.sample_without_replacement(data.n(), spec.batch_size);
    let x = state.x_curr.as_slice();
    let xp = state.x_prev.as_slice();
    let mut next: Vec<f64>;
    if let [i] = batch[..] {
        let a = data.feature(i);
        let b = data.labels()[i];
        let d_curr = dot(a, x);
        let y_dot = (1.0 + beta) * d_curr - beta * dot(a, xp);
        let eq = ImplicitScalar::new(y_dot, b, dot(a, a), spec.eta, data.mean_fn())?;
        let xi = eq.solve(spec.eta * (b - data.mean_fn().h(d_curr)), spec.root_tol)?;
        next = x
            .iter()
            .zip(xp)
            .zip(a)
            .map(|((xj, xpj), aj)| (xj + xi * aj) + beta * (xj - xpj))
            .collect();
    } else {
        let u = batch
            .iter()
            .map(|&i| {
                let a = data.feature(i);
                (1.0 + beta) * dot(a, x) - beta * dot(a, xp)
            })
            .collect();
        let xi = solve_batch_implicit(data, &batch, u, spec.eta, spec.root_tol)?;
        next = x.to_vec();
        for (&i, w) in batch.iter().zip(&xi) {
            for (nj, aj) in next.iter_mut().zip(data.feature(i)) {
                *nj += w * aj;
            }
        }
        for ((nj, xj), xpj) in next.iter_mut().zip(x).zip(xp) {
            *nj += beta * (xj - xpj);
        }
    }
    Ok(state.advance(next.into()))
}

/// Implicit stochastic step with heavy-ball momentum. Batch size 1 solves the
/// scalar equation at the extrapolated point; larger batches solve the Gram system.
pub fn sppam_glm_step(
    state: &IterateState,
    data: &GlmDataset,
    spec: &OptimizerSpec,
    rng: &mut Rng,
) -> Result<IterateState> {
    implicit_glm_step(state, data, spec, spec.beta, rng)
}

/// Implicit stochastic step without momentum; `spec.beta` is ignored.
pub fn sppa_glm_step(
    state: &IterateState,
    data: &GlmDataset,
    spec: &OptimizerSpec,
    rng: &mut Rng,
) -> Result<IterateState> {
    implicit_glm_step(state, data, spec, 0.0, rng)
}
