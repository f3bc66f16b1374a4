//! Generalized linear models with canonical links: linear regression (identity
//! mean) and Poisson regression (exponential mean).
//!
//! Losses are per-sample negative log-likelihoods `ℓ_i(x) = −b_i γ + c(γ)` with
//! `γ = ⟨a_i, x⟩` and `c' = h`, so every link shares the gradient
//! `−(b_i − h(γ)) a_i`. Dispersion and normalizing terms do not affect gradients
//! and are dropped.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numcore::{dot, log_uniform_profile, svd, DenseMatrix, DenseVector, Rng};

/// Largest `|⟨a_i, x*⟩|` allowed when generating Poisson labels.
pub const POISSON_MAX_LINEAR_PREDICTOR: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeanFn {
    Identity,
    Exponential,
}

impl MeanFn {
    #[inline]
    pub fn h(self, gamma: f64) -> f64 {
        match self {
            MeanFn::Identity => gamma,
            MeanFn::Exponential => gamma.exp(),
        }
    }

    #[inline]
    pub fn h_prime(self, gamma: f64) -> f64 {
        match self {
            MeanFn::Identity => 1.0,
            MeanFn::Exponential => gamma.exp(),
        }
    }

    /// Log-partition `c(γ)` with `c' = h`.
    pub fn log_partition(self, gamma: f64) -> f64 {
        match self {
            MeanFn::Identity => 0.5 * gamma * gamma,
            MeanFn::Exponential => gamma.exp(),
        }
    }
}

impl fmt::Display for MeanFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeanFn::Identity => "identity",
            MeanFn::Exponential => "exponential",
        })
    }
}

impl FromStr for MeanFn {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" | "linear" => Ok(MeanFn::Identity),
            "exponential" | "poisson" => Ok(MeanFn::Exponential),
            other => Err(Error::InvalidArgument(format!(
                "unknown mean function '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GlmDataset {
    features: DenseMatrix,
    labels: Vec<f64>,
    mean_fn: MeanFn,
    x_star: Option<DenseVector>,
    noise_level: f64,
}

impl GlmDataset {
    pub fn new(
        features: DenseMatrix,
        labels: Vec<f64>,
        mean_fn: MeanFn,
        x_star: Option<DenseVector>,
    ) -> Result<Self> {
        if labels.len() != features.rows() {
            return Err(Error::DimensionMismatch {
                expected: features.rows(),
                found: labels.len(),
            });
        }
        if let Some(xs) = &x_star {
            if xs.len() != features.cols() {
                return Err(Error::DimensionMismatch {
                    expected: features.cols(),
                    found: xs.len(),
                });
            }
        }
        if labels.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidArgument("labels must be finite".into()));
        }
        if mean_fn == MeanFn::Exponential && labels.iter().any(|&b| b < 0.0 || b.fract() != 0.0) {
            return Err(Error::InvalidArgument(
                "Poisson labels must be nonnegative integers".into(),
            ));
        }
        Ok(Self {
            features,
            labels,
            mean_fn,
            x_star,
            noise_level: 0.0,
        })
    }

    pub fn n(&self) -> usize {
        self.features.rows()
    }

    pub fn p(&self) -> usize {
        self.features.cols()
    }

    pub fn features(&self) -> &DenseMatrix {
        &self.features
    }

    pub fn feature(&self, i: usize) -> &[f64] {
        self.features.row(i)
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn mean_fn(&self) -> MeanFn {
        self.mean_fn
    }

    pub fn x_star(&self) -> Option<&DenseVector> {
        self.x_star.as_ref()
    }

    pub fn noise_level(&self) -> f64 {
        self.noise_level
    }

    fn check_x(&self, x: &DenseVector) -> Result<()> {
        if x.len() != self.p() {
            return Err(Error::DimensionMismatch {
                expected: self.p(),
                found: x.len(),
            });
        }
        Ok(())
    }

    fn check_batch(&self, batch: &[usize]) -> Result<()> {
        if batch.is_empty() {
            return Err(Error::InvalidArgument("empty batch".into()));
        }
        if let Some(&bad) = batch.iter().find(|&&i| i >= self.n()) {
            return Err(Error::InvalidArgument(format!(
                "sample index {bad} out of range for n = {}",
                self.n()
            )));
        }
        Ok(())
    }

    /// Per-sample negative log-likelihood `−b_i γ + c(γ)`.
    pub fn sample_loss(&self, i: usize, x: &DenseVector) -> f64 {
        let gamma = dot(self.feature(i), x.as_slice());
        -self.labels[i] * gamma + self.mean_fn.log_partition(gamma)
    }

    /// Mini-batch gradient `−(1/|B|) Σ_{i∈B} (b_i − h(⟨a_i, x⟩)) a_i`; indices are
    /// zero-based.
    pub fn grad(&self, x: &DenseVector, batch: &[usize]) -> Result<DenseVector> {
        self.check_x(x)?;
        self.check_batch(batch)?;
        let mut g = DenseVector::zeros(self.p());
        let w = 1.0 / batch.len() as f64;
        for &i in batch {
            let a = self.feature(i);
            let r = self.labels[i] - self.mean_fn.h(dot(a, x.as_slice()));
            for (gj, aj) in g.as_mut_slice().iter_mut().zip(a) {
                *gj -= w * r * aj;
            }
        }
        Ok(g)
    }

    /// Predicted labels `b̂_i = h(⟨a_i, x⟩)`.
    pub fn predict(&self, x: &DenseVector) -> Result<Vec<f64>> {
        self.check_x(x)?;
        Ok((0..self.n())
            .map(|i| self.mean_fn.h(dot(self.feature(i), x.as_slice())))
            .collect())
    }

    /// Relative label error `‖b − b̂‖² / ‖b‖²`; `+∞` when predictions overflow.
    pub fn precision(&self, x: &DenseVector) -> Result<f64> {
        let pred = self.predict(x)?;
        let num: f64 = self
            .labels
            .iter()
            .zip(&pred)
            .map(|(b, bh)| (b - bh) * (b - bh))
            .sum();
        let den: f64 = self.labels.iter().map(|b| b * b).sum();
        let eps = if den > 0.0 {
            num / den
        } else if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        Ok(if eps.is_nan() { f64::INFINITY } else { eps })
    }

    /// Writes `a1,…,ap,b` header then one sample per line.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let header: Vec<String> = (1..=self.p())
            .map(|j| format!("a{j}"))
            .chain(std::iter::once("b".to_string()))
            .collect();
        writeln!(w, "{}", header.join(","))?;
        for i in 0..self.n() {
            let mut line = String::new();
            for v in self.feature(i) {
                line.push_str(&format!("{v},"));
            }
            line.push_str(&format!("{}", self.labels[i]));
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    /// Reads the format produced by [`GlmDataset::write_csv`]. The minimizer is not
    /// stored in the file and is left unknown.
    pub fn read_csv<R: BufRead>(r: R, mean_fn: MeanFn) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Csv("missing header".into()))??;
        let width = header.split(',').count();
        if width < 2 {
            return Err(Error::Csv(
                "need at least one feature column and a label".into(),
            ));
        }
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let vals: Vec<f64> = line
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Csv(format!("line {}: {e}", lineno + 2)))?;
            if vals.len() != width {
                return Err(Error::Csv(format!(
                    "line {}: expected {width} fields, found {}",
                    lineno + 2,
                    vals.len()
                )));
            }
            labels.push(vals[width - 1]);
            rows.push(vals[..width - 1].to_vec());
        }
        if rows.is_empty() {
            return Err(Error::Csv("no samples".into()));
        }
        Self::new(DenseMatrix::from_rows(&rows)?, labels, mean_fn, None)
    }
}

/// Free-function form of [`GlmDataset::grad`].
pub fn glm_grad(data: &GlmDataset, x: &DenseVector, batch: &[usize]) -> Result<DenseVector> {
    data.grad(x, batch)
}

/// Synthetic GLM dataset with an `n × p` Gaussian design whose singular values are
/// replaced by a log-uniform profile of condition number `κ` (Frobenius norm kept),
/// a standard Gaussian `x*`, and labels drawn from the model.
///
/// For the exponential link `x*` is shrunk so that `max_i |⟨a_i, x*⟩| ≤ 6`.
pub fn make_glm(
    p: usize,
    n: usize,
    kappa: f64,
    mean_fn: MeanFn,
    noise_level: f64,
    rng: &mut Rng,
) -> Result<GlmDataset> {
    if p == 0 || n == 0 {
        return Err(Error::InvalidArgument("p and n must be positive".into()));
    }
    if !(kappa >= 1.0) || !kappa.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "condition number must be >= 1, got {kappa}"
        )));
    }
    if !(noise_level >= 0.0) {
        return Err(Error::InvalidArgument("noise level must be >= 0".into()));
    }
    let raw = DenseMatrix::from_row_major(n, p, rng.normal_vec(n * p))?;
    let dec = svd(&raw);
    let k = dec.singular_values.len();
    let profile = log_uniform_profile(k, 1.0, kappa);
    let frob_sq: f64 = dec.singular_values.iter().map(|s| s * s).sum();
    let profile_sq: f64 = profile.iter().map(|s| s * s).sum();
    let scale = (frob_sq / profile_sq).sqrt();
    let singular: Vec<f64> = profile.iter().map(|s| s * scale).collect();
    let features = dec.reassemble(&singular);

    let mut x_star = DenseVector::from_vec(rng.normal_vec(p));
    let mut gamma = features.matvec(&x_star)?;
    let labels: Vec<f64> = match mean_fn {
        MeanFn::Identity => gamma
            .iter()
            .map(|g| g + noise_level * rng.normal())
            .collect(),
        MeanFn::Exponential => {
            let peak = gamma.norm_inf();
            if peak > POISSON_MAX_LINEAR_PREDICTOR {
                let shrink = POISSON_MAX_LINEAR_PREDICTOR / peak;
                x_star.scale(shrink);
                gamma = features.matvec(&x_star)?;
            }
            gamma.iter().map(|g| rng.poisson(g.exp()) as f64).collect()
        }
    };
    let mut data = GlmDataset::new(features, labels, mean_fn, Some(x_star))?;
    data.noise_level = match mean_fn {
        MeanFn::Identity => noise_level,
        MeanFn::Exponential => 0.0,
    };
    Ok(data)
}
