//! Eigen- and singular-value routines for small dense matrices.

use num_complex::Complex64;

use super::linalg::DenseMatrix;
use crate::error::{Error, Result};

/// Tolerance on `‖M − Mᵀ‖_max / max(1, ‖M‖_max)` for a matrix to count as symmetric.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Eigenvalues sorted descending, with the derived condition number.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Sorts the given values descending.
    pub fn new(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Self { eigenvalues }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn min(&self) -> f64 {
        *self.eigenvalues.last().expect("empty spectrum")
    }

    /// `λ_max / λ_min`; infinite when the smallest eigenvalue is not positive.
    pub fn condition_number(&self) -> f64 {
        if self.min() > 0.0 {
            self.max() / self.min()
        } else {
            f64::INFINITY
        }
    }
}

/// Full symmetric eigendecomposition: `M = Q Λ Qᵀ`, eigenvalues descending, the
/// columns of `Q` are the matching eigenvectors.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub spectrum: Spectrum,
    pub vectors: DenseMatrix,
}

fn check_symmetric(m: &DenseMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    let asym = m.asymmetry();
    if asym > SYMMETRY_TOL * m.max_abs().max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    Ok(())
}

/// Cyclic Jacobi eigenvalue iteration.
///
/// Sweeps until the off-diagonal Frobenius mass falls below `1e-15 · ‖M‖_F`.
pub fn sym_eigen(m: &DenseMatrix) -> Result<SymEigen> {
    check_symmetric(m)?;
    let n = m.rows();
    let mut a = m.clone();
    a.symmetrize();
    let mut v = DenseMatrix::identity(n);
    let total: f64 = a.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = 1e-15 * total.max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = DenseMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, dst)] = v[(k, src)];
        }
    }
    Ok(SymEigen {
        spectrum: Spectrum {
            eigenvalues: values,
        },
        vectors,
    })
}

/// Eigenvalues of a symmetric matrix, descending.
pub fn sym_eigenvalues(m: &DenseMatrix) -> Result<Spectrum> {
    Ok(sym_eigen(m)?.spectrum)
}

/// Both eigenvalues of a 2×2 matrix, ordered so that `|σ1| ≥ |σ2|`.
///
/// Real roots are computed in the cancellation-free form `σ_big = m + sign(m)·r`,
/// `σ_small = det / σ_big`.
pub fn eig2x2(m: &DenseMatrix) -> Result<(Complex64, Complex64)> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: m.rows().max(m.cols()),
        });
    }
    Ok(eig2x2_entries(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]))
}

/// [`eig2x2`] on raw entries `[[a, b], [c, d]]`.
pub fn eig2x2_entries(a: f64, b: f64, c: f64, d: f64) -> (Complex64, Complex64) {
    let half_trace = 0.5 * (a + d);
    let det = a * d - b * c;
    // discriminant written to avoid squaring the trace when the diagonal is unbalanced
    let half_diff = 0.5 * (a - d);
    let disc = half_diff * half_diff + b * c;
    if disc >= 0.0 {
        let r = disc.sqrt();
        let big = if half_trace >= 0.0 {
            half_trace + r
        } else {
            half_trace - r
        };
        let small = if big != 0.0 { det / big } else { 0.0 };
        (Complex64::new(big, 0.0), Complex64::new(small, 0.0))
    } else {
        let im = (-disc).sqrt();
        (
            Complex64::new(half_trace, im),
            Complex64::new(half_trace, -im),
        )
    }
}

/// `max(|σ1|, |σ2|)` of `[[a, b], [c, d]]`.
pub fn spectral_radius_2x2(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let (s1, s2) = eig2x2_entries(a, b, c, d);
    s1.norm().max(s2.norm())
}

/// Thin singular value decomposition `M = U diag(s) Vᵀ` with singular values
/// descending. `U` is rows × k, `V` is cols × k, `k = min(rows, cols)`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DenseMatrix,
    pub singular_values: Vec<f64>,
    pub v: DenseMatrix,
}

impl Svd {
    pub fn reassemble(&self, singular_values: &[f64]) -> DenseMatrix {
        let (rows, cols) = (self.u.rows(), self.v.rows());
        let mut out = DenseMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = singular_values
                    .iter()
                    .enumerate()
                    .map(|(k, s)| self.u[(i, k)] * s * self.v[(j, k)])
                    .sum();
            }
        }
        out
    }
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd(m: &DenseMatrix) -> Svd {
    if m.rows() < m.cols() {
        let t = svd(&m.transpose());
        return Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        };
    }
    let (rows, cols) = (m.rows(), m.cols());
    // work column-major: w[j] is column j
    let mut w: Vec<Vec<f64>> = (0..cols).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..cols)
        .map(|j| (0..cols).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha: f64 = w[p].iter().map(|x| x * x).sum();
                let beta: f64 = w[q].iter().map(|x| x * x).sum();
                let gamma: f64 = w[p].iter().zip(&w[q]).map(|(x, y)| x * y).sum();
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let (x, y) = (w[p][i], w[q][i]);
                    w[p][i] = c * x - s * y;
                    w[q][i] = s * x + c * y;
                }
                for i in 0..cols {
                    let (x, y) = (v[p][i], v[q][i]);
                    v[p][i] = c * x - s * y;
                    v[q][i] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = w
        .iter()
        .map(|col| col.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let mut u = DenseMatrix::zeros(rows, cols);
    let mut vm = DenseMatrix::zeros(cols, cols);
    let mut s = Vec::with_capacity(cols);
    for (dst, &src) in order.iter().enumerate() {
        let sv = norms[src];
        s.push(sv);
        for i in 0..rows {
            u[(i, dst)] = if sv > 0.0 { w[src][i] / sv } else { 0.0 };
        }
        for i in 0..cols {
            vm[(i, dst)] = v[src][i];
        }
    }
    Svd {
        u,
        singular_values: s,
        v: vm,
    }
}
