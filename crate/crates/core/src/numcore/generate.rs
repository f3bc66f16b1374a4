use super::eigen::Spectrum;
use super::linalg::{householder_qr, DenseMatrix, DenseVector};
use super::rng::Rng;
use crate::error::{Error, Result};
use crate::problems::QuadraticProblem;

/// Haar-distributed orthogonal matrix: QR of a standard Gaussian matrix with the
/// signs of `diag(R)` folded into `Q`.
pub fn random_orthogonal(p: usize, rng: &mut Rng) -> DenseMatrix {
    assert!(p >= 1, "dimension must be positive");
    let g = DenseMatrix::from_row_major(p, p, rng.normal_vec(p * p)).expect("p >= 1");
    let (mut q, r_diag) = householder_qr(&g);
    for (j, r) in r_diag.iter().enumerate() {
        if *r < 0.0 {
            for i in 0..p {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

/// `k` values spaced log-uniformly from `top` down to `top / kappa`, descending.
/// The endpoints are exact.
pub fn log_uniform_profile(k: usize, top: f64, kappa: f64) -> Vec<f64> {
    if k == 1 {
        return vec![top];
    }
    let bottom = top / kappa;
    (0..k)
        .map(|i| match i {
            0 => top,
            _ if i == k - 1 => bottom,
            _ => top * kappa.powf(-(i as f64) / (k - 1) as f64),
        })
        .collect()
}

/// Strongly convex quadratic `½xᵀAx − bᵀx` with `A = Q diag(λ) Qᵀ`, `λ` log-uniform
/// on `[1, κ]`, `x*` standard Gaussian and `b = A x*`.
pub fn make_quadratic(p: usize, kappa: f64, rng: &mut Rng) -> Result<QuadraticProblem> {
    if p == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if !(kappa >= 1.0) || !kappa.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "condition number must be >= 1, got {kappa}"
        )));
    }
    if p == 1 && kappa != 1.0 {
        return Err(Error::InvalidArgument(
            "a 1-dimensional quadratic has condition number 1".into(),
        ));
    }
    let q = random_orthogonal(p, rng);
    let lambdas = log_uniform_profile(p, kappa, kappa);
    let mut a = DenseMatrix::from_eigen(&q, &lambdas);
    a.symmetrize();
    let x_star = DenseVector::from_vec(rng.normal_vec(p));
    let b = a.matvec(&x_star)?;
    Ok(QuadraticProblem::from_parts(
        a,
        b,
        x_star,
        Spectrum::new(lambdas),
        Some(q),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::sym_eigenvalues;

    #[test]
    fn orthogonal_p1_is_sign() {
        let q = random_orthogonal(1, &mut Rng::new(3));
        assert_eq!(q[(0, 0)].abs(), 1.0);
    }

    #[test]
    fn orthogonal_defining_property_and_determinism() {
        let q = random_orthogonal(5, &mut Rng::new(7));
        let qtq = q.transpose().matmul(&q).unwrap();
        assert!(qtq.max_abs_diff(&DenseMatrix::identity(5)) <= 1e-10);
        let again = random_orthogonal(5, &mut Rng::new(7));
        assert_eq!(q, again);
    }

    #[test]
    fn kappa_one_is_identity() {
        let prob = make_quadratic(6, 1.0, &mut Rng::new(1)).unwrap();
        assert!(prob.a().max_abs_diff(&DenseMatrix::identity(6)) <= 1e-10);
    }

    #[test]
    fn figure_scale_condition_number() {
        let prob = make_quadratic(100, 10.0, &mut Rng::new(2)).unwrap();
        // measured independently from the assembled matrix
        let cond = sym_eigenvalues(prob.a()).unwrap().condition_number();
        assert!((cond - 10.0).abs() <= 10.0 * 1e-8, "cond {cond}");
        let resid = prob.a().matvec(prob.x_star()).unwrap().sub(prob.b()).norm();
        assert!(resid <= 1e-8 * prob.b().norm());
    }

    #[test]
    fn condition_number_range() {
        for (i, &kappa) in [1.0, 3.0, 1e2, 1e4, 1e6].iter().enumerate() {
            let prob = make_quadratic(20, kappa, &mut Rng::new(i as u64)).unwrap();
            let cond = sym_eigenvalues(prob.a()).unwrap().condition_number();
            assert!((cond / kappa - 1.0).abs() <= 1e-8, "kappa {kappa}: {cond}");
        }
    }

    #[test]
    fn rejects_bad_kappa() {
        assert!(make_quadratic(4, 0.5, &mut Rng::new(0)).is_err());
        assert!(make_quadratic(4, f64::NAN, &mut Rng::new(0)).is_err());
    }
}
