use crate::error::{Error, Result};
use crate::numcore::{sym_eigen, DenseMatrix, DenseVector, Spectrum};

/// `f(x) = ½ xᵀAx − bᵀx` with symmetric positive semidefinite `A`.
#[derive(Debug, Clone)]
pub struct QuadraticProblem {
    a: DenseMatrix,
    b: DenseVector,
    x_star: DenseVector,
    spectrum: Spectrum,
    /// Orthonormal eigenvectors of `A` in the order of `spectrum`, when known.
    basis: Option<DenseMatrix>,
}

impl QuadraticProblem {
    /// Builds a problem from `A` and a minimizer `x*`, setting `b = A x*` and
    /// measuring the spectrum.
    pub fn new(a: DenseMatrix, x_star: DenseVector) -> Result<Self> {
        let eig = sym_eigen(&a)?;
        if eig.spectrum.min() < -1e-12 * eig.spectrum.max().abs().max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "matrix is not positive semidefinite (min eigenvalue {})",
                eig.spectrum.min()
            )));
        }
        let b = a.matvec(&x_star)?;
        let mut a = a;
        a.symmetrize();
        Ok(Self {
            a,
            b,
            x_star,
            spectrum: eig.spectrum,
            basis: Some(eig.vectors),
        })
    }

    pub(crate) fn from_parts(
        a: DenseMatrix,
        b: DenseVector,
        x_star: DenseVector,
        spectrum: Spectrum,
        basis: Option<DenseMatrix>,
    ) -> Self {
        Self {
            a,
            b,
            x_star,
            spectrum,
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn b(&self) -> &DenseVector {
        &self.b
    }

    pub fn x_star(&self) -> &DenseVector {
        &self.x_star
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn basis(&self) -> Option<&DenseMatrix> {
        self.basis.as_ref()
    }

    /// Strong-convexity constant `λ_min(A)`.
    pub fn mu(&self) -> f64 {
        self.spectrum.min().max(0.0)
    }

    pub fn is_strongly_convex(&self) -> bool {
        self.mu() > 0.0
    }

    fn check_dim(&self, x: &DenseVector) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// `½ xᵀAx − bᵀx`
    pub fn value(&self, x: &DenseVector) -> Result<f64> {
        self.check_dim(x)?;
        let ax = self.a.matvec(x)?;
        Ok(0.5 * x.dot(&ax) - self.b.dot(x))
    }

    /// `Ax − b`
    pub fn grad(&self, x: &DenseVector) -> Result<DenseVector> {
        self.check_dim(x)?;
        Ok(self.a.matvec(x)?.sub(&self.b))
    }
}

/// Free-function form of [`QuadraticProblem::value`].
pub fn quad_value(prob: &QuadraticProblem, x: &DenseVector) -> Result<f64> {
    prob.value(x)
}

/// Free-function form of [`QuadraticProblem::grad`].
pub fn quad_grad(prob: &QuadraticProblem, x: &DenseVector) -> Result<DenseVector> {
    prob.grad(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::{make_quadratic, Rng};

    fn identity_problem(x_star: Vec<f64>) -> QuadraticProblem {
        let p = x_star.len();
        QuadraticProblem::new(DenseMatrix::identity(p), DenseVector::from_vec(x_star)).unwrap()
    }

    #[test]
    fn value_at_minimizer_identity() {
        let prob = identity_problem(vec![1.0, -2.0, 0.5]);
        let v = prob.value(prob.x_star()).unwrap();
        assert!((v + 0.5 * prob.x_star().norm_sq()).abs() < 1e-15);
        assert_eq!(prob.value(&DenseVector::zeros(3)).unwrap(), 0.0);
    }

    #[test]
    fn minimizer_beats_random_probes() {
        let mut rng = Rng::new(4);
        let prob = make_quadratic(8, 20.0, &mut rng).unwrap();
        let fmin = prob.value(prob.x_star()).unwrap();
        for _ in 0..10_000 {
            let x = DenseVector::from_vec(rng.normal_vec(8)).add(prob.x_star());
            assert!(prob.value(&x).unwrap() >= fmin - 1e-12);
        }
    }

    #[test]
    fn gradient_vanishes_at_minimizer() {
        let prob = make_quadratic(12, 50.0, &mut Rng::new(9)).unwrap();
        assert!(prob.grad(prob.x_star()).unwrap().norm_inf() <= 1e-8);
    }

    #[test]
    fn gradient_identity_zero_b() {
        let prob = identity_problem(vec![0.0; 4]);
        let x = DenseVector::from_vec(vec![1.0, 2.0, -3.0, 0.25]);
        assert_eq!(prob.grad(&x).unwrap(), x);
    }

    #[test]
    fn gradient_matches_central_differences() {
        let mut rng = Rng::new(12);
        for p in [1usize, 5, 20, 50] {
            let kappa = if p == 1 { 1.0 } else { 30.0 };
            let prob = make_quadratic(p, kappa, &mut rng).unwrap();
            let x = DenseVector::from_vec(rng.normal_vec(p));
            let g = prob.grad(&x).unwrap();
            let h = 1e-6;
            for i in 0..p {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[i] += h;
                xm[i] -= h;
                let fd = (prob.value(&xp).unwrap() - prob.value(&xm).unwrap()) / (2.0 * h);
                assert!(
                    (fd - g[i]).abs() <= 1e-5 * g[i].abs().max(1.0),
                    "p={p} i={i}: fd {fd} vs {}",
                    g[i]
                );
            }
        }
    }

    #[test]
    fn dimension_mismatch() {
        let prob = identity_problem(vec![1.0, 2.0]);
        assert!(matches!(
            prob.grad(&DenseVector::zeros(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
