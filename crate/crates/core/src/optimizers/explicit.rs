use super::{IterateState, OptimizerSpec, Problem};
use crate::error::Result;
use crate::numcore::{DenseVector, Rng};

/// Full gradient on quadratics, mini-batch gradient (sampled without replacement)
/// on GLM data.
fn stochastic_gradient(
    x: &DenseVector,
    problem: &Problem<'_>,
    spec: &OptimizerSpec,
    rng: &mut Rng,
) -> Result<DenseVector> {
    match problem {
        Problem::Quadratic(q) => q.grad(x),
        Problem::Glm(data) => {
            let batch = rng.sample_without_replacement(data.n(), spec.batch_size);
            data.grad(x, &batch)
        }
    }
}

/// `x_{t+1} = x_t − η g_t`
pub fn sgd_step(
    state: &IterateState,
    problem: &Problem<'_>,
    spec: &OptimizerSpec,
    rng: &mut Rng,
) -> Result<IterateState> {
    let g = stochastic_gradient(&state.x_curr, problem, spec, rng)?;
    let next: Vec<f64> = state
        .x_curr
        .iter()
        .zip(g.iter())
        .map(|(x, gi)| x - spec.eta * gi)
        .collect();
    Ok(state.advance(next.into()))
}

/// `x_{t+1} = x_t − η g_t + β(x_t − x_{t−1})`
pub fn sgdm_step(
    state: &IterateState,
    problem: &Problem<'_>,
    spec: &OptimizerSpec,
    rng: &mut Rng,
) -> Result<IterateState> {
    let g = stochastic_gradient(&state.x_curr, problem, spec, rng)?;
    let next: Vec<f64> = state
        .x_curr
        .iter()
        .zip(state.x_prev.iter())
        .zip(g.iter())
        .map(|((x, xp), gi)| (x - spec.eta * gi) + spec.beta * (x - xp))
        .collect();
    Ok(state.advance(next.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::{make_quadratic, DenseMatrix};
    use crate::optimizers::Algo;
    use crate::problems::{make_glm, MeanFn, QuadraticProblem};
    use crate::theory::gd_stable;

    fn identity_quadratic(p: usize) -> QuadraticProblem {
        QuadraticProblem::new(DenseMatrix::identity(p), DenseVector::zeros(p)).unwrap()
    }

    #[test]
    fn halves_on_identity() {
        let prob = identity_quadratic(4);
        let spec = OptimizerSpec::new(Algo::Sgd, 0.5);
        let x0 = DenseVector::from_vec(vec![1.0; 4]);
        let s = sgd_step(
            &IterateState::new(x0.clone()),
            &(&prob).into(),
            &spec,
            &mut Rng::new(0),
        )
        .unwrap();
        assert_eq!(s.x_curr, x0.scaled(0.5));
        assert_eq!(s.x_prev, x0);
        assert_eq!(s.t, 1);
    }

    #[test]
    fn zero_step_is_identity() {
        let prob = make_quadratic(5, 3.0, &mut Rng::new(1)).unwrap();
        let x0 = DenseVector::from_vec(Rng::new(2).normal_vec(5));
        let spec = OptimizerSpec::new(Algo::Sgd, 0.0);
        let s = sgd_step(
            &IterateState::new(x0.clone()),
            &(&prob).into(),
            &spec,
            &mut Rng::new(0),
        )
        .unwrap();
        assert_eq!(s.x_curr, x0);
    }

    #[test]
    fn gd_beyond_stability_grows() {
        let prob = make_quadratic(10, 10.0, &mut Rng::new(3)).unwrap();
        let eta = 2.0 / prob.spectrum().max() + 0.1;
        assert!(!gd_stable(eta, prob.spectrum()).predicate);
        let spec = OptimizerSpec::new(Algo::Sgd, eta);
        let mut state = IterateState::new(DenseVector::from_vec(Rng::new(4).normal_vec(10)));
        let e0 = state.x_curr.dist_sq(prob.x_star());
        let mut rng = Rng::new(0);
        for _ in 0..100 {
            state = sgd_step(&state, &(&prob).into(), &spec, &mut rng).unwrap();
        }
        assert!(state.x_curr.dist_sq(prob.x_star()) > 1e6 * e0);
    }

    #[test]
    fn momentum_zero_matches_sgd_bitwise() {
        let data = make_glm(8, 40, 3.0, MeanFn::Identity, 1e-3, &mut Rng::new(5)).unwrap();
        let problem = Problem::Glm(&data);
        let sgd = OptimizerSpec::new(Algo::Sgd, 0.01).batch_size(4);
        let sgdm = sgd.with_algo(Algo::Sgdm);
        let (mut r1, mut r2) = (Rng::new(6), Rng::new(6));
        let mut a = IterateState::new(DenseVector::zeros(8));
        let mut b = a.clone();
        for _ in 0..200 {
            a = sgd_step(&a, &problem, &sgd, &mut r1).unwrap();
            b = sgdm_step(&b, &problem, &sgdm, &mut r2).unwrap();
            assert_eq!(a.x_curr, b.x_curr);
        }
    }

    #[test]
    fn momentum_fixed_point() {
        let prob = make_quadratic(3, 2.0, &mut Rng::new(7)).unwrap();
        let spec = OptimizerSpec::new(Algo::Sgdm, 0.3).beta(0.7);
        let state = IterateState::new(prob.x_star().clone());
        let next = sgdm_step(&state, &(&prob).into(), &spec, &mut Rng::new(0)).unwrap();
        assert!(next.x_curr.dist_sq(prob.x_star()) < 1e-24);
    }

    #[test]
    fn heavy_ball_matches_companion_recursion() {
        // diag(1, κ) so the eigen-coordinates are the plain coordinates
        let kappa = 7.0;
        let prob = QuadraticProblem::new(
            DenseMatrix::diag(&[1.0, kappa]),
            DenseVector::from_vec(vec![0.4, -1.1]),
        )
        .unwrap();
        let (eta, beta) = (0.2, 0.6);
        let spec = OptimizerSpec::new(Algo::Sgdm, eta).beta(beta);
        let x0 = DenseVector::from_vec(vec![2.0, 3.0]);
        let mut state = IterateState::new(x0.clone());
        let mut rng = Rng::new(0);
        // per-coordinate state (e_t, e_{t-1}) evolves by [[1+β−ηλ, −β], [1, 0]]
        let mut coords: Vec<(f64, f64)> = (0..2)
            .map(|i| {
                let e = x0[i] - prob.x_star()[i];
                (e, e)
            })
            .collect();
        for _ in 0..60 {
            state = sgdm_step(&state, &(&prob).into(), &spec, &mut rng).unwrap();
            for (i, lam) in [1.0, kappa].iter().enumerate() {
                let (e, ep) = coords[i];
                coords[i] = ((1.0 + beta - eta * lam) * e - beta * ep, e);
                let got = state.x_curr[i] - prob.x_star()[i];
                assert!((got - coords[i].0).abs() <= 1e-10, "coord {i}");
            }
        }
    }
}
