use proptest::prelude::*;
use sppam::numcore::{dot, make_quadratic, DenseMatrix, DenseVector, Rng};
use sppam::optimizers::{
    glm_implicit_scalar, ppa_step_quadratic, run, sgd_step, sgdm_step, sppa_glm_step,
    sppam_glm_step, Algo, IterateState, OptimizerSpec, Problem,
};
use sppam::problems::{make_glm, GlmDataset, MeanFn, QuadraticProblem};
use sppam::theory::{ppam_companion, ppam_stable};

fn diag_problem(lambdas: &[f64], x_star: &[f64]) -> QuadraticProblem {
    QuadraticProblem::new(DenseMatrix::diag(lambdas), x_star.to_vec().into()).unwrap()
}

fn state(x: &[f64], x_prev: &[f64]) -> IterateState {
    IterateState {
        x_curr: x.to_vec().into(),
        x_prev: x_prev.to_vec().into(),
        t: 1,
    }
}

#[test]
fn ppam_matches_scalar_recursion_on_diagonal_quadratic() {
    let lambdas = [0.5, 2.0, 9.0];
    let xs = [1.0, -2.0, 0.5];
    let prob = diag_problem(&lambdas, &xs);
    let (eta, beta) = (0.4, 0.7);
    let x0 = vec![3.0, 1.0, -1.0];
    let spec = OptimizerSpec::new(Algo::Ppam, eta).beta(beta).max_iters(60);
    let traj = run(
        Problem::Quadratic(&prob),
        &spec,
        x0.clone().into(),
        &mut Rng::new(0),
    )
    .unwrap();

    // e_{t+1} = ((1+β)e_t − βe_{t−1}) / (1+ηλ), coordinate-wise
    let mut e: Vec<(f64, f64)> = x0.iter().zip(&xs).map(|(a, b)| (a - b, a - b)).collect();
    for (t, got) in traj.errors.iter().enumerate() {
        for (k, (cur, prev)) in e.iter_mut().enumerate() {
            let next = ((1.0 + beta) * *cur - beta * *prev) / (1.0 + eta * lambdas[k]);
            *prev = *cur;
            *cur = next;
        }
        let want: f64 = e.iter().map(|(c, _)| c * c).sum();
        // iterates carry O(ε‖x*‖) rounding, so compare norms absolutely
        assert!(
            (got.sqrt() - want.sqrt()).abs() <= 1e-13,
            "step {t}: {got} vs {want}"
        );
    }
}

#[test]
fn ppam_decay_follows_companion_radius() {
    // one eigenvalue, so the error ratio tends to the squared spectral radius
    let prob = diag_problem(&[3.0], &[0.0]);
    let (eta, beta) = (0.5, 0.8);
    let spec = OptimizerSpec::new(Algo::Ppam, eta)
        .beta(beta)
        .max_iters(400);
    let traj = run(
        Problem::Quadratic(&prob),
        &spec,
        vec![1.0].into(),
        &mut Rng::new(0),
    )
    .unwrap();
    let m = ppam_companion(eta, beta, 3.0);
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = tr * tr - 4.0 * det;
    let rho = if disc < 0.0 {
        det.sqrt()
    } else {
        (tr.abs() + disc.sqrt()) / 2.0
    };
    let e = &traj.errors;
    let observed = (e[399] / e[199]).powf(1.0 / 200.0).sqrt();
    assert!((observed - rho).abs() < 1e-2, "{observed} vs {rho}");
    let s = prob.spectrum();
    assert!(ppam_stable(eta, beta, s).predicate);
}

#[test]
fn ppa_step_solves_proximal_optimality() {
    let prob = make_quadratic(8, 10.0, &mut Rng::new(4)).unwrap();
    let x = DenseVector::from_vec(Rng::new(5).normal_vec(8));
    let eta = 0.3;
    let spec = OptimizerSpec::new(Algo::Ppa, eta);
    let next = ppa_step_quadratic(
        &IterateState::new(x.clone()),
        &prob,
        &spec,
        &mut Rng::new(0),
    )
    .unwrap()
    .x_curr;
    // x⁺ − x + η∇f(x⁺) = 0
    let g = prob.grad(&next).unwrap();
    let mut r = next.sub(&x);
    r.axpy(eta, &g);
    assert!(r.norm_inf() < 1e-12, "{}", r.norm_inf());
}

#[test]
fn full_batch_gd_is_closed_form() {
    let lambdas = [1.0, 4.0];
    let prob = diag_problem(&lambdas, &[0.0, 0.0]);
    let eta = 0.3;
    let spec = OptimizerSpec::new(Algo::Sgd, eta).max_iters(25);
    let traj = run(
        Problem::Quadratic(&prob),
        &spec,
        vec![1.0, 1.0].into(),
        &mut Rng::new(0),
    )
    .unwrap();
    for (t, got) in traj.errors.iter().enumerate() {
        let want: f64 = lambdas
            .iter()
            .map(|l| (1.0 - eta * l).powi(2 * (t as i32 + 1)))
            .sum();
        assert!((got - want).abs() <= 1e-13 * want.max(1e-300));
    }
}

/// One-row dataset so the sampled batch is known.
fn single_row(a: &[f64], b: f64) -> GlmDataset {
    let features = DenseMatrix::from_rows(&[a.to_vec()]).unwrap();
    GlmDataset::new(features, vec![b], MeanFn::Identity, None).unwrap()
}

#[test]
fn sppam_identity_matches_sherman_morrison() {
    let a = [0.5, -1.0, 2.0];
    let b = 1.5;
    let data = single_row(&a, b);
    let (eta, beta) = (0.7, 0.6);
    let x = [0.2, 0.1, -0.3];
    let xp = [1.0, 0.0, 0.4];
    let spec = OptimizerSpec::new(Algo::Sppam, eta).beta(beta);
    let got = sppam_glm_step(&state(&x, &xp), &data, &spec, &mut Rng::new(0))
        .unwrap()
        .x_curr;

    // argmin ½η(aᵀz − b)² + ½‖z − y‖², y the extrapolated point:
    // z = y − η a (aᵀy − b) / (1 + η‖a‖²)
    let y: Vec<f64> = x.iter().zip(&xp).map(|(c, p)| c + beta * (c - p)).collect();
    let coef = eta * (dot(&a, &y) - b) / (1.0 + eta * dot(&a, &a));
    for k in 0..3 {
        let want = y[k] - coef * a[k];
        assert!((got[k] - want).abs() < 1e-10, "{k}: {} vs {want}", got[k]);
    }

    let spec = OptimizerSpec::new(Algo::Sppa, eta);
    let got = sppa_glm_step(&state(&x, &xp), &data, &spec, &mut Rng::new(0))
        .unwrap()
        .x_curr;
    let coef = eta * (dot(&a, &x) - b) / (1.0 + eta * dot(&a, &a));
    for k in 0..3 {
        assert!((got[k] - (x[k] - coef * a[k])).abs() < 1e-10);
    }
}

#[test]
fn full_batch_sppa_identity_matches_primal_solve() {
    let data = make_glm(4, 6, 3.0, MeanFn::Identity, 0.0, &mut Rng::new(8)).unwrap();
    let eta = 2.0;
    let m = 6;
    let spec = OptimizerSpec::new(Algo::Sppa, eta).batch_size(m);
    let x = DenseVector::from_vec(vec![0.3, -0.2, 1.0, 0.0]);
    let got = sppa_glm_step(
        &IterateState::new(x.clone()),
        &data,
        &spec,
        &mut Rng::new(0),
    )
    .unwrap()
    .x_curr;

    // (I + c AᵀA) z = x + c Aᵀb with c = η/m, solved by Gaussian elimination here
    let c = eta / m as f64;
    let p = 4;
    let mut aug = vec![vec![0.0; p + 1]; p];
    for r in 0..p {
        aug[r][r] = 1.0;
        aug[r][p] = x[r];
        for i in 0..m {
            let ai = data.feature(i);
            aug[r][p] += c * ai[r] * data.labels()[i];
            for k in 0..p {
                aug[r][k] += c * ai[r] * ai[k];
            }
        }
    }
    for col in 0..p {
        let piv = (col..p)
            .max_by(|&i, &j| aug[i][col].abs().total_cmp(&aug[j][col].abs()))
            .unwrap();
        aug.swap(col, piv);
        for r in 0..p {
            if r != col {
                let f = aug[r][col] / aug[col][col];
                for k in col..=p {
                    aug[r][k] -= f * aug[col][k];
                }
            }
        }
    }
    for r in 0..p {
        let want = aug[r][p] / aug[r][r];
        assert!((got[r] - want).abs() < 1e-10, "{r}: {} vs {want}", got[r]);
    }
}

#[test]
fn runs_are_deterministic_per_seed() {
    let data = make_glm(10, 40, 3.0, MeanFn::Exponential, 0.0, &mut Rng::new(2)).unwrap();
    let spec = OptimizerSpec::new(Algo::Sppam, 0.05)
        .beta(0.5)
        .batch_size(5)
        .max_iters(200);
    let go = |seed| {
        run(
            Problem::Glm(&data),
            &spec,
            DenseVector::zeros(10),
            &mut Rng::new(seed),
        )
        .unwrap()
    };
    let (a, b, c) = (go(7), go(7), go(8));
    assert_eq!(a.errors, b.errors);
    assert_eq!(a.precisions, b.precisions);
    assert_ne!(a.errors, c.errors);
}

proptest! {
    #[test]
    fn identity_root_is_closed_form(
        y in -10.0f64..10.0,
        b in -10.0f64..10.0,
        s in 0.01f64..100.0,
        log_eta in -3.0f64..3.0,
    ) {
        let eta = 10f64.powf(log_eta);
        let xi = glm_implicit_scalar(y, b, s, eta, MeanFn::Identity, 1e-12).unwrap();
        let want = eta * (b - y) / (1.0 + eta * s);
        prop_assert!((xi - want).abs() <= 1e-12 * want.abs().max(1.0));
    }

    #[test]
    fn poisson_root_has_small_residual(
        y in -5.0f64..5.0,
        b in 0u32..50,
        s in 0.01f64..20.0,
        log_eta in -3.0f64..3.0,
    ) {
        let eta = 10f64.powf(log_eta);
        let b = b as f64;
        let xi = glm_implicit_scalar(y, b, s, eta, MeanFn::Exponential, 1e-12).unwrap();
        let r = xi - eta * (b - (y + xi * s).exp());
        prop_assert!(r.abs() <= 1e-10, "residual {}", r);
    }

    #[test]
    fn sgdm_without_momentum_is_sgd(
        seed in 0u64..1000,
        eta in 0.0f64..0.15,
    ) {
        let prob = make_quadratic(5, 10.0, &mut Rng::new(seed)).unwrap();
        let x0 = DenseVector::from_vec(Rng::new(seed + 1).normal_vec(5));
        let spec = OptimizerSpec::new(Algo::Sgd, eta);
        let mut s1 = IterateState::new(x0.clone());
        let mut s2 = IterateState::new(x0);
        for _ in 0..20 {
            s1 = sgd_step(&s1, &Problem::Quadratic(&prob), &spec, &mut Rng::new(0)).unwrap();
            s2 = sgdm_step(&s2, &Problem::Quadratic(&prob), &spec.with_algo(Algo::Sgdm), &mut Rng::new(0)).unwrap();
            prop_assert_eq!(s1.x_curr.as_slice(), s2.x_curr.as_slice());
        }
    }
}
