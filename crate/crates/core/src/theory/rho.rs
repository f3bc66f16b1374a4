/// SGDM rate on one eigenvalue:
///
/// ```text
/// ρ = |ψ|/2 + √Δ/2        if Δ ≥ 0
/// ρ = √(β(1−ηλ))          otherwise
/// ψ = (1+β)(1−ηλ),  Δ = ψ² − 4β(1−ηλ)
/// ```
pub fn sgdm_rho(eta: f64, beta: f64, lambda: f64) -> f64 {
    let g = 1.0 - eta * lambda;
    let psi = (1.0 + beta) * g;
    let delta = psi * psi - 4.0 * beta * g;
    if delta >= 0.0 {
        psi.abs() / 2.0 + delta.sqrt() / 2.0
    } else {
        // Δ < 0 forces β(1−ηλ) > ψ²/4 ≥ 0
        (beta * g).sqrt()
    }
}

/// Points where `ρ(x, β, 1) − 1` changes sign on `[lo, hi]`, found by scanning
/// `steps` equal cells and bisecting each sign change to `tol`.
pub fn sgdm_rho_crossings(beta: f64, lo: f64, hi: f64, steps: usize, tol: f64) -> Vec<f64> {
    let stable = |x: f64| sgdm_rho(x, beta, 1.0) < 1.0;
    let h = (hi - lo) / steps as f64;
    let mut out = Vec::new();
    let mut prev = stable(lo);
    for i in 1..=steps {
        let x = lo + i as f64 * h;
        let cur = stable(x);
        if cur != prev {
            let (mut a, mut b) = (x - h, x);
            while b - a > tol {
                let m = 0.5 * (a + b);
                if stable(m) == prev {
                    a = m;
                } else {
                    b = m;
                }
            }
            out.push(0.5 * (a + b));
        }
        prev = cur;
    }
    out
}
