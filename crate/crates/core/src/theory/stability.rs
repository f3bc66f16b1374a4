use crate::numcore::{spectral_radius_2x2, Spectrum};

/// Cells with `|ρ − 1|` at or below this are reported as boundary.
pub const BOUNDARY_TOL: f64 = 1e-8;

/// `|1 + ηλ|` below this (relative to `max(1, |ηλ|)`) is treated as a pole.
const POLE_TOL: f64 = 1e-12;

pub type Mat2 = [[f64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityVerdict {
    /// Closed-form predicate.
    pub predicate: bool,
    /// Largest spectral radius of the per-eigenvalue iteration matrices.
    pub spectral_radius: f64,
    /// `|ρ − 1| ≤ 1e−8`, or a pole.
    pub boundary: bool,
    /// `1 + ηλ_i = 0` for some eigenvalue; the implicit step is undefined.
    pub pole: bool,
}

impl StabilityVerdict {
    fn combine(parts: impl Iterator<Item = (bool, f64, bool)>) -> Self {
        let mut predicate = true;
        let mut radius: f64 = 0.0;
        let mut pole = false;
        for (p, r, is_pole) in parts {
            predicate &= p;
            radius = if r.is_nan() { f64::NAN } else { radius.max(r) };
            pole |= is_pole;
        }
        if pole {
            radius = f64::INFINITY;
        }
        Self {
            predicate,
            spectral_radius: radius,
            boundary: pole || (radius - 1.0).abs() <= BOUNDARY_TOL,
            pole,
        }
    }

    /// Whether the oracle says the iteration contracts.
    pub fn oracle_stable(&self) -> bool {
        self.spectral_radius < 1.0
    }

    /// Predicate and oracle agree, or the cell is on the boundary.
    pub fn consistent(&self) -> bool {
        self.boundary || self.predicate == self.oracle_stable()
    }
}

fn is_pole(eta: f64, lambda: f64) -> bool {
    (1.0 + eta * lambda).abs() <= POLE_TOL * (eta * lambda).abs().max(1.0)
}

fn radius(m: Mat2) -> f64 {
    spectral_radius_2x2(m[0][0], m[0][1], m[1][0], m[1][1])
}

/// Heavy-ball recursion on one eigen-coordinate, acting on `(e_t, e_{t−1})`.
pub fn gdm_companion(eta: f64, beta: f64, lambda: f64) -> Mat2 {
    [[1.0 + beta - eta * lambda, -beta], [1.0, 0.0]]
}

/// Proximal momentum recursion on one eigen-coordinate, acting on
/// `(φ_t, e_t)` with `φ_t = (e_{t−1} − e_t)/η`.
pub fn ppam_companion(eta: f64, beta: f64, lambda: f64) -> Mat2 {
    let d = 1.0 + eta * lambda;
    [[beta / d, lambda / d], [-eta * beta / d, 1.0 / d]]
}

/// Companion matrix whose spectral radius is the SGDM rate `ρ_λ(η, β)`:
/// characteristic polynomial `z² − (1+β)(1−ηλ) z + β(1−ηλ)`.
pub fn sgdm_companion(eta: f64, beta: f64, lambda: f64) -> Mat2 {
    let g = 1.0 - eta * lambda;
    [[(1.0 + beta) * g, -beta * g], [1.0, 0.0]]
}

/// `0 < η < 2/λ_i` for every eigenvalue; oracle `max |1 − ηλ_i|`.
pub fn gd_stable(eta: f64, spectrum: &Spectrum) -> StabilityVerdict {
    StabilityVerdict::combine(
        spectrum
            .eigenvalues()
            .iter()
            .map(|&l| (eta > 0.0 && eta < 2.0 / l, (1.0 - eta * l).abs(), false)),
    )
}

/// `|1/(1+ηλ_i)| < 1` for every eigenvalue; oracle `max |1/(1+ηλ_i)|`.
pub fn ppa_stable(eta: f64, spectrum: &Spectrum) -> StabilityVerdict {
    StabilityVerdict::combine(spectrum.eigenvalues().iter().map(|&l| {
        if is_pole(eta, l) {
            return (false, f64::INFINITY, true);
        }
        let r = (1.0 / (1.0 + eta * l)).abs();
        (r < 1.0, r, false)
    }))
}

/// `0 < ηλ_i < 2 + 2β` for every eigenvalue, together with `|β| < 1`; oracle is
/// the heavy-ball companion radius.
///
/// The momentum bound makes the predicate exact for every real `β`, not only
/// `0 ≤ β < 1`.
pub fn gdm_stable(eta: f64, beta: f64, spectrum: &Spectrum) -> StabilityVerdict {
    StabilityVerdict::combine(spectrum.eigenvalues().iter().map(|&l| {
        let el = eta * l;
        let pred = beta.abs() < 1.0 && 0.0 < el && el < 2.0 + 2.0 * beta;
        (pred, radius(gdm_companion(eta, beta, l)), false)
    }))
}

/// Three-case predicate on `c = (1+β)/(1+ηλ)`, `δ = c² − 4β/(1+ηλ)`:
///
/// * `δ ≤ 0`: complex pair of modulus `√(β/(1+ηλ))`, stable iff `β/(1+ηλ) < 1`
/// * `δ > 0, c ≥ 0`: `c + √δ < 2`
/// * otherwise: `c − √δ > −2`
///
/// The first case is written in its sign-aware form; the equivalent
/// `η > (β−1)/λ` needs `1 + ηλ > 0`.
pub fn ppam_stable(eta: f64, beta: f64, spectrum: &Spectrum) -> StabilityVerdict {
    StabilityVerdict::combine(spectrum.eigenvalues().iter().map(|&l| {
        if is_pole(eta, l) {
            return (false, f64::INFINITY, true);
        }
        let d = 1.0 + eta * l;
        let c = (1.0 + beta) / d;
        let delta = c * c - 4.0 * beta / d;
        let pred = if delta <= 0.0 {
            beta / d < 1.0
        } else if c >= 0.0 {
            c + delta.sqrt() < 2.0
        } else {
            c - delta.sqrt() > -2.0
        };
        (pred, radius(ppam_companion(eta, beta, l)), false)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::Rng;

    fn single(l: f64) -> Spectrum {
        Spectrum::new(vec![l])
    }

    #[test]
    fn gd_examples() {
        assert!(gd_stable(1.0, &single(1.0)).predicate);
        let v = gd_stable(2.0, &single(1.0));
        assert!(!v.predicate && v.boundary);
        assert!(!gd_stable(-1.0, &Spectrum::new(vec![1.0, 10.0])).predicate);
    }

    #[test]
    fn gd_matches_scalar_oracle() {
        let mut rng = Rng::new(1);
        for _ in 0..1000 {
            let eta = rng.next_f64() * 10.0 - 5.0;
            let l = 0.1 + rng.next_f64() * 9.9;
            let v = gd_stable(eta, &single(l));
            if !v.boundary {
                assert_eq!(v.predicate, (1.0 - eta * l).abs() < 1.0, "eta {eta} l {l}");
            }
        }
    }

    #[test]
    fn ppa_examples() {
        let spec = Spectrum::new(vec![0.5, 3.0]);
        for eta in [1e-3, 1.0, 50.0] {
            assert!(ppa_stable(eta, &spec).predicate);
        }
        let v = ppa_stable(-2.0, &single(1.0));
        assert!(v.boundary && !v.predicate);
        assert!(ppa_stable(1e8, &single(1.0)).spectral_radius < 1e-7);
        let v = ppa_stable(-1.0, &single(1.0));
        assert!(v.pole && v.boundary && !v.predicate);
    }

    #[test]
    fn gdm_examples() {
        let s = single(1.0);
        for eta in [-1.0, 0.5, 1.9, 2.1] {
            assert_eq!(
                gdm_stable(eta, 0.0, &s).predicate,
                gd_stable(eta, &s).predicate
            );
        }
        assert!(!gdm_stable(3.9, 0.9, &s).predicate);
        assert!(gdm_stable(3.7, 0.9, &s).predicate);
    }

    #[test]
    fn ppam_reduces_to_ppa() {
        let mut rng = Rng::new(2);
        for _ in 0..1000 {
            let eta = rng.next_f64() * 10.0 - 5.0;
            let s = single(0.1 + rng.next_f64() * 9.9);
            let a = ppam_stable(eta, 0.0, &s);
            let b = ppa_stable(eta, &s);
            assert_eq!(a.predicate, b.predicate);
            if !a.pole {
                assert!((a.spectral_radius - b.spectral_radius).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn complex_case_modulus() {
        // δ < 0: both eigenvalues have modulus √(β/(1+ηλ))
        let (eta, beta, l) = (0.5, 0.8, 2.0);
        let d: f64 = 1.0 + eta * l;
        let c = (1.0 + beta) / d;
        assert!(c * c - 4.0 * beta / d < 0.0);
        let v = ppam_stable(eta, beta, &single(l));
        assert!((v.spectral_radius - (beta / d).sqrt()).abs() < 1e-12);
        assert!(v.predicate);
    }

    #[test]
    fn duality_on_random_triples() {
        let mut rng = Rng::new(3);
        for _ in 0..1000 {
            let eta = rng.next_f64() * 10.0 - 5.0;
            let beta = rng.next_f64() * 10.0 - 5.0;
            let s = single(0.1 + rng.next_f64() * 9.9);
            assert!(gdm_stable(eta, beta, &s).consistent());
            assert!(ppam_stable(eta, beta, &s).consistent());
        }
    }
}
