//! The Widom function 𝒲 = ∏Φ(·, cⱼ), the Widom–Martin sum Σ M(cⱼ) and the
//! entropy integral of the density of states.

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::domain::{c, sqrt_lambda, Domain};
use super::green::GreenPole;
use super::theta::ThetaK;
use crate::band_geometry::CharacterVector;
use crate::error::Result;

/// Blaschke-type factors at the Martin critical points.
pub struct WidomFunction<'d> {
    factors: Vec<GreenPole<'d>>,
}

impl<'d> WidomFunction<'d> {
    pub fn build(domain: &'d Domain, martin: &ThetaK) -> Result<Self> {
        let factors = martin
            .critical_points
            .iter()
            .map(|&cp| GreenPole::build(domain, cp))
            .collect::<Result<_>>()?;
        Ok(WidomFunction { factors })
    }

    pub fn log_eval(&self, lambda: C64) -> Result<C64> {
        self.factors.iter().try_fold(c(0.0), |s, f| Ok(s + f.log_phi(lambda)?))
    }

    pub fn eval(&self, lambda: C64) -> Result<C64> {
        Ok(self.log_eval(lambda)?.exp())
    }

    /// α_𝒲 = Σⱼ ν_{cⱼ}.
    pub fn character(&self) -> CharacterVector {
        let n = self.factors.len();
        let mut v = vec![0.0; n];
        for f in &self.factors {
            for (a, b) in v.iter_mut().zip(f.character_components()) {
                *a += b;
            }
        }
        CharacterVector::new(v)
    }

    pub fn factors(&self) -> &[GreenPole<'d>] {
        &self.factors
    }
}

/// Both sides of the entropy identity.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WidomEntropy {
    /// Σⱼ M(cⱼ).
    pub widom_sum: f64,
    /// (1/2π)∫_E ρ log ρ dξ/√ξ.
    pub entropy: f64,
    pub difference: f64,
}

/// ρ(ξ) = 2√ξ·Θ'(ξ), the boundary density of dΘ on E normalised to 1 at ∞.
pub fn density_of_states(domain: &Domain, martin: &ThetaK, x: f64) -> f64 {
    (martin.derivative(domain, c(x)) * sqrt_lambda(c(x)) * 2.0).re
}

/// log ρ(ξ) on the bands, summed factor by factor with log1p so that the
/// far tail, where ρ → 1, keeps full relative accuracy.
pub fn log_density(domain: &Domain, martin: &ThetaK, x: f64) -> f64 {
    let l1 = |t: f64| if t.abs() < 0.5 { t.ln_1p() } else { (1.0 + t).abs().ln() };
    let mut s = 0.0;
    for (g, &cp) in domain.bands().gaps().iter().zip(&martin.critical_points) {
        s += l1(-cp / x) - 0.5 * (l1(-g.a / x) + l1(-g.b / x));
    }
    s
}

pub fn widom_sum_and_entropy(domain: &Domain, martin: &ThetaK) -> Result<WidomEntropy> {
    let widom_sum: f64 = martin.needle_heights.iter().sum();
    let mut integral = 0.0;
    for l in 0..=domain.n() {
        integral += entropy_band(domain, martin, l)?;
    }
    let entropy = integral / (2.0 * std::f64::consts::PI);
    Ok(WidomEntropy {
        widom_sum,
        entropy,
        difference: widom_sum - entropy,
    })
}

/// log ρ at a band point given its exact distances to the two band ends,
/// so that nothing cancels when ξ crowds an endpoint.
fn log_density_near(domain: &Domain, martin: &ThetaK, x: f64, ends: [(f64, f64); 2]) -> f64 {
    let dist = |e: f64| {
        for (end, d) in ends {
            if e == end {
                return d;
            }
        }
        (x - e).abs()
    };
    let mut s = 0.0;
    for (g, &cp) in domain.bands().gaps().iter().zip(&martin.critical_points) {
        s += (x - cp).abs().ln() - 0.5 * (dist(g.a).ln() + dist(g.b).ln());
    }
    s
}

/// ∫ ρ log ρ dξ/√ξ over one band. Near each band end the integrand behaves
/// like |ξ−e|^{−1/2} log|ξ−e|; after ξ = m − r cos θ a log θ singularity is
/// left, which the smoothstep map θ = π·t²(3−2t) flattens at both ends.
fn entropy_band(domain: &Domain, martin: &ThetaK, l: usize) -> Result<f64> {
    use crate::numerics::adaptive_gauss_kronrod;
    use crate::numerics::quadrature::tail_split;
    use std::f64::consts::PI;
    // Rounding in log ρ puts a floor near 1e−10 on the attainable error
    // estimate, so this integral runs one notch looser.
    let tol = domain.tolerances().quadrature.max(1e-9);
    let term = |x: f64, lr: f64| lr * lr.exp() / x.sqrt();
    let (lo, hi) = domain.bands().bands()[l];
    let finite_hi = if hi.is_finite() { hi } else { tail_split(lo) };
    let r = 0.5 * (finite_hi - lo);
    let head = |t: f64| {
        let th = PI * t * t * (3.0 - 2.0 * t);
        let dth = 6.0 * PI * t * (1.0 - t);
        let (sh, ch) = ((0.5 * th).sin(), (0.5 * th).cos());
        let (dl, dh) = (2.0 * r * sh * sh, 2.0 * r * ch * ch);
        let x = if dl <= dh { lo + dl } else { finite_hi - dh };
        if dl == 0.0 || dh == 0.0 {
            return c(0.0);
        }
        let ends = if hi.is_finite() {
            [(lo, dl), (hi, dh)]
        } else {
            [(lo, dl), (f64::NAN, 0.0)]
        };
        let lr = log_density_near(domain, martin, x, ends);
        c(term(x, lr) * r * th.sin() * dth)
    };
    let mut total = adaptive_gauss_kronrod(head, 0.0, 1.0, tol)?.value.re;
    if !hi.is_finite() {
        let umax = 1.0 / finite_hi;
        let tail = |u: f64| {
            if u == 0.0 {
                return c(0.0);
            }
            let x = 1.0 / u;
            c(term(x, log_density(domain, martin, x)) / (u * u))
        };
        total += adaptive_gauss_kronrod(tail, 0.0, umax, tol)?.value.re;
    }
    Ok(total)
}
