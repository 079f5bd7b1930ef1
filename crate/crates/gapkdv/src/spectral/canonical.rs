//! Canonical products e(λ, D).
//!
//! e(λ, D) = √( ∏ (1−λⱼ/λ)Φ(λ,cⱼ) / ((1−cⱼ/λ)Φ(λ,λⱼ)) ) · ∏ Φ(λ,λⱼ)^{(1+εⱼ)/2}
//!
//! Everything is evaluated as a logarithm. Each piece is analytic in ℂ₊
//! and continuous up to the real axis from above, and all of them are real
//! on ℝ₋ (log Φ by its anchor, log(1−x/λ) because both λ−x and λ carry
//! argument π there), so the square root is the one that is positive on ℝ₋.
//! Since Φ(−∞, ·) = 1, e(λ, D) → 1 as λ → −∞.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::abelian::{Domain, GreenPole, WidomFunction};
use crate::band_geometry::{Divisor, Sheet};
use crate::error::Result;

/// log(1 − x/λ) on the closed upper half-plane.
pub(crate) fn log_one_minus(x: f64, lambda: C64) -> C64 {
    log_closed_upper(lambda - x) - log_closed_upper(lambda)
}

fn log_closed_upper(z: C64) -> C64 {
    if z.im == 0.0 && z.re < 0.0 {
        C64::new((-z.re).ln(), std::f64::consts::PI)
    } else {
        z.ln()
    }
}

/// e(·, D) for one divisor, with the Green factors at its points built.
#[derive(Debug, Clone)]
pub struct CanonicalProduct<'d> {
    divisor: Divisor,
    poles: Vec<GreenPole<'d>>,
}

impl<'d> CanonicalProduct<'d> {
    pub fn build(domain: &'d Domain, divisor: &Divisor) -> Result<Self> {
        let poles = divisor
            .lambdas()
            .par_iter()
            .map(|&l| GreenPole::build(domain, l))
            .collect::<Result<_>>()?;
        Ok(CanonicalProduct {
            divisor: divisor.clone(),
            poles,
        })
    }

    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    /// log e(λ, D); `widom` supplies the factors Φ(·, cⱼ).
    pub fn log_eval(&self, widom: &WidomFunction<'d>, lambda: C64) -> Result<C64> {
        let mut total = C64::new(0.0, 0.0);
        for ((p, phi_l), phi_c) in self.divisor.points().iter().zip(&self.poles).zip(widom.factors()) {
            let log_pl = phi_l.log_phi(lambda)?;
            let log_pc = phi_c.log_phi(lambda)?;
            total += 0.5 * (log_one_minus(p.lambda, lambda) - log_one_minus(phi_c.pole(), lambda) + log_pc - log_pl);
            if p.eps == Sheet::Plus {
                total += log_pl;
            }
        }
        Ok(total)
    }

    pub fn eval(&self, widom: &WidomFunction<'d>, lambda: C64) -> Result<C64> {
        Ok(self.log_eval(widom, lambda)?.exp())
    }
}
