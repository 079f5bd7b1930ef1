//! Resolvent diagonal R, the Dirichlet weights σⱼ and the Weyl functions m±
//! in their pole-expansion form.
//!
//! With P(λ) = ∏(λ − λⱼ) the resolvent diagonal is R = iP/(2√s), and
//!
//!   m±(λ) = −1/(2R(λ)) ± Σⱼ σⱼεⱼλⱼ / (2(λⱼ − λ)),
//!
//! so m₊ and m₋ differ only by the sign of ε, and m₊(0) = ½Σσⱼεⱼ. A term with εⱼ = +1 leaves
//! m₊ with a pole at λⱼ (negative residue), while εⱼ = −1 cancels the zero
//! of R there.

use num_complex::Complex64 as C64;

use crate::abelian::Domain;
use crate::band_geometry::{Divisor, Gap};
use crate::error::{Error, Result};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// σₖ = 2√((λₖ−aₖ)(bₖ−λₖ))/√λₖ · ∏_{j≠k} |√((1−aⱼ/λₖ)(1−bⱼ/λₖ))/(1−λⱼ/λₖ)|.
pub fn sigma_weights(gaps: &[Gap], d: &Divisor) -> Vec<f64> {
    let lambdas = d.lambdas();
    lambdas
        .iter()
        .enumerate()
        .map(|(k, &l)| {
            let g = gaps[k];
            let own = 2.0 * ((l - g.a).max(0.0) * (g.b - l).max(0.0)).sqrt() / l.sqrt();
            let mut prod = 1.0;
            for (j, (&lj, gj)) in lambdas.iter().zip(gaps).enumerate() {
                if j != k {
                    prod *= ((1.0 - gj.a / l) * (1.0 - gj.b / l)).abs().sqrt() / (1.0 - lj / l).abs();
                }
            }
            own * prod
        })
        .collect()
}

/// Evaluators for R and m± at a fixed divisor.
#[derive(Debug, Clone)]
pub struct WeylFunctions<'d> {
    domain: &'d Domain,
    lambdas: Vec<f64>,
    signs: Vec<f64>,
    sigma: Vec<f64>,
}

impl<'d> WeylFunctions<'d> {
    pub fn new(domain: &'d Domain, d: &Divisor) -> Self {
        WeylFunctions {
            domain,
            lambdas: d.lambdas(),
            signs: d.signs(),
            sigma: sigma_weights(domain.bands().gaps(), d),
        }
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    fn p(&self, lambda: C64) -> C64 {
        self.lambdas.iter().fold(C64::new(1.0, 0.0), |acc, &l| acc * (lambda - l))
    }

    fn check(&self, lambda: C64) -> Result<()> {
        if lambda.norm() == 0.0 {
            return Err(Error::Validation("the resolvent is singular at λ = 0".into()));
        }
        Ok(())
    }

    /// R(λ) = (i/2√λ)·∏(1−λⱼ/λ)/√((1−aⱼ/λ)(1−bⱼ/λ)).
    pub fn resolvent(&self, lambda: C64) -> Result<C64> {
        self.check(lambda)?;
        Ok(I * self.p(lambda) / (self.domain.sqrt_s(lambda) * 2.0))
    }

    /// −1/R(λ) = m₊ + m₋ = 2i√s/P.
    pub fn inverse_resolvent(&self, lambda: C64) -> Result<C64> {
        self.check(lambda)?;
        Ok(I * self.domain.sqrt_s(lambda) * 2.0 / self.p(lambda))
    }

    /// m₊(0) = ½Σσⱼεⱼ.
    pub fn m_plus_at_zero(&self) -> f64 {
        0.5 * self.sigma.iter().zip(&self.signs).map(|(s, e)| s * e).sum::<f64>()
    }

    fn pole_sum(&self, lambda: C64, sign: f64) -> Result<C64> {
        let mut s = C64::new(0.0, 0.0);
        let gaps = self.domain.bands().gaps();
        for (((&l, &e), &w), g) in self.lambdas.iter().zip(&self.signs).zip(&self.sigma).zip(gaps) {
            if (lambda - l).norm() < 1e-12 * g.width() && w > 0.0 {
                return Err(Error::Pole(l));
            }
            s += sign * e * w * l / ((l - lambda) * 2.0);
        }
        Ok(s)
    }

    /// m₊(λ) = −1/(2R) + Σ σⱼεⱼλⱼ/(2(λⱼ−λ)).
    pub fn m_plus(&self, lambda: C64) -> Result<C64> {
        Ok(self.inverse_resolvent(lambda)? * 0.5 + self.pole_sum(lambda, 1.0)?)
    }

    /// m₋(λ) = −1/(2R) − Σ σⱼεⱼλⱼ/(2(λⱼ−λ)).
    pub fn m_minus(&self, lambda: C64) -> Result<C64> {
        Ok(self.inverse_resolvent(lambda)? * 0.5 + self.pole_sum(lambda, -1.0)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::band_geometry::BandSet;

    fn dom(g: &[(f64, f64)]) -> Domain {
        Domain::new(BandSet::new(g).unwrap()).unwrap()
    }

    #[test]
    fn one_gap_midpoint_weight() {
        let d = dom(&[(1.0, 2.0)]);
        let div = Divisor::from_pairs(d.bands(), &[(1.5, 1.0)]).unwrap();
        let s = sigma_weights(d.bands().gaps(), &div);
        assert!((s[0] - 2.0 * 0.5 / 1.5f64.sqrt()).abs() < 1e-15);
        let div = Divisor::from_pairs(d.bands(), &[(1.0, 1.0)]).unwrap();
        assert_eq!(sigma_weights(d.bands().gaps(), &div)[0], 0.0);
    }

    #[test]
    fn free_values() {
        let d = dom(&[]);
        let w = WeylFunctions::new(&d, &Divisor::empty());
        assert!((w.resolvent(C64::new(-1.0, 0.0)).unwrap() - 0.5).norm() < 1e-15);
        assert!((w.m_plus(C64::new(-1.0, 0.0)).unwrap() + 1.0).norm() < 1e-15);
        assert!(w.resolvent(C64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn pole_side_follows_sign() {
        let d = dom(&[(1.0, 2.0), (3.0, 4.0)]);
        let div = Divisor::from_pairs(d.bands(), &[(1.4, 1.0), (3.3, -1.0)]).unwrap();
        let w = WeylFunctions::new(&d, &div);
        let near = |x: f64| w.m_plus(C64::new(x, 0.0)).unwrap().norm();
        assert!(near(1.4 + 1e-7) > 1e5);
        assert!(near(3.3 + 1e-7) < 1e2);
        let m = |x: f64| w.m_minus(C64::new(x, 0.0)).unwrap().norm();
        assert!(m(1.4 + 1e-7) < 1e2);
        assert!(m(3.3 + 1e-7) > 1e5);
    }

    #[test]
    fn herglotz_and_diagonal_identity() {
        let d = dom(&[(1.0, 2.0), (3.0, 4.0)]);
        let div = Divisor::from_pairs(d.bands(), &[(1.7, -1.0), (3.1, 1.0)]).unwrap();
        let w = WeylFunctions::new(&d, &div);
        for z in [C64::new(-3.0, 0.1), C64::new(0.5, 1.0), C64::new(2.5, 0.01), C64::new(10.0, 3.0)] {
            assert!(w.m_plus(z).unwrap().im > 0.0);
            assert!(w.m_minus(z).unwrap().im > 0.0);
            let lhs = w.m_plus(z).unwrap() + w.m_minus(z).unwrap();
            let rhs = -1.0 / w.resolvent(z).unwrap();
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
        }
    }
}
