//! Generalised Abelian integrals Θ⁽ᵏ⁾ (the comb maps) and their periods.
//!
//! dΘ⁽ᵏ⁾ = Q(λ)/(2√s(λ)) dλ where Q has degree N+k. The top k+1
//! coefficients are fixed by Θ⁽ᵏ⁾ ~ λ^{k+½} at infinity, the remaining N by
//! requiring that the differential integrates to zero over every gap.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::domain::{c, sqrt_lambda, Domain};
use crate::band_geometry::CharacterVector;
use crate::error::{Error, Result};
use crate::numerics::gauss_chebyshev;
use crate::numerics::linalg::{horner, solve_real};
use crate::numerics::roots::bracketed_root;

/// A built Θ⁽ᵏ⁾ together with its critical points and periods.
#[derive(Debug, Clone, Serialize)]
pub struct ThetaK {
    pub order: usize,
    /// Coefficients of Q in ascending order (degree N+k, leading 2k+1).
    pub numerator: Vec<f64>,
    /// One zero of Q in each gap.
    pub critical_points: Vec<f64>,
    /// The monic degree-k factor left after removing the gap zeros.
    pub extra_factor: Vec<f64>,
    /// Unreduced real frequencies ηⱼ = Re Θ⁽ᵏ⁾(gap j)/π.
    pub frequencies: Vec<f64>,
    /// Mₖ(cⱼ), the heights of the comb's needles.
    pub needle_heights: Vec<f64>,
    /// |∫_gap dΘ⁽ᵏ⁾| re-evaluated with an independent Chebyshev rule.
    pub gap_residuals: Vec<f64>,
}

impl ThetaK {
    pub fn build(domain: &Domain, k: usize) -> Result<ThetaK> {
        let n = domain.n();
        let deg = n + k;
        let mut q = vec![0.0; deg + 1];
        let top = domain.sqrt_s_series(k);
        for i in 0..=k {
            q[deg - i] = (2 * k + 1) as f64 * top.coeff(i);
        }
        if n > 0 {
            let lower = domain.gap_moments();
            let mut rhs = vec![0.0; n];
            for (j, r) in rhs.iter_mut().enumerate() {
                let high = domain.gap_moment_row(j, deg + 1)?;
                *r = -(n..=deg).map(|m| q[m] * high[m]).sum::<f64>();
            }
            let sol = solve_real(lower, &rhs, "normalising the Abelian integral")?;
            q[..n].copy_from_slice(&sol);
        }

        let qf = |x: f64| horner(&q, x);
        let mut critical_points = Vec::with_capacity(n);
        for g in domain.bands().gaps() {
            critical_points.push(bracketed_root(qf, g.a, g.b, domain.tolerances().geometry * g.b)?);
        }
        let mut rem = q.clone();
        for &cp in &critical_points {
            rem = deflate(&rem, cp);
        }
        let lead = *rem.last().expect("degree k quotient");
        let extra_factor = rem.iter().map(|v| v / lead).collect();

        let mut theta = ThetaK {
            order: k,
            numerator: q,
            critical_points,
            extra_factor,
            frequencies: Vec::new(),
            needle_heights: Vec::new(),
            gap_residuals: Vec::new(),
        };

        let mut acc = 0.0;
        for j in 0..n {
            acc += domain
                .band_integral_points(j, |p| horner(&theta.numerator, c(p.x)) / (domain.sqrt_s_at(&p) * 2.0))?
                .re;
            theta.frequencies.push(acc / PI);
        }
        for (j, g) in domain.bands().gaps().iter().enumerate() {
            let cp = theta.critical_points[j];
            let h = domain.real_segment(&|x| theta.derivative(domain, c(x)), g.a, cp)?;
            theta.needle_heights.push(h.im);
        }
        theta.gap_residuals = theta.independent_gap_integrals(domain);
        if theta.gap_residuals.iter().any(|r| !r.is_finite()) {
            return Err(Error::Numerical("non-finite gap residual".into()));
        }
        Ok(theta)
    }

    /// Θ⁽ᵏ⁾'(λ) = Q(λ)/(2√s(λ)).
    pub fn derivative(&self, domain: &Domain, lambda: C64) -> C64 {
        horner(&self.numerator, lambda) / (domain.sqrt_s(lambda) * 2.0)
    }

    /// Θ⁽ᵏ⁾(λ) with Θ(0) = 0, boundary values taken from ℂ₊.
    pub fn eval(&self, domain: &Domain, lambda: C64) -> Result<C64> {
        domain.integrate_path(|z| self.derivative(domain, z), lambda)
    }

    /// Mₖ(λ) = Im Θ⁽ᵏ⁾(λ).
    pub fn martin(&self, domain: &Domain, lambda: C64) -> Result<f64> {
        Ok(self.eval(domain, lambda)?.im)
    }

    /// Θ⁽ᵏ⁾(λ) − λ^{k+½}, integrated as one difference so that no large
    /// cancellation happens far out on ℝ₋.
    pub fn asymptotic_remainder(&self, domain: &Domain, lambda: C64) -> Result<C64> {
        let far = 4.0 * domain.bands().branch_points().last().copied().unwrap_or(0.0).max(1.0);
        domain.integrate_path(|z| self.remainder_derivative(domain, z, far), lambda)
    }

    /// Θ⁽ᵏ⁾'(λ) − (k+½)λ^{k−½}. Beyond |λ| = `far` this is written as
    /// (k+½)λ^{k−½}·expm1(log(1+u) − L), where 1+u = Q/((2k+1)λ^{N+k}) and
    /// L = ½Σ log((1−aⱼ/λ)(1−bⱼ/λ)), so nothing cancels.
    fn remainder_derivative(&self, domain: &Domain, z: C64, far: f64) -> C64 {
        let k = self.order;
        let kh = k as f64 + 0.5;
        let leading = z.powi(k as i32) * kh / sqrt_lambda(z);
        if z.norm() <= far {
            return self.derivative(domain, z) - leading;
        }
        let deg = self.numerator.len() - 1;
        let w = z.inv();
        let u = (1..=deg).fold(c(0.0), |acc, i| acc + self.numerator[deg - i] * w.powi(i as i32)) / (2 * k + 1) as f64;
        let l = domain
            .bands()
            .gaps()
            .iter()
            .fold(c(0.0), |acc, g| acc + (ln_1p(-w * g.a) + ln_1p(-w * g.b)) * 0.5);
        leading * exp_m1(ln_1p(u) - l)
    }

    /// The period vector η⁽ᵏ⁾ reduced onto the torus.
    pub fn character(&self) -> CharacterVector {
        CharacterVector::new(self.frequencies.clone())
    }

    fn independent_gap_integrals(&self, domain: &Domain) -> Vec<f64> {
        domain
            .bands()
            .gaps()
            .iter()
            .map(|&g| {
                let f = |x: f64| self.derivative(domain, c(x)) * ((x - g.a) * (g.b - x)).sqrt();
                gauss_chebyshev(f, g, 256).norm()
            })
            .collect()
    }
}

/// log(1 + w) without losing the digits of a small w.
fn ln_1p(w: C64) -> C64 {
    let modulus = 0.5 * (2.0 * w.re + w.norm_sqr()).ln_1p();
    C64::new(modulus, w.im.atan2(1.0 + w.re))
}

/// e^w − 1 without losing the digits of a small w.
fn exp_m1(w: C64) -> C64 {
    let half = (0.5 * w.im).sin();
    let re = w.re.exp_m1() * w.im.cos() - 2.0 * half * half;
    C64::new(re, w.re.exp() * w.im.sin())
}

/// Synthetic division of an ascending-coefficient polynomial by (x − r).
fn deflate(p: &[f64], r: f64) -> Vec<f64> {
    let n = p.len() - 1;
    let mut out = vec![0.0; n];
    let mut carry = 0.0;
    for i in (1..=n).rev() {
        carry = p[i] + carry * r;
        out[i - 1] = carry;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::domain::I;
    use crate::band_geometry::BandSet;

    fn dom(g: &[(f64, f64)]) -> Domain {
        Domain::new(BandSet::new(g).unwrap()).unwrap()
    }

    #[test]
    fn free_case_is_sqrt() {
        let d = dom(&[]);
        let t = ThetaK::build(&d, 0).unwrap();
        assert!(t.critical_points.is_empty());
        assert!((t.eval(&d, c(-1.0)).unwrap() - I).norm() < 1e-12);
    }

    #[test]
    fn one_gap_critical_point_left_of_midpoint() {
        let d = dom(&[(1.0, 2.0)]);
        let t = ThetaK::build(&d, 0).unwrap();
        let c1 = t.critical_points[0];
        assert!(c1 > 1.0 && c1 < 1.5, "{c1}");
        assert!(t.gap_residuals[0] < 1e-10);
        // Scan + bisection oracle on the gap integral as a function of the
        // trial critical point.
        let g = |cp: f64| {
            let f = |x: f64| (x - cp) / d.sqrt_s_real(x) * ((x - 1.0) * (2.0 - x)).sqrt();
            gauss_chebyshev(f, d.bands().gap(0), 400).im
        };
        let mut lo = 1.0;
        let mut hi = 2.0;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if g(lo).signum() == g(mid).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((c1 - lo).abs() < 1e-12);
    }

    #[test]
    fn real_part_constant_across_gap() {
        let d = dom(&[(1.0, 2.0)]);
        let t = ThetaK::build(&d, 0).unwrap();
        for x in [1.1, 1.4, 1.9] {
            let v = t.eval(&d, c(x)).unwrap();
            assert!((v.re - PI * t.frequencies[0]).abs() < 1e-10);
        }
        assert!(t.martin(&d, c(1.0)).unwrap().abs() < 1e-9);
        assert!(t.martin(&d, c(2.0)).unwrap().abs() < 1e-9);
        let h = t.martin(&d, c(t.critical_points[0])).unwrap();
        assert!((h - t.needle_heights[0]).abs() < 1e-10 && h > 0.0);
    }

    #[test]
    fn derivative_matches_product_form() {
        let d = dom(&[(1.0, 2.0), (3.0, 4.0)]);
        let t = ThetaK::build(&d, 0).unwrap();
        for i in 0..20 {
            let l = -0.1 - 0.7 * i as f64;
            let mut prod = c(1.0);
            for (g, cp) in d.bands().gaps().iter().zip(&t.critical_points) {
                prod *= (1.0 - cp / l) / ((1.0 - g.a / l) * (1.0 - g.b / l)).sqrt();
            }
            let expected = prod / (sqrt_lambda(c(l)) * 2.0);
            let got = t.derivative(&d, c(l));
            assert!((got - expected).norm() < 1e-10 * expected.norm(), "{l}");
        }
    }

    #[test]
    fn extra_factor_has_degree_k() {
        let d = dom(&[(1.0, 2.0), (3.0, 4.0)]);
        let t = ThetaK::build(&d, 2).unwrap();
        assert_eq!(t.extra_factor.len(), 3);
        assert_eq!(t.extra_factor[2], 1.0);
        assert!(t.gap_residuals.iter().all(|r| *r < 1e-10));
    }
}
