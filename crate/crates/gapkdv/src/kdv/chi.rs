//! Expansion coefficients of m₊ at −∞.
//!
//! With μ = √λ the function (m₊(μ²) − m₊(0))/(iμ) has the expansion
//! 1 + χ₀/μ + χ₁/μ² + … along the positive imaginary μ-axis. For the pole
//! representation of m₊ used in this crate it splits cleanly:
//!
//! * the even coefficients come from the pole sum,
//!   χ₂ₖ = (i/2)·Σ σⱼεⱼλⱼᵏ, so χ₀ = i·m₊(0);
//! * the odd coefficients come from i√s/P = iμ·exp(−Σₘ τₘ λ^{−(m+1)}), where
//!   τₘ = ∫ ξᵐ f(ξ) dξ and 2f = −1 on (aⱼ, λⱼ), +1 on (λⱼ, bⱼ), 0 elsewhere.
//!
//! The sign pattern of the even terms (εⱼ included) is checked against the
//! asymptotic oracle below, which only evaluates m₊ and R.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::abelian::Domain;
use crate::band_geometry::{BandSet, Divisor};
use crate::error::{Error, Result};
use crate::numerics::linalg::least_squares_real;
use crate::numerics::{richardson_limit, series_exp, TruncatedSeries};
use crate::spectral::{sigma_weights, WeylFunctions};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Where a coefficient came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChiSource {
    ClosedForm,
    AsymptoticOracle,
}

/// χ₀ … χₙ with the moments τ₀ … τ_k behind the odd ones.
#[derive(Debug, Clone, Serialize)]
pub struct ChiCoefficients {
    pub values: Vec<C64>,
    pub moments: Vec<f64>,
    pub sources: Vec<ChiSource>,
    /// Set when the oracle's extrapolation did not settle.
    pub warning: bool,
}

impl ChiCoefficients {
    /// Highest index n available (2k for a hierarchy order k).
    pub fn order(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    pub fn get(&self, n: usize) -> C64 {
        self.values.get(n).copied().unwrap_or_default()
    }
}

/// τₘ for m = 0..count, by exact integration of ξᵐ over the two pieces of
/// each gap.
pub fn moments(bands: &BandSet, d: &Divisor, count: usize) -> Vec<f64> {
    (0..count)
        .map(|m| {
            let p = (m + 1) as i32;
            bands
                .gaps()
                .iter()
                .zip(d.lambdas())
                .map(|(g, l)| (0.5 * g.a.powi(p) + 0.5 * g.b.powi(p) - l.powi(p)) / p as f64)
                .sum()
        })
        .collect()
}

/// χ₀ … χ_{2k} in closed form.
pub fn chi_closed_form(bands: &BandSet, d: &Divisor, k: usize) -> ChiCoefficients {
    let n = 2 * k;
    let tau = moments(bands, d, k + 1);
    // exp(−Σ τₘ z^{m+1}) with z = 1/λ; the coefficient of z^{m+1} is χ_{2m+1}.
    let mut log = vec![0.0; k + 2];
    for (m, t) in tau.iter().enumerate() {
        log[m + 1] = -t;
    }
    let odd = series_exp(&TruncatedSeries::new(log, k + 1));
    let sigma = sigma_weights(bands.gaps(), d);
    let lambdas = d.lambdas();
    let signs = d.signs();
    let values = (0..=n)
        .map(|i| {
            if i % 2 == 1 {
                C64::new(odd.coeff(i / 2 + 1), 0.0)
            } else {
                let p = (i / 2) as i32;
                let s: f64 = sigma.iter().zip(&signs).zip(&lambdas).map(|((w, e), l)| w * e * l.powi(p)).sum();
                I * (0.5 * s)
            }
        })
        .collect();
    ChiCoefficients {
        values,
        moments: tau,
        sources: vec![ChiSource::ClosedForm; n + 1],
        warning: false,
    }
}

/// Sample count and polynomial degree of the oracle's fits.
const ORACLE_SAMPLES: usize = 16;
const ORACLE_DEGREE: usize = 8;

/// χ₀ … χₙ recovered from values of m₊ and R alone.
///
/// On λ = −y² the two halves of m₊ are separated through the resolvent:
/// −1/(2R) is even in μ and m₊ + 1/(2R) is odd. Each half is fitted by a
/// polynomial in z = 1/λ from samples with y ∈ [3, 12]·√(top branch point),
/// where both are analytic in z, and the coefficients are read off. m₊(0)
/// is the limit of m₊ along ℝ₋, extrapolated in √|λ|.
pub fn chi_asymptotic_oracle(domain: &Domain, d: &Divisor, n: usize) -> Result<ChiCoefficients> {
    let weyl = WeylFunctions::new(domain, d);
    let scale = domain.bands().branch_points().last().map_or(1.0, |b| b.sqrt().max(1.0));
    let ys: Vec<f64> = (0..ORACLE_SAMPLES)
        .map(|i| 3.0 * scale * 4f64.powf(i as f64 / (ORACLE_SAMPLES - 1) as f64))
        .collect();
    let z0 = -1.0 / (ys[0] * ys[0]);
    let mut rows = Vec::with_capacity(ys.len());
    let mut even = Vec::with_capacity(ys.len());
    let mut odd = Vec::with_capacity(ys.len());
    for &y in &ys {
        let lambda = C64::new(-y * y, 0.0);
        let half = weyl.inverse_resolvent(lambda)? * 0.5;
        // iμ = −y on the positive imaginary μ-axis.
        even.push((half / -y).re);
        odd.push((weyl.m_plus(lambda)? - half).re);
        let u = lambda.re.recip() / z0;
        rows.push((0..=ORACLE_DEGREE).map(|p| u.powi(p as i32)).collect::<Vec<f64>>());
    }
    let unscale = |c: Vec<f64>| -> Vec<f64> { c.iter().enumerate().map(|(p, v)| v / z0.powi(p as i32)).collect() };
    let f = unscale(least_squares_real(&rows, &even, "fitting the even half of m₊")?);
    let h = unscale(least_squares_real(&rows, &odd, "fitting the odd half of m₊")?);
    let deltas: Vec<f64> = (0..6).map(|i| 1e-2 * 4f64.powi(-i)).collect();
    let near_zero: Vec<f64> = deltas
        .iter()
        .map(|&dl| Ok(weyl.m_plus(C64::new(-dl, 0.0))?.re))
        .collect::<Result<_>>()?;
    let roots: Vec<f64> = deltas.iter().map(|dl| dl.sqrt()).collect();
    let m0 = richardson_limit(&roots, &near_zero, Some(1.0));
    let usable = ORACLE_DEGREE / 2;
    let values = (0..=n)
        .map(|i| match i {
            0 => I * m0.value,
            _ if i % 2 == 1 => C64::new(f.get(i / 2 + 1).copied().unwrap_or(f64::NAN), 0.0),
            _ => -I * h.get(i / 2).copied().unwrap_or(f64::NAN),
        })
        .collect::<Vec<_>>();
    if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Numerical(format!(
            "the oracle fit resolves χ only through index {}",
            ORACLE_DEGREE
        )));
    }
    // The fit's own normalisation (even half → 1, odd half → 0 at ∞) is a
    // built-in consistency check.
    let drift = (f[0] - 1.0).abs().max(h[0].abs());
    Ok(ChiCoefficients {
        values,
        moments: Vec::new(),
        sources: vec![ChiSource::AsymptoticOracle; n + 1],
        warning: m0.warn || drift > 1e-10 || n > 2 * usable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dom(g: &[(f64, f64)]) -> Domain {
        Domain::new(BandSet::new(g).unwrap()).unwrap()
    }

    #[test]
    fn midpoint_divisor_has_zero_first_moment() {
        let d = dom(&[(1.0, 2.0)]);
        let div = Divisor::from_pairs(d.bands(), &[(1.5, 1.0)]).unwrap();
        let chi = chi_closed_form(d.bands(), &div, 1);
        assert!(chi.moments[0].abs() < 1e-15);
        assert!(chi.get(1).norm() < 1e-15);
    }

    #[test]
    fn trace_formula_arithmetic() {
        let d = dom(&[(1.0, 2.0)]);
        let div = Divisor::from_pairs(d.bands(), &[(1.2, -1.0)]).unwrap();
        let chi = chi_closed_form(d.bands(), &div, 1);
        assert!((-2.0 * chi.get(1).re - 0.6).abs() < 1e-14);
    }

    #[test]
    fn parities_of_closed_form() {
        let d = dom(&[(1.0, 2.0), (3.0, 4.5)]);
        let div = Divisor::from_pairs(d.bands(), &[(1.3, 1.0), (4.1, -1.0)]).unwrap();
        let chi = chi_closed_form(d.bands(), &div, 2);
        for (i, c) in chi.values.iter().enumerate() {
            if i % 2 == 0 {
                assert_eq!(c.re, 0.0);
            } else {
                assert_eq!(c.im, 0.0);
            }
        }
        let w = WeylFunctions::new(&d, &div);
        assert!((chi.get(0) - I * w.m_plus_at_zero()).norm() < 1e-15);
    }

    #[test]
    fn free_oracle_vanishes() {
        let d = dom(&[]);
        let chi = chi_asymptotic_oracle(&d, &Divisor::empty(), 4).unwrap();
        assert!(chi.values.iter().all(|c| c.norm() < 1e-12));
    }

    #[test]
    fn oracle_matches_closed_form_one_gap() {
        let d = dom(&[(1.0, 2.0)]);
        for (l, e) in [(1.2, 1.0), (1.7, -1.0), (1.5, 1.0)] {
            let div = Divisor::from_pairs(d.bands(), &[(l, e)]).unwrap();
            let closed = chi_closed_form(d.bands(), &div, 2);
            let oracle = chi_asymptotic_oracle(&d, &div, 4).unwrap();
            for i in 0..=3 {
                let scale = closed.get(i).norm().max(1.0);
                assert!(
                    (closed.get(i) - oracle.get(i)).norm() < 1e-8 * scale,
                    "χ_{i}: {} vs {}",
                    closed.get(i),
                    oracle.get(i)
                );
            }
        }
    }
}
