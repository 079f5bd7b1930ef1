//! Differential identities along the flows, and the uniform bound on χ₂ₖ.

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::chi::chi_closed_form;
use super::hierarchy::ab_coefficients;
use super::lattice::trace_potential;
use crate::abel_flow::{AbelMap, FlowState};
use crate::abelian::{sqrt_lambda, ThetaK};
use crate::band_geometry::{BandSet, Divisor};
use crate::error::{Error, Result};
use crate::numerics::{series_exp, TruncatedSeries};
use crate::spectral::{CanonicalProduct, SpectralContext, WeylFunctions};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Central differences at steps h and h/2, and their Richardson combination.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FlowDerivative {
    pub coarse: C64,
    pub fine: C64,
    pub extrapolated: C64,
}

impl FlowDerivative {
    pub fn of<F: Fn(f64) -> Result<C64>>(f: F, h: f64) -> Result<Self> {
        let coarse = (f(h)? - f(-h)?) / (2.0 * h);
        let fine = (f(h / 2.0)? - f(-h / 2.0)?) / h;
        Ok(FlowDerivative {
            coarse,
            fine,
            extrapolated: (fine * 4.0 - coarse) / 3.0,
        })
    }
}

/// Residuals of an identity checked with a flow derivative at h and h/2;
/// `order` is log₂ of their ratio.
#[derive(Debug, Clone, Serialize)]
pub struct DerivativeResidual {
    pub coarse: f64,
    pub fine: f64,
    pub extrapolated: f64,
    pub order: f64,
}

impl DerivativeResidual {
    fn new(coarse: f64, fine: f64, extrapolated: f64) -> Self {
        let order = if coarse > 0.0 && fine > 0.0 { (coarse / fine).log2() } else { 0.0 };
        DerivativeResidual {
            coarse,
            fine,
            extrapolated,
            order,
        }
    }

    fn worst(items: &[DerivativeResidual]) -> DerivativeResidual {
        let pick = |f: fn(&DerivativeResidual) -> f64| items.iter().map(f).fold(0.0, f64::max);
        DerivativeResidual::new(pick(|r| r.coarse), pick(|r| r.fine), pick(|r| r.extrapolated))
    }
}

fn divisor_at(map: &AbelMap, flow: &FlowState, x: f64, t: f64) -> Result<Divisor> {
    flow.divisor_at(map, x, t, Some(&flow.seed))
}

/// χ₁ at the base of the flow three ways: ½(χ₀² − i∂_ηχ₀) with a flow
/// derivative, the moment expansion, and −V/2 from the trace formula.
#[derive(Debug, Clone, Serialize)]
pub struct Chi1Agreement {
    pub by_derivative: C64,
    pub by_moments: f64,
    pub by_trace: f64,
    pub max_relative: f64,
}

pub fn chi1_three_way(map: &AbelMap, flow: &FlowState, h: f64) -> Result<Chi1Agreement> {
    let bands = map.domain().bands();
    let chi0 = |x: f64| -> Result<C64> { Ok(chi_closed_form(bands, &divisor_at(map, flow, x, 0.0)?, 0).get(0)) };
    let base = chi0(0.0)?;
    let d = FlowDerivative::of(chi0, h)?.extrapolated;
    // ∂_η = −d/dx along the x-flow.
    let by_derivative = 0.5 * (base * base + I * d);
    let by_moments = chi_closed_form(bands, &flow.seed, 1).get(1).re;
    let by_trace = -0.5 * trace_potential(bands, &flow.seed);
    let scale = by_trace.abs().max(by_moments.abs()).max(1e-3);
    let max_relative = [
        (by_derivative - by_moments).norm(),
        (by_derivative - by_trace).norm(),
        (by_moments - by_trace).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
        / scale;
    Ok(Chi1Agreement {
        by_derivative,
        by_moments,
        by_trace,
        max_relative,
    })
}

/// d/dx m₊^{α(x)}(λ) at x = 0 against V(0) − λ − m₊(λ)².
pub fn riccati_check(map: &AbelMap, flow: &FlowState, lambda: C64, h: f64) -> Result<DerivativeResidual> {
    let domain = map.domain();
    let m = |x: f64| -> Result<C64> { WeylFunctions::new(domain, &divisor_at(map, flow, x, 0.0)?).m_plus(lambda) };
    let m0 = m(0.0)?;
    let rhs = trace_potential(domain.bands(), &flow.seed) - lambda - m0 * m0;
    let d = FlowDerivative::of(m, h)?;
    let scale = rhs.norm().max(1.0);
    Ok(DerivativeResidual::new(
        (d.coarse - rhs).norm() / scale,
        (d.fine - rhs).norm() / scale,
        (d.extrapolated - rhs).norm() / scale,
    ))
}

/// max over n of |ℬₙ − (i∂_η/2 + χ₀)𝒜ₙ| at the base of the flow.
pub fn b_from_a_identity_check(map: &AbelMap, flow: &FlowState, k: usize, h: f64) -> Result<DerivativeResidual> {
    let bands = map.domain().bands();
    let coeffs = |x: f64| -> Result<_> { ab_coefficients(&chi_closed_form(bands, &divisor_at(map, flow, x, 0.0)?, k), k) };
    let base = coeffs(0.0)?;
    let chi0 = base.even_column[0];
    let mut rows = Vec::with_capacity(k + 1);
    for n in 0..=k {
        let d = FlowDerivative::of(|x| Ok(coeffs(x)?.a[n]), h)?;
        let residual = |da: C64| (base.b[n] - (-0.5 * I * da + chi0 * base.a[n])).norm();
        rows.push(DerivativeResidual::new(
            residual(d.coarse),
            residual(d.fine),
            residual(d.extrapolated),
        ));
    }
    Ok(DerivativeResidual::worst(&rows))
}

/// (Θ⁽ᵏ⁾(λ) + i∂_{η⁽ᵏ⁾})e_α(λ) against A_k(λ)√λ·e_{α+𝔧}(λ) − B_k(λ)·e_α(λ),
/// relative to the right-hand side, worst over the sample points. The flow
/// must be of order k with `theta_k` its Abelian integral.
pub fn eigenfunction_relation_check(
    ctx: &SpectralContext,
    flow: &FlowState,
    theta_k: &ThetaK,
    lambdas: &[C64],
    h: f64,
) -> Result<DerivativeResidual> {
    let k = theta_k.order;
    if flow.order != k {
        return Err(Error::Validation(format!(
            "flow of order {} checked against Θ of order {k}",
            flow.order
        )));
    }
    let domain = ctx.domain;
    let bands = domain.bands();
    let base = ctx.bundle(&flow.seed)?;
    let coeffs = ab_coefficients(&chi_closed_form(bands, &flow.seed, k), k)?;
    let product_at = |t: f64| -> Result<CanonicalProduct> { CanonicalProduct::build(domain, &divisor_at(&ctx.abel, flow, 0.0, t)?) };
    let steps = [h, -h, h / 2.0, -h / 2.0];
    let products: Vec<CanonicalProduct> = steps.iter().map(|&t| product_at(t)).collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(lambdas.len());
    for &l in lambdas {
        let e: Vec<C64> = products.iter().map(|p| p.eval(&ctx.widom, l)).collect::<Result<_>>()?;
        let coarse = (e[0] - e[1]) / (2.0 * h);
        let fine = (e[2] - e[3]) / h;
        let extrapolated = (fine * 4.0 - coarse) / 3.0;
        let e0 = base.e(l)?;
        let rhs = coeffs.a_poly(l) * sqrt_lambda(l) * base.e_shift(l)? - coeffs.b_poly(l) * e0;
        let theta = theta_k.eval(domain, l)?;
        // i∂_{η⁽ᵏ⁾} = −i d/dt along the t-flow.
        let residual = |de: C64| (theta * e0 - I * de - rhs).norm() / rhs.norm().max(1e-300);
        rows.push(DerivativeResidual::new(residual(coarse), residual(fine), residual(extrapolated)));
    }
    Ok(DerivativeResidual::worst(&rows))
}

/// Divisor-independent majorant of |χ₂ₖ| for a band set.
///
/// Z(μ) = ∏ (μ−√bⱼ)(μ+√aⱼ)/((μ−√λⱼ)(μ+√λⱼ)) has the additive form
/// 1 + Σ(ρⱼ⁺/(√λⱼ−μ) − ρⱼ⁻/(√λⱼ+μ)) with positive residues ρⱼ±, and
/// σⱼ² = 16ρⱼ⁺ρⱼ⁻, so σⱼ ≤ 2(ρⱼ⁺+ρⱼ⁻). The sum Σ(ρ⁺+ρ⁻)λᵏ is minus the
/// coefficient of μ^{−(2k+1)} in Z, and Z = exp(−Σ zₙμ^{−(n+1)}) where
/// |zₙ| ≤ Σ(b^{(n+1)/2} − a^{(n+1)/2})/(n+1) for every divisor (equality for
/// even n). Exponentiating the majorants bounds the coefficient.
#[derive(Debug, Clone, Serialize)]
pub struct ChiBound {
    pub order: usize,
    /// Bound on Σ(ρⱼ⁺+ρⱼ⁻)λⱼᵏ.
    pub rho_sum_bound: f64,
    /// Bound on |χ₂ₖ|.
    pub bound: f64,
}

/// Moments zₙ = ∫ ξⁿ κ(ξ) dξ of the argument of Z, n = 0..count.
pub fn z_moments(bands: &BandSet, d: &Divisor, count: usize) -> Vec<f64> {
    (0..count)
        .map(|n| {
            let p = (n + 1) as f64;
            bands
                .gaps()
                .iter()
                .zip(d.lambdas())
                .map(|(g, l)| {
                    let up = g.b.sqrt().powf(p) - l.sqrt().powf(p);
                    let down = l.sqrt().powf(p) - g.a.sqrt().powf(p);
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    (up + sign * down) / p
                })
                .sum()
        })
        .collect()
}

/// The residues (ρⱼ⁺, ρⱼ⁻) of the additive form of Z.
pub fn rho_weights(bands: &BandSet, d: &Divisor) -> Vec<(f64, f64)> {
    let l = d.lambdas();
    let gaps = bands.gaps();
    (0..l.len())
        .map(|n| {
            let s = l[n].sqrt();
            let (sa, sb) = (gaps[n].a.sqrt(), gaps[n].b.sqrt());
            let mut plus = (sb - s) * (s + sa) / (2.0 * s);
            let mut minus = (s - sa) * (s + sb) / (2.0 * s);
            for j in (0..l.len()).filter(|&j| j != n) {
                let (sa, sb, sl) = (gaps[j].a.sqrt(), gaps[j].b.sqrt(), l[j].sqrt());
                plus *= ((s - sb) / (s - sl) * (s + sa) / (s + sl)).abs();
                minus *= ((s + sb) / (s + sl) * (s - sa) / (s - sl)).abs();
            }
            (plus, minus)
        })
        .collect()
}

pub fn chi_bound(bands: &BandSet, k: usize) -> ChiBound {
    let gaps = bands.gaps();
    let count = 2 * k + 1;
    let mut logz = vec![0.0; count + 1];
    for n in 0..count {
        let p = (n + 1) as f64;
        logz[n + 1] = gaps.iter().map(|g| (g.b.sqrt().powf(p) - g.a.sqrt().powf(p)) / p).sum();
    }
    let rho_sum_bound = series_exp(&TruncatedSeries::new(logz, count)).coeff(count);
    // |χ₂ₖ| ≤ ½Σσλᵏ ≤ Σ(ρ⁺+ρ⁻)λᵏ.
    ChiBound {
        order: k,
        rho_sum_bound,
        bound: rho_sum_bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::Domain;
    use crate::spectral::sigma_weights;

    fn z_product(bands: &BandSet, d: &Divisor, mu: C64) -> C64 {
        bands
            .gaps()
            .iter()
            .zip(d.lambdas())
            .map(|(g, l)| (mu - g.b.sqrt()) * (mu + g.a.sqrt()) / ((mu - l.sqrt()) * (mu + l.sqrt())))
            .product()
    }

    #[test]
    fn additive_form_of_z_matches_product() {
        let bands = BandSet::new(&[(1.0, 2.0), (3.0, 4.5)]).unwrap();
        let d = Divisor::from_pairs(&bands, &[(1.3, 1.0), (4.0, -1.0)]).unwrap();
        let rho = rho_weights(&bands, &d);
        for mu in [C64::new(0.3, 0.7), C64::new(-2.0, 0.1), C64::new(5.0, -3.0)] {
            let additive: C64 = C64::new(1.0, 0.0)
                + rho
                    .iter()
                    .zip(d.lambdas())
                    .map(|((p, m), l)| *p / (l.sqrt() - mu) - *m / (l.sqrt() + mu))
                    .sum::<C64>();
            assert!((additive - z_product(&bands, &d, mu)).norm() < 1e-13);
        }
    }

    #[test]
    fn weights_relate_to_sigma() {
        let bands = BandSet::new(&[(1.0, 2.0), (3.0, 4.5)]).unwrap();
        let d = Divisor::from_pairs(&bands, &[(1.7, 1.0), (3.2, -1.0)]).unwrap();
        let sigma = sigma_weights(bands.gaps(), &d);
        for (s, (p, m)) in sigma.iter().zip(rho_weights(&bands, &d)) {
            assert!((s * s - 16.0 * p * m).abs() < 1e-13);
        }
    }

    #[test]
    fn rho_sum_is_a_coefficient_of_z() {
        let bands = BandSet::new(&[(1.0, 2.0), (3.0, 4.5)]).unwrap();
        let d = Divisor::from_pairs(&bands, &[(1.7, 1.0), (3.2, -1.0)]).unwrap();
        let z = z_moments(&bands, &d, 3);
        let mut log = vec![0.0; 4];
        for n in 0..3 {
            log[n + 1] = -z[n];
        }
        let series = series_exp(&TruncatedSeries::new(log, 3));
        let rho = rho_weights(&bands, &d);
        let direct: f64 = rho.iter().zip(d.lambdas()).map(|((p, m), l)| (p + m) * l).sum();
        assert!((series.coeff(3) + direct).abs() < 1e-12);
    }

    #[test]
    fn bound_dominates_samples() {
        let bands = BandSet::new(&[(1.0, 2.0), (3.0, 4.5)]).unwrap();
        let b = chi_bound(&bands, 1);
        for (l1, l2) in [(1.0, 3.0), (2.0, 4.5), (1.5, 3.7), (1.99, 3.01)] {
            for e in [1.0, -1.0] {
                let d = Divisor::from_pairs(&bands, &[(l1, e), (l2, e)]).unwrap();
                assert!(chi_closed_form(&bands, &d, 1).get(2).norm() <= b.bound);
            }
        }
    }

    #[test]
    fn free_flow_identities_vanish() {
        let domain = Domain::new(BandSet::free()).unwrap();
        let martin = ThetaK::build(&domain, 0).unwrap();
        let map = AbelMap::build(&domain, &martin).unwrap();
        let theta1 = ThetaK::build(&domain, 1).unwrap();
        let flow = FlowState::new(&map, &Divisor::empty(), &martin, &theta1).unwrap();
        let r = b_from_a_identity_check(&map, &flow, 1, 1e-2).unwrap();
        assert_eq!(r.extrapolated, 0.0);
        let c = chi1_three_way(&map, &flow, 1e-2).unwrap();
        assert_eq!(c.max_relative, 0.0);
    }
}
