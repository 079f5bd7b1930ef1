//! Residuals of the identities tying the spectral objects together.
//!
//! * Wronskian: e_{α+𝔧}ẽ_α + e_αẽ_{α+𝔧} = 𝒲/(√λ·Θ′) in ℂ₊.
//! * Pseudocontinuation: 𝒲(ξ)·conj e_α(ξ) = ẽ_α(ξ) on the bands.
//! * Reflectionless: m₊(ξ+i0) + conj m₋(ξ+i0) = 0 on the bands.
//! * Fourier integral: k^α(λ,λ₀) − E(x)·k^{α(x)}(λ,λ₀)
//!   = ∫₀ˣ E(ξ)·e_{α(ξ)}(λ)·conj e_{α(ξ)}(λ₀) dξ with E(x) = e^{i(Θ(λ)−conj Θ(λ₀))x}
//!   and α(x) the x-flow of α.
//!
//! Boundary identities are evaluated at ξ + iδ for δ = 10⁻⁴, 10⁻⁵, 10⁻⁶ and
//! extrapolated to δ = 0.

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::Serialize;

use super::{CanonicalProduct, SpectralBundle};
use crate::abel_flow::FlowState;
use crate::band_geometry::BandSet;
use crate::error::Result;
use crate::numerics::quadrature::nested_gauss_legendre;
use crate::numerics::richardson_limit;

const I: C64 = C64 { re: 0.0, im: 1.0 };
const DELTAS: [f64; 3] = [1e-4, 1e-5, 1e-6];

/// Where the identities are sampled.
#[derive(Debug, Clone, Serialize)]
pub struct IdentitySamples {
    /// Points of the open upper half-plane.
    pub interior: Vec<C64>,
    /// Interior points of the bands.
    pub band: Vec<f64>,
    /// Flow lengths for the Fourier-integral identity.
    pub lengths: Vec<f64>,
    /// The pair (λ, λ₀) used by the Fourier-integral identity.
    pub kernel_pair: (C64, C64),
}

impl IdentitySamples {
    /// Random samples: interior points in a box over the finite part of the
    /// spectrum, band points away from the band ends.
    pub fn random<R: Rng>(bands: &BandSet, rng: &mut R, interior: usize, band: usize) -> Self {
        let top = bands.branch_points().last().copied().unwrap_or(1.0) + 2.0;
        let interior = (0..interior)
            .map(|_| C64::new(rng.gen_range(-3.0..top), rng.gen_range(0.05..2.0)))
            .collect();
        let all = bands.bands();
        let band = (0..band)
            .map(|i| {
                let (lo, hi) = all[i % all.len()];
                let hi = if hi.is_finite() { hi } else { lo + 3.0 };
                lo + (hi - lo) * rng.gen_range(0.1..0.9)
            })
            .collect();
        IdentitySamples {
            interior,
            band,
            lengths: vec![0.1, 0.5, 1.0],
            kernel_pair: (C64::new(-1.5, 0.5), C64::new(0.4, 0.8)),
        }
    }
}

/// Largest residual of each identity.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    /// Relative Wronskian residual.
    pub wronskian: f64,
    /// Relative disagreement of the two m₊ routes.
    pub m_routes: f64,
    /// Relative residual of m₊ + m₋ = −1/R.
    pub diagonal: f64,
    /// Extrapolated pseudocontinuation residual on the bands.
    pub pseudocontinuation: f64,
    /// Extrapolated reflectionless residual on the bands.
    pub reflectionless: f64,
    /// Fourier-integral residual, one entry per flow length.
    pub fourier: Vec<f64>,
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Extrapolates a complex function of δ to δ = 0.
fn boundary_limit<F: Fn(f64) -> Result<C64>>(f: F) -> Result<C64> {
    let vals: Vec<C64> = DELTAS.iter().map(|&d| f(d)).collect::<Result<_>>()?;
    let re = richardson_limit(&DELTAS, &vals.iter().map(|v| v.re).collect::<Vec<_>>(), Some(1.0));
    let im = richardson_limit(&DELTAS, &vals.iter().map(|v| v.im).collect::<Vec<_>>(), Some(1.0));
    Ok(C64::new(re.value, im.value))
}

pub fn wronskian_residual(b: &SpectralBundle, samples: &[C64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &z in samples {
        let (l, r) = b.wronskian_sides(z)?;
        worst = worst.max(rel(l, r));
    }
    Ok(worst)
}

pub fn m_route_residual(b: &SpectralBundle, samples: &[C64]) -> Result<(f64, f64)> {
    let (mut routes, mut diag): (f64, f64) = (0.0, 0.0);
    for &z in samples {
        let m = b.m_plus(z)?;
        routes = routes.max(rel(b.m_plus_ratio(z)?, m));
        let sum = m + b.m_minus(z)?;
        diag = diag.max(rel(sum, -1.0 / b.resolvent(z)?));
    }
    Ok((routes, diag))
}

pub fn pseudocontinuation_residual(b: &SpectralBundle, band: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &x in band {
        let r = boundary_limit(|d| {
            let z = C64::new(x, d);
            Ok(b.widom(z)? * b.e(z)?.conj() - b.e_tilde(z)?)
        })?;
        worst = worst.max(r.norm() / b.e_tilde(C64::new(x, 0.0))?.norm());
    }
    Ok(worst)
}

pub fn reflectionless_residual(b: &SpectralBundle, band: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &x in band {
        let r = boundary_limit(|d| {
            let z = C64::new(x, d);
            Ok(b.m_plus(z)? + b.m_minus(z)?.conj())
        })?;
        worst = worst.max(r.norm() / b.m_plus(C64::new(x, 1e-6))?.norm());
    }
    Ok(worst)
}

/// Fourier-integral residuals at each length in `lengths`. The quadrature
/// inverts the Abel map at every node along the flow.
pub fn fourier_residuals(b: &SpectralBundle, lengths: &[f64], pair: (C64, C64)) -> Result<Vec<f64>> {
    let ctx = b.ctx;
    let domain = b.domain();
    let (l, l0) = pair;
    let theta = ctx.martin.eval(domain, l)?;
    let theta0 = ctx.martin.eval(domain, l0)?;
    let k = theta - theta0.conj();
    let flow = FlowState {
        alpha0: b.alpha.clone(),
        eta: ctx.martin.frequencies.clone(),
        eta_k: vec![0.0; domain.n()],
        order: 0,
        seed: b.divisor.clone(),
    };
    let base = b.kernel(l, l0)?;
    let tol = 1e-10;
    let mut out = Vec::with_capacity(lengths.len());
    for &x in lengths {
        let integrand = |xi: f64| -> C64 {
            let inner = || -> Result<C64> {
                let d = ctx.abel.invert(&flow.character_at(xi, 0.0), &b.divisor)?;
                let e = CanonicalProduct::build(domain, &d)?;
                Ok((I * k * xi).exp() * e.eval(&ctx.widom, l)? * e.eval(&ctx.widom, l0)?.conj())
            };
            inner().unwrap_or(C64::new(f64::NAN, f64::NAN))
        };
        let rhs = nested_gauss_legendre(integrand, 0.0, x, tol, 4)?.value;
        let at_x = ctx.flowed(&flow, x, 0.0, Some(b))?;
        let lhs = base - (I * k * x).exp() * at_x.kernel(l, l0)?;
        out.push((lhs - rhs).norm() / rhs.norm().max(1e-300));
    }
    Ok(out)
}

/// Runs the whole battery for one bundle.
pub fn identity_suite(b: &SpectralBundle, samples: &IdentitySamples) -> Result<IdentityReport> {
    let wronskian = wronskian_residual(b, &samples.interior)?;
    let (m_routes, diagonal) = m_route_residual(b, &samples.interior)?;
    let pseudocontinuation = pseudocontinuation_residual(b, &samples.band)?;
    let reflectionless = reflectionless_residual(b, &samples.band)?;
    let fourier = fourier_residuals(b, &samples.lengths, samples.kernel_pair)?;
    Ok(IdentityReport {
        wronskian,
        m_routes,
        diagonal,
        pseudocontinuation,
        reflectionless,
        fourier,
    })
}
