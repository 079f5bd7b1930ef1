//! Complex Green functions Φ(λ, λ₀) with |Φ| = e^{−G(λ,λ₀)}, and the
//! harmonic measures read off from their boundary arguments.
//!
//! d log Φ = [√s(λ₀)/((λ−λ₀)√s(λ)) + iσ(λ)/√s(λ)] dλ with σ real of degree
//! N−1. The first term carries the unit residue at λ₀; σ is fixed by asking
//! that the real part of the integral over each gap vanish, which pins
//! G = 0 at every gap endpoint.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::domain::{c, log_upper, Domain, I};
use crate::error::{Error, Result};
use crate::numerics::linalg::{horner, solve_real};
use crate::numerics::SegmentPoint;

/// How close (relative to the gap width) a pole must be to an endpoint to
/// be treated as sitting on it.
const ENDPOINT_SNAP: f64 = 1e-15;

#[derive(Debug, Clone)]
enum Kind {
    /// Pole at a gap endpoint: Φ ≡ 1.
    Trivial,
    Regular {
        s_pole: C64,
        sigma: Vec<f64>,
        phase: f64,
    },
}

/// Φ(·, λ₀) for a real pole λ₀ ∈ ℝ∖E (gap endpoints allowed as the
/// degenerate case Φ ≡ 1).
#[derive(Debug, Clone)]
pub struct GreenPole<'d> {
    domain: &'d Domain,
    pole: f64,
    kind: Kind,
    /// ω(λ₀, E_k) for k = 0..=N, E₀ being all of E.
    harmonic: Vec<f64>,
    /// |∫_gap Re d log Φ| for each gap, recomputed after the solve.
    gap_residuals: Vec<f64>,
}

impl<'d> GreenPole<'d> {
    pub fn build(domain: &'d Domain, pole: f64) -> Result<Self> {
        Self::build_with(domain, pole, true)
    }

    /// Harmonic measures ω(λ₀, E_k), k = 0..=N, without fixing the phase of Φ.
    pub fn harmonic_measures(domain: &'d Domain, pole: f64) -> Result<Vec<f64>> {
        Ok(Self::build_with(domain, pole, false)?.harmonic)
    }

    fn build_with(domain: &'d Domain, pole: f64, with_phase: bool) -> Result<Self> {
        let n = domain.n();
        if !pole.is_finite() {
            return Err(Error::Validation(format!("pole {pole} is not finite")));
        }
        if let Some((j, at_b)) = endpoint_of(domain, pole) {
            // a_j lies on band j (0-based), b_j on band j+1; E_k contains
            // band l iff l ≥ k.
            let band = if at_b { j + 1 } else { j };
            let harmonic = (0..=n).map(|k| if k <= band { 1.0 } else { 0.0 }).collect();
            return Ok(GreenPole {
                domain,
                pole,
                kind: Kind::Trivial,
                harmonic,
                gap_residuals: vec![0.0; n],
            });
        }
        domain.check_off_spectrum(pole)?;

        let s_pole = domain.sqrt_s_real(pole);
        let mut v = vec![0.0; n];
        for (j, g) in domain.bands().gaps().iter().enumerate() {
            let f = |x: SegmentPoint| residue_part(domain, pole, s_pole, &x);
            let inner = domain.gap_integral_points(j, f)?.re;
            v[j] = inner + ((g.b - pole) / (g.a - pole)).abs().ln();
        }
        let sigma = if n > 0 {
            let rhs: Vec<f64> = v.iter().map(|x| -x).collect();
            solve_real(domain.gap_moments(), &rhs, "normalising a Green differential")?
        } else {
            Vec::new()
        };

        let gap_residuals = v
            .iter()
            .enumerate()
            .map(|(j, vj)| {
                let s: f64 = sigma.iter().zip(&domain.gap_moments()[j]).map(|(a, b)| a * b).sum();
                (vj + s).abs()
            })
            .collect();

        let mut harmonic = vec![0.0; n + 1];
        let mut acc = 0.0;
        for l in (0..=n).rev() {
            let w = domain
                .band_integral_points(l, |x: SegmentPoint| c(1.0) / (domain.sqrt_s_at(&x) * x.minus(pole)))?
                .re;
            let moments: f64 = sigma.iter().zip(&domain.band_moments()[l]).map(|(a, b)| a * b).sum();
            acc += (s_pole.im * w + moments) / PI;
            harmonic[l] = acc;
        }

        let mut green = GreenPole {
            domain,
            pole,
            kind: Kind::Regular { s_pole, sigma, phase: 0.0 },
            harmonic,
            gap_residuals,
        };
        if !with_phase {
            return Ok(green);
        }
        let anchor = if (pole + 1.0).abs() < 1e-3 { pole - 1.0 } else { -1.0 };
        let phase = green.raw_log(c(anchor))?.im;
        if let Kind::Regular { phase: p, .. } = &mut green.kind {
            *p = phase;
        }
        Ok(green)
    }

    pub fn pole(&self) -> f64 {
        self.pole
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self.kind, Kind::Trivial)
    }

    /// ω(λ₀, E_k); k = 0 is the whole spectrum.
    pub fn harmonic_measure(&self, k: usize) -> f64 {
        self.harmonic[k]
    }

    /// The character ν_{λ₀} = (ω(λ₀, E_k))_{k=1..N}, unreduced.
    pub fn character_components(&self) -> &[f64] {
        &self.harmonic[1..]
    }

    pub fn gap_residuals(&self) -> &[f64] {
        &self.gap_residuals
    }

    /// Coefficients of σ (empty for the trivial case).
    pub fn sigma(&self) -> &[f64] {
        match &self.kind {
            Kind::Trivial => &[],
            Kind::Regular { sigma, .. } => sigma,
        }
    }

    /// d log Φ/dλ.
    pub fn log_derivative(&self, lambda: C64) -> C64 {
        match &self.kind {
            Kind::Trivial => c(0.0),
            Kind::Regular { s_pole, sigma, .. } => {
                let s = self.domain.sqrt_s(lambda);
                *s_pole / ((lambda - self.pole) * s) + I * horner(sigma, lambda) / s
            }
        }
    }

    fn raw_log(&self, lambda: C64) -> Result<C64> {
        let Kind::Regular { s_pole, sigma, .. } = &self.kind else {
            return Ok(c(0.0));
        };
        let p = self.pole;
        let d = self.domain;
        if (lambda - p).norm() < 1e-300 {
            return Err(Error::Pole(p));
        }
        let near = removable_radius(d, p);
        let h = |z: C64| {
            let s = d.sqrt_s(z);
            let regular = I * horner(sigma, z) / s;
            let dz = z - p;
            let singular = if dz.norm() < near {
                -d.log_derivative_s(c(p))
            } else {
                (*s_pole / s - 1.0) / dz
            };
            regular + singular
        };
        let on_axis = |x: SegmentPoint| I * horner(sigma, c(x.x)) / d.sqrt_s_at(&x) + residue_part(d, p, *s_pole, &x);
        let path = d.integrate_path_points(on_axis, h, lambda)?;
        Ok(path + log_upper(lambda - p) - log_upper(c(-p)))
    }

    /// log Φ(λ, λ₀), normalised so that Φ > 0 on ℝ₋ near −1.
    pub fn log_phi(&self, lambda: C64) -> Result<C64> {
        match &self.kind {
            Kind::Trivial => Ok(c(0.0)),
            Kind::Regular { phase, .. } => Ok(self.raw_log(lambda)? - I * *phase),
        }
    }

    pub fn phi(&self, lambda: C64) -> Result<C64> {
        Ok(self.log_phi(lambda)?.exp())
    }

    /// G(λ, λ₀) = −log|Φ(λ, λ₀)|.
    pub fn green(&self, lambda: C64) -> Result<f64> {
        Ok(-self.log_phi(lambda)?.re)
    }
}

/// Below this distance from the pole the residue part is replaced by its
/// limit; the scale on which it varies is the distance to the nearest
/// branch point.
fn removable_radius(d: &Domain, p: f64) -> f64 {
    1e-7 * d.branch_distance(p).min(1.0 + p.abs())
}

/// (√s(p)/√s(x) − 1)/(x − p): the unit-residue part with its pole removed.
fn residue_part(d: &Domain, p: f64, s_pole: C64, x: &SegmentPoint) -> C64 {
    let dx = x.minus(p);
    if dx.abs() < removable_radius(d, p) {
        // Removable point: the limit of (√s(p)/√s(x) − 1)/(x − p).
        return -d.log_derivative_s(c(p));
    }
    (s_pole / d.sqrt_s_at(x) - 1.0) / dx
}

fn endpoint_of(d: &Domain, x: f64) -> Option<(usize, bool)> {
    for (j, g) in d.bands().gaps().iter().enumerate() {
        let snap = ENDPOINT_SNAP * g.width();
        if (x - g.a).abs() <= snap {
            return Some((j, false));
        }
        if (x - g.b).abs() <= snap {
            return Some((j, true));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::domain::sqrt_lambda;
    use crate::band_geometry::BandSet;

    fn dom(g: &[(f64, f64)]) -> Domain {
        Domain::new(BandSet::new(g).unwrap()).unwrap()
    }

    #[test]
    fn free_green_function_closed_form() {
        let d = dom(&[]);
        let g = GreenPole::build(&d, -1.0).unwrap();
        // Half-plane pullback: G(λ,−1) = log|(w+1)/(w−1)| with w = √(−λ).
        let w: f64 = 2.0;
        let expected = ((w + 1.0) / (w - 1.0)).abs().ln();
        assert!((g.green(c(-4.0)).unwrap() - expected).abs() < 1e-10);
        // Φ(λ,−1) = (√λ − i)/(√λ + i) up to a unimodular constant; with the
        // anchor convention Φ > 0 left of the pole.
        let z = C64::new(0.7, 1.3);
        let sq = sqrt_lambda(z);
        let closed = (sq - I) / (sq + I);
        let phi = g.phi(z).unwrap();
        assert!((phi.norm() - closed.norm()).abs() < 1e-10);
    }

    #[test]
    fn full_harmonic_measure_is_one_and_decreasing() {
        let d = dom(&[(1.0, 2.0), (3.0, 3.5), (5.0, 7.0)]);
        for p in [-1.0, 1.3, 3.2, 6.9] {
            let g = GreenPole::build(&d, p).unwrap();
            assert!((g.harmonic_measure(0) - 1.0).abs() < 1e-10, "p={p} {}", g.harmonic_measure(0));
            for k in 0..3 {
                assert!(g.harmonic_measure(k) > g.harmonic_measure(k + 1));
            }
            assert!(g.gap_residuals().iter().all(|r| *r < 1e-10));
        }
    }

    #[test]
    fn boundary_modulus_and_anchor() {
        let d = dom(&[(1.0, 2.0)]);
        let g = GreenPole::build(&d, 1.4).unwrap();
        for x in [0.3, 0.9, 2.5, 10.0] {
            assert!((g.phi(c(x)).unwrap().norm() - 1.0).abs() < 1e-9, "x={x}");
        }
        let v = g.phi(c(-1.0)).unwrap();
        assert!(v.re > 0.0 && v.im.abs() < 1e-12);
        assert!((v.re - (-g.green(c(-1.0)).unwrap()).exp()).abs() < 1e-14);
        for x in [1.0, 2.0] {
            assert!(g.green(c(x)).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn simple_zero_at_pole() {
        let d = dom(&[(1.0, 2.0)]);
        let g = GreenPole::build(&d, 1.4).unwrap();
        let h = 1e-4;
        let a = g.phi(C64::new(1.4, h)).unwrap();
        let b = g.phi(C64::new(1.4, 2.0 * h)).unwrap();
        assert!(((b.norm() / a.norm()) - 2.0).abs() < 1e-3);
    }

    #[test]
    fn endpoint_pole_is_trivial() {
        let d = dom(&[(1.0, 2.0)]);
        let ga = GreenPole::build(&d, 1.0).unwrap();
        assert!(ga.is_trivial());
        assert_eq!(ga.harmonic_measure(1), 0.0);
        let gb = GreenPole::build(&d, 2.0).unwrap();
        assert_eq!(gb.harmonic_measure(1), 1.0);
        assert!(GreenPole::build(&d, 0.5).is_err());
    }
}
