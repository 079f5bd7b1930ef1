//! The Abel map from divisors to characters, its inverse, and the linear
//! flows of characters along x and the hierarchy times.
//!
//! For a divisor D = {(λⱼ, εⱼ)} the k-th component of the Abel map is
//! ½ Σⱼ εⱼ ω(λⱼ, E_k). The shifted map subtracts the value at
//! D_c = {(cⱼ, −1)}, where cⱼ are the critical points of the Martin
//! function, so that α(D_c) = 0.
//!
//! Inversion works in the angle chart λⱼ = mⱼ − rⱼ cos φⱼ, εⱼ = sign sin φⱼ,
//! in which the map is smooth across the gap ends. A straight homotopy on
//! the torus carries the seed's character to the target, with Newton
//! correction at each step and a finite-difference Jacobian.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::{Domain, GreenPole, ThetaK};
use crate::band_geometry::{centered_unit, CharacterVector, Divisor, DivisorChart, DivisorPoint, Sheet};
use crate::error::{Error, Result};
use crate::numerics::linalg::solve_real;

/// Angle step of the finite-difference Jacobian.
const JACOBIAN_STEP: f64 = 1e-6;
/// Residual (sup norm on the torus) at which Newton stops early.
const NEWTON_TARGET: f64 = 1e-13;
/// Residual accepted at intermediate homotopy nodes.
const PATH_TOLERANCE: f64 = 1e-7;
const NEWTON_ITERATIONS: usize = 12;
/// Smallest homotopy step before giving up.
const MIN_STEP: f64 = 1e-8;
/// Angular half-width of the interpolated region around each gap end.
const END_SLIVER: f64 = 1e-2;
/// Interpolation nodes on each side of a gap end.
const END_NODES: usize = 4;

/// The Abel map of a fixed band set, with the D_c offset precomputed.
#[derive(Debug, Clone)]
pub struct AbelMap<'d> {
    domain: &'d Domain,
    critical_points: Vec<f64>,
    /// ½ Σⱼ ω(cⱼ, E_k): minus the unshifted image of D_c.
    offset: Vec<f64>,
    accuracy: f64,
}

impl<'d> AbelMap<'d> {
    pub fn build(domain: &'d Domain, martin: &ThetaK) -> Result<Self> {
        let n = domain.n();
        let critical_points = martin.critical_points.clone();
        let measures: Vec<Vec<f64>> = critical_points
            .par_iter()
            .map(|&cp| GreenPole::harmonic_measures(domain, cp))
            .collect::<Result<_>>()?;
        let mut offset = vec![0.0; n];
        for m in &measures {
            for (o, w) in offset.iter_mut().zip(&m[1..]) {
                *o += 0.5 * w;
            }
        }
        let accuracy = crate::tolerances::CHARACTER.max(10.0 * domain.tolerances().quadrature);
        Ok(AbelMap {
            domain,
            critical_points,
            offset,
            accuracy,
        })
    }

    pub fn domain(&self) -> &'d Domain {
        self.domain
    }

    pub fn critical_points(&self) -> &[f64] {
        &self.critical_points
    }

    /// D_c = {(cⱼ, −1)}, the divisor with shifted character 0.
    pub fn base_divisor(&self) -> Divisor {
        let points = self
            .critical_points
            .iter()
            .map(|&lambda| DivisorPoint { lambda, eps: Sheet::Minus })
            .collect();
        Divisor::new(self.domain.bands(), points).expect("critical points lie inside their gaps")
    }

    /// Contribution ½εⱼω(λⱼ, E_k), k = 1..N, of a single divisor point,
    /// computed directly.
    fn direct_term(&self, p: DivisorPoint) -> Result<Vec<f64>> {
        let w = GreenPole::harmonic_measures(self.domain, p.lambda)?;
        let e = 0.5 * p.eps.value();
        Ok(w[1..].iter().map(|x| e * x).collect())
    }

    /// The same contribution as a function of the chart angle of gap j.
    ///
    /// Poles within a sliver of a gap end cannot be resolved by the
    /// quadratures (λ − a loses its digits), but the term is analytic in φ
    /// across both ends. Inside the sliver it is therefore interpolated from
    /// nodes on either side of the end, each lifted next to its neighbour.
    fn angle_term(&self, j: usize, phi: f64) -> Result<Vec<f64>> {
        let bands = self.domain.bands();
        let phi = phi.rem_euclid(TAU);
        let point = |angle: f64| {
            let mut angles: Vec<f64> = bands.gaps().iter().map(|_| 0.0).collect();
            angles[j] = angle;
            DivisorChart { angles }.to_divisor(bands).points()[j]
        };
        let end = if !(0.5 * std::f64::consts::PI..=1.5 * std::f64::consts::PI).contains(&phi) {
            if phi > std::f64::consts::PI {
                TAU
            } else {
                0.0
            }
        } else {
            std::f64::consts::PI
        };
        let offset = phi - end;
        if offset == 0.0 || offset.abs() >= END_SLIVER {
            return self.direct_term(point(phi));
        }
        let nodes: Vec<f64> = (1..=END_NODES)
            .flat_map(|i| [-(i as f64) * END_SLIVER, i as f64 * END_SLIVER])
            .collect();
        let mut values: Vec<Vec<f64>> = nodes.par_iter().map(|&o| self.direct_term(point(end + o))).collect::<Result<_>>()?;
        // Lift every node onto the branch of the first one.
        let reference = values[1].clone();
        for v in values.iter_mut() {
            for (x, r) in v.iter_mut().zip(&reference) {
                *x = r + centered_unit(*x - r);
            }
        }
        let n = reference.len();
        let mut out = vec![0.0; n];
        for (i, (&xi, vi)) in nodes.iter().zip(&values).enumerate() {
            let mut w = 1.0;
            for (m, &xm) in nodes.iter().enumerate() {
                if m != i {
                    w *= (offset - xm) / (xi - xm);
                }
            }
            for (o, v) in out.iter_mut().zip(vi) {
                *o += w * v;
            }
        }
        Ok(out)
    }

    fn point_term(&self, j: usize, p: DivisorPoint) -> Result<Vec<f64>> {
        let g = self.domain.bands().gap(j);
        if p.lambda == g.a || p.lambda == g.b {
            return self.direct_term(p);
        }
        let chart = Divisor::new(self.domain.bands(), self.single(j, p)).map(|d| d.chart(self.domain.bands()))?;
        self.angle_term(j, chart.angles[j])
    }

    /// A divisor with `p` in slot j and gap midpoints elsewhere, used only
    /// to reach the chart map for one point.
    fn single(&self, j: usize, p: DivisorPoint) -> Vec<DivisorPoint> {
        self.domain
            .bands()
            .gaps()
            .iter()
            .enumerate()
            .map(|(i, g)| {
                if i == j {
                    p
                } else {
                    DivisorPoint {
                        lambda: g.midpoint(),
                        eps: Sheet::Plus,
                    }
                }
            })
            .collect()
    }

    fn terms(&self, d: &Divisor) -> Result<Vec<Vec<f64>>> {
        d.points().par_iter().enumerate().map(|(j, &p)| self.point_term(j, p)).collect()
    }

    /// 𝒜(D), unshifted and unreduced.
    fn raw_sum(&self, d: &Divisor) -> Result<Vec<f64>> {
        let mut v = vec![0.0; self.domain.n()];
        for t in self.terms(d)? {
            for (a, b) in v.iter_mut().zip(t) {
                *a += b;
            }
        }
        Ok(v)
    }

    /// 𝒜(D) = ½ Σ εⱼ ω(λⱼ, E_k) on the torus.
    pub fn unshifted(&self, d: &Divisor) -> Result<CharacterVector> {
        Ok(CharacterVector::new(self.raw_sum(d)?))
    }

    /// α(D) = 𝒜(D) − 𝒜(D_c).
    pub fn character(&self, d: &Divisor) -> Result<CharacterVector> {
        let raw = self.raw_sum(d)?;
        Ok(CharacterVector::new(raw.iter().zip(&self.offset).map(|(a, b)| a + b).collect()))
    }

    fn chart_character(&self, angles: &[f64]) -> Result<CharacterVector> {
        let terms: Vec<Vec<f64>> = angles
            .par_iter()
            .enumerate()
            .map(|(j, &phi)| self.angle_term(j, phi))
            .collect::<Result<_>>()?;
        let mut v = self.offset.clone();
        for t in terms {
            for (a, b) in v.iter_mut().zip(t) {
                *a += b;
            }
        }
        Ok(CharacterVector::new(v))
    }

    /// ∂α/∂φ by central differences; column j depends on φⱼ alone.
    fn jacobian(&self, angles: &[f64]) -> Result<Vec<Vec<f64>>> {
        let n = angles.len();
        let columns: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|j| {
                let at = |phi: f64| self.angle_term(j, phi);
                let plus = at(angles[j] + JACOBIAN_STEP)?;
                let minus = at(angles[j] - JACOBIAN_STEP)?;
                Ok(plus
                    .iter()
                    .zip(&minus)
                    .map(|(p, m)| centered_unit(p - m) / (2.0 * JACOBIAN_STEP))
                    .collect())
            })
            .collect::<Result<_>>()?;
        Ok((0..n).map(|k| (0..n).map(|j| columns[j][k]).collect()).collect())
    }

    /// Newton iteration in the chart towards `target`; returns the final
    /// angles and residual, or None if the residual stopped decreasing above
    /// `accept`.
    fn newton(&self, start: &[f64], target: &CharacterVector, accept: f64) -> Result<Option<(Vec<f64>, f64)>> {
        let mut phi = start.to_vec();
        let mut r = target_residual(&self.chart_character(&phi)?, target);
        let mut norm = sup(&r);
        for _ in 0..NEWTON_ITERATIONS {
            if norm <= NEWTON_TARGET {
                break;
            }
            let jac = self.jacobian(&phi)?;
            let rhs: Vec<f64> = r.iter().map(|x| -x).collect();
            let step = match solve_real(&jac, &rhs, "inverting the Abel map") {
                Ok(s) => s,
                Err(_) => return Ok(None),
            };
            let mut scale = 1.0;
            let mut improved = false;
            for _ in 0..6 {
                let trial: Vec<f64> = phi.iter().zip(&step).map(|(p, s)| (p + scale * s).rem_euclid(TAU)).collect();
                let tr = target_residual(&self.chart_character(&trial)?, target);
                let tn = sup(&tr);
                if tn < norm {
                    phi = trial;
                    r = tr;
                    norm = tn;
                    improved = true;
                    break;
                }
                scale *= 0.5;
            }
            if !improved {
                break;
            }
        }
        Ok((norm <= accept).then_some((phi, norm)))
    }

    /// Solves α(D) = target by homotopy from `seed`.
    pub fn invert(&self, target: &CharacterVector, seed: &Divisor) -> Result<Divisor> {
        let n = self.domain.n();
        if target.len() != n {
            return Err(Error::Validation(format!(
                "target character has {} components, expected {n}",
                target.len()
            )));
        }
        if n == 0 {
            return Ok(Divisor::empty());
        }
        let bands = self.domain.bands();
        let mut phi = Divisor::new(bands, seed.points().to_vec())?.chart(bands).angles;
        let start = self.chart_character(&phi)?;
        let delta = target.centered_difference(&start);
        let node = |s: f64| start.shifted(&delta, s);

        let mut s = 0.0;
        let mut step: f64 = 1.0;
        let mut last_residual = sup(&delta);
        while s < 1.0 {
            let next = (s + step).min(1.0);
            let accept = if next >= 1.0 { self.accuracy } else { PATH_TOLERANCE };
            match self.newton(&phi, &node(next), accept)? {
                Some((p, res)) => {
                    phi = p;
                    s = next;
                    last_residual = res;
                    step = (2.0 * step).min(1.0);
                }
                None => {
                    step *= 0.5;
                    if step < MIN_STEP {
                        return Err(Error::InversionStall {
                            parameter: s,
                            residual: last_residual,
                        });
                    }
                }
            }
        }
        Ok(DivisorChart { angles: phi }.to_divisor(bands))
    }
}

fn target_residual(value: &CharacterVector, target: &CharacterVector) -> Vec<f64> {
    value.centered_difference(target)
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// 𝒜(D) and α(D) together.
pub fn abel_map(map: &AbelMap, d: &Divisor) -> Result<(CharacterVector, CharacterVector)> {
    Ok((map.unshifted(d)?, map.character(d)?))
}

/// Divisor D with α(D) = target, found by homotopy from `seed`.
pub fn jacobi_invert(map: &AbelMap, target: &CharacterVector, seed: &Divisor) -> Result<Divisor> {
    map.invert(target, seed)
}

/// Base character plus the two frequency vectors that move it.
///
/// With characters measured by the harmonic measures of E_k, the x-flow of
/// the potential moves the character forward: α(x, t) = α₀ + ηx + η⁽ᵏ⁾t.
#[derive(Debug, Clone, Serialize)]
pub struct FlowState {
    pub alpha0: CharacterVector,
    /// Unreduced x-frequencies η (periods of Θ).
    pub eta: Vec<f64>,
    /// Unreduced t-frequencies η⁽ᵏ⁾ of the k-th flow.
    pub eta_k: Vec<f64>,
    pub order: usize,
    /// Divisor realising α₀, used to seed inversions.
    pub seed: Divisor,
}

impl FlowState {
    /// Flow through the divisor `d` for the hierarchy order `k`.
    pub fn new(map: &AbelMap, d: &Divisor, martin: &ThetaK, theta_k: &ThetaK) -> Result<Self> {
        Ok(FlowState {
            alpha0: map.character(d)?,
            eta: martin.frequencies.clone(),
            eta_k: theta_k.frequencies.clone(),
            order: theta_k.order,
            seed: d.clone(),
        })
    }

    /// α₀ + ηx + η⁽ᵏ⁾t mod 1.
    pub fn character_at(&self, x: f64, t: f64) -> CharacterVector {
        flow_character(self, x, t)
    }

    /// Divisor at (x, t), inverted from `seed` (or from the base divisor).
    pub fn divisor_at(&self, map: &AbelMap, x: f64, t: f64, seed: Option<&Divisor>) -> Result<Divisor> {
        if x == 0.0 && t == 0.0 {
            return Ok(self.seed.clone());
        }
        map.invert(&self.character_at(x, t), seed.unwrap_or(&self.seed))
    }
}

/// α₀ + ηx + η⁽ᵏ⁾t, computed from unreduced frequencies and reduced once.
pub fn flow_character(state: &FlowState, x: f64, t: f64) -> CharacterVector {
    let raw = state
        .alpha0
        .components()
        .iter()
        .zip(state.eta.iter().zip(&state.eta_k))
        .map(|(a, (e, ek))| a + e * x + ek * t)
        .collect();
    CharacterVector::new(raw)
}
