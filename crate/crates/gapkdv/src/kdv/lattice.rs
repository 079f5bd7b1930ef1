//! The potential V(x, t) on a lattice and the finite-difference residual of
//! the first KdV equation.
//!
//! Along the character flow α₀ + ηx + η⁽¹⁾t (the direction in which the
//! Baker–Akhiezer function carries e^{iΘ⁽¹⁾t}) the potential satisfies
//! ∂ₜV = −¼∂ₓ³V + (3/2)V∂ₓV. In the reversed time τ = −t this is the
//! familiar ∂_τV = ¼∂ₓ³V − (3/2)V∂ₓV.

use rayon::prelude::*;
use serde::Serialize;

use super::chi::chi_closed_form;
use crate::abel_flow::{AbelMap, FlowState};
use crate::band_geometry::{BandSet, CharacterVector, Divisor};
use crate::error::{Error, Result};

/// V(x, t) = Σ(aⱼ + bⱼ − 2λⱼ(x, t)).
pub fn trace_potential(bands: &BandSet, d: &Divisor) -> f64 {
    bands.gaps().iter().zip(d.lambdas()).map(|(g, l)| g.a + g.b - 2.0 * l).sum()
}

/// An inversion that failed at lattice point (ix, it).
#[derive(Debug, Clone, Serialize)]
pub struct LatticeFailure {
    pub ix: usize,
    pub it: usize,
    pub x: f64,
    pub t: f64,
    pub message: String,
}

/// Values indexed as `[ix][it]`.
#[derive(Debug, Clone, Serialize)]
pub struct PotentialGrid {
    pub x: Vec<f64>,
    pub t: Vec<f64>,
    pub v: Vec<Vec<f64>>,
    /// −2χ₁(α(x, t)) through the moment expansion.
    pub v_chi: Vec<Vec<f64>>,
    pub divisors: Vec<Vec<Option<Divisor>>>,
    pub characters: Vec<Vec<CharacterVector>>,
    pub flow: FlowState,
    pub failures: Vec<LatticeFailure>,
}

impl PotentialGrid {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }

    /// max |V − (−2χ₁)| over the lattice.
    pub fn cross_column_gap(&self) -> f64 {
        self.v
            .iter()
            .flatten()
            .zip(self.v_chi.iter().flatten())
            .filter(|(a, b)| a.is_finite() && b.is_finite())
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Evenly spaced points min, …, max (a single point when count is 1).
pub fn linspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..count).map(|i| min + (max - min) * i as f64 / (count - 1) as f64).collect(),
    }
}

/// Tabulates V along the flow. The first t-column is swept in x with each
/// inversion seeded from its neighbour; the x-lines then run in parallel,
/// each chained along t from its first point.
pub fn potential_grid(map: &AbelMap, flow: &FlowState, xs: &[f64], ts: &[f64]) -> PotentialGrid {
    let bands = map.domain().bands();
    let t0 = ts.first().copied().unwrap_or(0.0);
    let mut starts: Vec<Option<Divisor>> = Vec::with_capacity(xs.len());
    let mut seed = flow.seed.clone();
    for &x in xs {
        match map.invert(&flow.character_at(x, t0), &seed) {
            Ok(d) => {
                seed = d.clone();
                starts.push(Some(d));
            }
            Err(_) => starts.push(None),
        }
    }
    type Line = (Vec<f64>, Vec<f64>, Vec<Option<Divisor>>, Vec<CharacterVector>, Vec<LatticeFailure>);
    let lines: Vec<Line> = xs
        .par_iter()
        .enumerate()
        .map(|(ix, &x)| {
            let mut line: Line = (Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new());
            let mut seed = starts[ix].clone().unwrap_or_else(|| flow.seed.clone());
            for (it, &t) in ts.iter().enumerate() {
                let alpha = flow.character_at(x, t);
                let found = if it == 0 {
                    starts[ix]
                        .clone()
                        .ok_or_else(|| Error::Numerical("inversion failed on the first column".into()))
                } else {
                    map.invert(&alpha, &seed)
                };
                match found {
                    Ok(d) => {
                        line.0.push(trace_potential(bands, &d));
                        line.1.push(-2.0 * chi_closed_form(bands, &d, 1).get(1).re);
                        seed = d.clone();
                        line.2.push(Some(d));
                    }
                    Err(e) => {
                        line.0.push(f64::NAN);
                        line.1.push(f64::NAN);
                        line.2.push(None);
                        line.4.push(LatticeFailure {
                            ix,
                            it,
                            x,
                            t,
                            message: e.to_string(),
                        });
                    }
                }
                line.3.push(alpha);
            }
            line
        })
        .collect();
    let mut grid = PotentialGrid {
        x: xs.to_vec(),
        t: ts.to_vec(),
        v: Vec::with_capacity(xs.len()),
        v_chi: Vec::with_capacity(xs.len()),
        divisors: Vec::with_capacity(xs.len()),
        characters: Vec::with_capacity(xs.len()),
        flow: flow.clone(),
        failures: Vec::new(),
    };
    for (v, vc, d, a, f) in lines {
        grid.v.push(v);
        grid.v_chi.push(vc);
        grid.divisors.push(d);
        grid.characters.push(a);
        grid.failures.extend(f);
    }
    grid
}

/// Fewest lattice points per direction accepted by the residual.
pub const MIN_POINTS: usize = 8;

fn uniform_step(v: &[f64], what: &str) -> Result<f64> {
    if v.len() < MIN_POINTS {
        return Err(Error::Validation(format!(
            "{what}-grid has {} points, at least {MIN_POINTS} needed",
            v.len()
        )));
    }
    let h = (v[v.len() - 1] - v[0]) / (v.len() - 1) as f64;
    if v.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(1.0)) {
        return Err(Error::Validation(format!("{what}-grid is not uniform")));
    }
    Ok(h)
}

/// max |∂ₜV + ¼∂ₓ³V − (3/2)V∂ₓV| over interior points, with second-order
/// central differences (five points in x, three in t).
pub fn kdv_residual(grid: &PotentialGrid) -> Result<f64> {
    let hx = uniform_step(&grid.x, "x")?;
    let ht = uniform_step(&grid.t, "t")?;
    if !grid.is_complete() {
        return Err(Error::Numerical(format!("{} lattice inversions failed", grid.failures.len())));
    }
    let v = &grid.v;
    let mut worst: f64 = 0.0;
    for i in 2..grid.x.len() - 2 {
        for j in 1..grid.t.len() - 1 {
            let vt = (v[i][j + 1] - v[i][j - 1]) / (2.0 * ht);
            let vx = (v[i + 1][j] - v[i - 1][j]) / (2.0 * hx);
            let vxxx = (v[i + 2][j] - 2.0 * v[i + 1][j] + 2.0 * v[i - 1][j] - v[i - 2][j]) / (2.0 * hx.powi(3));
            worst = worst.max((vt + 0.25 * vxxx - 1.5 * v[i][j] * vx).abs());
        }
    }
    Ok(worst)
}

/// Residuals on nested lattices around one point.
#[derive(Debug, Clone, Serialize)]
pub struct KdvConvergence {
    pub steps: Vec<f64>,
    pub residuals: Vec<f64>,
    /// log₂ of successive residual ratios.
    pub orders: Vec<f64>,
}

/// KdV residual on square lattices of `points`² nodes centred at (x₀, t₀)
/// with spacings h, h/2, …, one per level.
pub fn kdv_convergence(
    map: &AbelMap,
    flow: &FlowState,
    center: (f64, f64),
    h: f64,
    levels: usize,
    points: usize,
) -> Result<KdvConvergence> {
    let mut steps = Vec::with_capacity(levels);
    let mut residuals = Vec::with_capacity(levels);
    for l in 0..levels {
        let step = h / 2f64.powi(l as i32);
        let half = (points - 1) as f64 / 2.0;
        let xs = linspace(center.0 - half * step, center.0 + half * step, points);
        let ts = linspace(center.1 - half * step, center.1 + half * step, points);
        let grid = potential_grid(map, flow, &xs, &ts);
        residuals.push(kdv_residual(&grid)?);
        steps.push(step);
    }
    let orders = residuals
        .windows(2)
        .map(|w| if w[1] == 0.0 || w[0] == 0.0 { 0.0 } else { (w[0] / w[1]).log2() })
        .collect();
    Ok(KdvConvergence { steps, residuals, orders })
}
