//! First-kind differentials normalised on the gap cycles, and the check of
//! the B-period formula for dΘ⁽ᵏ⁾.
//!
//! The gap cycle A_j is the lift of [aⱼ,bⱼ] to both sheets, so its period is
//! twice the gap integral. The dual cycle B_j is the lift of E ∩ [0,aⱼ],
//! run on the upper sheet from aⱼ down to 0 and back on the lower sheet; this
//! orientation gives A_j·B_j = +1 with the A-cycle orientation used for the
//! normalisation. Its period for dΘ⁽ᵏ⁾ is −2 Re Θ⁽ᵏ⁾(aⱼ) = −2πηⱼ⁽ᵏ⁾ because
//! the gap pieces contribute nothing.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::domain::{Domain, I};
use super::theta::ThetaK;
use crate::error::{Error, Result};
use crate::numerics::linalg::solve_real;
use crate::numerics::TruncatedSeries;

/// dω_l = P_l(λ)/√s dλ with complex coefficients (ascending).
#[derive(Debug, Clone, Serialize)]
pub struct FirstKindBasis {
    pub numerators: Vec<Vec<C64>>,
}

impl FirstKindBasis {
    pub fn build(domain: &Domain) -> Result<Self> {
        let n = domain.n();
        if n == 0 {
            return Err(Error::Validation("first-kind differentials need at least one gap".into()));
        }
        // 2∫_gap ξ^m/√s = −2i·g[j][m]; with P = (i/2)·q the A-periods become
        // Σ_m g[j][m] q_m, so q solves G q = e_l.
        let g = domain.gap_moments();
        let mut numerators = Vec::with_capacity(n);
        for l in 0..n {
            let mut e = vec![0.0; n];
            e[l] = 1.0;
            let q = solve_real(g, &e, "normalising first-kind differentials")?;
            numerators.push(q.into_iter().map(|v| I * (0.5 * v)).collect());
        }
        Ok(FirstKindBasis { numerators })
    }

    /// A-period matrix recomputed directly: entry (j, l) = 2∫_{gap j} dω_l.
    pub fn a_periods(&self, domain: &Domain) -> Result<Vec<Vec<C64>>> {
        let n = domain.n();
        let mut out = vec![vec![C64::new(0.0, 0.0); n]; n];
        for (j, row) in out.iter_mut().enumerate() {
            for (l, p) in self.numerators.iter().enumerate() {
                row[l] = domain.gap_integral_adaptive(j, |x| {
                    let num = p.iter().rev().fold(C64::new(0.0, 0.0), |acc, &cf| acc * x + cf);
                    num / domain.sqrt_s_real(x)
                })? * 2.0;
            }
        }
        Ok(out)
    }

    /// Coefficient of ε^{2k} in dω_l/dε at ∞, where ε = 1/√λ:
    /// dω/dε = −2·Σ_m p_m ε^{2(N−1−m)} / ∏√((1−aε²)(1−bε²)).
    pub fn local_coefficient(&self, domain: &Domain, l: usize, k: usize) -> C64 {
        let n = domain.n();
        let inv = domain.sqrt_s_series(k).recip();
        let p = &self.numerators[l];
        let mut total = C64::new(0.0, 0.0);
        for (m, &pm) in p.iter().enumerate() {
            let shift = n - 1 - m;
            if shift <= k {
                total += pm * inv.coeff(k - shift);
            }
        }
        total * -2.0
    }
}

/// One row of the B-period comparison.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BPeriodRow {
    pub gap: usize,
    /// ∫_{B_j} dΘ⁽ᵏ⁾.
    pub lhs: f64,
    /// −2πi·(1/(2k)!)·∂^{2k+1}ω_j at ∞.
    pub rhs: f64,
    pub relative_error: f64,
}

/// Compares both sides of the B-period formula for dΘ⁽ᵏ⁾.
pub fn b_period_check(domain: &Domain, theta: &ThetaK) -> Result<Vec<BPeriodRow>> {
    let basis = FirstKindBasis::build(domain)?;
    let k = theta.order;
    let mut rows = Vec::new();
    for j in 0..domain.n() {
        let a = domain.bands().gap(j).a;
        let lhs = -2.0 * domain.real_segment(&|x| theta.derivative(domain, C64::new(x, 0.0)), 0.0, a)?.re;
        let rhs_c = I * (-2.0 * PI) * basis.local_coefficient(domain, j, k);
        rows.push(BPeriodRow {
            gap: j,
            lhs,
            rhs: rhs_c.re,
            relative_error: (lhs - rhs_c.re).abs().max(rhs_c.im.abs()) / lhs.abs().max(1e-300),
        });
    }
    Ok(rows)
}

/// Series helper kept public for the examples: ∏√((1−aⱼz)(1−bⱼz)).
pub fn sqrt_s_series(domain: &Domain, order: usize) -> TruncatedSeries {
    domain.sqrt_s_series(order)
}
