//! Convergence of e_α under truncation of the band set.
//!
//! For nested sets E_N (the first N gaps of a larger set) and divisors
//! restricted in the same way, e_{α_N}(λ) settles as N grows on compact
//! subsets of the upper half-plane. The study reports the successive
//! differences |e_{α_N}(λ) − e_{α_{N+1}}(λ)| and their ratios.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use super::CanonicalProduct;
use crate::abelian::{Domain, ThetaK, WidomFunction};
use crate::band_geometry::{BandSet, Divisor, DivisorPoint};
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, Serialize)]
pub struct TruncationStudy {
    /// Gap counts N at which the differences are taken.
    pub levels: Vec<usize>,
    /// max over samples of |e_{α_N} − e_{α_{N+1}}|, one per level.
    pub differences: Vec<f64>,
    /// differences[i+1] / differences[i].
    pub ratios: Vec<f64>,
    /// e_{α_N}(λ) for N = 1..=max, per sample.
    pub values: Vec<Vec<C64>>,
    pub samples: Vec<C64>,
}

impl TruncationStudy {
    /// True when every successive difference shrinks.
    pub fn contracts(&self) -> bool {
        !self.ratios.is_empty() && self.ratios.iter().all(|r| r.is_finite() && *r < 1.0)
    }
}

/// Gaps (j, j + 4^{−j}) for j = 1..=n, each holding its midpoint on the
/// upper sheet.
pub fn geometric_family(n: usize) -> (Vec<(f64, f64)>, Vec<DivisorPoint>) {
    let gaps: Vec<(f64, f64)> = (1..=n).map(|j| (j as f64, j as f64 + 4f64.powi(-(j as i32)))).collect();
    let divisor = gaps
        .iter()
        .map(|&(a, b)| DivisorPoint {
            lambda: 0.5 * (a + b),
            eps: crate::band_geometry::Sheet::Plus,
        })
        .collect();
    (gaps, divisor)
}

/// e_{α_N} at the samples for N = 1..=gaps.len(), and the differences
/// between consecutive truncations.
pub fn truncation_study(gaps: &[(f64, f64)], divisor: &[DivisorPoint], samples: &[C64], tol: Tolerances) -> Result<TruncationStudy> {
    if gaps.len() < 3 || divisor.len() != gaps.len() {
        return Err(Error::Validation(format!(
            "a truncation study needs at least 3 gaps with one divisor point each, got {} gaps and {} points",
            gaps.len(),
            divisor.len()
        )));
    }
    let full = BandSet::with_guard(gaps, tol.gap_guard)?;
    Divisor::new(&full, divisor.to_vec())?;
    let values: Vec<Vec<C64>> = (1..=gaps.len())
        .into_par_iter()
        .map(|n| {
            let bands = full.truncate(n)?;
            let d = Divisor::new(&bands, divisor[..n].to_vec())?;
            let domain = Domain::with_tolerances(bands, tol)?;
            let martin = ThetaK::build(&domain, 0)?;
            let widom = WidomFunction::build(&domain, &martin)?;
            let e = CanonicalProduct::build(&domain, &d)?;
            samples.iter().map(|&l| e.eval(&widom, l)).collect()
        })
        .collect::<Result<_>>()?;
    let differences: Vec<f64> = values
        .windows(2)
        .map(|w| w[0].iter().zip(&w[1]).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
        .collect();
    let ratios = differences.windows(2).map(|w| w[1] / w[0]).collect();
    Ok(TruncationStudy {
        levels: (1..gaps.len()).collect(),
        differences,
        ratios,
        values,
        samples: samples.to_vec(),
    })
}

/// Five points of a compact set in the upper half-plane.
pub fn default_samples() -> Vec<C64> {
    vec![
        C64::new(-2.0, 0.5),
        C64::new(0.5, 1.0),
        C64::new(1.5, 0.5),
        C64::new(3.5, 1.0),
        C64::new(-0.5, 2.0),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_widths_shrink_by_four() {
        let (g, d) = geometric_family(3);
        assert_eq!(g[1], (2.0, 2.0625));
        assert_eq!(d[2].lambda, 3.0 + 0.5 / 64.0);
    }

    #[test]
    fn too_few_gaps_rejected() {
        let (g, d) = geometric_family(2);
        let err = truncation_study(&g, &d, &default_samples(), Tolerances::default()).unwrap_err();
        assert!(err.is_validation());
    }
}
