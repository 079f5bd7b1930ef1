//! Behaviour of the Green functions and the comb maps far out on ℝ₋.
//!
//! Two facts are checked here. The Green functions with poles in the gaps,
//! measured against the one with pole −1, converge to Martin-function
//! values: M(−1)·Σ wⱼG(λ, λⱼ)/G(λ, −1) → Σ wⱼM(λⱼ) as λ → −∞, with weights
//! wⱼ = (1 + εⱼ)/2. And Θ⁽ᵏ⁾(λ) − λ^{k+½} tends to zero along ℝ₋.

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::domain::{c, Domain};
use super::green::GreenPole;
use super::theta::ThetaK;
use crate::band_geometry::Divisor;
use crate::error::Result;
use crate::numerics::richardson_limit;

/// Both sides of the Green-function limit.
#[derive(Debug, Clone, Serialize)]
pub struct GreenRatioLimit {
    /// Sample abscissae λ = −10^m.
    pub lambdas: Vec<f64>,
    /// M(−1)·log(1/Φ_D(λ))/G(λ, −1) at each sample.
    pub ratios: Vec<f64>,
    /// Richardson limit of the ratios in the variable |λ|^{−1/2}.
    pub extrapolated: f64,
    /// Σ wⱼM(λⱼ).
    pub martin_sum: f64,
    pub relative_error: f64,
    pub warning: bool,
}

/// Evaluates the ratio at λ = −10^m for each m in `exponents`.
pub fn green_ratio_limit(domain: &Domain, martin: &ThetaK, d: &Divisor, exponents: &[i32]) -> Result<GreenRatioLimit> {
    let reference = GreenPole::build(domain, -1.0)?;
    let poles: Vec<(f64, GreenPole)> = d
        .points()
        .iter()
        .filter(|p| p.eps.value() > 0.0)
        .map(|p| Ok((1.0, GreenPole::build(domain, p.lambda)?)))
        .collect::<Result<_>>()?;
    let m_ref = martin.martin(domain, c(-1.0))?;
    let lambdas: Vec<f64> = exponents.iter().map(|&m| -(10f64.powi(m))).collect();
    let ratios = lambdas
        .iter()
        .map(|&l| {
            let z = c(l);
            let num: f64 = poles.iter().map(|(w, g)| Ok(w * g.green(z)?)).sum::<Result<f64>>()?;
            Ok(m_ref * num / reference.green(z)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let h: Vec<f64> = lambdas.iter().map(|l| l.abs().sqrt().recip()).collect();
    let limit = richardson_limit(&h, &ratios, None);
    let martin_sum = d
        .points()
        .iter()
        .filter(|p| p.eps.value() > 0.0)
        .map(|p| martin.martin(domain, c(p.lambda)))
        .sum::<Result<f64>>()?;
    Ok(GreenRatioLimit {
        relative_error: (limit.value - martin_sum).abs() / martin_sum.abs().max(1e-300),
        lambdas,
        ratios,
        extrapolated: limit.value,
        martin_sum,
        warning: limit.warn,
    })
}

/// |Θ⁽ᵏ⁾(λ) − λ^{k+½}| at λ = −10^m, with a flag telling whether the
/// sequence decreases strictly.
#[derive(Debug, Clone, Serialize)]
pub struct ThetaDecay {
    pub lambdas: Vec<f64>,
    pub remainders: Vec<f64>,
    pub monotone: bool,
}

pub fn theta_decay(domain: &Domain, theta: &ThetaK, exponents: &[i32]) -> Result<ThetaDecay> {
    let lambdas: Vec<f64> = exponents.iter().map(|&m| -(10f64.powi(m))).collect();
    let remainders = lambdas
        .iter()
        .map(|&l| Ok(theta.asymptotic_remainder(domain, C64::new(l, 0.0))?.norm()))
        .collect::<Result<Vec<f64>>>()?;
    let monotone = remainders.windows(2).all(|w| w[1] < w[0]);
    Ok(ThetaDecay {
        lambdas,
        remainders,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::band_geometry::BandSet;

    #[test]
    fn free_remainder_vanishes() {
        let d = Domain::new(BandSet::free()).unwrap();
        let t = ThetaK::build(&d, 1).unwrap();
        let r = theta_decay(&d, &t, &[2, 3, 4]).unwrap();
        assert!(r.remainders.iter().all(|x| *x < 1e-9));
    }

    #[test]
    fn empty_weighted_divisor_gives_zero() {
        let d = Domain::new(BandSet::new(&[(1.0, 2.0)]).unwrap()).unwrap();
        let m = ThetaK::build(&d, 0).unwrap();
        let div = Divisor::from_pairs(d.bands(), &[(1.4, -1.0)]).unwrap();
        let r = green_ratio_limit(&d, &m, &div, &[2, 3, 4]).unwrap();
        assert_eq!(r.martin_sum, 0.0);
        assert!(r.ratios.iter().all(|x| *x == 0.0));
    }
}
