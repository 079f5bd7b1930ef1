//! Spectral functions of the reflectionless operator attached to a divisor:
//! R, σⱼ, m±, the canonical products e_α and ẽ_α, reproducing kernels and
//! Weyl/Baker–Akhiezer solutions, plus the identity battery.

mod canonical;
pub mod identities;
pub mod truncation;
mod weights;

use num_complex::Complex64 as C64;

pub use canonical::CanonicalProduct;
pub use identities::{identity_suite, IdentityReport, IdentitySamples};
pub use truncation::{default_samples, geometric_family, truncation_study, TruncationStudy};
pub use weights::{sigma_weights, WeylFunctions};

use crate::abel_flow::{AbelMap, FlowState};
use crate::abelian::{sqrt_lambda, Domain, ThetaK, WidomFunction};
use crate::band_geometry::{CharacterVector, Divisor};
use crate::error::{Error, Result};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Per-band-set data shared by every divisor: the Martin function and its
/// frequencies, the Abel map, the Widom factors and the shift character 𝔧.
pub struct SpectralContext<'d> {
    pub domain: &'d Domain,
    pub martin: ThetaK,
    pub abel: AbelMap<'d>,
    pub widom: WidomFunction<'d>,
    /// The character of √λ, (½, …, ½) unless refitted.
    pub shift: CharacterVector,
}

impl<'d> SpectralContext<'d> {
    pub fn build(domain: &'d Domain) -> Result<Self> {
        let martin = ThetaK::build(domain, 0)?;
        let abel = AbelMap::build(domain, &martin)?;
        let widom = WidomFunction::build(domain, &martin)?;
        Ok(SpectralContext {
            domain,
            shift: CharacterVector::half(domain.n()),
            martin,
            abel,
            widom,
        })
    }

    /// Bundle for the divisor `d`; the shifted divisor is found by inversion
    /// seeded at `d` itself.
    pub fn bundle(&self, d: &Divisor) -> Result<SpectralBundle<'_>> {
        let alpha = self.abel.character(d)?;
        self.bundle_with_alpha(d.clone(), alpha, None)
    }

    /// Bundle for a character, seeding both inversions from `seed`.
    pub fn bundle_at(&self, alpha: &CharacterVector, seed: &Divisor) -> Result<SpectralBundle<'_>> {
        let d = self.abel.invert(alpha, seed)?;
        self.bundle_with_alpha(d, alpha.clone(), None)
    }

    fn bundle_with_alpha(&self, d: Divisor, alpha: CharacterVector, shifted_seed: Option<&Divisor>) -> Result<SpectralBundle<'_>> {
        let target = alpha.add(&self.shift);
        let shifted = self.abel.invert(&target, shifted_seed.unwrap_or(&d))?;
        let bands = self.domain.bands();
        let (e, e_shift, e_tilde, e_tilde_shift) = {
            let reflected = d.reflect(bands);
            let reflected_shift = shifted.reflect(bands);
            let built: Vec<CanonicalProduct> = [&d, &shifted, &reflected, &reflected_shift]
                .into_iter()
                .map(|x| CanonicalProduct::build(self.domain, x))
                .collect::<Result<_>>()?;
            let mut it = built.into_iter();
            (it.next().unwrap(), it.next().unwrap(), it.next().unwrap(), it.next().unwrap())
        };
        Ok(SpectralBundle {
            ctx: self,
            weyl: WeylFunctions::new(self.domain, &d),
            divisor: d,
            alpha,
            shifted,
            e,
            e_shift,
            e_tilde,
            e_tilde_shift,
        })
    }

    /// Bundle along a flow at (x, t), seeded from a neighbouring bundle.
    pub fn flowed(&self, flow: &FlowState, x: f64, t: f64, near: Option<&SpectralBundle>) -> Result<SpectralBundle<'_>> {
        let alpha = flow.character_at(x, t);
        let seed = near.map(|b| b.divisor.clone()).unwrap_or_else(|| flow.seed.clone());
        let d = self.abel.invert(&alpha, &seed)?;
        self.bundle_with_alpha(d, alpha, near.map(|b| &b.shifted))
    }
}

/// Evaluators for one divisor D with character α.
pub struct SpectralBundle<'c> {
    pub ctx: &'c SpectralContext<'c>,
    pub divisor: Divisor,
    pub alpha: CharacterVector,
    /// The divisor with character α + 𝔧.
    pub shifted: Divisor,
    pub weyl: WeylFunctions<'c>,
    e: CanonicalProduct<'c>,
    e_shift: CanonicalProduct<'c>,
    e_tilde: CanonicalProduct<'c>,
    e_tilde_shift: CanonicalProduct<'c>,
}

impl<'c> SpectralBundle<'c> {
    pub fn domain(&self) -> &'c Domain {
        self.ctx.domain
    }

    /// e_α(λ).
    pub fn e(&self, lambda: C64) -> Result<C64> {
        self.e.eval(&self.ctx.widom, lambda)
    }

    /// e_{α+𝔧}(λ).
    pub fn e_shift(&self, lambda: C64) -> Result<C64> {
        self.e_shift.eval(&self.ctx.widom, lambda)
    }

    /// ẽ_α(λ): the product of the reflected divisor.
    pub fn e_tilde(&self, lambda: C64) -> Result<C64> {
        self.e_tilde.eval(&self.ctx.widom, lambda)
    }

    /// ẽ_{α+𝔧}(λ).
    pub fn e_tilde_shift(&self, lambda: C64) -> Result<C64> {
        self.e_tilde_shift.eval(&self.ctx.widom, lambda)
    }

    pub fn log_e(&self, lambda: C64) -> Result<C64> {
        self.e.log_eval(&self.ctx.widom, lambda)
    }

    pub fn resolvent(&self, lambda: C64) -> Result<C64> {
        self.weyl.resolvent(lambda)
    }

    pub fn m_plus(&self, lambda: C64) -> Result<C64> {
        self.weyl.m_plus(lambda)
    }

    pub fn m_minus(&self, lambda: C64) -> Result<C64> {
        self.weyl.m_minus(lambda)
    }

    /// m₊ through the canonical products: m₊(0) + i√λ·e_{α+𝔧}/e_α.
    pub fn m_plus_ratio(&self, lambda: C64) -> Result<C64> {
        let r = self.e_shift(lambda)? / self.e(lambda)?;
        Ok(self.weyl.m_plus_at_zero() + I * sqrt_lambda(lambda) * r)
    }

    /// m₋ through the reflected products: −m₊(0) + i√λ·ẽ_{α+𝔧}/ẽ_α.
    pub fn m_minus_ratio(&self, lambda: C64) -> Result<C64> {
        let r = self.e_tilde_shift(lambda)? / self.e_tilde(lambda)?;
        Ok(-self.weyl.m_plus_at_zero() + I * sqrt_lambda(lambda) * r)
    }

    /// 𝒲(λ) = ∏Φ(λ, cⱼ).
    pub fn widom(&self, lambda: C64) -> Result<C64> {
        self.ctx.widom.eval(lambda)
    }

    /// Both sides of e_{α+𝔧}ẽ_α + e_αẽ_{α+𝔧} = 𝒲/(√λ·Θ′).
    pub fn wronskian_sides(&self, lambda: C64) -> Result<(C64, C64)> {
        let lhs = self.e_shift(lambda)? * self.e_tilde(lambda)? + self.e(lambda)? * self.e_tilde_shift(lambda)?;
        let theta_prime = self.ctx.martin.derivative(self.domain(), lambda);
        let rhs = self.widom(lambda)? / (sqrt_lambda(lambda) * theta_prime);
        Ok((lhs, rhs))
    }

    /// k^α(λ, λ₀) for λ, λ₀ in the upper half-plane.
    pub fn kernel(&self, lambda: C64, lambda0: C64) -> Result<C64> {
        let den = lambda - lambda0.conj();
        if den.norm() == 0.0 {
            return Err(Error::Validation("kernel evaluated at λ = conj(λ₀)".into()));
        }
        let a = sqrt_lambda(lambda) * self.e_shift(lambda)? * self.e(lambda0)?.conj();
        let b = self.e(lambda)? * (sqrt_lambda(lambda0) * self.e_shift(lambda0)?).conj();
        Ok(I * (a + b) / den)
    }
}

/// u₊(x, λ) = e^{iΘ(λ)x}·e_{α(x)}(λ)/e_α(λ); `at_x` is the bundle at x.
pub fn weyl_solution(base: &SpectralBundle, at_x: &SpectralBundle, x: f64, lambda: C64) -> Result<C64> {
    let theta = base.ctx.martin.eval(base.domain(), lambda)?;
    Ok((I * theta * x + at_x.log_e(lambda)? - base.log_e(lambda)?).exp())
}

/// Ψ(x, t, λ) = e^{iΘx + iΘ⁽ᵏ⁾t}·e_{α(x,t)}(λ); `at` is the bundle at (x, t).
pub fn baker_akhiezer(at: &SpectralBundle, theta_k: &ThetaK, x: f64, t: f64, lambda: C64) -> Result<C64> {
    let d = at.domain();
    let phase = at.ctx.martin.eval(d, lambda)? * x + theta_k.eval(d, lambda)? * t;
    Ok((I * phase + at.log_e(lambda)?).exp())
}
