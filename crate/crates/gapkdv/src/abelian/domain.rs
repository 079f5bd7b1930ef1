//! The slit domain ℂ∖E: the branch of √s with its cut on E, integration of
//! Abelian integrands along the canonical path, and the moment tables shared
//! by every normalisation.

use num_complex::Complex64 as C64;

use crate::band_geometry::BandSet;
use crate::error::{Error, Result};
use crate::numerics::quadrature::{
    adaptive_gauss_kronrod, adaptive_segment_points, adaptive_singular_segment, band_tail_quadrature, SegmentPoint,
};
use crate::numerics::{gap_quadrature, singular_segment, TruncatedSeries};
use crate::tolerances::Tolerances;

pub(crate) const I: C64 = C64 { re: 0.0, im: 1.0 };

pub(crate) fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// √z for z = c − λ with λ in the closed upper half-plane, so Im z ≤ 0.
/// On the negative real axis the value is the limit from below, −i√|z|.
pub(crate) fn sqrt_from_below(z: C64) -> C64 {
    if z.im == 0.0 {
        if z.re >= 0.0 {
            c(z.re.sqrt())
        } else {
            C64::new(0.0, -(-z.re).sqrt())
        }
    } else {
        z.sqrt()
    }
}

/// √λ on ℂ∖ℝ₊ with √(−1) = i, extended to ℝ₊ by its limit from ℂ₊.
pub fn sqrt_lambda(lambda: C64) -> C64 {
    I * sqrt_from_below(-lambda)
}

/// Principal logarithm on the closed upper half-plane (arg ∈ [0, π]).
pub(crate) fn log_upper(z: C64) -> C64 {
    if z.im == 0.0 {
        C64::new(z.re.abs().ln(), if z.re < 0.0 { std::f64::consts::PI } else { 0.0 })
    } else {
        z.ln()
    }
}

/// Geometry plus the cached numerical data every differential needs.
#[derive(Debug, Clone)]
pub struct Domain {
    bands: BandSet,
    tol: Tolerances,
    /// `gap_moments[j][m]` = ∫_{gap j} i·ξ^m/√s dξ (real), m < N.
    gap_moments: Vec<Vec<f64>>,
    /// `band_moments[l][m]` = ∫_{band l} ξ^m/√s dξ (real), m < N.
    band_moments: Vec<Vec<f64>>,
}

impl Domain {
    pub fn new(bands: BandSet) -> Result<Self> {
        Self::with_tolerances(bands, Tolerances::default())
    }

    pub fn with_tolerances(bands: BandSet, tol: Tolerances) -> Result<Self> {
        let mut d = Domain {
            bands,
            tol,
            gap_moments: Vec::new(),
            band_moments: Vec::new(),
        };
        let n = d.n();
        d.gap_moments = (0..n).map(|j| d.gap_moment_row(j, n)).collect::<Result<_>>()?;
        d.band_moments = (0..=n)
            .map(|l| {
                (0..n)
                    .map(|m| d.band_integral_points(l, |p| c(p.x.powi(m as i32)) / d.sqrt_s_at(&p)).map(|v| v.re))
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok(d)
    }

    pub fn bands(&self) -> &BandSet {
        &self.bands
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Number of gaps N.
    pub fn n(&self) -> usize {
        self.bands.len()
    }

    /// √s(λ), s = λ∏(λ−aⱼ)(λ−bⱼ), on the closed upper half-plane:
    /// i(−1)ᴺ·√(−λ)·∏√(aⱼ−λ)√(bⱼ−λ). Behaves like λ^{N+½} at infinity,
    /// is real on the bands and imaginary on ℝ₋ and on the gaps.
    pub fn sqrt_s(&self, lambda: C64) -> C64 {
        let mut v = I * sqrt_from_below(-lambda);
        for g in self.bands.gaps() {
            v *= sqrt_from_below(c(g.a) - lambda) * sqrt_from_below(c(g.b) - lambda);
        }
        if self.n() % 2 == 1 {
            -v
        } else {
            v
        }
    }

    /// √s at a real quadrature node, using the node's exact offsets for any
    /// branch point that is one of its segment ends.
    pub fn sqrt_s_at(&self, p: &SegmentPoint) -> C64 {
        let root = |e: f64| sqrt_from_below(c(-p.offset_from(e)));
        let mut v = I * root(0.0);
        for g in self.bands.gaps() {
            v *= root(g.a) * root(g.b);
        }
        if self.n() % 2 == 1 {
            -v
        } else {
            v
        }
    }

    /// Boundary value of √s at a real point, from ℂ₊.
    pub fn sqrt_s_real(&self, x: f64) -> C64 {
        self.sqrt_s(c(x))
    }

    /// (√s)'/√s = ½[1/λ + Σ 1/(λ−aⱼ) + 1/(λ−bⱼ)].
    pub fn log_derivative_s(&self, lambda: C64) -> C64 {
        let mut s = lambda.inv();
        for g in self.bands.gaps() {
            s += (lambda - g.a).inv() + (lambda - g.b).inv();
        }
        s * 0.5
    }

    /// Taylor series in z = 1/λ of ∏√((1−aⱼz)(1−bⱼz)) = √s/λ^{N+½}.
    pub fn sqrt_s_series(&self, order: usize) -> TruncatedSeries {
        let mut log = vec![0.0; order + 1];
        for g in self.bands.gaps() {
            for (n, l) in log.iter_mut().enumerate().skip(1) {
                *l -= 0.5 * (g.a.powi(n as i32) + g.b.powi(n as i32)) / n as f64;
            }
        }
        TruncatedSeries::new(log, order).exp()
    }

    /// ∫_{gap j} i·ξ^m/√s dξ for m = 0..count, by the cos θ substitution.
    pub fn gap_moment_row(&self, j: usize, count: usize) -> Result<Vec<f64>> {
        (0..count)
            .map(|m| self.gap_integral(j, |x| I * x.powi(m as i32) / self.sqrt_s_real(x)).map(|v| v.re))
            .collect()
    }

    pub(crate) fn gap_moments(&self) -> &[Vec<f64>] {
        &self.gap_moments
    }

    pub(crate) fn band_moments(&self) -> &[Vec<f64>] {
        &self.band_moments
    }

    /// ∫ over gap j of an integrand with 1/√ endpoint behaviour.
    pub fn gap_integral<F: Fn(f64) -> C64>(&self, j: usize, f: F) -> Result<C64> {
        let g = self.bands.gap(j);
        // Absorb the endpoint singularity into the arcsine weight.
        let w = |x: f64| f(x) * ((x - g.a) * (g.b - x)).max(0.0).sqrt();
        Ok(gap_quadrature(w, g, self.tol.quadrature, self.tol.max_doublings)?.value)
    }

    /// Adaptive version of [`Domain::gap_integral`] for integrands with
    /// interior near-singularities.
    pub fn gap_integral_adaptive<F: Fn(f64) -> C64>(&self, j: usize, f: F) -> Result<C64> {
        let g = self.bands.gap(j);
        Ok(adaptive_singular_segment(f, g.a, g.b, self.tol.quadrature)?.value)
    }

    /// ∫ over band l (l = 0..=N; band N is unbounded).
    pub fn band_integral<F: Fn(f64) -> C64>(&self, l: usize, f: F) -> Result<C64> {
        let (lo, hi) = self.bands.bands()[l];
        Ok(band_tail_quadrature(f, lo, hi, self.tol.quadrature, self.tol.max_doublings)?.value)
    }

    /// Adaptive band integral for pole-dependent integrands.
    pub fn band_integral_adaptive<F: Fn(f64) -> C64>(&self, l: usize, f: F) -> Result<C64> {
        let (lo, hi) = self.bands.bands()[l];
        if hi.is_finite() {
            return Ok(adaptive_singular_segment(f, lo, hi, self.tol.quadrature)?.value);
        }
        let t = crate::numerics::quadrature::tail_split(lo);
        let head = adaptive_singular_segment(&f, lo, t, self.tol.quadrature)?.value;
        let tail = adaptive_singular_segment(|u: f64| f(1.0 / u) / (u * u), 0.0, 1.0 / t, self.tol.quadrature)?.value;
        Ok(head + tail)
    }

    /// Band integral whose integrand sees exact offsets from the band ends.
    pub fn band_integral_points<F: Fn(SegmentPoint) -> C64>(&self, l: usize, f: F) -> Result<C64> {
        let (lo, hi) = self.bands.bands()[l];
        let tol = self.tol.quadrature;
        if hi.is_finite() {
            return Ok(adaptive_segment_points(f, lo, hi, tol)?.value);
        }
        let t = crate::numerics::quadrature::tail_split(lo);
        let head = adaptive_segment_points(|p: SegmentPoint| f(SegmentPoint { hi: f64::NAN, ..p }), lo, t, tol)?.value;
        let tail = adaptive_segment_points(|p: SegmentPoint| f(SegmentPoint::plain(1.0 / p.x)) / (p.x * p.x), 0.0, 1.0 / t, tol)?.value;
        Ok(head + tail)
    }

    /// Gap integral whose integrand sees exact offsets from the gap ends.
    pub fn gap_integral_points<F: Fn(SegmentPoint) -> C64>(&self, j: usize, f: F) -> Result<C64> {
        let g = self.bands.gap(j);
        Ok(adaptive_segment_points(f, g.a, g.b, self.tol.quadrature)?.value)
    }

    /// [`Domain::real_segment`] with exact end offsets at every piece.
    pub fn real_segment_points<F: Fn(SegmentPoint) -> C64>(&self, f: &F, u: f64, v: f64) -> Result<C64> {
        let mut pts = vec![u];
        let (lo, hi) = (u.min(v), u.max(v));
        let mut inner: Vec<f64> = self.bands.branch_points().into_iter().filter(|&p| p > lo && p < hi).collect();
        if v < u {
            inner.reverse();
        }
        pts.extend(inner);
        pts.push(v);
        let mut total = c(0.0);
        for w in pts.windows(2) {
            total += adaptive_segment_points(f, w[0], w[1], self.tol.quadrature)?.value;
        }
        Ok(total)
    }

    /// ∫ᵤᵛ along the real axis (boundary values from ℂ₊), splitting at
    /// every branch point in between so that each piece carries at most
    /// endpoint singularities.
    pub fn real_segment<F: Fn(f64) -> C64>(&self, f: &F, u: f64, v: f64) -> Result<C64> {
        let mut pts = vec![u];
        let (lo, hi) = (u.min(v), u.max(v));
        let mut inner: Vec<f64> = self.bands.branch_points().into_iter().filter(|&p| p > lo && p < hi).collect();
        if v < u {
            inner.reverse();
        }
        pts.extend(inner);
        pts.push(v);
        let mut total = c(0.0);
        for w in pts.windows(2) {
            total += adaptive_singular_segment(f, w[0], w[1], self.tol.quadrature)?.value;
        }
        Ok(total)
    }

    /// Breakpoints of the canonical path from 0 to x along ℝ: every branch
    /// point in between, plus geometric refinement far from the spectrum's
    /// finite part so that slowly varying tails are sampled on their own
    /// scale.
    fn path_breakpoints(&self, x: f64) -> Vec<f64> {
        let mut pts = vec![0.0];
        if x < 0.0 {
            let mut p = -1.0;
            while p > x {
                pts.push(p);
                p *= 4.0;
            }
        } else if x > 0.0 {
            let bp = self.bands.branch_points();
            let mut last = 0.0;
            for &p in bp.iter().skip(1) {
                if p < x {
                    pts.push(p);
                    last = p;
                }
            }
            let scale = last.max(1.0);
            let mut p = last + scale;
            while p < x {
                pts.push(p);
                p = last + 4.0 * (p - last);
            }
        }
        pts.push(x);
        pts.dedup();
        pts
    }

    /// ∫₀^λ f along the canonical path: along ℝ (from ℂ₊) to Re λ, then
    /// vertically. `f` may have 1/√ singularities at branch points and must
    /// be analytic in ℂ₊.
    pub fn integrate_path<F: Fn(C64) -> C64>(&self, f: F, lambda: C64) -> Result<C64> {
        if !(lambda.re.is_finite() && lambda.im.is_finite()) || lambda.im < 0.0 {
            return Err(Error::Numerical(format!(
                "path endpoint {lambda} is not in the closed upper half-plane"
            )));
        }
        let x = lambda.re;
        let tol = self.tol.quadrature;
        let fr = |t: f64| f(c(t));
        let pts = self.path_breakpoints(x);
        let mut total = c(0.0);
        for w in pts.windows(2) {
            total += adaptive_singular_segment(fr, w[0], w[1], tol)?.value;
        }
        let y = lambda.im;
        if y > 0.0 {
            // t = y·s² removes a 1/√ singularity at the foot of the segment.
            let g = |s: f64| f(C64::new(x, y * s * s)) * (I * (2.0 * y * s));
            total += adaptive_gauss_kronrod(g, 0.0, 1.0, tol)?.value;
        }
        Ok(total)
    }

    /// [`Domain::integrate_path`] with the real leg integrated through
    /// exact-offset nodes (`on_axis`) and the vertical leg through `off_axis`.
    pub fn integrate_path_points<F, G>(&self, on_axis: F, off_axis: G, lambda: C64) -> Result<C64>
    where
        F: Fn(SegmentPoint) -> C64,
        G: Fn(C64) -> C64,
    {
        if !(lambda.re.is_finite() && lambda.im.is_finite()) || lambda.im < 0.0 {
            return Err(Error::Numerical(format!(
                "path endpoint {lambda} is not in the closed upper half-plane"
            )));
        }
        let x = lambda.re;
        let tol = self.tol.quadrature;
        let pts = self.path_breakpoints(x);
        let mut total = c(0.0);
        for w in pts.windows(2) {
            total += adaptive_segment_points(&on_axis, w[0], w[1], tol)?.value;
        }
        let y = lambda.im;
        if y > 0.0 {
            let g = |s: f64| off_axis(C64::new(x, y * s * s)) * (I * (2.0 * y * s));
            total += adaptive_gauss_kronrod(g, 0.0, 1.0, tol)?.value;
        }
        Ok(total)
    }

    /// Distance from x to the nearest branch point (0 and the gap ends).
    pub fn branch_distance(&self, x: f64) -> f64 {
        self.bands.branch_points().iter().fold(f64::INFINITY, |m, &b| m.min((x - b).abs()))
    }

    /// Fixed-order nested Gauss–Legendre over a real segment, used where a
    /// second, independent quadrature route is wanted.
    pub fn real_segment_nested<F: Fn(f64) -> C64>(&self, f: F, u: f64, v: f64) -> Result<C64> {
        Ok(singular_segment(f, u, v, self.tol.quadrature, self.tol.max_doublings)?.value)
    }

    /// Rejects points of E (ξ ≥ 0 outside the open gaps).
    pub(crate) fn check_off_spectrum(&self, x: f64) -> Result<()> {
        if self.bands.contains(x) {
            return Err(Error::OnSpectrum(x));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_gap() -> Domain {
        Domain::new(BandSet::new(&[(1.0, 2.0)]).unwrap()).unwrap()
    }

    #[test]
    fn free_branch() {
        let d = Domain::new(BandSet::free()).unwrap();
        assert!((d.sqrt_s(c(-1.0)) - I).norm() < 1e-15);
        assert!((d.sqrt_s(c(4.0)) - c(2.0)).norm() < 1e-15);
    }

    #[test]
    fn sign_pattern_on_real_axis() {
        let d = Domain::new(BandSet::new(&[(1.0, 2.0), (3.0, 5.0)]).unwrap()).unwrap();
        // s > 0 on bands (√s real), s < 0 on gaps (√s imaginary).
        for x in [0.5, 2.5, 6.0] {
            let v = d.sqrt_s_real(x);
            assert!(v.im.abs() < 1e-14 * v.norm() && v.re.abs() > 0.0, "x={x}");
        }
        for x in [-1.0, 1.5, 4.0] {
            let v = d.sqrt_s_real(x);
            assert!(v.re.abs() < 1e-14 * v.norm(), "x={x}");
        }
    }

    #[test]
    fn normalised_at_minus_infinity() {
        let d = one_gap();
        let l = c(-1e8);
        let ratio = d.sqrt_s(l) / (l * sqrt_lambda(l));
        assert!((ratio - c(1.0)).norm() < 1e-7);
    }

    #[test]
    fn continuous_across_gap_from_above() {
        let d = one_gap();
        let a = d.sqrt_s(C64::new(1.5, 1e-12));
        let b = d.sqrt_s_real(1.5);
        assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn series_matches_direct_evaluation() {
        let d = Domain::new(BandSet::new(&[(1.0, 2.0), (3.0, 4.5)]).unwrap()).unwrap();
        let ser = d.sqrt_s_series(12);
        let l: f64 = -40.0;
        let z = 1.0 / l;
        let approx: f64 = ser.coeffs().iter().enumerate().map(|(n, cf)| cf * z.powi(n as i32)).sum();
        let direct = d.sqrt_s(c(l)) / (c(l).powi(2) * sqrt_lambda(c(l)));
        assert!((direct.re - approx).abs() < 1e-13);
    }

    #[test]
    fn path_integral_of_free_derivative() {
        // ∫₀^λ dξ/(2√ξ) = √λ.
        let d = Domain::new(BandSet::free()).unwrap();
        for l in [C64::new(-3.0, 0.0), C64::new(2.0, 1.0), C64::new(-5e5, 0.5)] {
            let v = d.integrate_path(|z| 0.5 / sqrt_lambda(z), l).unwrap();
            assert!((v - sqrt_lambda(l)).norm() < 1e-10 * sqrt_lambda(l).norm().max(1.0), "{l}");
        }
    }
}
