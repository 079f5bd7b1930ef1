//! Quadrature for integrands with inverse square-root endpoint behaviour.
//!
//! Every finite segment is mapped through ξ = m − r·cos θ. The Jacobian
//! r·sin θ cancels a 1/√ singularity at either end, so what is left is smooth
//! (often analytic and even in θ). Two engines work on the θ-integrand:
//!
//! * nested composite Gauss–Legendre, doubling the panel count until two
//!   successive estimates agree; used for the normalisation integrals;
//! * adaptive Gauss–Kronrod (7/15), used along continuation paths where
//!   near-singularities are common.

use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64 as C64;

use crate::band_geometry::Gap;
use crate::error::{Error, Result};

/// An integral value together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: C64,
    pub error: f64,
}

const GL_ORDER: usize = 16;

/// Gauss–Legendre nodes and weights on [−1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 {
                1.0
            } else if n == 1 {
                z
            } else {
                p1
            };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * p - pm1) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER))
}

fn composite_gl<F: Fn(f64) -> C64>(f: &F, lo: f64, hi: f64, panels: usize) -> C64 {
    let (x, w) = gl16();
    let h = (hi - lo) / panels as f64;
    let mut sum = C64::new(0.0, 0.0);
    for p in 0..panels {
        let c = lo + (p as f64 + 0.5) * h;
        let mut s = C64::new(0.0, 0.0);
        for (xi, wi) in x.iter().zip(w) {
            s += f(c + 0.5 * h * xi) * *wi;
        }
        sum += s * (0.5 * h);
    }
    sum
}

/// Integrates a smooth function on [lo, hi] with 2^L panels of 16-point
/// Gauss–Legendre, L = 0, 1, … until successive estimates agree to
/// `tol·max(1, |I|)`.
pub fn nested_gauss_legendre<F: Fn(f64) -> C64>(f: F, lo: f64, hi: f64, tol: f64, max_doublings: u32) -> Result<Estimate> {
    let mut prev = composite_gl(&f, lo, hi, 1);
    for level in 1..=max_doublings {
        let cur = composite_gl(&f, lo, hi, 1usize << level);
        let err = (cur - prev).norm();
        if !cur.re.is_finite() || !cur.im.is_finite() {
            return Err(Error::Numerical(format!("non-finite integrand on [{lo}, {hi}]")));
        }
        if err <= tol * cur.norm().max(1.0) {
            return Ok(Estimate { value: cur, error: err });
        }
        if level == max_doublings {
            return Err(Error::Quadrature {
                lo,
                hi,
                last: cur.norm(),
                previous: prev.norm(),
            });
        }
        prev = cur;
    }
    // max_doublings == 0: a single rule, no error estimate available.
    Ok(Estimate {
        value: prev,
        error: f64::NAN,
    })
}

/// ∫ₐᵇ f(ξ)/√((ξ−a)(b−ξ)) dξ via ξ = m − r cos θ, which turns the weight
/// into dθ on [0, π].
pub fn gap_quadrature<F: Fn(f64) -> C64>(f: F, gap: Gap, tol: f64, max_doublings: u32) -> Result<Estimate> {
    let (m, r) = (gap.midpoint(), gap.halfwidth());
    nested_gauss_legendre(|t| f(m - r * t.cos()), 0.0, PI, tol, max_doublings)
}

/// ∫ᵤᵛ f(ξ) dξ for f with at most 1/√ singularities at u and v. Works for
/// v < u as well (the orientation is carried by r).
pub fn singular_segment<F: Fn(f64) -> C64>(f: F, u: f64, v: f64, tol: f64, max_doublings: u32) -> Result<Estimate> {
    let (m, r) = (0.5 * (u + v), 0.5 * (v - u));
    nested_gauss_legendre(|t| f(m - r * t.cos()) * (r * t.sin()), 0.0, PI, tol, max_doublings)
}

/// Where a band tail [b, ∞) is split between the direct and the inverted
/// substitution.
pub fn tail_split(b: f64) -> f64 {
    (2.0 * b).max(b + 1.0)
}

/// ∫ over a band [lo, hi] (hi may be +∞). Finite pieces use the cos θ
/// substitution; the tail beyond `tail_split(lo)` uses u = 1/ξ followed by
/// the same substitution on (0, 1/T], which absorbs the u^{−1/2} behaviour
/// of a ξ^{−3/2} decay.
pub fn band_tail_quadrature<F: Fn(f64) -> C64>(f: F, lo: f64, hi: f64, tol: f64, max_doublings: u32) -> Result<Estimate> {
    if hi.is_finite() {
        return singular_segment(&f, lo, hi, tol, max_doublings);
    }
    let t = tail_split(lo);
    check_decay(&f, t)?;
    let head = singular_segment(&f, lo, t, tol, max_doublings)?;
    let tail = singular_segment(|u: f64| f(1.0 / u) / (u * u), 0.0, 1.0 / t, tol, max_doublings)?;
    Ok(Estimate {
        value: head.value + tail.value,
        error: head.error + tail.error,
    })
}

/// Rejects tails that decay slower than ξ^{−5/4}: the inverted substitution
/// would then be integrating a non-integrable or badly singular function.
fn check_decay<F: Fn(f64) -> C64>(f: &F, t: f64) -> Result<()> {
    let x1 = 1e6 * t;
    let x2 = 1e8 * t;
    let (f1, f2) = (f(x1).norm(), f(x2).norm());
    if f1 == 0.0 || f2 == 0.0 {
        return Ok(());
    }
    let exponent = (f2 / f1).ln() / (x2 / x1).ln();
    if exponent > -1.25 {
        return Err(Error::SlowDecay { start: t, exponent });
    }
    Ok(())
}

// Gauss–Kronrod 7/15 abscissae and weights on [−1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

struct Piece {
    a: f64,
    b: f64,
    value: C64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// Globally adaptive Gauss–Kronrod on [a, b]: bisect the interval with the
/// largest error until the total error is below `tol·max(1, |I|)`.
pub fn adaptive_gauss_kronrod<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, tol: f64) -> Result<Estimate> {
    const MAX_PIECES: usize = 4000;
    let (v, e) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value: v, error: e });
    let (mut total, mut err) = (v, e);
    while err > tol * total.norm().max(1.0) {
        if heap.len() >= MAX_PIECES {
            return Err(Error::Quadrature {
                lo: a,
                hi: b,
                last: total.norm(),
                previous: err,
            });
        }
        let p = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a.min(p.b) || mid >= p.a.max(p.b) {
            // Interval exhausted at machine resolution; accept what we have.
            heap.push(p);
            break;
        }
        let (v1, e1) = gk15(&f, p.a, mid);
        let (v2, e2) = gk15(&f, mid, p.b);
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.error;
        heap.push(Piece {
            a: p.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Piece {
            a: mid,
            b: p.b,
            value: v2,
            error: e2,
        });
        if !total.re.is_finite() || !total.im.is_finite() {
            return Err(Error::Numerical(format!("non-finite integrand on [{a}, {b}]")));
        }
    }
    // Re-sum to shed the drift of the running total.
    let value = heap.iter().fold(C64::new(0.0, 0.0), |s, p| s + p.value);
    let error = heap.iter().map(|p| p.error).sum();
    Ok(Estimate { value, error })
}

/// Adaptive counterpart of [`singular_segment`].
pub fn adaptive_singular_segment<F: Fn(f64) -> C64>(f: F, u: f64, v: f64, tol: f64) -> Result<Estimate> {
    let (m, r) = (0.5 * (u + v), 0.5 * (v - u));
    adaptive_gauss_kronrod(|t| f(m - r * t.cos()) * (r * t.sin()), 0.0, PI, tol)
}

/// A quadrature node on a segment [lo, hi] that also carries its exact
/// distances to both ends. Near an end, ξ − lo obtained by subtraction has
/// lost most of its digits; these offsets have not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentPoint {
    pub x: f64,
    pub lo: f64,
    pub hi: f64,
    /// ξ − lo ≥ 0.
    pub from_lo: f64,
    /// hi − ξ ≥ 0.
    pub to_hi: f64,
}

impl SegmentPoint {
    /// A node with no privileged ends.
    pub fn plain(x: f64) -> Self {
        SegmentPoint {
            x,
            lo: f64::NAN,
            hi: f64::NAN,
            from_lo: f64::NAN,
            to_hi: f64::NAN,
        }
    }

    /// ξ − e, exact when e is one of the segment ends.
    pub fn offset_from(&self, e: f64) -> f64 {
        if e == self.lo {
            self.from_lo
        } else if e == self.hi {
            -self.to_hi
        } else {
            self.x - e
        }
    }

    /// ξ − p for an arbitrary p, routed through the segment end nearest to
    /// p so that a p close to an end keeps full relative accuracy.
    pub fn minus(&self, p: f64) -> f64 {
        let dist = |e: f64| if e.is_finite() { (p - e).abs() } else { f64::INFINITY };
        let (dl, dh) = (dist(self.lo), dist(self.hi));
        if dl.is_infinite() && dh.is_infinite() {
            self.x - p
        } else if dl <= dh {
            self.from_lo + (self.lo - p)
        } else {
            (self.hi - p) - self.to_hi
        }
    }
}

/// Adaptive integral over [u, v] (u < v) under ξ = m − r cos θ, handing the
/// integrand exact end offsets 2r·sin²(θ/2) and 2r·cos²(θ/2).
pub fn adaptive_segment_points<F: Fn(SegmentPoint) -> C64>(f: F, u: f64, v: f64, tol: f64) -> Result<Estimate> {
    let (lo, hi, sign) = if u <= v { (u, v, 1.0) } else { (v, u, -1.0) };
    let r = 0.5 * (hi - lo);
    let h = |t: f64| {
        let (s, c) = ((0.5 * t).sin(), (0.5 * t).cos());
        let (from_lo, to_hi) = (2.0 * r * s * s, 2.0 * r * c * c);
        if from_lo == 0.0 || to_hi == 0.0 {
            // The weight vanishes at the ends faster than the integrand grows.
            return C64::new(0.0, 0.0);
        }
        let x = if from_lo <= to_hi { lo + from_lo } else { hi - to_hi };
        let v = f(SegmentPoint { x, lo, hi, from_lo, to_hi }) * (r * t.sin());
        if v.re.is_finite() && v.im.is_finite() {
            v
        } else {
            C64::new(0.0, 0.0)
        }
    };
    let e = adaptive_gauss_kronrod(h, 0.0, PI, tol)?;
    Ok(Estimate {
        value: e.value * sign,
        error: e.error,
    })
}

/// n-point Gauss–Chebyshev rule for ∫ₐᵇ f/√((ξ−a)(b−ξ)) dξ. Kept as an
/// independent check on the Gauss–Legendre route.
pub fn gauss_chebyshev<F: Fn(f64) -> C64>(f: F, gap: Gap, n: usize) -> C64 {
    let (m, r) = (gap.midpoint(), gap.halfwidth());
    let mut s = C64::new(0.0, 0.0);
    for i in 1..=n {
        s += f(m - r * ((2 * i - 1) as f64 * PI / (2 * n) as f64).cos());
    }
    s * (PI / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(16);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((s - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn arcsine_moments() {
        let g = Gap { a: 1.0, b: 2.0 };
        let v = gap_quadrature(|_| re(1.0), g, 1e-12, 20).unwrap().value.re;
        assert!((v - PI).abs() < 1e-12);
        let v = gap_quadrature(re, g, 1e-12, 20).unwrap().value.re;
        assert!((v - 1.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn inverse_sqrt_weight_against_trapezoid_oracle() {
        let g = Gap { a: 1.0, b: 2.0 };
        let v = gap_quadrature(|x| re(1.0 / x.sqrt()), g, 1e-13, 20).unwrap().value.re;
        // Trapezoid rule in θ with 10⁶ panels: spectrally accurate for a
        // smooth periodic integrand.
        let n = 1_000_000;
        let h = PI / n as f64;
        let mut s = 0.0;
        for i in 0..=n {
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            s += w / (1.5 - 0.5 * (i as f64 * h).cos()).sqrt();
        }
        assert!((v - s * h).abs() < 1e-10);
    }

    #[test]
    fn tail_closed_forms() {
        let v = band_tail_quadrature(|x| re(x.powf(-1.5)), 1.0, f64::INFINITY, 1e-13, 20).unwrap();
        assert!((v.value.re - 2.0).abs() < 1e-12);
        let z = band_tail_quadrature(|_| re(0.0), 1.0, f64::INFINITY, 1e-13, 20).unwrap();
        assert_eq!(z.value.re, 0.0);
        // ∫₄^∞ dξ/(ξ√(ξ(ξ−4))) = 1/2.
        let w = band_tail_quadrature(|x| re(1.0 / (x * (x * (x - 4.0)).sqrt())), 4.0, f64::INFINITY, 1e-13, 20).unwrap();
        // Independent check: after ξ = 4/u the integrand is 1/(4√(1−u)) on
        // (0,1); a plain adaptive rule on the further substitution u = 1−s²
        // gives ∫₀¹ ds/2.
        let oracle = adaptive_gauss_kronrod(|_s: f64| re(0.5), 0.0, 1.0, 1e-13).unwrap();
        assert!((oracle.value.re - 0.5).abs() < 1e-14);
        assert!((w.value.re - 0.5).abs() < 1e-11, "{}", w.value.re);
    }

    #[test]
    fn slow_tail_is_rejected() {
        let r = band_tail_quadrature(|x| re(1.0 / x), 1.0, f64::INFINITY, 1e-12, 20);
        assert!(matches!(r, Err(Error::SlowDecay { .. })));
    }

    #[test]
    fn adaptive_handles_log_singularity() {
        let v = adaptive_gauss_kronrod(|x| re(x.ln()), 0.0, 1.0, 1e-12).unwrap();
        assert!((v.value.re + 1.0).abs() < 1e-11);
    }

    #[test]
    fn chebyshev_matches_legendre() {
        let g = Gap { a: 2.0, b: 3.5 };
        let f = |x: f64| re((x * x + 1.0).ln());
        let a = gap_quadrature(f, g, 1e-13, 20).unwrap().value.re;
        let b = gauss_chebyshev(f, g, 64).re;
        assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn error_estimates_bound_true_error_on_arcsine_moments() {
        // Mean of ξ^m under the arcsine law on (a,b): binomial sum of
        // central moments (r^{2k} C(2k,k)/4^k).
        let g = Gap { a: 0.5, b: 3.0 };
        for m in 0..12u32 {
            let est = gap_quadrature(|x| re(x.powi(m as i32)), g, 1e-6, 20).unwrap();
            let (mid, r) = (g.midpoint(), g.halfwidth());
            let mut exact = 0.0;
            for k in 0..=m / 2 {
                let c = binom(m, 2 * k) * mid.powi((m - 2 * k) as i32) * r.powi(2 * k as i32) * binom(2 * k, k) / 4f64.powi(k as i32);
                exact += c;
            }
            exact *= PI;
            let true_err = (est.value.re - exact).abs();
            assert!(true_err <= 10.0 * est.error.max(1e-15 * exact.abs()), "m={m}");
        }
    }

    fn binom(n: u32, k: u32) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }
}
