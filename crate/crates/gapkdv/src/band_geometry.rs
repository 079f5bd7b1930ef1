//! Spectral sets E = ℝ₊ minus finitely many open gaps, divisors on the gap
//! circles, points of the character torus, and the angle chart used to move
//! divisors smoothly around the torus.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances;

/// One open gap (a, b) of the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub a: f64,
    pub b: f64,
}

impl Gap {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn halfwidth(&self) -> f64 {
        0.5 * (self.b - self.a)
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    /// Closed-interval membership.
    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }
}

/// The spectrum E = [0,a₁] ∪ [b₁,a₂] ∪ … ∪ [b_N,∞), stored through its
/// sorted gap list.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandSet {
    gaps: Vec<Gap>,
}

impl BandSet {
    /// Validates with the default separation guard.
    pub fn new(raw: &[(f64, f64)]) -> Result<Self> {
        Self::with_guard(raw, tolerances::GAP_GUARD)
    }

    /// The free case E = ℝ₊.
    pub fn free() -> Self {
        BandSet { gaps: Vec::new() }
    }

    /// Sorts the gaps by their left end and rejects anything that is not a
    /// family of strictly disjoint open intervals inside (0, ∞). Gaps or
    /// bands narrower than `guard` (relative to the local energy scale) are
    /// rejected because the quadratures cannot resolve them.
    pub fn with_guard(raw: &[(f64, f64)], guard: f64) -> Result<Self> {
        let mut gaps: Vec<(usize, Gap)> = raw.iter().enumerate().map(|(i, &(a, b))| (i + 1, Gap { a, b })).collect();
        for (idx, g) in &gaps {
            if !g.a.is_finite() || !g.b.is_finite() {
                return Err(Error::Validation(format!("gap {idx} has a non-finite endpoint")));
            }
            if g.a <= 0.0 {
                return Err(Error::Validation(format!("gap {idx} starts at {} <= 0", g.a)));
            }
            if g.a >= g.b {
                return Err(Error::Validation(format!("gap {idx} has a >= b ({} >= {})", g.a, g.b)));
            }
            if g.b - g.a < guard * g.b.max(1.0) {
                return Err(Error::Validation(format!("gap {idx} is narrower than the guard {guard:e}")));
            }
        }
        gaps.sort_by(|x, y| x.1.a.total_cmp(&y.1.a));
        for w in gaps.windows(2) {
            let (i, g) = w[0];
            let (j, h) = w[1];
            if h.a <= g.b {
                let (lo, hi) = (i.min(j), i.max(j));
                return Err(Error::Validation(format!("overlapping gaps {lo},{hi}")));
            }
            if h.a - g.b < guard * h.a.max(1.0) {
                let (lo, hi) = (i.min(j), i.max(j));
                return Err(Error::Validation(format!(
                    "band between gaps {lo},{hi} is narrower than the guard {guard:e}"
                )));
            }
        }
        Ok(BandSet {
            gaps: gaps.into_iter().map(|(_, g)| g).collect(),
        })
    }

    /// Number of gaps N.
    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn gaps(&self) -> &[Gap] {
        &self.gaps
    }

    pub fn gap(&self, j: usize) -> Gap {
        self.gaps[j]
    }

    /// Keeps the first `n` gaps.
    pub fn truncate(&self, n: usize) -> Result<BandSet> {
        if n > self.len() {
            return Err(Error::Validation(format!("cannot truncate a {}-gap set to {n} gaps", self.len())));
        }
        Ok(BandSet {
            gaps: self.gaps[..n].to_vec(),
        })
    }

    /// Bands as (lo, hi) pairs; the last one has hi = ∞.
    pub fn bands(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut lo = 0.0;
        for g in &self.gaps {
            out.push((lo, g.a));
            lo = g.b;
        }
        out.push((lo, f64::INFINITY));
        out
    }

    /// All finite branch points 0, a₁, b₁, …, b_N in increasing order.
    pub fn branch_points(&self) -> Vec<f64> {
        let mut pts = vec![0.0];
        for g in &self.gaps {
            pts.push(g.a);
            pts.push(g.b);
        }
        pts
    }

    /// Membership in the closed set E.
    pub fn contains(&self, x: f64) -> bool {
        x >= 0.0 && self.gaps.iter().all(|g| !(g.a < x && x < g.b))
    }

    /// Index of the open gap containing x, if any.
    pub fn gap_index(&self, x: f64) -> Option<usize> {
        self.gaps.iter().position(|g| g.a < x && x < g.b)
    }

    /// Total gap length Σ(bⱼ − aⱼ).
    pub fn total_gap_length(&self) -> f64 {
        self.gaps.iter().map(Gap::width).sum()
    }
}

impl<'de> Deserialize<'de> for BandSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<(f64, f64)> = Vec::deserialize(d)?;
        BandSet::new(&raw).map_err(serde::de::Error::custom)
    }
}

/// Sheet sign of a divisor point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sheet {
    Plus,
    Minus,
}

impl Sheet {
    pub fn value(self) -> f64 {
        match self {
            Sheet::Plus => 1.0,
            Sheet::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sheet {
        match self {
            Sheet::Plus => Sheet::Minus,
            Sheet::Minus => Sheet::Plus,
        }
    }

    pub fn from_sign(s: f64) -> Sheet {
        if s < 0.0 {
            Sheet::Minus
        } else {
            Sheet::Plus
        }
    }
}

impl Serialize for Sheet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.value() as i8)
    }
}

impl<'de> Deserialize<'de> for Sheet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match i8::deserialize(d)? {
            1 => Ok(Sheet::Plus),
            -1 => Ok(Sheet::Minus),
            v => Err(serde::de::Error::custom(format!("eps must be +1 or -1, got {v}"))),
        }
    }
}

/// A Dirichlet datum (λ, ε) on one gap circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivisorPoint {
    pub lambda: f64,
    pub eps: Sheet,
}

/// One point per gap closure, in gap order, with endpoints canonicalised to
/// ε = +1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Divisor {
    points: Vec<DivisorPoint>,
}

impl Divisor {
    pub fn new(bands: &BandSet, points: Vec<DivisorPoint>) -> Result<Self> {
        if points.len() != bands.len() {
            return Err(Error::Validation(format!(
                "divisor has {} points but the band set has {} gaps",
                points.len(),
                bands.len()
            )));
        }
        let mut out = Vec::with_capacity(points.len());
        for (j, (p, g)) in points.into_iter().zip(bands.gaps()).enumerate() {
            if !p.lambda.is_finite() || !g.contains(p.lambda) {
                return Err(Error::Validation(format!(
                    "divisor point {} = {} outside gap [{}, {}]",
                    j + 1,
                    p.lambda,
                    g.a,
                    g.b
                )));
            }
            let eps = if p.lambda == g.a || p.lambda == g.b { Sheet::Plus } else { p.eps };
            out.push(DivisorPoint { lambda: p.lambda, eps });
        }
        Ok(Divisor { points: out })
    }

    /// Convenience constructor from (λ, ±1) pairs.
    pub fn from_pairs(bands: &BandSet, pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            bands,
            pairs
                .iter()
                .map(|&(lambda, s)| DivisorPoint {
                    lambda,
                    eps: Sheet::from_sign(s),
                })
                .collect(),
        )
    }

    pub fn empty() -> Self {
        Divisor { points: Vec::new() }
    }

    pub fn points(&self) -> &[DivisorPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.lambda).collect()
    }

    pub fn signs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.eps.value()).collect()
    }

    /// τD: ε negated at interior points; endpoints are fixed by the
    /// canonical form.
    pub fn reflect(&self, bands: &BandSet) -> Divisor {
        let points = self
            .points
            .iter()
            .zip(bands.gaps())
            .map(|(p, g)| {
                let interior = p.lambda != g.a && p.lambda != g.b;
                DivisorPoint {
                    lambda: p.lambda,
                    eps: if interior { p.eps.flip() } else { p.eps },
                }
            })
            .collect();
        Divisor { points }
    }

    /// Angle-chart coordinates of the divisor.
    pub fn chart(&self, bands: &BandSet) -> DivisorChart {
        let angles = self
            .points
            .iter()
            .zip(bands.gaps())
            .map(|(p, g)| {
                if p.lambda == g.a {
                    return 0.0;
                }
                if p.lambda == g.b {
                    return PI;
                }
                let c = ((g.midpoint() - p.lambda) / g.halfwidth()).clamp(-1.0, 1.0);
                let phi = c.acos();
                match p.eps {
                    Sheet::Plus => phi,
                    Sheet::Minus => TAU - phi,
                }
            })
            .collect();
        DivisorChart { angles }
    }
}

/// Angles φⱼ ∈ [0, 2π) with λⱼ = mⱼ − rⱼ cos φⱼ and εⱼ = sign(sin φⱼ).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivisorChart {
    pub angles: Vec<f64>,
}

impl DivisorChart {
    /// Maps chart angles back to a canonical divisor. Angles are reduced
    /// into [0, 2π) first.
    pub fn to_divisor(&self, bands: &BandSet) -> Divisor {
        let points = self
            .angles
            .iter()
            .zip(bands.gaps())
            .map(|(&phi, g)| {
                let phi = phi.rem_euclid(TAU);
                if phi == 0.0 {
                    return DivisorPoint {
                        lambda: g.a,
                        eps: Sheet::Plus,
                    };
                }
                if phi == PI {
                    return DivisorPoint {
                        lambda: g.b,
                        eps: Sheet::Plus,
                    };
                }
                let lambda = (g.midpoint() - g.halfwidth() * phi.cos()).clamp(g.a, g.b);
                let eps = if lambda == g.a || lambda == g.b || phi < PI {
                    Sheet::Plus
                } else {
                    Sheet::Minus
                };
                DivisorPoint { lambda, eps }
            })
            .collect();
        Divisor { points }
    }
}

/// A point of the N-torus ℝᴺ/ℤᴺ, stored with components in [0, 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterVector {
    components: Vec<f64>,
}

/// Reduces into [0, 1), mapping values that round up to 1 back to 0.
pub fn reduce_unit(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Representative of x mod 1 in [−½, ½).
pub fn centered_unit(x: f64) -> f64 {
    let r = reduce_unit(x);
    if r >= 0.5 {
        r - 1.0
    } else {
        r
    }
}

impl CharacterVector {
    pub fn new(raw: Vec<f64>) -> Self {
        CharacterVector {
            components: raw.into_iter().map(reduce_unit).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        CharacterVector { components: vec![0.0; n] }
    }

    /// The character with every component ½.
    pub fn half(n: usize) -> Self {
        CharacterVector { components: vec![0.5; n] }
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn add(&self, other: &CharacterVector) -> CharacterVector {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &CharacterVector) -> CharacterVector {
        self.combine(other, -1.0)
    }

    pub fn neg(&self) -> CharacterVector {
        CharacterVector::new(self.components.iter().map(|c| -c).collect())
    }

    /// α + s·v for an unreduced real vector v.
    pub fn shifted(&self, v: &[f64], s: f64) -> CharacterVector {
        assert_eq!(v.len(), self.len(), "dimension mismatch");
        CharacterVector::new(self.components.iter().zip(v).map(|(a, b)| a + s * b).collect())
    }

    fn combine(&self, other: &CharacterVector, s: f64) -> CharacterVector {
        self.shifted(&other.components, s)
    }

    /// Componentwise differences self − other in [−½, ½).
    pub fn centered_difference(&self, other: &CharacterVector) -> Vec<f64> {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| centered_unit(a - b))
            .collect()
    }

    /// Sup-norm distance on the torus.
    pub fn distance(&self, other: &CharacterVector) -> f64 {
        self.centered_difference(other).into_iter().fold(0.0, |m, d| m.max(d.abs()))
    }
}

impl fmt::Display for CharacterVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c:.6}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_single_gap_sets_validate() {
        assert_eq!(BandSet::new(&[]).unwrap().len(), 0);
        let e = BandSet::new(&[(1.0, 2.0)]).unwrap();
        assert_eq!(e.bands(), vec![(0.0, 1.0), (2.0, f64::INFINITY)]);
    }

    #[test]
    fn overlap_is_reported_with_both_indices() {
        let err = BandSet::new(&[(1.0, 2.0), (1.5, 3.0)]).unwrap_err();
        assert_eq!(err, Error::Validation("overlapping gaps 1,2".into()));
    }

    #[test]
    fn invalid_gaps_are_named() {
        for raw in [[(0.0, 1.0)], [(2.0, 1.0)], [(f64::NAN, 1.0)]] {
            let msg = BandSet::new(&raw).unwrap_err().to_string();
            assert!(msg.contains("gap 1"), "{msg}");
        }
    }

    #[test]
    fn gaps_are_sorted() {
        let e = BandSet::new(&[(5.0, 6.0), (1.0, 2.0)]).unwrap();
        assert_eq!(e.gap(0).a, 1.0);
    }

    #[test]
    fn chart_midpoint_and_endpoints() {
        let e = BandSet::new(&[(1.0, 2.0)]).unwrap();
        let d = Divisor::from_pairs(&e, &[(1.5, 1.0)]).unwrap();
        assert!((d.chart(&e).angles[0] - PI / 2.0).abs() < 1e-15);
        for s in [1.0, -1.0] {
            let d = Divisor::from_pairs(&e, &[(1.0, s)]).unwrap();
            assert_eq!(d.chart(&e).angles[0], 0.0);
        }
    }

    #[test]
    fn reflection_fixes_endpoints() {
        let e = BandSet::new(&[(1.0, 2.0)]).unwrap();
        let d = Divisor::from_pairs(&e, &[(1.5, 1.0)]).unwrap();
        assert_eq!(d.reflect(&e).points()[0].eps, Sheet::Minus);
        let d = Divisor::from_pairs(&e, &[(1.0, 1.0)]).unwrap();
        assert_eq!(d.reflect(&e), d);
    }

    #[test]
    fn divisor_outside_gap_is_rejected() {
        let e = BandSet::new(&[(1.0, 2.0)]).unwrap();
        assert!(Divisor::from_pairs(&e, &[(2.5, 1.0)]).is_err());
    }

    #[test]
    fn truncation_keeps_prefix() {
        let e = BandSet::new(&[(1.0, 2.0), (3.0, 4.0), (5.0, 6.0)]).unwrap();
        assert!(e.truncate(0).unwrap().is_empty());
        assert_eq!(e.truncate(3).unwrap(), e);
        assert!(e.truncate(4).is_err());
    }

    #[test]
    fn character_wraps() {
        let a = CharacterVector::new(vec![0.9, 0.2]);
        let b = CharacterVector::new(vec![0.3, 0.95]);
        let c = a.add(&b);
        assert!((c.components()[0] - 0.2).abs() < 1e-15);
        assert!(c.sub(&b).distance(&a) < 1e-15);
    }

    #[test]
    fn band_membership() {
        let e = BandSet::new(&[(1.0, 2.0)]).unwrap();
        assert!(e.contains(1.0) && e.contains(0.5) && e.contains(3.0));
        assert!(!e.contains(1.5) && !e.contains(-1.0));
        assert_eq!(e.gap_index(1.5), Some(0));
    }
}
