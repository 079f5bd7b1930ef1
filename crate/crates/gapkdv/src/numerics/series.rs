//! Truncated power series c₀ + c₁z + … + c_M z^M with real coefficients,
//! where z is an inverse variable such as 1/λ or 1/μ.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<f64>,
}

impl TruncatedSeries {
    /// Series of order `order` (M + 1 coefficients), padding or cutting the
    /// supplied coefficients.
    pub fn new(mut coeffs: Vec<f64>, order: usize) -> Self {
        coeffs.resize(order + 1, 0.0);
        TruncatedSeries { coeffs }
    }

    pub fn constant(c: f64, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> f64 {
        self.coeffs.get(n).copied().unwrap_or(0.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// exp of the series through the recursion n·bₙ = Σₖ k·aₖ·b_{n−k}.
    pub fn exp(&self) -> Self {
        let m = self.order();
        let a = &self.coeffs;
        let mut b = vec![0.0; m + 1];
        b[0] = a[0].exp();
        for n in 1..=m {
            let s: f64 = (1..=n).map(|k| k as f64 * a[k] * b[n - k]).sum();
            b[n] = s / n as f64;
        }
        TruncatedSeries { coeffs: b }
    }

    /// log of a series with positive constant term (inverse of `exp`).
    pub fn ln(&self) -> Self {
        let m = self.order();
        let b = &self.coeffs;
        assert!(b[0] > 0.0, "log of a series needs a positive constant term");
        let mut a = vec![0.0; m + 1];
        a[0] = b[0].ln();
        for n in 1..=m {
            let s: f64 = (1..n).map(|k| k as f64 * a[k] * b[n - k]).sum();
            a[n] = (b[n] - s / n as f64) / b[0];
        }
        TruncatedSeries { coeffs: a }
    }

    /// Multiplicative inverse (constant term must be non-zero).
    pub fn recip(&self) -> Self {
        let m = self.order();
        let b = &self.coeffs;
        let mut r = vec![0.0; m + 1];
        r[0] = 1.0 / b[0];
        for n in 1..=m {
            let s: f64 = (1..=n).map(|k| b[k] * r[n - k]).sum();
            r[n] = -s * r[0];
        }
        TruncatedSeries { coeffs: r }
    }

    /// Square root of a series with constant term 1.
    pub fn sqrt_unit(&self) -> Self {
        (self.ln().scale(0.5)).exp()
    }

    fn zip_with(&self, o: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let m = self.order().min(o.order());
        TruncatedSeries {
            coeffs: (0..=m).map(|i| f(self.coeffs[i], o.coeffs[i])).collect(),
        }
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, o: Self) -> TruncatedSeries {
        self.zip_with(o, |a, b| a + b)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, o: Self) -> TruncatedSeries {
        self.zip_with(o, |a, b| a - b)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(-1.0)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, o: Self) -> TruncatedSeries {
        let m = self.order().min(o.order());
        let mut c = vec![0.0; m + 1];
        for i in 0..=m {
            for j in 0..=(m - i) {
                c[i + j] += self.coeffs[i] * o.coeffs[j];
            }
        }
        TruncatedSeries { coeffs: c }
    }
}

/// exp of a truncated series (free-function form).
pub fn series_exp(s: &TruncatedSeries) -> TruncatedSeries {
    s.exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_zero_and_linear() {
        let e = series_exp(&TruncatedSeries::constant(0.0, 4));
        assert_eq!(e.coeffs(), &[1.0, 0.0, 0.0, 0.0, 0.0]);
        let c = 0.7;
        let e = series_exp(&TruncatedSeries::new(vec![0.0, c], 4));
        for n in 0..=4 {
            let f: f64 = (1..=n).map(|k| k as f64).product();
            assert!((e.coeff(n) - c.powi(n as i32) / f).abs() < 1e-15);
        }
    }

    #[test]
    fn exp_of_two_moments_matches_hand_expansion() {
        // exp(t0 z + t1 z²) = 1 + t0 z + (t0²/2 + t1) z² + (t0³/6 + t0 t1) z³.
        let (t0, t1) = (0.3, -1.1);
        let e = series_exp(&TruncatedSeries::new(vec![0.0, t0, t1], 3));
        assert!((e.coeff(2) - (t0 * t0 / 2.0 + t1)).abs() < 1e-15);
        assert!((e.coeff(3) - (t0.powi(3) / 6.0 + t0 * t1)).abs() < 1e-15);
    }

    #[test]
    fn recip_and_sqrt() {
        let s = TruncatedSeries::new(vec![1.0, 0.5, -0.25, 0.125], 3);
        let p = &s * &s.recip();
        assert!((p.coeff(0) - 1.0).abs() < 1e-15);
        assert!(p.coeffs()[1..].iter().all(|c| c.abs() < 1e-15));
        let r = s.sqrt_unit();
        let q = &r * &r;
        assert!(q.coeffs().iter().zip(s.coeffs()).all(|(a, b)| (a - b).abs() < 1e-14));
    }
}
