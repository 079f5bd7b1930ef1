//! Extrapolation of sampled sequences to a limit.

use serde::Serialize;

/// Result of an extrapolation: the limit, an error estimate, and a warning
/// flag raised when the successive corrections do not shrink.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Limit {
    pub value: f64,
    pub error: f64,
    pub warn: bool,
}

/// Extrapolates samples vᵢ ≈ L + c₁hᵢ^p + c₂hᵢ^{2p} + … to h = 0 by
/// Neville's scheme in the variable h^p. When `exponent` is `None` the
/// leading exponent is estimated from the last three samples, which must
/// then be taken at geometric abscissae.
pub fn richardson_limit(h: &[f64], v: &[f64], exponent: Option<f64>) -> Limit {
    assert!(h.len() == v.len() && h.len() >= 3, "need at least three samples");
    let n = v.len();
    let p = exponent.unwrap_or_else(|| {
        let (d1, d2) = (v[n - 2] - v[n - 3], v[n - 1] - v[n - 2]);
        if d1 == 0.0 || d2 == 0.0 {
            1.0
        } else {
            ((d1 / d2).abs().ln() / (h[n - 3] / h[n - 2]).ln()).max(0.25)
        }
    });
    let t: Vec<f64> = h.iter().map(|x| x.powf(p)).collect();
    // Neville tableau at t = 0, keeping the diagonal for error estimation.
    let mut col = v.to_vec();
    let mut diag = vec![v[n - 1]];
    for k in 1..n {
        for i in 0..n - k {
            col[i] = (t[i] * col[i + 1] - t[i + k] * col[i]) / (t[i] - t[i + k]);
        }
        diag.push(col[n - k - 1]);
    }
    let value = col[0];
    let error = (diag[n - 1] - diag[n - 2]).abs();
    let diffs: Vec<f64> = v.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let warn = diffs.windows(2).any(|w| w[1] > w[0] * (1.0 + 1e-12) && w[0] > 0.0);
    Limit { value, error, warn }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_over_n() {
        let ns = [10.0, 100.0, 1000.0];
        let h: Vec<f64> = ns.iter().map(|n| 1.0 / n).collect();
        let v: Vec<f64> = ns.iter().map(|n| 1.0 + 1.0 / n).collect();
        let l = richardson_limit(&h, &v, None);
        assert!((l.value - 1.0).abs() < 1e-5);
        assert!(!l.warn);
    }

    #[test]
    fn constant_sequence() {
        let l = richardson_limit(&[1.0, 0.5, 0.25], &[3.0, 3.0, 3.0], None);
        assert_eq!(l.value, 3.0);
        assert_eq!(l.error, 0.0);
    }

    #[test]
    fn growing_corrections_warn() {
        let l = richardson_limit(&[1.0, 0.5, 0.25], &[1.0, 1.1, 1.5], Some(1.0));
        assert!(l.warn);
    }
}
