//! Small dense linear solves (the systems here are at most a few dozen
//! unknowns, so partial-pivoting elimination is all that is needed).

// Row operations read most clearly with explicit indices.
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Solves A·x = b for a row-major square matrix, with partial pivoting.
pub fn solve_real(a: &[Vec<f64>], b: &[f64], what: &str) -> Result<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let scale = a.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs())).max(f64::MIN_POSITIVE);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .expect("non-empty range");
        if m[piv][col].abs() <= 1e-14 * scale {
            return Err(Error::Singular(what.to_string()));
        }
        m.swap(col, piv);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..=n {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
        x[r] = (m[r][n] - s) / m[r][r];
    }
    Ok(x)
}

/// Complex counterpart of [`solve_real`].
pub fn solve_complex(a: &[Vec<C64>], b: &[C64], what: &str) -> Result<Vec<C64>> {
    let n = b.len();
    let mut m: Vec<Vec<C64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let scale = a.iter().flatten().fold(0.0f64, |s, v| s.max(v.norm())).max(f64::MIN_POSITIVE);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm()))
            .expect("non-empty range");
        if m[piv][col].norm() <= 1e-14 * scale {
            return Err(Error::Singular(what.to_string()));
        }
        m.swap(col, piv);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..=n {
                let v = m[col][c];
                m[r][c] -= f * v;
            }
        }
    }
    let mut x = vec![C64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let s: C64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
        x[r] = (m[r][n] - s) / m[r][r];
    }
    Ok(x)
}

/// Least-squares solution of an overdetermined real system (rows ≥ columns)
/// by Householder QR.
pub fn least_squares_real(a: &[Vec<f64>], b: &[f64], what: &str) -> Result<Vec<f64>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    if rows < cols || b.len() != rows {
        return Err(Error::Validation(format!(
            "least squares while {what}: {rows} rows for {cols} unknowns"
        )));
    }
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut rhs = b.to_vec();
    let scale = a.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs())).max(f64::MIN_POSITIVE);
    for k in 0..cols {
        let norm = (k..rows).map(|i| m[i][k] * m[i][k]).sum::<f64>().sqrt();
        if norm <= 1e-14 * scale {
            return Err(Error::Singular(what.to_string()));
        }
        let alpha = if m[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..rows).map(|i| m[i][k]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        for c in k..cols {
            let d: f64 = (k..rows).map(|i| v[i - k] * m[i][c]).sum::<f64>() * 2.0 / vv;
            for i in k..rows {
                m[i][c] -= d * v[i - k];
            }
        }
        let d: f64 = (k..rows).map(|i| v[i - k] * rhs[i]).sum::<f64>() * 2.0 / vv;
        for i in k..rows {
            rhs[i] -= d * v[i - k];
        }
    }
    let mut x = vec![0.0; cols];
    for r in (0..cols).rev() {
        let s: f64 = (r + 1..cols).map(|c| m[r][c] * x[c]).sum();
        x[r] = (rhs[r] - s) / m[r][r];
    }
    Ok(x)
}

/// Evaluates Σ cₖ zᵏ (ascending coefficients) by Horner's rule.
pub fn horner<T>(coeffs: &[f64], z: T) -> T
where
    T: Copy + std::ops::Mul<Output = T> + std::ops::Add<f64, Output = T> + From<f64>,
{
    coeffs.iter().rev().fold(T::from(0.0), |acc, &c| acc * z + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_and_detects_singularity() {
        let a = vec![vec![0.0, 2.0], vec![1.0, 1.0]];
        let x = solve_real(&a, &[2.0, 3.0], "test").unwrap();
        assert!((x[0] - 2.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
        let s = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(solve_real(&s, &[1.0, 2.0], "test").is_err());
    }

    #[test]
    fn least_squares_recovers_a_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let a: Vec<Vec<f64>> = xs.iter().map(|&x| vec![1.0, x]).collect();
        let b: Vec<f64> = xs.iter().map(|&x| 2.0 - 0.5 * x).collect();
        let c = least_squares_real(&a, &b, "test").unwrap();
        assert!((c[0] - 2.0).abs() < 1e-14 && (c[1] + 0.5).abs() < 1e-14);
        // Residual orthogonality for an inconsistent system.
        let b = [1.0, 0.0, 1.0, 0.0];
        let c = least_squares_real(&a, &b, "test").unwrap();
        let r: Vec<f64> = a.iter().zip(&b).map(|(row, y)| y - row[0] * c[0] - row[1] * c[1]).collect();
        assert!(r.iter().sum::<f64>().abs() < 1e-14);
        assert!(r.iter().zip(&xs).map(|(r, x)| r * x).sum::<f64>().abs() < 1e-14);
    }

    #[test]
    fn horner_real_and_complex() {
        assert_eq!(horner(&[1.0, 2.0, 3.0], 2.0), 17.0);
        let z = horner(&[1.0, 0.0, 1.0], C64::new(0.0, 1.0));
        assert!(z.norm() < 1e-15);
    }
}
