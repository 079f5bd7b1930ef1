//! Coefficient vectors of the polynomials A_k(λ) = Σ 𝒜ₙλ^{k−n} and
//! B_k(λ) = Σ ℬₙλ^{k−n}, obtained from two lower-triangular Toeplitz
//! matrices built out of the χ's: χ_o has χ₁, χ₃, … below a unit diagonal,
//! χ_e has χ₀ on the diagonal and χ₂, χ₄, … below it. Then χ_o·𝒜 = δ₀ and
//! ℬ = χ_e·𝒜.

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::chi::ChiCoefficients;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct KdVCoefficients {
    pub order: usize,
    /// 𝒜₀ … 𝒜_k with 𝒜₀ = 1.
    pub a: Vec<C64>,
    /// ℬ₀ … ℬ_k.
    pub b: Vec<C64>,
    /// First column of χ_o: 1, χ₁, χ₃, …
    pub odd_column: Vec<C64>,
    /// First column of χ_e: χ₀, χ₂, …
    pub even_column: Vec<C64>,
}

impl KdVCoefficients {
    /// A_k(λ).
    pub fn a_poly(&self, lambda: C64) -> C64 {
        self.a.iter().fold(C64::new(0.0, 0.0), |acc, c| acc * lambda + c)
    }

    /// B_k(λ).
    pub fn b_poly(&self, lambda: C64) -> C64 {
        self.b.iter().fold(C64::new(0.0, 0.0), |acc, c| acc * lambda + c)
    }

    /// Dense lower-triangular Toeplitz matrix with the given first column.
    pub fn toeplitz(column: &[C64]) -> Vec<Vec<C64>> {
        let n = column.len();
        (0..n)
            .map(|i| (0..n).map(|j| if i >= j { column[i - j] } else { C64::new(0.0, 0.0) }).collect())
            .collect()
    }

    /// max over rows of |χ_o·𝒜 − δ₀| and |χ_e·𝒜 − ℬ|.
    pub fn triangular_residual(&self) -> f64 {
        let apply = |col: &[C64], v: &[C64], i: usize| (0..=i).map(|j| col[i - j] * v[j]).sum::<C64>();
        let mut worst: f64 = 0.0;
        for i in 0..=self.order {
            let delta = if i == 0 { 1.0 } else { 0.0 };
            worst = worst.max((apply(&self.odd_column, &self.a, i) - delta).norm());
            worst = worst.max((apply(&self.even_column, &self.a, i) - self.b[i]).norm());
        }
        worst
    }
}

/// Forward substitution through the unit-diagonal χ_o, then ℬ = χ_e·𝒜.
pub fn ab_coefficients(chi: &ChiCoefficients, k: usize) -> Result<KdVCoefficients> {
    if chi.order() < 2 * k {
        return Err(Error::Validation(format!(
            "order {k} needs χ through index {}, only {} available",
            2 * k,
            chi.order()
        )));
    }
    let mut odd_column = vec![C64::new(1.0, 0.0)];
    odd_column.extend((0..k).map(|j| chi.get(2 * j + 1)));
    let even_column: Vec<C64> = (0..=k).map(|j| chi.get(2 * j)).collect();
    let mut a = vec![C64::new(1.0, 0.0)];
    for n in 1..=k {
        let s: C64 = (1..=n).map(|j| odd_column[j] * a[n - j]).sum();
        a.push(-s);
    }
    let b = (0..=k).map(|n| (0..=n).map(|j| even_column[j] * a[n - j]).sum()).collect();
    Ok(KdVCoefficients {
        order: k,
        a,
        b,
        odd_column,
        even_column,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kdv::chi::ChiSource;
    use crate::numerics::linalg::solve_complex;

    fn chi(values: Vec<C64>) -> ChiCoefficients {
        let n = values.len();
        ChiCoefficients {
            values,
            moments: vec![],
            sources: vec![ChiSource::ClosedForm; n],
            warning: false,
        }
    }

    #[test]
    fn zero_chis_give_monomials() {
        let c = ab_coefficients(&chi(vec![C64::new(0.0, 0.0); 5]), 2).unwrap();
        assert_eq!(c.a, vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)]);
        assert!(c.b.iter().all(|b| b.norm() == 0.0));
        assert_eq!(c.a_poly(C64::new(3.0, 0.0)), C64::new(9.0, 0.0));
    }

    #[test]
    fn first_coefficient_is_minus_chi_one() {
        let c = ab_coefficients(&chi(vec![C64::new(0.0, 0.4), C64::new(-0.3, 0.0), C64::new(0.0, 0.1)]), 1).unwrap();
        assert_eq!(c.a[1], C64::new(0.3, 0.0));
        assert!((c.b[1] - (C64::new(0.0, 0.1) + C64::new(0.0, 0.4) * 0.3)).norm() < 1e-16);
    }

    #[test]
    fn agrees_with_dense_solve() {
        let vals: Vec<C64> = [0.31, -0.72, 0.18, 1.4, -0.55, 0.9, 0.07]
            .iter()
            .enumerate()
            .map(|(i, &v)| if i % 2 == 0 { C64::new(0.0, v) } else { C64::new(v, 0.0) })
            .collect();
        let k = 3;
        let c = ab_coefficients(&chi(vals), k).unwrap();
        let dense = KdVCoefficients::toeplitz(&c.odd_column);
        let mut rhs = vec![C64::new(0.0, 0.0); k + 1];
        rhs[0] = C64::new(1.0, 0.0);
        let a = solve_complex(&dense, &rhs, "test").unwrap();
        for (x, y) in a.iter().zip(&c.a) {
            assert!((x - y).norm() < 1e-13);
        }
        let e = KdVCoefficients::toeplitz(&c.even_column);
        for (i, row) in e.iter().enumerate() {
            let b: C64 = row.iter().zip(&a).map(|(m, v)| m * v).sum();
            assert!((b - c.b[i]).norm() < 1e-13);
        }
        assert!(c.triangular_residual() < 1e-14);
    }

    #[test]
    fn short_chi_is_rejected() {
        assert!(ab_coefficients(&chi(vec![C64::new(0.0, 0.0); 2]), 1).is_err());
    }
}
