//! The expansion coefficients χₙ of m₊ at −∞ in closed form, checked against
//! a fit of m₊ itself, and the KdV hierarchy polynomials built from them.
//!
//! ```text
//! cargo run --release --example hierarchy_polynomials
//! ```

use gapkdv::abelian::Domain;
use gapkdv::band_geometry::{BandSet, Divisor};
use gapkdv::kdv::{ab_coefficients, chi_asymptotic_oracle, chi_closed_form, trace_potential};
use num_complex::Complex64 as C64;

pub fn run() -> gapkdv::Result<()> {
    let bands = BandSet::new(&[(1.0, 2.0)])?;
    let divisor = Divisor::from_pairs(&bands, &[(1.3, 1.0)])?;
    let domain = Domain::new(bands.clone())?;

    let k = 2;
    let exact = chi_closed_form(&bands, &divisor, k);
    let fitted = chi_asymptotic_oracle(&domain, &divisor, 2 * k)?;
    for n in 0..=2 * k {
        println!("chi_{n}: closed form {:.10}, fitted {:.10}", exact.get(n), fitted.get(n));
    }
    println!("-V(0)/2 from the trace formula: {:.10}", -trace_potential(&bands, &divisor) / 2.0);

    let ab = ab_coefficients(&exact, k)?;
    let lambda = C64::new(0.5, 1.0);
    println!(
        "A_{k}({lambda}) = {:.10}, B_{k}({lambda}) = {:.10}",
        ab.a_poly(lambda),
        ab.b_poly(lambda)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> gapkdv::Result<()> {
    run()
}
