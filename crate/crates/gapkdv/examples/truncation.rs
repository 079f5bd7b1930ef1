//! Canonical products converging as gaps are added: nested band sets with
//! gaps (j, j + 4^{-j}) and the differences between successive truncations.
//!
//! ```text
//! cargo run --release --example truncation
//! ```

use gapkdv::spectral::{default_samples, geometric_family, truncation_study};
use gapkdv::tolerances::Tolerances;

pub fn run() -> gapkdv::Result<()> {
    let (gaps, divisor) = geometric_family(6);
    let study = truncation_study(&gaps, &divisor, &default_samples(), Tolerances::default())?;
    for (n, d) in study.levels.iter().zip(&study.differences) {
        println!("N = {n}: max |e_N - e_(N+1)| = {d:.3e}");
    }
    println!("ratios {:?}; contracting: {}", study.ratios, study.contracts());
    Ok(())
}

#[allow(dead_code)]
fn main() -> gapkdv::Result<()> {
    run()
}
