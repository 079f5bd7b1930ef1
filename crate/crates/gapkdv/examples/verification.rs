//! The full verification battery on one band set, as run by
//! `gapkdv verify`.
//!
//! ```text
//! cargo run --release --example verification
//! ```

use gapkdv::band_geometry::{BandSet, Divisor};
use gapkdv::cli::battery::full_battery;
use gapkdv::tolerances::Tolerances;

pub fn run() -> gapkdv::Result<()> {
    let bands = BandSet::new(&[(1.0, 2.0), (3.0, 4.5)])?;
    let divisor = Divisor::from_pairs(&bands, &[(1.3, 1.0), (3.9, -1.0)])?;
    let records = full_battery(&bands, &divisor, 11, Tolerances::default());
    for r in &records {
        println!(
            "{:<4} {:<28} {:.2e} (tolerance {:.0e})",
            if r.pass { "ok" } else { "FAIL" },
            r.name,
            r.residual,
            r.tolerance
        );
    }
    let failed = records.iter().filter(|r| !r.pass).count();
    println!("{} checks, {failed} failed", records.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> gapkdv::Result<()> {
    run()
}
