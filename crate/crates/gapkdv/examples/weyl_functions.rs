//! Weyl–Titchmarsh functions of a reflectionless potential and the
//! identities tying them to the canonical products e_α.
//!
//! ```text
//! cargo run --release --example weyl_functions
//! ```

use gapkdv::abelian::Domain;
use gapkdv::band_geometry::{BandSet, Divisor};
use gapkdv::spectral::{identity_suite, IdentitySamples, SpectralContext};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run() -> gapkdv::Result<()> {
    let bands = BandSet::new(&[(1.0, 2.0), (3.0, 4.5)])?;
    let divisor = Divisor::from_pairs(&bands, &[(1.3, 1.0), (3.9, -1.0)])?;
    let domain = Domain::new(bands.clone())?;
    let ctx = SpectralContext::build(&domain)?;
    let bundle = ctx.bundle(&divisor)?;

    for lambda in [C64::new(-2.0, 0.0), C64::new(1.5, 0.5), C64::new(6.0, 1.0)] {
        println!(
            "lambda = {lambda}: m+ = {:.6}, m- = {:.6}, R = {:.6}, e = {:.6}",
            bundle.m_plus(lambda)?,
            bundle.m_minus(lambda)?,
            bundle.resolvent(lambda)?,
            bundle.e(lambda)?
        );
    }

    let samples = IdentitySamples::random(&bands, &mut ChaCha8Rng::seed_from_u64(7), 20, 10);
    let report = identity_suite(&bundle, &samples)?;
    println!("identity residuals: {report:#?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> gapkdv::Result<()> {
    run()
}
