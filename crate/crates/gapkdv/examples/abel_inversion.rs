//! The Abel map sends a divisor (one Dirichlet point per gap with a sheet
//! sign) to a point of the torus; Jacobi inversion brings it back.
//!
//! ```text
//! cargo run --release --example abel_inversion
//! ```

use gapkdv::abel_flow::AbelMap;
use gapkdv::abelian::{Domain, ThetaK};
use gapkdv::band_geometry::{BandSet, Divisor};

pub fn run() -> gapkdv::Result<()> {
    let bands = BandSet::new(&[(0.5, 1.0), (2.0, 3.0), (4.0, 4.6)])?;
    let domain = Domain::new(bands.clone())?;
    let martin = ThetaK::build(&domain, 0)?;
    let map = AbelMap::build(&domain, &martin)?;

    let divisor = Divisor::from_pairs(&bands, &[(0.7, -1.0), (2.5, 1.0), (4.3, 1.0)])?;
    let alpha = map.character(&divisor)?;
    println!("divisor   {:?} on sheets {:?}", divisor.lambdas(), divisor.signs());
    println!("character {:?}", alpha.components());

    let back = map.invert(&alpha, &map.base_divisor())?;
    println!("inverted  {:?} on sheets {:?}", back.lambdas(), back.signs());
    let err = back
        .lambdas()
        .iter()
        .zip(divisor.lambdas())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("largest point error {err:.2e}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> gapkdv::Result<()> {
    run()
}
