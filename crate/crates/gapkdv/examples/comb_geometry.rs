//! Geometry of a two-gap spectrum: the comb map, its frequencies, harmonic
//! measures, and the Widom–Martin sum against the entropy of the density of
//! states.
//!
//! ```text
//! cargo run --release --example comb_geometry
//! ```

use gapkdv::abelian::{widom_sum_and_entropy, Domain, GreenPole, ThetaK};
use gapkdv::band_geometry::BandSet;

pub fn run() -> gapkdv::Result<()> {
    let bands = BandSet::new(&[(1.0, 2.0), (3.0, 4.5)])?;
    println!("bands of E: {:?}", bands.bands());

    let domain = Domain::new(bands)?;
    let martin = ThetaK::build(&domain, 0)?;
    println!("comb critical points c_j: {:?}", martin.critical_points);
    println!("needle heights M(c_j):    {:?}", martin.needle_heights);
    println!("x-frequencies eta_j:      {:?}", martin.frequencies);

    let kdv = ThetaK::build(&domain, 1)?;
    println!("t-frequencies (k = 1):    {:?}", kdv.frequencies);

    let omega = GreenPole::harmonic_measures(&domain, -1.0)?;
    println!("harmonic measures at -1 of E, E_1, E_2: {omega:?}");

    let w = widom_sum_and_entropy(&domain, &martin)?;
    println!("sum of M(c_j) = {:.12}, entropy integral = {:.12}", w.widom_sum, w.entropy);
    Ok(())
}

#[allow(dead_code)]
fn main() -> gapkdv::Result<()> {
    run()
}
