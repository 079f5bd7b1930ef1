//! Behaviour far out on the negative axis: the Green-function ratio limit
//! that recovers Martin-function values, and the decay of Θ⁽¹⁾(λ) − λ^{3/2}.
//!
//! ```text
//! cargo run --release --example far_field
//! ```

use gapkdv::abelian::{green_ratio_limit, theta_decay, Domain, ThetaK};
use gapkdv::band_geometry::{BandSet, Divisor};

pub fn run() -> gapkdv::Result<()> {
    let bands = BandSet::new(&[(1.0, 2.0), (3.0, 4.5)])?;
    let divisor = Divisor::from_pairs(&bands, &[(1.3, 1.0), (3.9, 1.0)])?;
    let domain = Domain::new(bands)?;
    let martin = ThetaK::build(&domain, 0)?;
    let exponents = [2, 3, 4, 5, 6];

    let limit = green_ratio_limit(&domain, &martin, &divisor, &exponents)?;
    for (l, r) in limit.lambdas.iter().zip(&limit.ratios) {
        println!("lambda = {l:>10.0e}: ratio {r:.12}");
    }
    println!("extrapolated {:.12}, Martin sum {:.12}", limit.extrapolated, limit.martin_sum);

    let decay = theta_decay(&domain, &ThetaK::build(&domain, 1)?, &exponents)?;
    println!("|Theta1 - lambda^(3/2)| along -10^m: {:?}", decay.remainders);
    Ok(())
}

#[allow(dead_code)]
fn main() -> gapkdv::Result<()> {
    run()
}
