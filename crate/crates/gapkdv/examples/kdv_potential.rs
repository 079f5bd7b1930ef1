//! The potential V(x, t) along the KdV flow, tabulated on a lattice, and the
//! finite-difference KdV residual shrinking at second order.
//!
//! ```text
//! cargo run --release --example kdv_potential
//! ```

use gapkdv::abel_flow::{AbelMap, FlowState};
use gapkdv::abelian::{Domain, ThetaK};
use gapkdv::band_geometry::{BandSet, Divisor};
use gapkdv::kdv::{kdv_convergence, linspace, potential_grid};

pub fn run() -> gapkdv::Result<()> {
    let bands = BandSet::new(&[(1.0, 2.0)])?;
    let divisor = Divisor::from_pairs(&bands, &[(1.3, 1.0)])?;
    let domain = Domain::new(bands)?;
    let martin = ThetaK::build(&domain, 0)?;
    let theta1 = ThetaK::build(&domain, 1)?;
    let map = AbelMap::build(&domain, &martin)?;
    let flow = FlowState::new(&map, &divisor, &martin, &theta1)?;

    let grid = potential_grid(&map, &flow, &linspace(0.0, 2.0, 5), &linspace(0.0, 0.2, 3));
    println!("{:>6} {:>6} {:>20}", "x", "t", "V(x, t)");
    for (ix, x) in grid.x.iter().enumerate() {
        for (it, t) in grid.t.iter().enumerate() {
            println!("{x:>6.2} {t:>6.2} {:>20.15}", grid.v[ix][it]);
        }
    }

    let conv = kdv_convergence(&map, &flow, (0.3, 0.1), 0.1, 3, 9)?;
    println!("steps     {:?}", conv.steps);
    println!("residuals {:?}", conv.residuals);
    println!("orders    {:?}", conv.orders);
    Ok(())
}

#[allow(dead_code)]
fn main() -> gapkdv::Result<()> {
    run()
}
