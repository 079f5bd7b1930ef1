//! Every example compiles against the public API and runs to completion.

#[path = "../examples/abel_inversion.rs"]
mod abel_inversion;

#[path = "../examples/comb_geometry.rs"]
mod comb_geometry;

#[path = "../examples/far_field.rs"]
mod far_field;

#[path = "../examples/hierarchy_polynomials.rs"]
mod hierarchy_polynomials;

#[path = "../examples/kdv_potential.rs"]
mod kdv_potential;

#[path = "../examples/truncation.rs"]
mod truncation;

#[path = "../examples/verification.rs"]
mod verification;

#[path = "../examples/weyl_functions.rs"]
mod weyl_functions;

#[test]
fn examples_run() {
    abel_inversion::run().unwrap();
    comb_geometry::run().unwrap();
    far_field::run().unwrap();
    hierarchy_polynomials::run().unwrap();
    kdv_potential::run().unwrap();
    truncation::run().unwrap();
    verification::run().unwrap();
    weyl_functions::run().unwrap();
}
