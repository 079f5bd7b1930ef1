//! χ-coefficients, the hierarchy polynomials A_k and B_k, the potential on a
//! lattice, and the differential identities tying them to the flows.
//!
//! Derivatives along the character torus are realised on the flows: a
//! derivative in the direction η (resp. η⁽ᵏ⁾) of a function f of the
//! character is −d/dx (resp. −d/dt) of f along the x-flow (resp. t-flow).

pub mod checks;
pub mod chi;
pub mod hierarchy;
pub mod lattice;

pub use checks::{
    b_from_a_identity_check, chi1_three_way, chi_bound, eigenfunction_relation_check, rho_weights, riccati_check, z_moments, Chi1Agreement,
    ChiBound, DerivativeResidual, FlowDerivative,
};
pub use chi::{chi_asymptotic_oracle, chi_closed_form, moments, ChiCoefficients, ChiSource};
pub use hierarchy::{ab_coefficients, KdVCoefficients};
pub use lattice::{kdv_convergence, kdv_residual, linspace, potential_grid, trace_potential, KdvConvergence, PotentialGrid};

/// Default cap on the hierarchy order.
pub const MAX_ORDER: usize = 3;
