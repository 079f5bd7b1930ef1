//! Default tolerance ladder shared by the library, the verification battery
//! and the tests.
//!
//! Geometry solves are tightest, quadratures one notch looser, and identity
//! checks report at a level that leaves room for several stacked quadratures.

use serde::{Deserialize, Serialize};

/// Geometry solves (linear normalisations, root bracketing, Jacobi inversion).
pub const GEOMETRY: f64 = 1e-12;
/// Individual quadratures.
pub const QUADRATURE: f64 = 1e-11;
/// Identity checks that combine several quadratures.
pub const IDENTITY: f64 = 1e-8;
/// Minimum relative gap width and separation accepted by band-set validation.
pub const GAP_GUARD: f64 = 1e-9;
/// Default number of doublings for nested Gauss–Legendre refinement.
pub const MAX_DOUBLINGS: u32 = 20;
/// Characters are considered equal when their torus distance is below this.
pub const CHARACTER: f64 = 1e-10;

/// Run-time tolerance overrides, threaded through every numerical object.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub geometry: f64,
    pub quadrature: f64,
    pub identity: f64,
    pub gap_guard: f64,
    pub max_doublings: u32,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            geometry: GEOMETRY,
            quadrature: QUADRATURE,
            identity: IDENTITY,
            gap_guard: GAP_GUARD,
            max_doublings: MAX_DOUBLINGS,
        }
    }
}

impl Tolerances {
    /// Same ladder with a different quadrature tolerance.
    pub fn with_quadrature(mut self, tol: f64) -> Self {
        self.quadrature = tol;
        self
    }
}
