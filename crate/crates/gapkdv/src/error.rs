use thiserror::Error;

/// Failures raised anywhere in the pipeline.
///
/// Validation problems are separated from numerical breakdowns so that the
/// command-line front end can map them onto distinct exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("quadrature did not converge on [{lo}, {hi}]: last estimates {last:e} and {previous:e}")]
    Quadrature { lo: f64, hi: f64, last: f64, previous: f64 },

    #[error("integrand decays too slowly on the tail beyond {start} (estimated exponent {exponent:.3})")]
    SlowDecay { start: f64, exponent: f64 },

    #[error("no sign change on [{a}, {b}]")]
    NoSignChange { a: f64, b: f64 },

    #[error("singular linear system while {0}")]
    Singular(String),

    #[error("point {0} lies on the spectrum; a side must be specified")]
    OnSpectrum(f64),

    #[error("evaluation too close to a pole at {0}")]
    Pole(f64),

    #[error("Jacobi inversion stalled at homotopy parameter {parameter:.3e} with residual {residual:.3e}")]
    InversionStall { parameter: f64, residual: f64 },

    #[error("{0}")]
    Numerical(String),
}

impl Error {
    /// True for errors caused by bad input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Validation(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
