pub mod abel_flow;
pub mod abelian;
pub mod band_geometry;
pub mod cli;
pub mod error;
pub mod kdv;
pub mod numerics;
pub mod spectral;
pub mod tolerances;

pub use error::{Error, Result};
