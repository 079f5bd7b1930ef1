//! Numerical kernels shared by every other module.

pub mod extrapolate;
pub mod linalg;
pub mod quadrature;
pub mod roots;
pub mod series;

pub use extrapolate::{richardson_limit, Limit};
pub use quadrature::{
    adaptive_gauss_kronrod, adaptive_segment_points, adaptive_singular_segment, band_tail_quadrature, gap_quadrature, gauss_chebyshev,
    singular_segment, Estimate, SegmentPoint,
};
pub use roots::bracketed_root;
pub use series::{series_exp, TruncatedSeries};
