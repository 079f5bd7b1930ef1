//! Abelian differentials on ℂ∖E.

pub mod asymptotics;
pub mod domain;
pub mod green;
pub mod periods;
pub mod theta;
pub mod widom;

pub use asymptotics::{green_ratio_limit, theta_decay, GreenRatioLimit, ThetaDecay};
pub use domain::{sqrt_lambda, Domain};
pub use green::GreenPole;
pub use periods::{b_period_check, FirstKindBasis};
pub use theta::ThetaK;
pub use widom::{widom_sum_and_entropy, WidomFunction};
