//! Symbolic calculus for thick distributions on `R^n`.
//!
//! Values are finite sums of spherical finite parts `Pf(r^k ψ(n))` and thick
//! deltas `g(n) δ∗^[q]`, with exact coefficients in `Q[C, 1/C]` where `C` is
//! the area of the unit sphere. The crate provides the thick derivative, the
//! projection onto ordinary distributions, an order-0 restriction, a
//! numerical duality oracle and a small expression language.

pub mod dsl;
pub mod error;
pub mod formulas;
pub mod oracle;
pub mod projection;
pub mod scalar;
pub mod sphere;
pub mod thick;

pub use error::{Error, Result};
pub use projection::{
    classify, order_zero_partial, project, project_order_zero, standard_partial, standard_partial_homogeneous, FunctionKind, StandardDistribution,
    StandardTerm,
};
pub use scalar::{area_in_pi, rational, sphere_area, PiCoeff, Rational, ScalarCoeff};
pub use sphere::{monomial_moment_ratio, mu, MultiIndex, SphericalSymbol};
pub use thick::{
    direction_partial, homogeneous_partial_profile, multiply_homogeneous, second_partial_closed_form, thick_partial, Multiplier, ThickDistribution,
    ThickTerm,
};
