//! Compact linearization of binary quadratic programs with linear side
//! constraints.

pub mod cover;
pub mod generate;
pub mod io;
pub mod linearize;
pub mod lp;
pub mod model;
pub mod scalar;
pub mod verify;

pub use scalar::Scalar;

/// Arbitrary-precision rational, the default scalar.
pub type Rational = num_rational::BigRational;
pub type Instance = model::BqpInstance<Rational>;
pub type Model = linearize::LinearizedModel<Rational>;
pub type Lp = lp::LpProblem<Rational>;
