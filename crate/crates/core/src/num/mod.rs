//! Exact number types: big rationals, the quadratic field Q(sqrt(2p)), and
//! sparse two-variable truncated series with rational exponents.

mod eta;
mod quad;
mod rational;
mod series;

pub use eta::{eta_power, euler_power_coefficients, partition_numbers};
pub use quad::{quad_arith, QuadNumber, QuadOp};
pub use rational::{
    exponent, exponent_to_rational, int, rat, rational_to_exponent, Exponent, Rational,
};
pub use series::{series_combine, BiSeries, Mismatch, SeriesOp, SeriesOperand};
