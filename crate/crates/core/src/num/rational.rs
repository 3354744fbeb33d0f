use alloc::string::ToString;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Arbitrary precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Exponent of `z` or `q` in a [`BiSeries`](super::BiSeries).
///
/// Exponents stay small (denominators divide 48p, magnitudes are bounded by the
/// truncation window) so they use checked machine rationals; coefficients do not.
pub type Exponent = Ratio<i64>;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn exponent(num: i64, den: i64) -> Exponent {
    Exponent::new(num, den)
}

pub fn exponent_to_rational(e: &Exponent) -> Rational {
    rat(*e.numer(), *e.denom())
}

pub fn rational_to_exponent(r: &Rational) -> Result<Exponent> {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Exponent::new(n, d)),
        _ => Err(Error::ExponentOverflow(r.to_string())),
    }
}
