use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, Zero};

use super::rational::{int, Rational};
use crate::error::{Error, Result};

/// An element `rat + irr * sqrt(2p)` of the quadratic field Q(sqrt(2p)).
///
/// The radicand `2p` travels with the number so that values built for two
/// different `p` cannot be combined silently. A radicand of zero marks a plain
/// rational that is compatible with every field. When `2p` is a perfect square
/// (p = 2, 8, 18, ...) the irrational part is folded into `rat`, so equality is
/// always component-wise.
#[derive(Clone, Debug)]
pub struct QuadNumber {
    rat: Rational,
    irr: Rational,
    radicand: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadOp {
    Add,
    Mul,
    Neg,
    Inv,
}

/// Checked field arithmetic. `Neg` and `Inv` ignore `y`.
pub fn quad_arith(op: QuadOp, x: &QuadNumber, y: &QuadNumber) -> Result<QuadNumber> {
    match op {
        QuadOp::Add => x.checked_add(y),
        QuadOp::Mul => x.checked_mul(y),
        QuadOp::Neg => Ok(-x),
        QuadOp::Inv => x.inv(),
    }
}

fn join_radicands(a: u32, b: u32) -> Result<u32> {
    match (a, b) {
        (0, r) | (r, 0) => Ok(r),
        (a, b) if a == b => Ok(a),
        (left, right) => Err(Error::FieldMismatch { left, right }),
    }
}

fn perfect_square_root(n: u32) -> Option<u32> {
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

impl QuadNumber {
    /// `rat + irr * sqrt(2p)`.
    pub fn new(rat: Rational, irr: Rational, p: u32) -> Self {
        Self::with_radicand(rat, irr, 2 * p)
    }

    fn with_radicand(rat: Rational, irr: Rational, radicand: u32) -> Self {
        let mut q = QuadNumber { rat, irr, radicand };
        q.canonicalize();
        q
    }

    fn canonicalize(&mut self) {
        if self.irr.is_zero() {
            return;
        }
        assert!(self.radicand != 0, "irrational part without a radicand");
        if let Some(root) = perfect_square_root(self.radicand) {
            let folded = core::mem::replace(&mut self.irr, Rational::zero());
            self.rat += folded * int(root as i64);
        }
    }

    pub fn rational(r: Rational) -> Self {
        QuadNumber {
            rat: r,
            irr: Rational::zero(),
            radicand: 0,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(int(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `sqrt(2p)` itself.
    pub fn sqrt_2p(p: u32) -> Self {
        Self::new(Rational::zero(), Rational::one(), p)
    }

    pub fn rat(&self) -> &Rational {
        &self.rat
    }

    pub fn irr(&self) -> &Rational {
        &self.irr
    }

    /// The `p` this number is bound to, if any.
    pub fn p(&self) -> Option<u32> {
        (self.radicand != 0).then_some(self.radicand / 2)
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rat.is_one() && self.irr.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.rat.clone())
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    /// Field norm `rat^2 - 2p irr^2`.
    pub fn norm(&self) -> Rational {
        let d = int(self.radicand as i64);
        &self.rat * &self.rat - d * &self.irr * &self.irr
    }

    pub fn conjugate(&self) -> Self {
        QuadNumber {
            rat: self.rat.clone(),
            irr: -&self.irr,
            radicand: self.radicand,
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let radicand = join_radicands(self.radicand, other.radicand)?;
        Ok(QuadNumber {
            rat: &self.rat + &other.rat,
            irr: &self.irr + &other.irr,
            radicand,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let radicand = join_radicands(self.radicand, other.radicand)?;
        if self.irr.is_zero() {
            return Ok(QuadNumber {
                rat: &self.rat * &other.rat,
                irr: &self.rat * &other.irr,
                radicand,
            });
        }
        if other.irr.is_zero() {
            return Ok(QuadNumber {
                rat: &self.rat * &other.rat,
                irr: &self.irr * &other.rat,
                radicand,
            });
        }
        let d = int(radicand as i64);
        Ok(QuadNumber {
            rat: &self.rat * &other.rat + d * &self.irr * &other.irr,
            irr: &self.rat * &other.irr + &self.irr * &other.rat,
            radicand,
        })
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.irr.is_zero() {
            return Ok(QuadNumber {
                rat: self.rat.recip(),
                irr: Rational::zero(),
                radicand: self.radicand,
            });
        }
        // Canonical form guarantees a non-square radicand here, so the norm is nonzero.
        let n = self.norm();
        Ok(QuadNumber {
            rat: &self.rat / &n,
            irr: -&self.irr / &n,
            radicand: self.radicand,
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inv()?)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QuadNumber {
            rat: &self.rat * r,
            irr: &self.irr * r,
            radicand: self.radicand,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = QuadNumber::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

impl PartialEq for QuadNumber {
    fn eq(&self, other: &Self) -> bool {
        self.rat == other.rat && self.irr == other.irr
    }
}

impl Eq for QuadNumber {}

/// Structural order on `(rat, irr)`; used for map keys, not numeric comparison.
impl Ord for QuadNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rat
            .cmp(&other.rat)
            .then_with(|| self.irr.cmp(&other.irr))
    }
}

impl PartialOrd for QuadNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl core::hash::Hash for QuadNumber {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.rat.hash(state);
        self.irr.hash(state);
    }
}

impl From<Rational> for QuadNumber {
    fn from(r: Rational) -> Self {
        QuadNumber::rational(r)
    }
}

impl From<i64> for QuadNumber {
    fn from(n: i64) -> Self {
        QuadNumber::from_int(n)
    }
}

impl<'a> Add<&'a QuadNumber> for &'a QuadNumber {
    type Output = QuadNumber;
    fn add(self, rhs: &QuadNumber) -> QuadNumber {
        self.checked_add(rhs).expect("mixed quadratic fields")
    }
}

impl Add for QuadNumber {
    type Output = QuadNumber;
    fn add(self, rhs: QuadNumber) -> QuadNumber {
        &self + &rhs
    }
}

impl AddAssign<&QuadNumber> for QuadNumber {
    fn add_assign(&mut self, rhs: &QuadNumber) {
        self.radicand =
            join_radicands(self.radicand, rhs.radicand).expect("mixed quadratic fields");
        self.rat += &rhs.rat;
        self.irr += &rhs.irr;
    }
}

impl<'a> Sub<&'a QuadNumber> for &'a QuadNumber {
    type Output = QuadNumber;
    fn sub(self, rhs: &QuadNumber) -> QuadNumber {
        self + &(-rhs)
    }
}

impl Sub for QuadNumber {
    type Output = QuadNumber;
    fn sub(self, rhs: QuadNumber) -> QuadNumber {
        &self - &rhs
    }
}

impl<'a> Mul<&'a QuadNumber> for &'a QuadNumber {
    type Output = QuadNumber;
    fn mul(self, rhs: &QuadNumber) -> QuadNumber {
        self.checked_mul(rhs).expect("mixed quadratic fields")
    }
}

impl Mul for QuadNumber {
    type Output = QuadNumber;
    fn mul(self, rhs: QuadNumber) -> QuadNumber {
        &self * &rhs
    }
}

impl Neg for &QuadNumber {
    type Output = QuadNumber;
    fn neg(self) -> QuadNumber {
        QuadNumber {
            rat: -&self.rat,
            irr: -&self.irr,
            radicand: self.radicand,
        }
    }
}

impl Neg for QuadNumber {
    type Output = QuadNumber;
    fn neg(self) -> QuadNumber {
        -&self
    }
}

impl fmt::Display for QuadNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.irr.is_zero() {
            return write!(f, "{}", self.rat);
        }
        let root = self.radicand;
        let irr_abs = self.irr.abs();
        let coeff = if irr_abs.is_one() {
            alloc::string::String::new()
        } else {
            alloc::format!("{}", irr_abs)
        };
        if self.rat.is_zero() {
            let sign = if self.irr.is_negative() { "-" } else { "" };
            write!(f, "{sign}{coeff}√{root}")
        } else {
            let sign = if self.irr.is_negative() { "-" } else { "+" };
            write!(f, "{} {sign} {coeff}√{root}", self.rat)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    fn q(a: (i64, i64), b: (i64, i64), p: u32) -> QuadNumber {
        QuadNumber::new(rat(a.0, a.1), rat(b.0, b.1), p)
    }

    fn alpha_plus(p: u32) -> QuadNumber {
        QuadNumber::sqrt_2p(p)
    }

    fn alpha_minus(p: u32) -> QuadNumber {
        QuadNumber::sqrt_2p(p).scale(&rat(-1, p as i64))
    }

    #[test]
    fn alpha_product_is_minus_two() {
        for p in 2..9 {
            assert_eq!(&alpha_plus(p) * &alpha_minus(p), QuadNumber::from_int(-2));
        }
    }

    #[test]
    fn alpha_zero_for_p3() {
        let a0 = &alpha_plus(3) + &alpha_minus(3);
        assert_eq!(a0, q((0, 1), (2, 3), 3));
    }

    #[test]
    fn perfect_square_radicand_folds() {
        // p = 2: sqrt(4) = 2
        let x = q((0, 1), (1, 1), 2);
        assert!(x.is_rational());
        assert_eq!(x, QuadNumber::from_int(2));
        let inv = x.inv().unwrap();
        assert_eq!(inv, QuadNumber::rational(rat(1, 2)));
        // (0, 1/4) * sqrt(4) is the same number
        assert_eq!(inv, q((0, 1), (1, 4), 2));
    }

    #[test]
    fn inverse_by_multiplication() {
        let x = q((3, 2), (-5, 7), 3);
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, QuadNumber::one());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(QuadNumber::zero().inv(), Err(Error::DivisionByZero));
        assert!(quad_arith(QuadOp::Inv, &QuadNumber::zero(), &QuadNumber::zero()).is_err());
    }

    #[test]
    fn mixing_fields_is_an_error() {
        let a = alpha_plus(3);
        let b = alpha_plus(5);
        assert_eq!(
            a.checked_mul(&b),
            Err(Error::FieldMismatch { left: 6, right: 10 })
        );
        // unbound rationals mix with anything
        assert!(a.checked_add(&QuadNumber::from_int(4)).is_ok());
    }

    #[test]
    fn norm_identity() {
        let x = q((7, 3), (2, 5), 5);
        assert_eq!((&x * &x.conjugate()).to_rational().unwrap(), x.norm());
    }

    #[test]
    fn display() {
        assert_eq!(alloc::format!("{}", q((1, 2), (-3, 4), 3)), "1/2 - 3/4√6");
        assert_eq!(alloc::format!("{}", alpha_plus(5)), "√10");
        assert_eq!(alloc::format!("{}", alpha_minus(3)), "-1/3√6");
    }
}
