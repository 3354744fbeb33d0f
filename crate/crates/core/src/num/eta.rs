use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::quad::QuadNumber;
use super::rational::{Exponent, Rational};
use super::series::BiSeries;

fn divisor_sums(n_max: usize) -> Vec<i64> {
    let mut sigma = vec![0i64; n_max + 1];
    for d in 1..=n_max {
        for multiple in (d..=n_max).step_by(d) {
            sigma[multiple] += d as i64;
        }
    }
    sigma
}

/// Coefficients `a_0..=a_n_max` of `prod_{n>=1} (1 - q^n)^m`.
///
/// Uses `n a_n = -m sum_{j=1}^{n} sigma(j) a_{n-j}`, valid for every integer m.
pub fn euler_power_coefficients(m: i32, n_max: usize) -> Vec<BigInt> {
    let sigma = divisor_sums(n_max);
    let mut a: Vec<BigInt> = Vec::with_capacity(n_max + 1);
    a.push(BigInt::from(1));
    for n in 1..=n_max {
        let mut acc = BigInt::zero();
        for j in 1..=n {
            acc += &a[n - j] * sigma[j];
        }
        acc *= -(m as i64);
        debug_assert!((&acc % n as i64).is_zero());
        a.push(acc / n as i64);
    }
    a
}

/// Partition numbers p(0), ..., p(n_max).
pub fn partition_numbers(n_max: usize) -> Vec<BigInt> {
    euler_power_coefficients(-1, n_max)
}

/// `eta(q)^m = q^{m/24} prod (1 - q^n)^m`, exact up to `q_cutoff`.
///
/// Only negative powers are needed by the character formulas, but the
/// expansion is valid for any m.
pub fn eta_power(m: i32, q_cutoff: Exponent) -> BiSeries {
    let lead = Exponent::new(m as i64, 24);
    let mut out = BiSeries::new(q_cutoff);
    let span = (q_cutoff - lead).floor();
    let Some(n_max) = span.to_integer().to_usize() else {
        return out;
    };
    if span < Exponent::zero() {
        return out;
    }
    for (n, c) in euler_power_coefficients(m, n_max).into_iter().enumerate() {
        out.add_term(
            Exponent::zero(),
            lead + Exponent::from_integer(n as i64),
            QuadNumber::rational(Rational::from_integer(c)),
        );
    }
    out
}
