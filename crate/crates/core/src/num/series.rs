use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use super::quad::QuadNumber;
use super::rational::Exponent;
use crate::error::{Error, Result};

/// Sparse truncated series in `z` and `q` with rational exponents.
///
/// Terms with `q` exponent above `q_cutoff` are never stored, and neither are
/// terms with `|z| > z_window` when a window is set. Everything that is stored
/// is exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    // keyed by (q, z) so iteration runs in increasing q
    terms: BTreeMap<(Exponent, Exponent), QuadNumber>,
    q_cutoff: Exponent,
    z_window: Option<Exponent>,
    q_bounded: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Scale,
    Shift,
}

#[derive(Clone, Debug)]
pub enum SeriesOperand<'a> {
    Series(&'a BiSeries),
    Scalar(&'a QuadNumber),
    Monomial { z: Exponent, q: Exponent },
}

/// First coefficient where two series disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub z: Exponent,
    pub q: Exponent,
    pub left: QuadNumber,
    pub right: QuadNumber,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "z^{} q^{}: left {} vs right {}",
            self.z, self.q, self.left, self.right
        )
    }
}

pub fn series_combine(op: SeriesOp, a: &BiSeries, b: SeriesOperand<'_>) -> Result<BiSeries> {
    match (op, b) {
        (SeriesOp::Add, SeriesOperand::Series(b)) => Ok(a.add(b)),
        (SeriesOp::Mul, SeriesOperand::Series(b)) => a.mul(b),
        (SeriesOp::Scale, SeriesOperand::Scalar(c)) => Ok(a.scale(c)),
        (SeriesOp::Shift, SeriesOperand::Monomial { z, q }) => Ok(a.shift(z, q)),
        (op, _) => panic!("operand kind does not match {op:?}"),
    }
}

fn min_window(a: Option<Exponent>, b: Option<Exponent>) -> Option<Exponent> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) | (None, x) => x,
    }
}

impl BiSeries {
    pub fn new(q_cutoff: Exponent) -> Self {
        BiSeries {
            terms: BTreeMap::new(),
            q_cutoff,
            z_window: None,
            q_bounded: true,
        }
    }

    pub fn constant(c: QuadNumber, q_cutoff: Exponent) -> Self {
        Self::monomial(Exponent::zero(), Exponent::zero(), c, q_cutoff)
    }

    pub fn monomial(z: Exponent, q: Exponent, c: QuadNumber, q_cutoff: Exponent) -> Self {
        let mut s = Self::new(q_cutoff);
        s.add_term(z, q, c);
        s
    }

    /// Restrict to `|z| <= w`, dropping terms outside.
    pub fn with_window(mut self, w: Exponent) -> Self {
        let w = self.z_window.map_or(w, |old| old.min(w));
        self.z_window = Some(w);
        self.terms.retain(|(_, z), _| z.abs() <= w);
        self
    }

    /// Lower the q cutoff, dropping terms above it.
    pub fn truncate(mut self, q_cutoff: Exponent) -> Self {
        if q_cutoff < self.q_cutoff {
            self.q_cutoff = q_cutoff;
            self.terms.retain(|(q, _), _| *q <= q_cutoff);
        }
        self
    }

    /// Mark the series as a truncation of something whose q-support is not
    /// bounded below. Such a series cannot be multiplied.
    pub fn mark_unbounded(mut self) -> Self {
        self.q_bounded = false;
        self
    }

    pub fn q_cutoff(&self) -> Exponent {
        self.q_cutoff
    }

    pub fn z_window(&self) -> Option<Exponent> {
        self.z_window
    }

    pub fn is_q_bounded(&self) -> bool {
        self.q_bounded
    }

    pub fn in_range(&self, z: Exponent, q: Exponent) -> bool {
        q <= self.q_cutoff && self.z_window.is_none_or(|w| z.abs() <= w)
    }

    /// Add `c z^z q^q`; silently ignored outside the cutoff or window.
    pub fn add_term(&mut self, z: Exponent, q: Exponent, c: QuadNumber) {
        if c.is_zero() || !self.in_range(z, q) {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry((q, z)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, z: Exponent, q: Exponent) -> QuadNumber {
        self.terms
            .get(&(q, z))
            .cloned()
            .unwrap_or_else(QuadNumber::zero)
    }

    /// Terms as `(z, q, coefficient)` in increasing `(q, z)` order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, Exponent, &QuadNumber)> {
        self.terms.iter().map(|((q, z), c)| (*z, *q, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_q(&self) -> Option<Exponent> {
        self.terms.keys().next().map(|(q, _)| *q)
    }

    /// Distinct z exponents present, increasing.
    pub fn z_exponents(&self) -> Vec<Exponent> {
        let mut zs: Vec<Exponent> = self.terms.keys().map(|(_, z)| *z).collect();
        zs.sort();
        zs.dedup();
        zs
    }

    /// The slice at a fixed z power, as `(q, coefficient)` pairs.
    pub fn z_slice(&self, z: Exponent) -> Vec<(Exponent, QuadNumber)> {
        self.terms
            .iter()
            .filter(|((_, zz), _)| *zz == z)
            .map(|((q, _), c)| (*q, c.clone()))
            .collect()
    }

    pub fn add(&self, other: &BiSeries) -> BiSeries {
        let mut out = BiSeries {
            terms: BTreeMap::new(),
            q_cutoff: self.q_cutoff.min(other.q_cutoff),
            z_window: min_window(self.z_window, other.z_window),
            q_bounded: self.q_bounded && other.q_bounded,
        };
        for (z, q, c) in self.terms().chain(other.terms()) {
            out.add_term(z, q, c.clone());
        }
        out
    }

    pub fn neg(&self) -> BiSeries {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn sub(&self, other: &BiSeries) -> BiSeries {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &QuadNumber) -> BiSeries {
        let mut out = BiSeries {
            terms: BTreeMap::new(),
            ..self.clone()
        };
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            out.terms.insert(*k, v * c);
        }
        out
    }

    /// Multiply by the monomial `z^dz q^dq`.
    pub fn shift(&self, dz: Exponent, dq: Exponent) -> BiSeries {
        BiSeries {
            terms: self
                .terms
                .iter()
                .map(|((q, z), c)| ((q + dq, z + dz), c.clone()))
                .collect(),
            q_cutoff: self.q_cutoff + dq,
            z_window: self.z_window.map(|w| w - dz.abs()),
            q_bounded: self.q_bounded,
        }
    }

    /// Product, exact up to `min(cut_a + min_b, cut_b + min_a)`.
    pub fn mul(&self, other: &BiSeries) -> Result<BiSeries> {
        if !self.q_bounded || !other.q_bounded {
            return Err(Error::UnboundedSupport);
        }
        let z_window = match (self.z_window, other.z_window) {
            (Some(_), Some(_)) => return Err(Error::WindowedProduct),
            (Some(w), None) => Some(w - max_abs_z(other)),
            (None, Some(w)) => Some(w - max_abs_z(self)),
            (None, None) => None,
        };
        let min_a = self.min_q().unwrap_or(self.q_cutoff);
        let min_b = other.min_q().unwrap_or(other.q_cutoff);
        let q_cutoff = (self.q_cutoff + min_b).min(other.q_cutoff + min_a);
        let mut out = BiSeries::new(q_cutoff);
        out.z_window = z_window;
        let b_terms: Vec<_> = other.terms().collect();
        for (za, qa, ca) in self.terms() {
            for (zb, qb, cb) in &b_terms {
                let q = qa + qb;
                if q > q_cutoff {
                    break;
                }
                out.add_term(za + zb, q, ca * cb);
            }
        }
        Ok(out)
    }

    /// Compare on the common range: the smaller cutoff and the smaller window.
    pub fn first_mismatch(&self, other: &BiSeries) -> Option<Mismatch> {
        let cutoff = self.q_cutoff.min(other.q_cutoff);
        let window = min_window(self.z_window, other.z_window);
        let in_common =
            |q: &Exponent, z: &Exponent| *q <= cutoff && window.is_none_or(|w| z.abs() <= w);
        let mut keys: Vec<(Exponent, Exponent)> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .filter(|(q, z)| in_common(q, z))
            .copied()
            .collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().find_map(|(q, z)| {
            let left = self.coeff(z, q);
            let right = other.coeff(z, q);
            (left != right).then_some(Mismatch { z, q, left, right })
        })
    }

    /// Equality of coefficients on the common range.
    pub fn agrees_with(&self, other: &BiSeries) -> bool {
        self.first_mismatch(other).is_none()
    }
}

fn max_abs_z(s: &BiSeries) -> Exponent {
    s.terms
        .keys()
        .map(|(_, z)| z.abs())
        .max()
        .unwrap_or_else(Exponent::zero)
}

impl fmt::Display for BiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O(q^{})", self.q_cutoff);
        }
        for (i, (z, q, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if !z.is_zero() {
                write!(f, " z^{z}")?;
            }
            if !q.is_zero() {
                write!(f, " q^{q}")?;
            }
        }
        write!(f, " + O(q^{})", self.q_cutoff)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::exponent;

    fn e(n: i64) -> Exponent {
        Exponent::from_integer(n)
    }

    fn poly(coeffs: &[(i64, i64)], cutoff: i64) -> BiSeries {
        let mut s = BiSeries::new(e(cutoff));
        for &(q, c) in coeffs {
            s.add_term(e(0), e(q), QuadNumber::from_int(c));
        }
        s
    }

    #[test]
    fn difference_of_squares() {
        let a = poly(&[(0, 1), (1, 1)], 10);
        let b = poly(&[(0, 1), (1, -1)], 10);
        let prod = series_combine(SeriesOp::Mul, &a, SeriesOperand::Series(&b)).unwrap();
        assert_eq!(prod.len(), 2);
        assert_eq!(prod.coeff(e(0), e(2)), QuadNumber::from_int(-1));
        assert_eq!(prod.q_cutoff(), e(10));
    }

    #[test]
    fn shift_of_one() {
        let one = BiSeries::constant(QuadNumber::one(), e(5));
        let s = series_combine(
            SeriesOp::Shift,
            &one,
            SeriesOperand::Monomial {
                z: exponent(1, 2),
                q: exponent(-1, 24),
            },
        )
        .unwrap();
        let terms: Vec<_> = s.terms().collect();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].0, exponent(1, 2));
        assert_eq!(terms[0].1, exponent(-1, 24));
    }

    #[test]
    fn cutoff_tracks_negative_minimum() {
        let a = BiSeries::monomial(e(0), exponent(-1, 24), QuadNumber::one(), e(2));
        let b = poly(&[(0, 1), (1, 1)], 2);
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.q_cutoff(), e(2) - exponent(1, 24));
    }

    #[test]
    fn windows() {
        let mut a = BiSeries::new(e(3)).with_window(e(4));
        for z in -5..=5 {
            a.add_term(e(z), e(0), QuadNumber::one());
        }
        assert_eq!(a.len(), 9);
        let b = BiSeries::monomial(e(1), e(0), QuadNumber::one(), e(3));
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.z_window(), Some(e(3)));
        assert_eq!(a.mul(&a), Err(Error::WindowedProduct));
        let u = b.clone().mark_unbounded();
        assert_eq!(u.mul(&b), Err(Error::UnboundedSupport));
    }

    #[test]
    fn mismatch_reports_first_term() {
        let a = poly(&[(0, 1), (2, 3), (3, 1)], 5);
        let b = poly(&[(0, 1), (2, 4)], 3);
        let m = a.first_mismatch(&b).unwrap();
        assert_eq!(
            (m.q, m.left, m.right),
            (e(2), QuadNumber::from_int(3), QuadNumber::from_int(4))
        );
        let c = poly(&[(0, 1), (2, 3), (3, 1)], 3);
        assert!(a.agrees_with(&c));
    }
}
