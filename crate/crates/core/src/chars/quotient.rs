use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::num::{BiSeries, Exponent, QuadNumber, Rational};

/// A finite sum of `c z^a q^b` terms, keyed by `(b, a)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Numerator {
    terms: BTreeMap<(Exponent, Exponent), BigInt>,
}

impl Numerator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, z: Exponent, q: Exponent, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let key = (q, z);
        let slot = self.terms.entry(key).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Terms as `(z, q, c)`, in increasing q.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, Exponent, &BigInt)> {
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

    pub fn is_z_free(&self) -> bool {
        self.terms.keys().all(|(_, z)| z.is_zero())
    }
}

/// `sum_m N_m(z, q) eta(q)^m` with finite numerators.
///
/// Numerators are kept up to a cap on the q exponent; since every `eta^m` with
/// `m >= -24` only raises exponents by at least `-1`, a cap of `cutoff + 1` is
/// enough to expand exactly up to `cutoff`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EtaQuotient {
    parts: BTreeMap<i32, Numerator>,
}

impl EtaQuotient {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(z: Exponent, q: Exponent, c: BigInt, eta: i32) -> Self {
        let mut out = Self::zero();
        out.add_term(eta, z, q, c);
        out
    }

    pub fn add_term(&mut self, eta: i32, z: Exponent, q: Exponent, c: BigInt) {
        let part = self.parts.entry(eta).or_default();
        part.add_term(z, q, c);
        if part.is_empty() {
            self.parts.remove(&eta);
        }
    }

    pub fn parts(&self) -> impl Iterator<Item = (i32, &Numerator)> {
        self.parts.iter().map(|(m, n)| (*m, n))
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.parts.values().map(Numerator::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn min_q(&self) -> Option<Exponent> {
        self.parts.values().filter_map(Numerator::min_q).min()
    }

    pub fn is_z_free(&self) -> bool {
        self.parts.values().all(Numerator::is_z_free)
    }

    pub fn add_scaled(&mut self, other: &EtaQuotient, c: i64) {
        for (m, n) in &other.parts {
            for (z, q, v) in n.terms() {
                self.add_term(*m, z, q, v * c);
            }
        }
    }

    pub fn add(&self, other: &EtaQuotient) -> EtaQuotient {
        let mut out = self.clone();
        out.add_scaled(other, 1);
        out
    }

    pub fn scale(&self, c: i64) -> EtaQuotient {
        let mut out = EtaQuotient::zero();
        out.add_scaled(self, c);
        out
    }

    /// Drop numerator terms with q above `cap` or `|z|` above `window`.
    pub fn truncate(mut self, cap: Exponent, window: Exponent) -> EtaQuotient {
        for n in self.parts.values_mut() {
            n.terms.retain(|(q, z), _| *q <= cap && z.abs() <= window);
        }
        self.parts.retain(|_, n| !n.is_empty());
        self
    }

    /// Product of numerators with terms above `cap` dropped. The caller must
    /// make sure each factor was itself computed far enough for the cap.
    pub fn mul(&self, other: &EtaQuotient, cap: Exponent) -> EtaQuotient {
        let mut out = EtaQuotient::zero();
        for (ma, na) in &self.parts {
            for (mb, nb) in &other.parts {
                let b_terms: Vec<_> = nb.terms().collect();
                for (za, qa, ca) in na.terms() {
                    for (zb, qb, cb) in &b_terms {
                        let q = qa + qb;
                        if q > cap {
                            break;
                        }
                        out.add_term(ma + mb, za + zb, q, ca * *cb);
                    }
                }
            }
        }
        out
    }

    /// Expand `N_m eta^m` into a series, exact up to `q_cutoff` and within the window.
    pub fn expand(&self, q_cutoff: Exponent, window: Option<Exponent>) -> Result<BiSeries> {
        let mut out = BiSeries::new(q_cutoff);
        if let Some(w) = window {
            out = out.with_window(w);
        }
        for (m, n) in &self.parts {
            if *m < -24 {
                return Err(Error::ExponentOverflow(alloc::format!("eta power {m}")));
            }
            let lead = Exponent::new(*m as i64, 24);
            let Some(lowest) = n.min_q() else { continue };
            let span = (q_cutoff - lead - lowest).floor();
            if span < Exponent::zero() {
                continue;
            }
            let n_max = span
                .to_integer()
                .to_usize()
                .ok_or_else(|| Error::ExponentOverflow(alloc::format!("{span}")))?;
            let coeffs = crate::num::euler_power_coefficients(*m, n_max);
            for (z, q, c) in n.terms() {
                if window.is_some_and(|w| z.abs() > w) {
                    continue;
                }
                let base = q + lead;
                for (j, a) in coeffs.iter().enumerate() {
                    let e = base + Exponent::from_integer(j as i64);
                    if e > q_cutoff {
                        break;
                    }
                    if a.is_zero() {
                        continue;
                    }
                    out.add_term(z, e, QuadNumber::rational(Rational::from_integer(c * a)));
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{eta_power, exponent};

    #[test]
    fn expansion_of_a_bare_eta_power() {
        let e = EtaQuotient::monomial(exponent(0, 1), exponent(0, 1), BigInt::from(1), -1);
        let s = e.expand(exponent(5, 1), None).unwrap();
        assert!(s.agrees_with(&eta_power(-1, exponent(5, 1))));
        assert_eq!(s.len(), 6);
    }

    #[test]
    fn cancellation_removes_terms() {
        let mut e = EtaQuotient::monomial(exponent(1, 1), exponent(1, 2), BigInt::from(2), -2);
        e.add_term(-2, exponent(1, 1), exponent(1, 2), BigInt::from(-2));
        assert!(e.is_zero());
    }

    #[test]
    fn product_respects_cap() {
        let mut a = EtaQuotient::zero();
        a.add_term(-1, exponent(0, 1), exponent(0, 1), BigInt::from(1));
        a.add_term(-1, exponent(0, 1), exponent(1, 1), BigInt::from(1));
        let mut b = EtaQuotient::zero();
        b.add_term(-1, exponent(1, 1), exponent(0, 1), BigInt::from(1));
        b.add_term(-1, exponent(1, 1), exponent(1, 1), BigInt::from(-1));
        // (1 + q)(1 - q) z = z - z q^2
        let p = a.mul(&b, exponent(3, 1));
        assert_eq!(p.len(), 2);
        let p = a.mul(&b, exponent(1, 1));
        assert_eq!(p.len(), 1);
    }
}
