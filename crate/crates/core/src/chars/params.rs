use crate::error::{Error, Result};
use crate::num::{int, rat, rational_to_exponent, Exponent, QuadNumber, Rational};

/// Constants of the (1, p) model and the matching sl(2) level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelParams {
    pub p: u32,
    pub alpha_plus: QuadNumber,
    pub alpha_minus: QuadNumber,
    pub alpha_zero: QuadNumber,
    /// `1 - 6(p-1)²/p`
    pub c_p: Rational,
    /// `-(p-1)²/p`
    pub k: Rational,
}

impl ModelParams {
    pub fn new(p: u32) -> Result<Self> {
        if p < 2 {
            return Err(Error::LabelOutOfRange(alloc::format!(
                "p = {p} (need p >= 2)"
            )));
        }
        let alpha_plus = QuadNumber::sqrt_2p(p);
        let alpha_minus = alpha_plus.scale(&rat(-1, p as i64));
        let alpha_zero = &alpha_plus + &alpha_minus;
        let pi = p as i64;
        Ok(ModelParams {
            p,
            alpha_plus,
            alpha_minus,
            alpha_zero,
            c_p: int(1) - rat(6 * (pi - 1) * (pi - 1), pi),
            k: rat(-(pi - 1) * (pi - 1), pi),
        })
    }

    pub fn k_exp(&self) -> Exponent {
        let pi = self.p as i64;
        Exponent::new(-(pi - 1) * (pi - 1), pi)
    }

    /// `α_{r,s} = (1-r)/2 α₊ + (1-s)/2 α₋`.
    pub fn alpha_rs(&self, r: i64, s: i64) -> QuadNumber {
        &self.alpha_plus.scale(&rat(1 - r, 2)) + &self.alpha_minus.scale(&rat(1 - s, 2))
    }

    /// `h_λ = λ(λ - α₀)/2`.
    pub fn weight(&self, lambda: &QuadNumber) -> QuadNumber {
        (lambda * &(lambda - &self.alpha_zero)).scale(&rat(1, 2))
    }

    /// Leading exponent `(μ - α₀/2)²/2` of the Fock character numerator.
    pub fn fock_exponent(&self, mu: &QuadNumber) -> Result<Exponent> {
        let d = mu - &self.alpha_zero.scale(&rat(1, 2));
        let sq = (&d * &d).scale(&rat(1, 2));
        let r = sq
            .to_rational()
            .ok_or_else(|| Error::IrrationalExponent(alloc::format!("{sq}")))?;
        rational_to_exponent(&r)
    }

    /// `((rp - s)²)/4p`, the exponent of `F_{α_{r,s}}`.
    pub fn rs_exponent(&self, r: i64, s: i64) -> Exponent {
        let pi = self.p as i64;
        let a = r * pi - s;
        Exponent::new(a * a, 4 * pi)
    }

    /// Exponent `λ²/(4k)` of the lorentzian Heisenberg character.
    pub fn heis_exponent(&self, lambda: Exponent) -> Exponent {
        lambda * lambda / (self.k_exp() * 4)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        for p in 2..8 {
            let m = ModelParams::new(p).unwrap();
            assert_eq!(&m.alpha_plus * &m.alpha_minus, QuadNumber::from_int(-2));
            assert_eq!(m.c_p, int(1) - rat(6 * (p as i64 - 1).pow(2), p as i64));
        }
        assert_eq!(ModelParams::new(2).unwrap().k, rat(-1, 2));
        assert_eq!(ModelParams::new(3).unwrap().k, rat(-4, 3));
        assert!(ModelParams::new(1).is_err());
    }

    #[test]
    fn fock_exponents_match_rs_form() {
        for p in 2..6 {
            let m = ModelParams::new(p).unwrap();
            for r in -3..4 {
                for s in -2..=(p as i64) {
                    let a = m.alpha_rs(r, s);
                    assert_eq!(m.fock_exponent(&a).unwrap(), m.rs_exponent(r, s));
                }
            }
        }
    }

    #[test]
    fn vacuum_weight() {
        let m = ModelParams::new(3).unwrap();
        assert!(m.weight(&m.alpha_zero).is_zero());
        assert!(m.weight(&QuadNumber::zero()).is_zero());
    }
}
