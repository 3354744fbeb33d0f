use alloc::string::String;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::num::{int, rat, QuadNumber, Rational};

/// One of the two free bosons: `β₊` (norm +1) or `β₋` (norm -1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    Plus,
    Minus,
}

impl Dir {
    /// Norm of the boson, i.e. the coefficient of `log(z-w)` in its self-OPE.
    pub fn norm(self) -> i64 {
        match self {
            Dir::Plus => 1,
            Dir::Minus => -1,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Dir::Plus => "β₊",
            Dir::Minus => "β₋",
        }
    }
}

/// The screening parameters `α₊ = sqrt(2p)`, `α₋ = -sqrt(2/p)` and `α₀ = α₊ + α₋`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphas {
    pub p: u32,
    pub plus: QuadNumber,
    pub minus: QuadNumber,
    pub zero: QuadNumber,
}

impl Alphas {
    pub fn new(p: u32) -> Self {
        assert!(p >= 2, "p must be at least 2");
        let plus = QuadNumber::sqrt_2p(p);
        let minus = plus.scale(&rat(-1, p as i64));
        let zero = &plus + &minus;
        Alphas {
            p,
            plus,
            minus,
            zero,
        }
    }

    /// `α_{r,s} = (1-r)/2 α₊ + (1-s)/2 α₋`.
    pub fn alpha_rs(&self, r: i64, s: i64) -> QuadNumber {
        &self.plus.scale(&rat(1 - r, 2)) + &self.minus.scale(&rat(1 - s, 2))
    }
}

/// A momentum `c₊ β₊ + c₋ β₋` in the rank two lattice.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector {
    pub plus: QuadNumber,
    pub minus: QuadNumber,
}

impl LatticeVector {
    pub fn new(plus: QuadNumber, minus: QuadNumber) -> Self {
        LatticeVector { plus, minus }
    }

    pub fn zero() -> Self {
        Self::new(QuadNumber::zero(), QuadNumber::zero())
    }

    pub fn plus_only(c: QuadNumber) -> Self {
        Self::new(c, QuadNumber::zero())
    }

    pub fn minus_only(c: QuadNumber) -> Self {
        Self::new(QuadNumber::zero(), c)
    }

    pub fn is_zero(&self) -> bool {
        self.plus.is_zero() && self.minus.is_zero()
    }

    pub fn component(&self, dir: Dir) -> &QuadNumber {
        match dir {
            Dir::Plus => &self.plus,
            Dir::Minus => &self.minus,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.plus + &other.plus, &self.minus + &other.minus)
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.plus, -&self.minus)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(self.plus.scale(r), self.minus.scale(r))
    }

    /// Pairing of this momentum with the unit vector of `dir`.
    pub fn pair_dir(&self, dir: Dir) -> QuadNumber {
        self.component(dir).scale(&int(dir.norm()))
    }
}

/// `<a, b> = a₊b₊ - a₋b₋`.
pub fn pairing(a: &LatticeVector, b: &LatticeVector) -> QuadNumber {
    &(&a.plus * &b.plus) - &(&a.minus * &b.minus)
}

/// The pairing as an integer, or the multivaluedness error.
pub fn integral_pairing(a: &LatticeVector, b: &LatticeVector) -> Result<i64> {
    let pr = pairing(a, b);
    pr.to_integer()
        .and_then(|n| i64::try_from(n).ok())
        .ok_or_else(|| Error::NonIntegerExponent {
            left: alloc::format!("{}", Momentum(a)),
            right: alloc::format!("{}", Momentum(b)),
            pairing: alloc::format!("{pr}"),
        })
}

/// Coordinates `(m, n)` of `a = m α₊β₊ + n γ_e` with `γ_e = -α₊(β₊-β₋)/2`,
/// when `a` lies in the lattice D spanned by these two vectors.
pub fn d_lattice_coords(a: &LatticeVector) -> Option<(i64, i64)> {
    if a.is_zero() {
        return Some((0, 0));
    }
    let p = a.plus.p().or(a.minus.p())?;
    let alpha = QuadNumber::sqrt_2p(p);
    let to_int = |q: QuadNumber| q.to_integer().and_then(|n| i64::try_from(n).ok());
    let m = to_int((&a.plus + &a.minus).checked_div(&alpha).ok()?)?;
    let n = to_int(a.minus.scale(&int(2)).checked_div(&alpha).ok()?)?;
    Some((m, n))
}

/// Lattice cocycle `ε(a, b)` on D, bimultiplicative with
/// `ε(u,u) = ε(u,γ_e) = (-1)^p`, `ε(γ_e,u) = ε(γ_e,γ_e) = 1` for `u = α₊β₊`.
///
/// It satisfies `ε(a,b)/ε(b,a) = (-1)^{<a,b> + <a,a><b,b>}` and
/// `ε(a,a) = (-1)^{<a,a>/2}`. Momenta outside D (the `Q₋` screening current)
/// carry no cocycle.
pub fn cocycle(a: &LatticeVector, b: &LatticeVector) -> i64 {
    let (Some((m1, _)), Some((m2, n2))) = (d_lattice_coords(a), d_lattice_coords(b)) else {
        return 1;
    };
    let p = a.plus.p().or(a.minus.p()).unwrap_or(0) as i64;
    if (p * (m1 * m2 + m1 * n2)).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Writes a field-coefficient with `sqrt(2p)` shown as `α₊`.
pub(crate) fn fmt_alpha(q: &QuadNumber) -> String {
    let r = q.rat();
    let i = q.irr();
    let irr_part = |i: &Rational, leading: bool| -> String {
        let sign = if i.is_negative() {
            "-"
        } else if leading {
            ""
        } else {
            "+"
        };
        let a = i.abs();
        let num = a.numer();
        let den = a.denom();
        let n = if num.is_one() {
            String::new()
        } else {
            alloc::format!("{num}")
        };
        let d = if den.is_one() {
            String::new()
        } else {
            alloc::format!("/{den}")
        };
        if leading {
            alloc::format!("{sign}{n}α₊{d}")
        } else {
            alloc::format!(" {sign} {n}α₊{d}")
        }
    };
    match (r.is_zero(), i.is_zero()) {
        (_, true) => alloc::format!("{r}"),
        (true, false) => irr_part(i, true),
        (false, false) => alloc::format!("({r}{})", irr_part(i, false)),
    }
}

/// Display adaptor for momenta, e.g. `-α₊(β₊-β₋)/2`.
pub struct Momentum<'a>(pub &'a LatticeVector);

impl fmt::Display for Momentum<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.0;
        if v.is_zero() {
            return write!(f, "0");
        }
        let pure = v.plus.rat().is_zero() && v.minus.rat().is_zero();
        if pure && !v.plus.is_zero() && v.plus.irr().abs() == v.minus.irr().abs() {
            let c = v.plus.irr();
            let inner = if v.plus == v.minus {
                "β₊+β₋"
            } else {
                "β₊-β₋"
            };
            let sign = if c.is_negative() { "-" } else { "" };
            let a = c.abs();
            let num = if a.numer().is_one() {
                String::new()
            } else {
                alloc::format!("{}", a.numer())
            };
            let den = if a.denom().is_one() {
                String::new()
            } else {
                alloc::format!("/{}", a.denom())
            };
            return write!(f, "{sign}{num}α₊({inner}){den}");
        }
        let mut first = true;
        for dir in [Dir::Plus, Dir::Minus] {
            let c = v.component(dir);
            if c.is_zero() {
                continue;
            }
            let s = fmt_alpha(c);
            let s = match s.as_str() {
                "1" => String::new(),
                "-1" => String::from("-"),
                _ => s,
            };
            if !first && !s.starts_with('-') {
                write!(f, "+")?;
            }
            write!(f, "{s}{}", dir.symbol())?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma_e(al: &Alphas) -> LatticeVector {
        let h = al.plus.scale(&rat(1, 2));
        LatticeVector::new(-&h, h)
    }

    fn gamma_f0(al: &Alphas) -> LatticeVector {
        let h = al.plus.scale(&rat(-1, 2));
        LatticeVector::new(h.clone(), h)
    }

    #[test]
    fn pairings() {
        for p in 2..7 {
            let al = Alphas::new(p);
            assert!(pairing(&gamma_e(&al), &gamma_e(&al)).is_zero());
            assert_eq!(
                pairing(&gamma_e(&al), &gamma_f0(&al)),
                QuadNumber::from_int(p as i64)
            );
            let a = LatticeVector::plus_only(al.minus.clone());
            let b = LatticeVector::minus_only(al.plus.clone());
            assert!(pairing(&a, &b).is_zero());
        }
    }

    #[test]
    fn integrality() {
        let al = Alphas::new(3);
        let half = LatticeVector::plus_only(al.plus.scale(&rat(1, 4)));
        assert!(matches!(
            integral_pairing(&half, &half),
            Err(Error::NonIntegerExponent { .. })
        ));
        let q = LatticeVector::plus_only(al.plus.clone());
        assert_eq!(integral_pairing(&q, &q), Ok(6));
    }

    #[test]
    fn alpha_rs_values() {
        let al = Alphas::new(3);
        assert!(al.alpha_rs(1, 1).is_zero());
        assert_eq!(al.alpha_rs(0, 0), al.zero.scale(&rat(1, 2)));
        // α₋ · α_{r,1} = r - 1
        for r in -3..4 {
            assert_eq!(&al.minus * &al.alpha_rs(r, 1), QuadNumber::from_int(r - 1));
        }
    }

    #[test]
    fn cocycle_conditions() {
        for p in 2..7 {
            let al = Alphas::new(p);
            let u = LatticeVector::plus_only(al.plus.clone());
            let g = gamma_e(&al);
            let basis = [u, g];
            let mut vecs = alloc::vec::Vec::new();
            for m in -2..=2i64 {
                for n in -2..=2i64 {
                    let v = basis[0].scale(&int(m)).add(&basis[1].scale(&int(n)));
                    assert_eq!(d_lattice_coords(&v), Some((m, n)));
                    vecs.push(v);
                }
            }
            for a in &vecs {
                let aa = integral_pairing(a, a).unwrap();
                assert_eq!(cocycle(a, a), if (aa / 2) % 2 == 0 { 1 } else { -1 });
                for b in &vecs {
                    let ab = integral_pairing(a, b).unwrap();
                    let bb = integral_pairing(b, b).unwrap();
                    let want = if (ab + aa * bb).rem_euclid(2) == 0 {
                        1
                    } else {
                        -1
                    };
                    assert_eq!(cocycle(a, b) * cocycle(b, a), want);
                }
            }
            let q_minus = LatticeVector::plus_only(al.minus.clone());
            assert_eq!(d_lattice_coords(&q_minus), None);
        }
    }

    #[test]
    fn momentum_display() {
        let al = Alphas::new(3);
        assert_eq!(
            alloc::format!("{}", Momentum(&gamma_e(&al))),
            "-α₊(β₊-β₋)/2"
        );
        assert_eq!(
            alloc::format!("{}", Momentum(&gamma_f0(&al))),
            "-α₊(β₊+β₋)/2"
        );
        let w = LatticeVector::plus_only(-&al.plus);
        assert_eq!(alloc::format!("{}", Momentum(&w)), "-α₊β₊");
    }
}
