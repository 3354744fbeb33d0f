use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::lattice::{fmt_alpha, Dir, LatticeVector, Momentum};
use crate::num::{QuadNumber, Rational};

/// `∂^order β_dir`, with `order >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub dir: Dir,
    pub order: u32,
}

impl Factor {
    pub fn new(dir: Dir, order: u32) -> Self {
        assert!(
            order >= 1,
            "a bare boson is not a field of the lattice algebra"
        );
        Factor { dir, order }
    }

    pub fn raised(self) -> Self {
        Factor {
            order: self.order + 1,
            ..self
        }
    }
}

fn superscript(n: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    alloc::format!("{n}")
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap() as usize])
        .collect()
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == 1 {
            write!(f, "∂{}", self.dir.symbol())
        } else {
            write!(f, "∂{}{}", superscript(self.order), self.dir.symbol())
        }
    }
}

/// Sorted multiset of boson factors.
pub type Monomial = Vec<Factor>;

pub(crate) fn merge_monomials(a: &[Factor], b: &[Factor]) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// One normally ordered term `coeff :e^{momentum·β} Π factors:`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldTerm {
    pub coeff: QuadNumber,
    pub momentum: LatticeVector,
    pub factors: Monomial,
}

impl FieldTerm {
    /// Conformal weight with respect to the stress tensor with background charge
    /// `α₀` along `β₊`, i.e. `<a,a>/2 - α₀ a₊/2 + Σ orders`.
    pub fn weight(&self, alpha_zero: &QuadNumber) -> QuadNumber {
        let a = &self.momentum;
        let half = crate::num::rat(1, 2);
        let norm = super::lattice::pairing(a, a).scale(&half);
        let bg = (alpha_zero * &a.plus).scale(&half);
        let orders: i64 = self.factors.iter().map(|f| f.order as i64).sum();
        &(&norm - &bg) + &QuadNumber::from_int(orders)
    }
}

/// A finite sum of normally ordered terms; like terms merged, zeros removed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FieldExpr {
    terms: BTreeMap<(LatticeVector, Monomial), QuadNumber>,
}

impl FieldExpr {
    pub fn zero() -> Self {
        FieldExpr::default()
    }

    /// `c :e^{momentum·β} Π factors:` as a single-term expression.
    pub fn term(coeff: QuadNumber, momentum: LatticeVector, mut factors: Monomial) -> Self {
        factors.sort();
        let mut e = FieldExpr::zero();
        e.add_term(coeff, momentum, factors);
        e
    }

    /// `:e^{momentum·β}:`
    pub fn vertex(momentum: LatticeVector) -> Self {
        Self::term(QuadNumber::one(), momentum, Vec::new())
    }

    /// `∂^order β_dir`
    pub fn boson(dir: Dir, order: u32) -> Self {
        Self::term(
            QuadNumber::one(),
            LatticeVector::zero(),
            alloc::vec![Factor::new(dir, order)],
        )
    }

    /// The identity field times `c`.
    pub fn constant(c: QuadNumber) -> Self {
        Self::term(c, LatticeVector::zero(), Vec::new())
    }

    /// Adds a term; `factors` must already be sorted.
    pub fn add_term(&mut self, coeff: QuadNumber, momentum: LatticeVector, factors: Monomial) {
        debug_assert!(factors.windows(2).all(|w| w[0] <= w[1]));
        if coeff.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry((momentum, factors)) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&QuadNumber, &LatticeVector, &Monomial)> {
        self.terms.iter().map(|((m, f), c)| (c, m, f))
    }

    pub fn to_terms(&self) -> Vec<FieldTerm> {
        self.terms()
            .map(|(c, m, f)| FieldTerm {
                coeff: c.clone(),
                momentum: m.clone(),
                factors: f.clone(),
            })
            .collect()
    }

    /// Coefficient of the identity field.
    pub fn constant_part(&self) -> QuadNumber {
        self.terms
            .get(&(LatticeVector::zero(), Vec::new()))
            .cloned()
            .unwrap_or_else(QuadNumber::zero)
    }

    /// True if the expression is a multiple of the identity field.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|(m, f)| m.is_zero() && f.is_empty())
    }

    pub fn add(&self, other: &FieldExpr) -> FieldExpr {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &FieldExpr) {
        for ((m, f), c) in &other.terms {
            self.add_term(c.clone(), m.clone(), f.clone());
        }
    }

    pub fn sub(&self, other: &FieldExpr) -> FieldExpr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FieldExpr {
        self.scale(&QuadNumber::from_int(-1))
    }

    pub fn scale(&self, c: &QuadNumber) -> FieldExpr {
        if c.is_zero() {
            return FieldExpr::zero();
        }
        FieldExpr {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn scale_rat(&self, r: &Rational) -> FieldExpr {
        self.scale(&QuadNumber::rational(r.clone()))
    }

    /// `∂` of the field: the exponential contributes `(a·∂β)`, each factor is raised.
    pub fn derivative(&self) -> FieldExpr {
        let mut out = FieldExpr::zero();
        for ((m, f), c) in &self.terms {
            for dir in [Dir::Plus, Dir::Minus] {
                let a = m.component(dir);
                if a.is_zero() {
                    continue;
                }
                let factors = merge_monomials(f, &[Factor::new(dir, 1)]);
                out.add_term(c * a, m.clone(), factors);
            }
            for i in 0..f.len() {
                // raising equal factors separately counts multiplicity correctly
                let mut g = f.clone();
                g[i] = g[i].raised();
                g.sort();
                out.add_term(c.clone(), m.clone(), g);
            }
        }
        out
    }

    pub fn derivative_n(&self, n: u32) -> FieldExpr {
        let mut out = self.clone();
        for _ in 0..n {
            out = out.derivative();
        }
        out
    }

    /// Distinct momenta occurring.
    pub fn momenta(&self) -> Vec<LatticeVector> {
        let mut v: Vec<LatticeVector> = self.terms.keys().map(|(m, _)| m.clone()).collect();
        v.dedup();
        v
    }

    /// If `self = c·other` for a scalar `c`, returns `c`.
    pub fn ratio_to(&self, other: &FieldExpr) -> Option<QuadNumber> {
        if other.is_zero() {
            return self.is_zero().then(QuadNumber::zero);
        }
        let (key, c_other) = other.terms.iter().next()?;
        let c_self = self
            .terms
            .get(key)
            .cloned()
            .unwrap_or_else(QuadNumber::zero);
        let ratio = c_self.checked_div(c_other).ok()?;
        (other.scale(&ratio) == *self).then_some(ratio)
    }
}

impl fmt::Display for FieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((m, fs), c)) in self.terms.iter().enumerate() {
            let mut coeff = fmt_alpha(c);
            let negative = coeff.starts_with('-');
            if negative {
                coeff.remove(0);
            }
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            let bare = m.is_zero() && fs.is_empty();
            if coeff != "1" || bare {
                write!(f, "{coeff}")?;
                if !bare {
                    write!(f, " ")?;
                }
            }
            if bare {
                continue;
            }
            let single = m.is_zero() && fs.len() == 1;
            if !single {
                write!(f, ":")?;
            }
            if !m.is_zero() {
                write!(f, "e^{{{}}}", Momentum(m))?;
            }
            // highest derivatives first, β₊ before β₋
            let mut shown = fs.clone();
            shown.sort_by(|a, b| a.dir.cmp(&b.dir).then(b.order.cmp(&a.order)));
            for fac in &shown {
                write!(f, "{fac}")?;
            }
            if !single {
                write!(f, ":")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;
    use crate::ope::lattice::Alphas;

    #[test]
    fn derivative_of_vertex() {
        let al = Alphas::new(3);
        let m = LatticeVector::plus_only(-&al.plus);
        let d = FieldExpr::vertex(m.clone()).derivative();
        let want = FieldExpr::term(-&al.plus, m, alloc::vec![Factor::new(Dir::Plus, 1)]);
        assert_eq!(d, want);
    }

    #[test]
    fn derivative_of_square() {
        // ∂ :∂β∂β: = 2 :∂²β∂β:
        let sq = FieldExpr::term(
            QuadNumber::one(),
            LatticeVector::zero(),
            alloc::vec![Factor::new(Dir::Plus, 1), Factor::new(Dir::Plus, 1)],
        );
        let want = FieldExpr::term(
            QuadNumber::from_int(2),
            LatticeVector::zero(),
            alloc::vec![Factor::new(Dir::Plus, 1), Factor::new(Dir::Plus, 2)],
        );
        assert_eq!(sq.derivative(), want);
    }

    #[test]
    fn like_terms_cancel() {
        let e = FieldExpr::boson(Dir::Minus, 2);
        assert!(e.sub(&e).is_zero());
        assert_eq!(
            e.scale_rat(&rat(3, 1)).ratio_to(&e),
            Some(QuadNumber::from_int(3))
        );
    }

    #[test]
    fn display() {
        let al = Alphas::new(3);
        let t = FieldExpr::term(
            QuadNumber::rational(rat(1, 2)),
            LatticeVector::zero(),
            alloc::vec![Factor::new(Dir::Plus, 1), Factor::new(Dir::Plus, 1)],
        )
        .add(&FieldExpr::boson(Dir::Plus, 2).scale(&al.zero.scale(&rat(1, 2))));
        assert_eq!(alloc::format!("{t}"), "1/2 :∂β₊∂β₊: + α₊/3 ∂²β₊");
        let h = FieldExpr::boson(Dir::Minus, 1).scale(&al.minus);
        assert_eq!(alloc::format!("{h}"), "-α₊/3 ∂β₋");
    }
}
