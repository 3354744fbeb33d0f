use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::contract::{factorial_q, pair_contraction, w_factor_vs_vertex, z_factor_vs_vertex};
use super::field::{merge_monomials, Factor, FieldExpr, Monomial};
use super::lattice::{cocycle, integral_pairing, Dir, LatticeVector};
use crate::error::{Error, Result};
use crate::num::QuadNumber;

/// `A(z)B(w) = Σ_n C_n(w) (z-w)^n`, exact for every `n <= regular_cutoff`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpeExpansion {
    coeffs: BTreeMap<i64, FieldExpr>,
    regular_cutoff: i64,
}

impl OpeExpansion {
    pub fn regular_cutoff(&self) -> i64 {
        self.regular_cutoff
    }

    /// Coefficient of `(z-w)^n`.
    pub fn coeff(&self, n: i64) -> Result<FieldExpr> {
        if n > self.regular_cutoff {
            return Err(Error::OrderUnavailable {
                requested: n,
                available: self.regular_cutoff,
            });
        }
        Ok(self.coeffs.get(&n).cloned().unwrap_or_default())
    }

    /// Coefficient of `(z-w)^{-k}`, i.e. the pole of order `k`.
    pub fn pole(&self, k: i64) -> FieldExpr {
        self.coeffs.get(&-k).cloned().unwrap_or_default()
    }

    /// Nonzero entries in increasing exponent.
    pub fn entries(&self) -> impl Iterator<Item = (i64, &FieldExpr)> {
        self.coeffs.iter().map(|(n, c)| (*n, c))
    }

    /// Nonzero singular entries.
    pub fn singular(&self) -> impl Iterator<Item = (i64, &FieldExpr)> {
        self.entries().filter(|(n, _)| *n < 0)
    }

    pub fn is_regular(&self) -> bool {
        self.singular().next().is_none()
    }

    /// Highest pole order present, or 0 when regular.
    pub fn max_pole(&self) -> i64 {
        self.coeffs.keys().next().map_or(0, |n| (-n).max(0))
    }
}

impl fmt::Display for OpeExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0 + O((z-w)^{})", self.regular_cutoff + 1);
        }
        for (n, c) in &self.coeffs {
            writeln!(f, "(z-w)^{n}: {c}")?;
        }
        write!(f, "+ O((z-w)^{})", self.regular_cutoff + 1)
    }
}

type Slice = BTreeMap<Monomial, QuadNumber>;

/// Polynomial in `x = z-w` with field-monomial coefficients, degrees `0..len`.
#[derive(Clone, Debug)]
struct Poly(Vec<Slice>);

fn slice_add(s: &mut Slice, m: Monomial, c: QuadNumber) {
    if c.is_zero() {
        return;
    }
    use alloc::collections::btree_map::Entry;
    match s.entry(m) {
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

impl Poly {
    fn one() -> Self {
        let mut s = Slice::new();
        s.insert(Vec::new(), QuadNumber::one());
        Poly(vec![s])
    }

    fn mul(&self, other: &Poly, max_deg: usize) -> Poly {
        let len = (self.0.len() + other.0.len() - 1).min(max_deg + 1);
        let mut out = vec![Slice::new(); len];
        for (i, a) in self.0.iter().enumerate() {
            if i >= len || a.is_empty() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                for (ma, ca) in a {
                    for (mb, cb) in b {
                        slice_add(&mut out[i + j], merge_monomials(ma, mb), ca * cb);
                    }
                }
            }
        }
        Poly(out)
    }
}

/// Taylor coefficients of `exp(Σ_{k>=1} x^k/k! a·∂^kβ)`, grown on demand.
struct ExpSeries {
    a: LatticeVector,
    s: Vec<Slice>,
}

impl ExpSeries {
    fn new(a: LatticeVector) -> Self {
        ExpSeries {
            a,
            s: Poly::one().0,
        }
    }

    // G_k = (a₊ ∂^kβ₊ + a₋ ∂^kβ₋)/k!
    fn g(&self, k: usize) -> Vec<(Factor, QuadNumber)> {
        let inv = factorial_q(k as u32).inv().unwrap();
        [Dir::Plus, Dir::Minus]
            .into_iter()
            .filter(|d| !self.a.component(*d).is_zero())
            .map(|d| (Factor::new(d, k as u32), self.a.component(d) * &inv))
            .collect()
    }

    // d S_d = Σ_{k=1}^{d} k G_k S_{d-k}
    fn ensure(&mut self, max_deg: usize) {
        while self.s.len() <= max_deg {
            let d = self.s.len();
            let mut next = Slice::new();
            for k in 1..=d {
                let weight = QuadNumber::from_int(k as i64);
                for (fac, gc) in self.g(k) {
                    let gc = &gc * &weight;
                    for (m, c) in &self.s[d - k] {
                        slice_add(&mut next, merge_monomials(m, &[fac]), &gc * c);
                    }
                }
            }
            let inv_d = QuadNumber::from_int(d as i64).inv().unwrap();
            for c in next.values_mut() {
                *c = &*c * &inv_d;
            }
            self.s.push(next);
        }
    }

    fn poly(&mut self, max_deg: usize) -> Poly {
        self.ensure(max_deg);
        Poly(self.s[..=max_deg].to_vec())
    }
}

/// One multiplicand of the Wick expansion, with its lowest power of `x`.
enum Piece {
    /// `∂^m β(z)` Taylor expanded at `w`, plus its contraction `S x^{-m}` with the
    /// exponential at `w`.
    ZFactor {
        fac: Factor,
        s: QuadNumber,
    },
    /// `∂^n β(w)` plus its contraction `R x^{-n}` with the exponential at `z`.
    WFactor {
        fac: Factor,
        r: QuadNumber,
    },
    Exp,
}

impl Piece {
    fn min_deg(&self) -> i64 {
        match self {
            Piece::ZFactor { fac, s } if !s.is_zero() => -(fac.order as i64),
            Piece::WFactor { fac, r } if !r.is_zero() => -(fac.order as i64),
            _ => 0,
        }
    }

    // shifted so that index 0 is the lowest power
    fn poly(&self, max_deg: usize, exp: &mut ExpSeries) -> Poly {
        match self {
            Piece::ZFactor { fac, s } => {
                let off = if s.is_zero() { 0 } else { fac.order as usize };
                let mut out = vec![Slice::new(); max_deg + 1];
                if off > 0 {
                    slice_add(&mut out[0], Vec::new(), s.clone());
                }
                for k in 0..=max_deg.saturating_sub(off) {
                    if off + k > max_deg {
                        break;
                    }
                    let inv = factorial_q(k as u32).inv().unwrap();
                    let raised = Factor::new(fac.dir, fac.order + k as u32);
                    slice_add(&mut out[off + k], vec![raised], inv);
                }
                Poly(out)
            }
            Piece::WFactor { fac, r } => {
                if r.is_zero() {
                    let mut s = Slice::new();
                    s.insert(vec![*fac], QuadNumber::one());
                    return Poly(vec![s]);
                }
                let n = fac.order as usize;
                let mut out = vec![Slice::new(); n.min(max_deg) + 1];
                slice_add(&mut out[0], Vec::new(), r.clone());
                if n <= max_deg {
                    slice_add(&mut out[n], vec![*fac], QuadNumber::one());
                }
                Poly(out)
            }
            Piece::Exp => exp.poly(max_deg),
        }
    }
}

struct TermPair<'a> {
    a: &'a LatticeVector,
    fa: &'a [Factor],
    b: &'a LatticeVector,
    fb: &'a [Factor],
    coeff: QuadNumber,
    base: i64,
    cutoff: i64,
}

impl TermPair<'_> {
    fn expand(&self, exp: &mut ExpSeries, out: &mut BTreeMap<i64, FieldExpr>) {
        let mut matched = vec![None; self.fa.len()];
        let mut used = vec![false; self.fb.len()];
        self.walk(0, &mut matched, &mut used, exp, out);
    }

    // enumerate partial matchings between the z factors and the w factors
    fn walk(
        &self,
        i: usize,
        matched: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        exp: &mut ExpSeries,
        out: &mut BTreeMap<i64, FieldExpr>,
    ) {
        if i == self.fa.len() {
            self.emit(matched, used, exp, out);
            return;
        }
        self.walk(i + 1, matched, used, exp, out);
        for j in 0..self.fb.len() {
            if used[j] || pair_contraction(self.fa[i], self.fb[j]).is_none() {
                continue;
            }
            used[j] = true;
            matched[i] = Some(j);
            self.walk(i + 1, matched, used, exp, out);
            matched[i] = None;
            used[j] = false;
        }
    }

    fn emit(
        &self,
        matched: &[Option<usize>],
        used: &[bool],
        exp: &mut ExpSeries,
        out: &mut BTreeMap<i64, FieldExpr>,
    ) {
        let mut scalar = self.coeff.clone();
        let mut shift = self.base;
        let mut pieces = Vec::new();
        for (i, m) in matched.iter().enumerate() {
            match m {
                Some(j) => {
                    let (c, pole) = pair_contraction(self.fa[i], self.fb[*j]).unwrap();
                    scalar = &scalar * &c;
                    shift -= pole as i64;
                }
                None => pieces.push(Piece::ZFactor {
                    fac: self.fa[i],
                    s: z_factor_vs_vertex(self.fa[i], self.b),
                }),
            }
        }
        for (j, u) in used.iter().enumerate() {
            if !u {
                pieces.push(Piece::WFactor {
                    fac: self.fb[j],
                    r: w_factor_vs_vertex(self.a, self.fb[j]),
                });
            }
        }
        if !self.a.is_zero() {
            pieces.push(Piece::Exp);
        }
        let lowest = shift + pieces.iter().map(Piece::min_deg).sum::<i64>();
        let budget = self.cutoff - lowest;
        if budget < 0 {
            return;
        }
        let budget = budget as usize;
        let mut acc = Poly::one();
        for piece in &pieces {
            acc = acc.mul(&piece.poly(budget, exp), budget);
        }
        let momentum = self.a.add(self.b);
        for (d, slice) in acc.0.into_iter().enumerate() {
            if slice.is_empty() {
                continue;
            }
            let entry = out.entry(lowest + d as i64).or_default();
            for (mono, c) in slice {
                entry.add_term(&c * &scalar, momentum.clone(), mono);
            }
        }
    }
}

/// Operator product expansion `A(z)B(w)`, exact through `(z-w)^regular_cutoff`.
///
/// Every pair of momenta must have integral pairing; the first violation is
/// reported. Vertex operators with momenta in D include the lattice cocycle.
pub fn ope(a: &FieldExpr, b: &FieldExpr, regular_cutoff: i64) -> Result<OpeExpansion> {
    let mut out: BTreeMap<i64, FieldExpr> = BTreeMap::new();
    let mut exps: BTreeMap<LatticeVector, ExpSeries> = BTreeMap::new();
    for (ca, ma, fa) in a.terms() {
        for (cb, mb, fb) in b.terms() {
            let base = integral_pairing(ma, mb)?;
            let exp = exps
                .entry(ma.clone())
                .or_insert_with(|| ExpSeries::new(ma.clone()));
            TermPair {
                a: ma,
                fa,
                b: mb,
                fb,
                coeff: (ca * cb).scale(&crate::num::int(cocycle(ma, mb))),
                base,
                cutoff: regular_cutoff,
            }
            .expand(exp, &mut out);
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(OpeExpansion {
        coeffs: out,
        regular_cutoff,
    })
}

/// `:AB:`, the order-zero coefficient of the OPE.
pub fn normal_order(a: &FieldExpr, b: &FieldExpr) -> Result<FieldExpr> {
    ope(a, b, 0)?.coeff(0)
}

/// `A_n B`, the coefficient of `(z-w)^{-n-1}`.
pub fn mode_coefficient(a: &FieldExpr, n: i64, b: &FieldExpr) -> Result<FieldExpr> {
    let order = -n - 1;
    ope(a, b, order.max(0))?.coeff(order)
}

/// Residue of `:e^{charge·β(z)}: F(w)`, i.e. the action of `∮ :e^{charge·β}:`.
pub fn screening_apply(charge: &LatticeVector, f: &FieldExpr) -> Result<FieldExpr> {
    mode_coefficient(&FieldExpr::vertex(charge.clone()), 0, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;
    use crate::ope::lattice::Alphas;

    fn db(dir: Dir, n: u32) -> FieldExpr {
        FieldExpr::boson(dir, n)
    }

    #[test]
    fn boson_two_point() {
        let o = ope(&db(Dir::Plus, 1), &db(Dir::Plus, 1), 0).unwrap();
        assert_eq!(o.pole(2), FieldExpr::constant(QuadNumber::one()));
        assert!(o.pole(1).is_zero());
        let sq = FieldExpr::term(
            QuadNumber::one(),
            LatticeVector::zero(),
            vec![Factor::new(Dir::Plus, 1), Factor::new(Dir::Plus, 1)],
        );
        assert_eq!(o.coeff(0).unwrap(), sq);
        let o = ope(&db(Dir::Minus, 1), &db(Dir::Minus, 1), 0).unwrap();
        assert_eq!(o.pole(2), FieldExpr::constant(QuadNumber::from_int(-1)));
    }

    #[test]
    fn vertex_pair() {
        let al = Alphas::new(3);
        let a = LatticeVector::plus_only(al.plus.clone());
        let b = LatticeVector::plus_only(-&al.plus);
        // <a,b> = -6: e^{aβ(z)} e^{bβ(w)} = (z-w)^{-6} (1 + x a∂β + ...)
        // times the cocycle ε(a,b) = (-1)^p = -1
        let o = ope(&FieldExpr::vertex(a.clone()), &FieldExpr::vertex(b), 0).unwrap();
        let o = OpeExpansion {
            coeffs: o.coeffs.iter().map(|(k, v)| (*k, v.neg())).collect(),
            regular_cutoff: o.regular_cutoff,
        };
        assert_eq!(o.max_pole(), 6);
        assert_eq!(o.pole(6), FieldExpr::constant(QuadNumber::one()));
        assert_eq!(o.pole(5), db(Dir::Plus, 1).scale(&al.plus));
        // pole 4: (a∂²β/2 + a²(∂β)²/2)
        let want = db(Dir::Plus, 2)
            .scale(&al.plus.scale(&rat(1, 2)))
            .add(&FieldExpr::term(
                QuadNumber::from_int(3),
                LatticeVector::zero(),
                vec![Factor::new(Dir::Plus, 1), Factor::new(Dir::Plus, 1)],
            ));
        assert_eq!(o.pole(4), want);
    }

    #[test]
    fn factor_against_vertex() {
        let al = Alphas::new(2);
        let b = LatticeVector::plus_only(al.plus.clone());
        // ∂β₊(z) e^{bβ(w)} ~ b₊/(z-w) e^{bβ(w)}
        let o = ope(&db(Dir::Plus, 1), &FieldExpr::vertex(b.clone()), 0).unwrap();
        assert_eq!(o.pole(1), FieldExpr::vertex(b.clone()).scale(&al.plus));
        // e^{bβ(z)} ∂β₊(w) ~ -b₊/(z-w) e^{bβ(w)}
        let o = ope(&FieldExpr::vertex(b.clone()), &db(Dir::Plus, 1), 0).unwrap();
        assert_eq!(o.pole(1), FieldExpr::vertex(b).scale(&-&al.plus));
    }

    #[test]
    fn non_integer_pairing_is_rejected() {
        let al = Alphas::new(3);
        let v = FieldExpr::vertex(LatticeVector::plus_only(al.plus.scale(&rat(1, 2))));
        assert!(matches!(
            ope(&v, &v, 0),
            Err(Error::NonIntegerExponent { .. })
        ));
    }

    #[test]
    fn order_beyond_cutoff() {
        let o = ope(&db(Dir::Plus, 1), &db(Dir::Plus, 1), 1).unwrap();
        assert!(o.coeff(1).is_ok());
        assert_eq!(
            o.coeff(2),
            Err(Error::OrderUnavailable {
                requested: 2,
                available: 1
            })
        );
    }
}
