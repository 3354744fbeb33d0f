use alloc::vec;
use alloc::vec::Vec;

use super::contract::factorial;
use super::expand::screening_apply;
use super::field::{Factor, FieldExpr};
use super::lattice::{Alphas, Dir, LatticeVector};
use crate::error::Result;
use crate::num::{rat, QuadNumber, Rational};

/// The fields T, T′, W⁻, W⁰, W⁺, e, h, f of the rank two lattice algebra.
#[derive(Clone, Debug)]
pub struct Generators {
    pub alphas: Alphas,
    pub t: FieldExpr,
    pub t_prime: FieldExpr,
    pub w_minus: FieldExpr,
    pub w_zero: FieldExpr,
    pub w_plus: FieldExpr,
    pub e: FieldExpr,
    pub h: FieldExpr,
    pub f: FieldExpr,
}

impl Generators {
    pub fn p(&self) -> u32 {
        self.alphas.p
    }

    pub fn named(&self) -> Vec<(&'static str, &FieldExpr)> {
        vec![
            ("T", &self.t),
            ("T'", &self.t_prime),
            ("W-", &self.w_minus),
            ("W0", &self.w_zero),
            ("W+", &self.w_plus),
            ("e", &self.e),
            ("h", &self.h),
            ("f", &self.f),
        ]
    }

    pub fn get(&self, name: &str) -> Option<&FieldExpr> {
        self.named()
            .into_iter()
            .find(|(n, _)| *n == name)
            .map(|(_, f)| f)
    }

    /// Momentum `α₊β₊` of `Q₊`.
    pub fn q_plus(&self) -> LatticeVector {
        LatticeVector::plus_only(self.alphas.plus.clone())
    }

    /// Momentum `α₋β₊` of `Q₋`.
    pub fn q_minus(&self) -> LatticeVector {
        LatticeVector::plus_only(self.alphas.minus.clone())
    }

    /// `-α₊(β₊ - β₋)/2`, the momentum of e.
    pub fn gamma_e(&self) -> LatticeVector {
        let h = self.alphas.plus.scale(&rat(1, 2));
        LatticeVector::new(-&h, h)
    }

    /// `-α₊(β₊ + β₋)/2`, the momentum that Q₊ maps to f.
    pub fn gamma_f0(&self) -> LatticeVector {
        let h = self.alphas.plus.scale(&rat(-1, 2));
        LatticeVector::new(h.clone(), h)
    }
}

pub(crate) fn square(dir: Dir) -> FieldExpr {
    FieldExpr::term(
        QuadNumber::one(),
        LatticeVector::zero(),
        vec![Factor::new(dir, 1), Factor::new(dir, 1)],
    )
}

pub fn make_generators(p: u32) -> Result<Generators> {
    let alphas = Alphas::new(p);
    let half = rat(1, 2);
    let background = FieldExpr::boson(Dir::Plus, 2).scale(&alphas.zero.scale(&half));
    let t_prime = square(Dir::Plus).scale_rat(&half).add(&background);
    let t = t_prime.sub(&square(Dir::Minus).scale_rat(&half));

    let q_plus = LatticeVector::plus_only(alphas.plus.clone());
    let w_minus = FieldExpr::vertex(LatticeVector::plus_only(-&alphas.plus));
    let w_zero = screening_apply(&q_plus, &w_minus)?;
    let w_plus = screening_apply(&q_plus, &w_zero)?;

    let h_plus = alphas.plus.scale(&half);
    let e = FieldExpr::vertex(LatticeVector::new(-&h_plus, h_plus.clone()));
    let h = FieldExpr::boson(Dir::Minus, 1).scale(&alphas.minus);
    let sign = if p.is_multiple_of(2) { 1 } else { -1 };
    let prefactor = Rational::from_integer(factorial(p - 1) * sign)
        / Rational::from_integer(num_bigint::BigInt::from(p).pow(p - 1));
    let f0 = FieldExpr::vertex(LatticeVector::new(-&h_plus, -&h_plus));
    let f = screening_apply(&q_plus, &f0)?.scale_rat(&prefactor);

    Ok(Generators {
        alphas,
        t,
        t_prime,
        w_minus,
        w_zero,
        w_plus,
        e,
        h,
        f,
    })
}
