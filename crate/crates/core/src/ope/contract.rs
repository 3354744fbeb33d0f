//! Wick contraction kernels. Every sign and factorial of the OPE lives here.

use num_bigint::BigInt;

use super::field::Factor;
use super::lattice::LatticeVector;
use crate::num::{QuadNumber, Rational};

pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * k)
}

pub(crate) fn factorial_q(n: u32) -> QuadNumber {
    QuadNumber::rational(Rational::from_integer(factorial(n)))
}

fn sign(k: u32) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Contraction of `∂^m β_i(z)` with `∂^n β_j(w)`:
/// `ε_ij ∂_z^m ∂_w^n log(z-w) = ε_ij (-1)^{m+1} (m+n-1)! (z-w)^{-(m+n)}`.
///
/// Returns the coefficient and the pole order `m+n`, or `None` when the two
/// bosons are orthogonal.
pub fn pair_contraction(at_z: Factor, at_w: Factor) -> Option<(QuadNumber, u32)> {
    if at_z.dir != at_w.dir {
        return None;
    }
    let (m, n) = (at_z.order, at_w.order);
    let c = factorial_q(m + n - 1).scale(&Rational::from_integer(BigInt::from(
        at_z.dir.norm() * sign(m + 1),
    )));
    Some((c, m + n))
}

/// Contraction of `∂^m β_i(z)` with `:e^{b·β(w)}:`:
/// `<e_i, b> ∂_z^m log(z-w) = <e_i, b> (-1)^{m+1} (m-1)! (z-w)^{-m}`.
pub fn z_factor_vs_vertex(at_z: Factor, b: &LatticeVector) -> QuadNumber {
    let m = at_z.order;
    &b.pair_dir(at_z.dir)
        * &factorial_q(m - 1).scale(&Rational::from_integer(BigInt::from(sign(m + 1))))
}

/// Contraction of `:e^{a·β(z)}:` with `∂^n β_j(w)`:
/// `<a, e_j> ∂_w^n log(z-w) = -<a, e_j> (n-1)! (z-w)^{-n}`.
pub fn w_factor_vs_vertex(a: &LatticeVector, at_w: Factor) -> QuadNumber {
    -&(&a.pair_dir(at_w.dir) * &factorial_q(at_w.order - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;
    use crate::ope::lattice::{Alphas, Dir};

    // c (z-w)^k, differentiated by hand
    #[derive(Clone, Copy, Debug, PartialEq)]
    struct Pow {
        c: i64,
        k: i64,
    }

    fn dz(p: Pow) -> Pow {
        Pow {
            c: p.c * p.k,
            k: p.k - 1,
        }
    }

    fn dw(p: Pow) -> Pow {
        Pow {
            c: -p.c * p.k,
            k: p.k - 1,
        }
    }

    // ∂_z^m ∂_w^n log(z-w) for m, n >= 1 (at least one derivative removes the log)
    fn log_derivative(m: u32, n: u32) -> Pow {
        // ∂_w log(z-w) = -(z-w)^{-1}
        let mut p = Pow { c: -1, k: -1 };
        for _ in 1..n {
            p = dw(p);
        }
        for _ in 0..m {
            p = dz(p);
        }
        p
    }

    #[test]
    fn pair_kernel_against_hand_derivatives() {
        for m in 1..=3 {
            for n in 1..=3 {
                let want = log_derivative(m, n);
                for dir in [Dir::Plus, Dir::Minus] {
                    let (c, pole) =
                        pair_contraction(Factor::new(dir, m), Factor::new(dir, n)).unwrap();
                    assert_eq!(-(pole as i64), want.k);
                    assert_eq!(c, QuadNumber::from_int(want.c * dir.norm()), "m={m} n={n}");
                }
            }
        }
        assert!(pair_contraction(Factor::new(Dir::Plus, 1), Factor::new(Dir::Minus, 1)).is_none());
    }

    #[test]
    fn explicit_small_cases() {
        let pp =
            |m, n| pair_contraction(Factor::new(Dir::Plus, m), Factor::new(Dir::Plus, n)).unwrap();
        assert_eq!(pp(1, 1), (QuadNumber::from_int(1), 2));
        assert_eq!(pp(1, 2), (QuadNumber::from_int(2), 3));
        assert_eq!(pp(2, 1), (QuadNumber::from_int(-2), 3));
        assert_eq!(pp(3, 3), (QuadNumber::from_int(120), 6));
        let mm = pair_contraction(Factor::new(Dir::Minus, 2), Factor::new(Dir::Minus, 2)).unwrap();
        assert_eq!(mm, (QuadNumber::from_int(6), 4));
    }

    #[test]
    fn vertex_kernels() {
        let al = Alphas::new(3);
        let b = LatticeVector::new(al.plus.clone(), al.minus.clone());
        for m in 1..=3u32 {
            // ∂_z^m log(z-w) = (-1)^{m+1}(m-1)! (z-w)^{-m}
            let mut p = Pow { c: 1, k: -1 };
            for _ in 1..m {
                p = dz(p);
            }
            let zc = z_factor_vs_vertex(Factor::new(Dir::Plus, m), &b);
            assert_eq!(zc, al.plus.scale(&rat(p.c, 1)));
            let zc = z_factor_vs_vertex(Factor::new(Dir::Minus, m), &b);
            assert_eq!(zc, al.minus.scale(&rat(-p.c, 1)));

            let mut p = Pow { c: -1, k: -1 };
            for _ in 1..m {
                p = dw(p);
            }
            let wc = w_factor_vs_vertex(&b, Factor::new(Dir::Plus, m));
            assert_eq!(wc, al.plus.scale(&rat(p.c, 1)));
            let wc = w_factor_vs_vertex(&b, Factor::new(Dir::Minus, m));
            assert_eq!(wc, al.minus.scale(&rat(-p.c, 1)));
        }
    }
}
