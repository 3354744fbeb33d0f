//! Numerators of the character families. Every builder returns an
//! [`EtaQuotient`] holding all terms with q exponent at most `cap` and
//! `|z| <= window`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::params::ModelParams;
use super::quotient::EtaQuotient;
use crate::error::{Error, Result};
use crate::num::{Exponent, QuadNumber};

/// Guards for the infinite sums over `ℓ` and over spectral flow orbits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SumPolicy {
    /// Consecutive steps the lower bound of new terms may fail to increase.
    pub patience: usize,
    /// Hard limit on the number of steps of any single sum.
    pub max_terms: usize,
}

impl Default for SumPolicy {
    fn default() -> Self {
        SumPolicy {
            patience: 512,
            max_terms: 20_000,
        }
    }
}

/// Numerator truncation: q exponents up to `cap`, `|z|` up to `window`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub cap: Exponent,
    pub window: Exponent,
    pub policy: SumPolicy,
}

impl Truncation {
    pub fn new(cap: Exponent, window: Exponent) -> Self {
        Truncation {
            cap,
            window,
            policy: SumPolicy::default(),
        }
    }

    pub fn with_cap(self, cap: Exponent) -> Self {
        Truncation { cap, ..self }
    }
}

/// Non-generic irreducible sl(2) modules at the two levels of interest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IrrLabel {
    /// Vacuum module (`p = 2` or `p = 3`).
    L0,
    /// `L_1`, `p = 2` only.
    L1,
    /// `L_{-2/3}`, `p = 3` only.
    Lm23,
}

impl IrrLabel {
    pub fn name(self) -> &'static str {
        match self {
            IrrLabel::L0 => "L0",
            IrrLabel::L1 => "L1",
            IrrLabel::Lm23 => "Lm2/3",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "L0" | "0" => Some(IrrLabel::L0),
            "L1" | "1" => Some(IrrLabel::L1),
            "Lm2/3" | "Lm23" | "-2/3" => Some(IrrLabel::Lm23),
            _ => None,
        }
    }

    pub fn check(self, p: u32) -> Result<()> {
        match (self, p) {
            (IrrLabel::L0, 2 | 3) | (IrrLabel::L1, 2) | (IrrLabel::Lm23, 3) => Ok(()),
            _ => Err(Error::LabelOutOfRange(alloc::format!(
                "{} is not an irreducible label at p = {p}",
                self.name()
            ))),
        }
    }

    /// Standard modules `(sign, λ, s)` making up term `ℓ` of `L^s`.
    fn standard_terms(self, p: u32, l: i64, s: i64) -> Vec<(i64, Exponent, i64)> {
        let e = Exponent::new;
        match (p, self) {
            (2, IrrLabel::L0 | IrrLabel::L1) => {
                let lam = if self == IrrLabel::L1 { 1 } else { 0 };
                let sign = if l % 2 == 0 { 1 } else { -1 };
                vec![(sign, e(2 * (lam + l) + 1, 2), 2 * l + s + 1)]
            }
            (3, IrrLabel::L0) => vec![(1, e(-2, 3), 3 * l + s + 1), (-1, e(2, 3), 3 * l + s + 2)],
            (3, IrrLabel::Lm23) => vec![(1, e(2, 3), 3 * l + s + 1), (-1, e(-2, 3), 3 * l + s + 3)],
            _ => Vec::new(),
        }
    }
}

fn one() -> BigInt {
    BigInt::from(1)
}

fn ceil_div(a: Exponent, b: i64) -> i64 {
    (a / b).ceil().to_integer()
}

pub(crate) fn check_rs(
    params: &ModelParams,
    r: i64,
    s: i64,
    r_range: Option<(i64, i64)>,
) -> Result<()> {
    let p = params.p as i64;
    let r_ok = r_range.is_none_or(|(lo, hi)| lo <= r && r <= hi);
    if !(1..=p).contains(&s) || !r_ok {
        return Err(Error::LabelOutOfRange(alloc::format!(
            "(r, s) = ({r}, {s}) at p = {p}"
        )));
    }
    Ok(())
}

/// `q^{(μ-α₀/2)²/2}/η`.
pub(crate) fn fock(params: &ModelParams, mu: &QuadNumber, t: &Truncation) -> Result<EtaQuotient> {
    let e = params.fock_exponent(mu)?;
    Ok(single(Exponent::zero(), e, t))
}

/// `F_μ` with `μ = x/α₀ + α₀/2`, i.e. `q^{-x²/(4k)}/η`.
pub(crate) fn fock_x(params: &ModelParams, x: Exponent, t: &Truncation) -> EtaQuotient {
    single(Exponent::zero(), -params.heis_exponent(x), t)
}

fn single(z: Exponent, q: Exponent, t: &Truncation) -> EtaQuotient {
    if q > t.cap || z.abs() > t.window {
        return EtaQuotient::zero();
    }
    EtaQuotient::monomial(z, q, one(), -1)
}

/// Singlet module `M_{r,s}`; for `r <= 0` the character of `M_{2-r,s}`.
pub(crate) fn singlet(params: &ModelParams, r: i64, s: i64, t: &Truncation) -> Result<EtaQuotient> {
    check_rs(params, r, s, None)?;
    let r = if r <= 0 { 2 - r } else { r };
    let p = params.p as i64;
    if s == p {
        return Ok(single(Exponent::zero(), params.rs_exponent(r, p), t));
    }
    let mut out = EtaQuotient::zero();
    for n in 0.. {
        let j = r + 2 * n;
        let lo = params.rs_exponent(j, s);
        if lo > t.cap {
            break;
        }
        out.add_term(-1, Exponent::zero(), lo, one());
        let hi = params.rs_exponent(j, -s);
        if hi <= t.cap {
            out.add_term(-1, Exponent::zero(), hi, -one());
        }
    }
    Ok(out)
}

/// Triplet module `W_{r,s}`, `r ∈ {1, 2}`.
pub(crate) fn triplet(params: &ModelParams, r: i64, s: i64, t: &Truncation) -> Result<EtaQuotient> {
    check_rs(params, r, s, Some((1, 2)))?;
    let mut out = EtaQuotient::zero();
    for n in 0.. {
        let j = 2 * n + r;
        let lo = params.rs_exponent(j, s);
        if lo > t.cap {
            break;
        }
        out.add_term(-1, Exponent::zero(), lo, BigInt::from(j));
        let hi = params.rs_exponent(j, -s);
        if hi <= t.cap {
            out.add_term(-1, Exponent::zero(), hi, -BigInt::from(j));
        }
    }
    Ok(out)
}

/// `𝒱_{[α_{r,s}]} = Σ_n F_{α_{r,s} + nα₊} = Σ_n F_{α_{r-2n,s}}`.
pub(crate) fn lattice_v(params: &ModelParams, r: i64, s: i64, t: &Truncation) -> EtaQuotient {
    let p = params.p as i64;
    let mut out = EtaQuotient::zero();
    if t.cap < Exponent::zero() {
        return out;
    }
    // (jp - s)² <= 4p cap bounds |j|
    let bound = (t.cap * 4 * p).ceil().to_integer();
    let span = isqrt(bound) + s.abs() + 2;
    let j_max = span / p + 2;
    for j in -j_max..=j_max {
        if (j - r).rem_euclid(2) != 0 {
            continue;
        }
        let e = params.rs_exponent(j, s);
        if e <= t.cap {
            out.add_term(-1, Exponent::zero(), e, one());
        }
    }
    out
}

fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        0
    } else {
        num_integer::Roots::sqrt(&n)
    }
}

/// Lorentzian Heisenberg module `z^λ q^{λ²/(4k)}/η`.
pub(crate) fn heis(params: &ModelParams, lambda: Exponent, t: &Truncation) -> EtaQuotient {
    single(lambda, params.heis_exponent(lambda), t)
}

/// `𝖵_{[x]} = Σ_m 𝖥_{2(p-1)m + x}`.
pub(crate) fn lattice_vminus(params: &ModelParams, x: Exponent, t: &Truncation) -> EtaQuotient {
    let step = 2 * (params.p as i64 - 1);
    let mut out = EtaQuotient::zero();
    let m_lo = ceil_div(-t.window - x, step);
    let mut m = m_lo;
    loop {
        let lam = x + Exponent::from_integer(step * m);
        if lam > t.window {
            break;
        }
        out = out.add(&heis(params, lam, t));
        m += 1;
    }
    out
}

/// Rigorous lower bound for the q exponents of `T^s` inside the window:
/// `s a/2 - k s²/4 >= -k s²/4 - |s| W/2`.
fn standard_lower_bound(params: &ModelParams, s: i64, window: Exponent) -> Exponent {
    let s_e = Exponent::from_integer(s);
    -params.k_exp() * s_e * s_e / 4 - s_e.abs() * window / 2
}

/// Standard module `T_λ^s`: `η^{-2} Σ_n z^{2n+λ+ks} q^{s(2n+λ+ks/2)/2}`.
pub(crate) fn standard(
    params: &ModelParams,
    lambda: Exponent,
    s: i64,
    t: &Truncation,
) -> EtaQuotient {
    let k = params.k_exp();
    let s_e = Exponent::from_integer(s);
    let a0 = lambda + k * s_e;
    let mut out = EtaQuotient::zero();
    if standard_lower_bound(params, s, t.window) > t.cap {
        return out;
    }
    let mut a = a0 + Exponent::from_integer(2 * ceil_div(-t.window - a0, 2));
    let q_shift = -k * s_e * s_e / 4;
    while a <= t.window {
        let q = s_e * a / 2 + q_shift;
        if q <= t.cap {
            out.add_term(-2, a, q, one());
        }
        a += Exponent::from_integer(2);
    }
    out
}

/// Irreducible `L^s` as the alternating sum of standard modules, summed until
/// the lower bound of new terms exceeds the cap and keeps increasing.
pub(crate) fn irreducible(
    params: &ModelParams,
    label: IrrLabel,
    s: i64,
    t: &Truncation,
) -> Result<EtaQuotient> {
    label.check(params.p)?;
    let mut out = EtaQuotient::zero();
    let mut prev: Option<Exponent> = None;
    let mut stall = 0usize;
    for l in 0.. {
        if l as usize > t.policy.max_terms {
            return Err(Error::NonTerminating(alloc::format!(
                "{}^{s}: more than {} terms",
                label.name(),
                t.policy.max_terms
            )));
        }
        let mut lb: Option<Exponent> = None;
        for (sign, lam, sp) in label.standard_terms(params.p, l, s) {
            out.add_scaled(&standard(params, lam, sp, t), sign);
            let b = standard_lower_bound(params, sp, t.window);
            lb = Some(lb.map_or(b, |x: Exponent| x.min(b)));
        }
        let lb = lb.expect("every label has terms");
        if let Some(pb) = prev {
            if lb > pb {
                if lb > t.cap {
                    break;
                }
                stall = 0;
            } else {
                stall += 1;
                if stall > t.policy.patience {
                    return Err(Error::NonTerminating(alloc::format!(
                        "{}^{s}: lower bound failed to increase for {stall} consecutive terms",
                        label.name()
                    )));
                }
            }
        }
        prev = Some(lb);
    }
    Ok(out)
}

/// `Σ_{t ∈ Z} f(t)` where `f(t)` vanishes outside a finite interval around 0.
/// `f` returns the term and whether it lies entirely above the cap; each
/// direction stops after two consecutive such terms.
pub(crate) fn two_sided<F>(mut f: F, policy: &SumPolicy, what: &str) -> Result<EtaQuotient>
where
    F: FnMut(i64) -> Result<(EtaQuotient, bool)>,
{
    let mut out = f(0)?.0;
    for dir in [1i64, -1] {
        let mut exhausted = 0;
        let mut t = dir;
        while exhausted < 2 {
            if t.unsigned_abs() as usize > policy.max_terms {
                return Err(Error::NonTerminating(alloc::format!(
                    "{what}: more than {} steps",
                    policy.max_terms
                )));
            }
            let (term, above) = f(t)?;
            if above {
                exhausted += 1;
            } else {
                exhausted = 0;
            }
            out = out.add(&term);
            t += dir;
        }
    }
    Ok(out)
}

pub(crate) fn standard_orbit(
    params: &ModelParams,
    lambda: Exponent,
    r: i64,
    step: i64,
    t: &Truncation,
) -> Result<EtaQuotient> {
    two_sided(
        |i| {
            let s = r + step * i;
            let above = standard_lower_bound(params, s, t.window) > t.cap;
            Ok((standard(params, lambda, s, t), above))
        },
        &t.policy,
        "standard orbit",
    )
}

pub(crate) fn irreducible_orbit(
    params: &ModelParams,
    label: IrrLabel,
    r: i64,
    step: i64,
    t: &Truncation,
) -> Result<EtaQuotient> {
    two_sided(
        |i| {
            let e = irreducible(params, label, r + step * i, t)?;
            let above = e.is_zero();
            Ok((e, above))
        },
        &t.policy,
        "irreducible orbit",
    )
}

/// `Σ_{k ∈ Z} M_{2k+r,s}`.
pub(crate) fn singlet_sum(
    params: &ModelParams,
    r: i64,
    s: i64,
    t: &Truncation,
) -> Result<EtaQuotient> {
    two_sided(
        |k| {
            let e = singlet(params, 2 * k + r, s, t)?;
            let above = e.is_zero();
            Ok((e, above))
        },
        &t.policy,
        "singlet sum",
    )
}

/// Spectral flow of weights: `h₀ ↦ h₀ + sk`, `L₀ ↦ L₀ + (s/2)h₀ + (s²/4)k`.
pub fn flow_weights(
    h0: &crate::num::Rational,
    l0: &crate::num::Rational,
    s: i64,
    k: &crate::num::Rational,
) -> (crate::num::Rational, crate::num::Rational) {
    let s_r = crate::num::int(s);
    let h = h0 + &s_r * k;
    let l = l0 + &s_r * h0 / crate::num::int(2) + &s_r * &s_r * k / crate::num::int(4);
    (h, l)
}

/// Largest magnitude coefficient, for diagnostics.
pub fn max_coefficient(e: &EtaQuotient) -> i64 {
    e.parts()
        .flat_map(|(_, n)| {
            n.terms()
                .map(|(_, _, c)| c.abs().to_i64().unwrap_or(i64::MAX))
        })
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{exponent, rat};

    fn tr(cap: i64, w: i64) -> Truncation {
        Truncation::new(exponent(cap, 1), exponent(w, 1))
    }

    #[test]
    fn singlet_and_triplet_shapes() {
        let m = ModelParams::new(2).unwrap();
        let s = singlet(&m, 1, 1, &tr(10, 0)).unwrap();
        // q^{1/8} - q^{9/8} + q^{25/8} - q^{49/8}
        assert_eq!(s.len(), 4);
        assert_eq!(s.min_q(), Some(exponent(1, 8)));
        assert_eq!(
            singlet(&m, 0, 1, &tr(10, 0)).unwrap(),
            singlet(&m, 2, 1, &tr(10, 0)).unwrap()
        );
        assert!(singlet(&m, 1, 3, &tr(10, 0)).is_err());
        assert!(triplet(&m, 3, 1, &tr(10, 0)).is_err());
    }

    #[test]
    fn standard_window_and_bound() {
        let m = ModelParams::new(2).unwrap();
        let t = standard(&m, exponent(1, 2), 1, &tr(50, 4));
        for (_, n) in t.parts() {
            for (z, q, _) in n.terms() {
                assert!(z.abs() <= exponent(4, 1));
                assert!(q >= standard_lower_bound(&m, 1, exponent(4, 1)));
            }
        }
        // z exponents 2n + 1/2 - 1/2 = 2n
        assert_eq!(t.len(), 5);
    }

    #[test]
    fn flow_examples() {
        assert_eq!(
            flow_weights(&rat(2, 1), &rat(1, 1), 4, &rat(-1, 2)),
            (rat(0, 1), rat(3, 1))
        );
        assert_eq!(
            flow_weights(&rat(4, 1), &rat(2, 1), 3, &rat(-4, 3)),
            (rat(0, 1), rat(5, 1))
        );
        assert_eq!(
            flow_weights(&rat(7, 3), &rat(1, 5), 0, &rat(-4, 3)),
            (rat(7, 3), rat(1, 5))
        );
    }

    #[test]
    fn irreducible_guard_fires_with_no_patience() {
        let m = ModelParams::new(2).unwrap();
        let mut t = tr(5, 10);
        t.policy.patience = 0;
        // starts far on the decreasing side, so the bound falls for a while
        assert!(matches!(
            irreducible(&m, IrrLabel::L0, -60, &t),
            Err(Error::NonTerminating(_))
        ));
        assert!(irreducible(&m, IrrLabel::L0, -60, &tr(5, 10)).is_ok());
        assert!(irreducible(&m, IrrLabel::Lm23, 0, &t).is_err());
    }
}
