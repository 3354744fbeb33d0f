use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use super::contract::{factorial, factorial_q};
use super::expand::{mode_coefficient, normal_order, ope, screening_apply, OpeExpansion};
use super::field::{Factor, FieldExpr};
use super::generators::{make_generators, Generators};
use super::lattice::{Dir, LatticeVector};
use crate::error::{Error, Result};
use crate::num::{int, rat, QuadNumber, Rational};

/// One line of a check report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckEntry {
    pub label: String,
    pub passed: bool,
    pub expected: String,
    pub actual: String,
}

impl CheckEntry {
    pub fn new(
        label: impl Into<String>,
        passed: bool,
        expected: impl ToString,
        actual: impl ToString,
    ) -> Self {
        CheckEntry {
            label: label.into(),
            passed,
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }

    fn fields(label: impl Into<String>, expected: &FieldExpr, actual: &FieldExpr) -> Self {
        Self::new(label, expected == actual, expected, actual)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub p: u32,
    pub entries: Vec<CheckEntry>,
}

impl Report {
    pub fn new(title: impl Into<String>, p: u32) -> Self {
        Report {
            title: title.into(),
            p,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, e: CheckEntry) {
        self.entries.push(e);
    }

    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| !e.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (p = {})", self.title, self.p)?;
        for e in &self.entries {
            let status = if e.passed { "match" } else { "MISMATCH" };
            writeln!(f, "  [{status}] {}", e.label)?;
            if !e.passed {
                writeln!(f, "      expected: {}", e.expected)?;
                writeln!(f, "      actual:   {}", e.actual)?;
            }
        }
        Ok(())
    }
}

/// Central charge of a Virasoro field, read from `T(z)T(w)`.
///
/// Requires pole 4 constant, pole 3 zero, pole 2 equal to `2T` and pole 1
/// equal to `∂T`.
pub fn virasoro_central_charge(t: &FieldExpr) -> Result<QuadNumber> {
    let o = ope(t, t, 0)?;
    if o.max_pole() > 4 {
        return Err(Error::NotVirasoro(alloc::format!(
            "pole of order {}",
            o.max_pole()
        )));
    }
    let p4 = o.pole(4);
    if !p4.is_constant() {
        return Err(Error::NotVirasoro(alloc::format!(
            "pole 4 is not a constant: {p4}"
        )));
    }
    if !o.pole(3).is_zero() {
        return Err(Error::NotVirasoro(alloc::format!(
            "pole 3 is {}",
            o.pole(3)
        )));
    }
    if o.pole(2) != t.scale(&QuadNumber::from_int(2)) {
        return Err(Error::NotVirasoro(alloc::format!(
            "pole 2 is {}",
            o.pole(2)
        )));
    }
    if o.pole(1) != t.derivative() {
        return Err(Error::NotVirasoro(alloc::format!(
            "pole 1 is {}",
            o.pole(1)
        )));
    }
    Ok(p4.constant_part().scale(&int(2)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimaryCheck {
    pub is_primary: bool,
    pub weight: Option<QuadNumber>,
}

/// `T(z)F(w) ~ h F/(z-w)² + ∂F/(z-w)` with no higher poles.
pub fn primary_check(t: &FieldExpr, f: &FieldExpr) -> Result<PrimaryCheck> {
    let o = ope(t, f, 0)?;
    let not = PrimaryCheck {
        is_primary: false,
        weight: None,
    };
    if o.max_pole() > 2 || o.pole(1) != f.derivative() {
        return Ok(not);
    }
    Ok(match o.pole(2).ratio_to(f) {
        Some(h) if !f.is_zero() => PrimaryCheck {
            is_primary: true,
            weight: Some(h),
        },
        _ => not,
    })
}

pub fn check_null(f: &FieldExpr) -> bool {
    f.is_zero()
}

fn rpow(p: u32, e: i64) -> Rational {
    let base = Rational::from_integer(BigInt::from(p));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base, (-e) as usize).recip()
    }
}

fn sign(p: u32) -> i64 {
    if p.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn fact(n: u32) -> Rational {
    Rational::from_integer(factorial(n))
}

/// Normally ordered composites used by several checks.
pub struct Composites {
    pub hh: FieldExpr,
    pub hhh: FieldExpr,
    pub dh_h: FieldExpr,
    pub l_prime: FieldExpr,
    pub h_lprime: FieldExpr,
}

impl Composites {
    pub fn new(g: &Generators) -> Result<Self> {
        let p = g.p();
        let hh = normal_order(&g.h, &g.h)?;
        let hhh = normal_order(&g.h, &hh)?;
        let dh_h = normal_order(&g.h.derivative(), &g.h)?;
        let l_prime = g.t.add(&hh.scale_rat(&rat(p as i64, 4)));
        let h_lprime = normal_order(&g.h, &l_prime)?;
        Ok(Composites {
            hh,
            hhh,
            dh_h,
            l_prime,
            h_lprime,
        })
    }
}

/// Expected `e(z)f(w)` coefficients at exponents `1-p ..= 4-p`, with the
/// dimension three field sent to zero. The last entry is the bracket that
/// multiplies the order `4-p` prefactor, returned separately so the `p = 2`
/// field 𝕎 can be extracted.
fn fs_ef_expected(g: &Generators, c: &Composites) -> (Vec<(i64, FieldExpr)>, Rational, FieldExpr) {
    let p = g.p();
    let pi = p as i64;
    let s = sign(p);
    let one = FieldExpr::constant(QuadNumber::one());

    let c1 = int(s) * rpow(p, -(pi - 1)) * fact(2 * p - 2) / fact(p - 1);
    let c2 = rat(-s, 2) * rpow(p, -(pi - 2)) * fact(2 * p - 2) / fact(p - 1);
    let c3 = rat(s, 2) * rpow(p, -(pi - 3)) * fact(2 * p - 4) / fact(p - 2);
    let c4 = int(s) * rpow(p, -(pi - 3)) * fact(2 * p - 4) / fact(p - 1);

    let line3 =
        c.hh.scale_rat(&int(pi - 2))
            .sub(&g.h.derivative().scale_rat(&rat(2 * pi - 3, pi)))
            .sub(&g.t.scale_rat(&rat(2, pi)));
    let cubic = c
        .hhh
        .scale_rat(&rat(-pi, 24))
        .add(&c.dh_h.scale_rat(&rat(1, 4)))
        .sub(&g.h.derivative_n(2).scale_rat(&rat(1, 6 * pi)));
    let line4 = c
        .l_prime
        .derivative()
        .scale_rat(&rat(-(pi - 1), 2 * pi))
        .add(&c.h_lprime.scale_rat(&rat(pi - 1, 2)))
        .add(&cubic.scale_rat(&int((2 * pi - 3) * (pi - 1))));

    let entries = vec![
        (1 - pi, one.scale_rat(&c1)),
        (2 - pi, g.h.scale_rat(&c2)),
        (3 - pi, line3.scale_rat(&c3)),
        (4 - pi, line4.scale_rat(&c4)),
    ];
    (entries, c4, line4)
}

fn singular_entry(label: &str, o: &OpeExpansion, expected: &[(i64, FieldExpr)]) -> CheckEntry {
    let mut want: BTreeMap<i64, FieldExpr> = BTreeMap::new();
    for (n, f) in expected {
        if !f.is_zero() {
            want.insert(*n, f.clone());
        }
    }
    let got: BTreeMap<i64, FieldExpr> = o.singular().map(|(n, f)| (n, f.clone())).collect();
    let render = |m: &BTreeMap<i64, FieldExpr>| {
        if m.is_empty() {
            return String::from("regular");
        }
        m.iter()
            .map(|(n, f)| alloc::format!("[(z-w)^{n}] {f}"))
            .collect::<Vec<_>>()
            .join("; ")
    };
    CheckEntry::new(label, want == got, render(&want), render(&got))
}

fn weight_entry(
    label: &str,
    t: &FieldExpr,
    f: &FieldExpr,
    weight: &QuadNumber,
) -> Result<CheckEntry> {
    let pc = primary_check(t, f)?;
    let actual = match (&pc.is_primary, &pc.weight) {
        (true, Some(w)) => alloc::format!("primary of weight {w}"),
        _ => String::from("not primary"),
    };
    Ok(CheckEntry::new(
        label,
        pc.is_primary && pc.weight.as_ref() == Some(weight),
        alloc::format!("primary of weight {weight}"),
        actual,
    ))
}

/// The two dimension 7/2 combinations that must vanish when the dimension
/// three field maps to zero (`p = 5`).
pub fn null_relations(g: &Generators) -> Result<[FieldExpr; 2]> {
    let p = g.p() as i64;
    let dh = g.h.derivative();
    let rel = |x: &FieldExpr, sgn: i64| -> Result<FieldExpr> {
        Ok(normal_order(&g.h, &x.derivative())?
            .sub(&normal_order(&dh, x)?.scale_rat(&int(2)))
            .add(&x.derivative_n(2).scale_rat(&rat(sgn, p)))
            .sub(&normal_order(&g.t, x)?.scale_rat(&int(sgn))))
    };
    Ok([rel(&g.e, 1)?, rel(&g.f, -1)?])
}

/// The displayed closed form of f for `p = 5`:
/// `-1/5⁴ :e^{α₊(β₊-β₋)/2}(α₊∂⁴β₊ + 4α₊²∂³β₊∂β₊ + 3α₊²∂²β₊∂²β₊ + 6α₊³∂²β₊(∂β₊)² + α₊⁴(∂β₊)⁴):`
pub fn f_closed_form_p5() -> FieldExpr {
    let g = super::lattice::Alphas::new(5);
    let a = g.plus.clone();
    let a2 = &a * &a;
    let a3 = &a2 * &a;
    let a4 = &a3 * &a;
    let half = a.scale(&rat(1, 2));
    let mom = LatticeVector::new(half.clone(), -&half);
    let d = |n| Factor::new(Dir::Plus, n);
    let terms: [(QuadNumber, Vec<Factor>); 5] = [
        (a, vec![d(4)]),
        (a2.scale(&int(4)), vec![d(3), d(1)]),
        (a2.scale(&int(3)), vec![d(2), d(2)]),
        (a3.scale(&int(6)), vec![d(2), d(1), d(1)]),
        (a4, vec![d(1), d(1), d(1), d(1)]),
    ];
    let mut out = FieldExpr::zero();
    for (c, fs) in terms {
        out = out.add(&FieldExpr::term(c, mom.clone(), fs));
    }
    out.scale_rat(&rat(-1, 625))
}

/// Compares every displayed coefficient of the Feigin-Semikhatov OPEs at level
/// `-(p-1)²/p` with the free field OPEs, under `H→h, E→e, F→f, L→T`.
pub fn check_fs_match(p: u32) -> Result<Report> {
    let g = make_generators(p)?;
    let c = Composites::new(&g)?;
    let mut r = Report::new("Feigin-Semikhatov OPE comparison", p);
    let pi = p as i64;

    let c_expected = QuadNumber::rational(int(2) - rat(6 * (pi - 1) * (pi - 1), pi));
    let c_actual = virasoro_central_charge(&g.t);
    r.push(CheckEntry::new(
        "L(z)L(w): Virasoro with c = 2 - 6(p-1)²/p",
        c_actual.as_ref() == Ok(&c_expected),
        &c_expected,
        match &c_actual {
            Ok(c) => c.to_string(),
            Err(e) => e.to_string(),
        },
    ));
    r.push(weight_entry(
        "H primary of dimension 1",
        &g.t,
        &g.h,
        &QuadNumber::one(),
    )?);
    let half_n = QuadNumber::rational(rat(pi - 1, 2));
    r.push(weight_entry(
        "E primary of dimension (p-1)/2",
        &g.t,
        &g.e,
        &half_n,
    )?);
    r.push(weight_entry(
        "F primary of dimension (p-1)/2",
        &g.t,
        &g.f,
        &half_n,
    )?);

    let hh = ope(&g.h, &g.h, 0)?;
    r.push(singular_entry(
        "H(z)H(w) ~ (-2/p)/(z-w)²",
        &hh,
        &[(-2, FieldExpr::constant(QuadNumber::rational(rat(-2, pi))))],
    ));
    let he = ope(&g.h, &g.e, 0)?;
    r.push(singular_entry(
        "H(z)E(w) ~ E(w)/(z-w)",
        &he,
        &[(-1, g.e.clone())],
    ));
    let hf = ope(&g.h, &g.f, 0)?;
    r.push(singular_entry(
        "H(z)F(w) ~ -F(w)/(z-w)",
        &hf,
        &[(-1, g.f.neg())],
    ));
    r.push(singular_entry("E(z)E(w) ~ 0", &ope(&g.e, &g.e, 0)?, &[]));
    r.push(singular_entry("F(z)F(w) ~ 0", &ope(&g.f, &g.f, 0)?, &[]));

    let (expected, c4, line4) = fs_ef_expected(&g, &c);
    let top = 4 - pi;
    let ef = ope(&g.e, &g.f, top.max(0))?;
    for (n, want) in &expected {
        if p == 2 && *n == top {
            continue;
        }
        let got = ef.coeff(*n)?;
        let kind = if *n < 0 { "" } else { " (regular)" };
        r.push(CheckEntry::fields(
            alloc::format!("E(z)F(w) coefficient of (z-w)^{n}{kind}"),
            want,
            &got,
        ));
    }
    let l_matches = c.l_prime == g.t_prime;
    r.push(CheckEntry::new(
        "L' = L + p:HH:/4 maps to T'",
        l_matches,
        &g.t_prime,
        &c.l_prime,
    ));

    if p == 2 {
        // E(z)F(w) at (z-w)^2 is c4 (𝕎 + line4)
        let w = ef.coeff(top)?.scale_rat(&c4.recip()).sub(&line4);
        r.push(CheckEntry::new(
            "𝕎 extracted from (z-w)^2 is nonzero",
            !w.is_zero(),
            "nonzero",
            &w,
        ));
        r.push(weight_entry(
            "𝕎 primary of dimension 3",
            &g.t,
            &w,
            &QuadNumber::from_int(3),
        )?);
    }
    if p == 5 {
        let [ne, nf] = null_relations(&g)?;
        r.push(CheckEntry::fields(
            "W(z)E(w) with W→0: :h∂e: - 2:∂h e: + ∂²e/5 - :Te: = 0",
            &FieldExpr::zero(),
            &ne,
        ));
        r.push(CheckEntry::fields(
            "W(z)F(w) with W→0: :h∂f: - 2:∂h f: - ∂²f/5 + :Tf: = 0",
            &FieldExpr::zero(),
            &nf,
        ));
    }
    Ok(r)
}

/// The `p = 5` null relations and the closed form of f.
pub fn check_null_relations(p: u32) -> Result<Report> {
    let g = make_generators(p)?;
    let mut r = Report::new("null relations", p);
    let [ne, nf] = null_relations(&g)?;
    r.push(CheckEntry::fields(
        ":h∂e: - 2:∂h e: + ∂²e/p - :Te: = 0",
        &FieldExpr::zero(),
        &ne,
    ));
    r.push(CheckEntry::fields(
        ":h∂f: - 2:∂h f: - ∂²f/p + :Tf: = 0",
        &FieldExpr::zero(),
        &nf,
    ));
    if p == 5 {
        r.push(CheckEntry::fields(
            "f equals its explicit p = 5 form",
            &f_closed_form_p5(),
            &g.f,
        ));
    }
    Ok(r)
}

/// `v = 2(-1)^p p^{p-1}/(p-1)! e_{-p-1} f`.
pub fn singlet_vector(g: &Generators) -> Result<FieldExpr> {
    let p = g.p();
    let c = int(2 * sign(p)) * rpow(p, p as i64 - 1) / fact(p - 1);
    Ok(mode_coefficient(&g.e, -(p as i64) - 1, &g.f)?.scale_rat(&c))
}

/// Screening kernel membership of the generators and the singlet argument.
pub fn check_kernel_membership(p: u32) -> Result<Report> {
    let g = make_generators(p)?;
    let mut r = Report::new("screening kernel membership", p);
    let q_minus = g.q_minus();
    let q_plus = g.q_plus();
    for (name, field) in g.named() {
        let img = screening_apply(&q_minus, field)?;
        r.push(CheckEntry::fields(
            alloc::format!("Q₋ {name} = 0"),
            &FieldExpr::zero(),
            &img,
        ));
    }
    for (label, minus) in [("+", false), ("-", true)] {
        let h = g.alphas.plus.scale(&rat(-1, 2));
        let mom = LatticeVector::new(h.clone(), if minus { -&h } else { h });
        let once = screening_apply(&q_plus, &FieldExpr::vertex(mom))?;
        let twice = screening_apply(&q_plus, &once)?;
        r.push(CheckEntry::fields(
            alloc::format!("Q₊² :e^{{-α₊(β₊{label}β₋)/2}}: = 0"),
            &FieldExpr::zero(),
            &twice,
        ));
    }
    r.push(CheckEntry::new(
        "W⁰ = Q₊W⁻ is nonzero",
        !g.w_zero.is_zero(),
        "nonzero",
        &g.w_zero,
    ));
    let v = singlet_vector(&g)?;
    let qv = screening_apply(&q_plus, &v)?;
    let qw = screening_apply(&q_plus, &g.w_zero)?;
    r.push(CheckEntry::fields("Q₊v = Q₊W⁰ for v ∝ e_{-p-1}f", &qw, &qv));
    Ok(r)
}

/// Regularity shadows of the two Howe pair statements.
pub fn check_howe_commutation(p: u32) -> Result<Report> {
    let g = make_generators(p)?;
    let mut r = Report::new("commutant regularity", p);
    let d_minus = FieldExpr::boson(Dir::Minus, 1);
    let lat_plus = FieldExpr::vertex(LatticeVector::minus_only(g.alphas.plus.clone()));
    let lat_minus = FieldExpr::vertex(LatticeVector::minus_only(-&g.alphas.plus));
    let triplet = [
        ("T'", &g.t_prime),
        ("W-", &g.w_minus),
        ("W0", &g.w_zero),
        ("W+", &g.w_plus),
    ];
    let lattice = [
        ("∂β₋", &d_minus),
        (":e^{α₊β₋}:", &lat_plus),
        (":e^{-α₊β₋}:", &lat_minus),
    ];
    for (xn, x) in triplet {
        for (yn, y) in lattice {
            let o = ope(x, y, 0)?;
            r.push(singular_entry(
                &alloc::format!("{xn}(z) {yn}(w) regular"),
                &o,
                &[],
            ));
        }
    }
    for (xn, x) in [("T'", &g.t_prime), ("W0", &g.w_zero)] {
        let o = ope(&d_minus, x, 0)?;
        r.push(singular_entry(
            &alloc::format!("∂β₋(z) {xn}(w) regular"),
            &o,
            &[],
        ));
    }
    Ok(r)
}

/// `B(z)A(w)` coefficients predicted from `A(z)B(w)`:
/// `C'_N = σ Σ_{n+l=N} (-1)^n ∂^l C_n / l!` with exchange sign `σ = (-1)^parity`.
pub fn skew_transform(ab: &OpeExpansion, parity: i64) -> BTreeMap<i64, FieldExpr> {
    let cutoff = ab.regular_cutoff();
    let lowest = -ab.max_pole();
    let sgn = if parity.rem_euclid(2) == 0 { 1 } else { -1 };
    let mut out = BTreeMap::new();
    for big_n in lowest..=cutoff {
        let mut acc = FieldExpr::zero();
        for n in lowest..=big_n {
            let l = (big_n - n) as u32;
            let cn = ab.coeff(n).expect("within cutoff");
            if cn.is_zero() {
                continue;
            }
            let s = if n.rem_euclid(2) == 0 { sgn } else { -sgn };
            let inv = factorial_q(l).inv().expect("nonzero");
            acc = acc.add(&cn.derivative_n(l).scale(&inv).scale_rat(&int(s)));
        }
        if !acc.is_zero() {
            out.insert(big_n, acc);
        }
    }
    out
}

/// First exponent at which `B(z)A(w)` differs from the skew-symmetry
/// prediction, for fields carrying one momentum each.
pub fn skew_symmetry_mismatch(a: &FieldExpr, b: &FieldExpr, cutoff: i64) -> Result<Option<i64>> {
    // exchange sign (-1)^{<a,b>} ε(a,b) ε(b,a); +1 whenever both momenta lie in D
    // and have even norm
    let parity = match (a.momenta().first(), b.momenta().first()) {
        (Some(ma), Some(mb)) => {
            let eps = super::lattice::cocycle(ma, mb) * super::lattice::cocycle(mb, ma);
            super::lattice::integral_pairing(ma, mb)? + if eps < 0 { 1 } else { 0 }
        }
        _ => 0,
    };
    let ab = ope(a, b, cutoff)?;
    let ba = ope(b, a, cutoff)?;
    let predicted = skew_transform(&ab, parity);
    let lowest = -ab.max_pole().max(ba.max_pole());
    for n in lowest..=cutoff {
        let want = predicted.get(&n).cloned().unwrap_or_default();
        if ba.coeff(n)? != want {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// First exponent `N` with `[∂A·B]_N ≠ (N+1)[A·B]_{N+1}`.
pub fn derivative_rule_mismatch(a: &FieldExpr, b: &FieldExpr, cutoff: i64) -> Result<Option<i64>> {
    let ab = ope(a, b, cutoff + 1)?;
    let dab = ope(&a.derivative(), b, cutoff)?;
    let lowest = -(ab.max_pole() + 1);
    for n in lowest..=cutoff {
        let want = ab.coeff(n + 1)?.scale_rat(&int(n + 1));
        if dab.coeff(n)? != want {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Conformal weight expected for a single-momentum field from its leading term.
pub fn expected_weight(g: &Generators, f: &FieldExpr) -> Option<QuadNumber> {
    f.to_terms().first().map(|t| t.weight(&g.alphas.zero))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_rational_power() {
        assert_eq!(rpow(2, -1), rat(1, 2));
        assert_eq!(rpow(3, 0), int(1));
    }
}
