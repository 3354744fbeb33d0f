use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use super::families::{self, IrrLabel, Truncation};
use super::params::ModelParams;
use super::quotient::EtaQuotient;
use crate::error::{Error, Result};
use crate::num::{BiSeries, Exponent, QuadNumber};

/// A single module whose character is known in closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CharLabel {
    /// Fock module `𝓕_μ` of the Virasoro free field.
    Fock(QuadNumber),
    /// Singlet module `M_{r,s}`.
    Singlet { r: i64, s: i64 },
    /// Triplet module `W_{r,s}`.
    Triplet { r: i64, s: i64 },
    /// Lattice module `𝒱_{[α_{r,s}]}`.
    LatticeV { r: i64, s: i64 },
    /// Lorentzian lattice module `𝖵_{[x]}`.
    LatticeVminus(Exponent),
    /// Lorentzian Heisenberg module `𝖥_λ`.
    HeisLorentz(Exponent),
    /// Standard sl(2) module `T_λ^s`.
    Standard { lambda: Exponent, s: i64 },
    /// Non-standard irreducible sl(2) module `L^s`.
    IrrAffine { label: IrrLabel, s: i64 },
}

impl CharLabel {
    pub fn is_z_dependent(&self) -> bool {
        matches!(
            self,
            CharLabel::LatticeVminus(_)
                | CharLabel::HeisLorentz(_)
                | CharLabel::Standard { .. }
                | CharLabel::IrrAffine { .. }
        )
    }
}

impl fmt::Display for CharLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharLabel::Fock(mu) => write!(f, "F[{mu}]"),
            CharLabel::Singlet { r, s } => write!(f, "M({r},{s})"),
            CharLabel::Triplet { r, s } => write!(f, "W({r},{s})"),
            CharLabel::LatticeV { r, s } => write!(f, "V[a({r},{s})]"),
            CharLabel::LatticeVminus(x) => write!(f, "V-[{x}]"),
            CharLabel::HeisLorentz(l) => write!(f, "Fh[{l}]"),
            CharLabel::Standard { lambda, s } => write!(f, "T[{lambda}]^{s}"),
            CharLabel::IrrAffine { label, s } => write!(f, "{}^{s}", label.name()),
        }
    }
}

/// `slope * n + offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Affine {
    pub slope: Exponent,
    pub offset: Exponent,
}

impl Affine {
    pub fn new(slope: Exponent, offset: Exponent) -> Self {
        Affine { slope, offset }
    }

    pub fn at(&self, n: i64) -> Exponent {
        self.slope * n + self.offset
    }
}

/// z-free factor multiplying `𝖥` in a branching sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Partner {
    /// `𝓕_μ` with `μ = x/α₀ + α₀/2` and `x` affine in `n`.
    FockX(Affine),
    /// `M_{a n + b, s}`.
    Singlet { slope: i64, offset: i64, s: i64 },
}

/// Construction tree for one side of a character identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recipe {
    Char(CharLabel),
    /// `Σ_t T_λ^{r + step t}`.
    StandardOrbit {
        lambda: Exponent,
        r: i64,
        step: i64,
    },
    /// `Σ_t L^{r + step t}`.
    IrrOrbit {
        label: IrrLabel,
        r: i64,
        step: i64,
    },
    /// `Σ_k M_{2k+r,s}`.
    SingletSum {
        r: i64,
        s: i64,
    },
    /// `Σ_n 𝖥_{heis(n)} · partner(n)`.
    BranchSum {
        heis: Affine,
        partner: Partner,
    },
    /// Integer linear combination.
    Sum(Vec<(i64, Recipe)>),
    Product(Box<Recipe>, Box<Recipe>),
}

impl Recipe {
    pub fn product(a: Recipe, b: Recipe) -> Recipe {
        Recipe::Product(Box::new(a), Box::new(b))
    }

    pub fn sum(parts: impl IntoIterator<Item = Recipe>) -> Recipe {
        Recipe::Sum(parts.into_iter().map(|r| (1, r)).collect())
    }

    pub fn is_z_dependent(&self) -> bool {
        match self {
            Recipe::Char(c) => c.is_z_dependent(),
            Recipe::StandardOrbit { .. } | Recipe::IrrOrbit { .. } | Recipe::BranchSum { .. } => {
                true
            }
            Recipe::SingletSum { .. } => false,
            Recipe::Sum(v) => v.iter().any(|(_, r)| r.is_z_dependent()),
            Recipe::Product(a, b) => a.is_z_dependent() || b.is_z_dependent(),
        }
    }

    /// Lower bound for the q exponents of the numerator within `window`.
    pub(crate) fn lower_bound(&self, params: &ModelParams, window: Exponent) -> Result<Exponent> {
        let wide = -window * window / (params.k_exp().abs() * 4);
        Ok(match self {
            Recipe::Char(c) => match c {
                CharLabel::Fock(mu) => params.fock_exponent(mu)?,
                CharLabel::Singlet { .. }
                | CharLabel::Triplet { .. }
                | CharLabel::LatticeV { .. } => Exponent::zero(),
                CharLabel::HeisLorentz(l) => params.heis_exponent(*l),
                CharLabel::LatticeVminus(_)
                | CharLabel::Standard { .. }
                | CharLabel::IrrAffine { .. } => wide,
            },
            Recipe::SingletSum { .. } => Exponent::zero(),
            Recipe::StandardOrbit { .. } | Recipe::IrrOrbit { .. } | Recipe::BranchSum { .. } => {
                wide
            }
            Recipe::Sum(v) => {
                let mut lb = Exponent::zero();
                for (_, r) in v {
                    lb = lb.min(r.lower_bound(params, window)?);
                }
                lb
            }
            Recipe::Product(a, b) => {
                a.lower_bound(params, window)? + b.lower_bound(params, window)?
            }
        })
    }

    pub(crate) fn eval(&self, params: &ModelParams, t: &Truncation) -> Result<EtaQuotient> {
        match self {
            Recipe::Char(c) => eval_label(c, params, t),
            Recipe::StandardOrbit { lambda, r, step } => {
                families::standard_orbit(params, *lambda, *r, *step, t)
            }
            Recipe::IrrOrbit { label, r, step } => {
                label.check(params.p)?;
                families::irreducible_orbit(params, *label, *r, *step, t)
            }
            Recipe::SingletSum { r, s } => families::singlet_sum(params, *r, *s, t),
            Recipe::BranchSum { heis, partner } => branch_sum(params, heis, partner, t),
            Recipe::Sum(v) => {
                let mut out = EtaQuotient::zero();
                for (c, r) in v {
                    out.add_scaled(&r.eval(params, t)?, *c);
                }
                Ok(out)
            }
            Recipe::Product(a, b) => {
                if a.is_z_dependent() && b.is_z_dependent() {
                    return Err(Error::WindowedProduct);
                }
                let lb_a = a.lower_bound(params, t.window)?;
                let lb_b = b.lower_bound(params, t.window)?;
                let ea = a.eval(params, &t.with_cap(t.cap - lb_b))?;
                let eb = b.eval(params, &t.with_cap(t.cap - lb_a))?;
                Ok(ea.mul(&eb, t.cap).truncate(t.cap, t.window))
            }
        }
    }

    /// Expand exactly up to `cutoff`, within `window` when z-dependent.
    pub fn evaluate(
        &self,
        params: &ModelParams,
        cutoff: Exponent,
        window: Exponent,
    ) -> Result<BiSeries> {
        let t = Truncation::new(cutoff + 1, window);
        let e = self.eval(params, &t)?;
        let w = self.is_z_dependent().then_some(window);
        e.expand(cutoff, w)
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::Char(c) => write!(f, "{c}"),
            Recipe::StandardOrbit { lambda, r, step } => {
                write!(f, "sum_t T[{lambda}]^({r}+{step}t)")
            }
            Recipe::IrrOrbit { label, r, step } => {
                write!(f, "sum_t {}^({r}+{step}t)", label.name())
            }
            Recipe::SingletSum { r, s } => write!(f, "sum_k M(2k+{r},{s})"),
            Recipe::BranchSum { heis, partner } => {
                write!(f, "sum_n Fh[{}n+{}]·", heis.slope, heis.offset)?;
                match partner {
                    Partner::FockX(x) => write!(f, "Fx[{}n+{}]", x.slope, x.offset),
                    Partner::Singlet { slope, offset, s } => write!(f, "M({slope}n+{offset},{s})"),
                }
            }
            Recipe::Sum(v) => {
                for (i, (c, r)) in v.iter().enumerate() {
                    let sep = if i == 0 { "" } else { " + " };
                    match c {
                        1 => write!(f, "{sep}{r}")?,
                        _ => write!(f, "{sep}{c}·{r}")?,
                    }
                }
                Ok(())
            }
            Recipe::Product(a, b) => write!(f, "({a})·({b})"),
        }
    }
}

fn eval_label(c: &CharLabel, params: &ModelParams, t: &Truncation) -> Result<EtaQuotient> {
    Ok(match c {
        CharLabel::Fock(mu) => families::fock(params, mu, t)?,
        CharLabel::Singlet { r, s } => {
            families::check_rs(params, *r, *s, Some((1, i64::MAX)))?;
            families::singlet(params, *r, *s, t)?
        }
        CharLabel::Triplet { r, s } => families::triplet(params, *r, *s, t)?,
        CharLabel::LatticeV { r, s } => families::lattice_v(params, *r, *s, t),
        CharLabel::LatticeVminus(x) => families::lattice_vminus(params, *x, t),
        CharLabel::HeisLorentz(l) => families::heis(params, *l, t),
        CharLabel::Standard { lambda, s } => families::standard(params, *lambda, *s, t),
        CharLabel::IrrAffine { label, s } => families::irreducible(params, *label, *s, t)?,
    })
}

fn branch_sum(
    params: &ModelParams,
    heis: &Affine,
    partner: &Partner,
    t: &Truncation,
) -> Result<EtaQuotient> {
    if heis.slope <= Exponent::zero() {
        return Err(Error::LabelOutOfRange(alloc::format!(
            "branch slope {}",
            heis.slope
        )));
    }
    let lo = ((-t.window - heis.offset) / heis.slope).ceil().to_integer();
    let hi = ((t.window - heis.offset) / heis.slope).floor().to_integer();
    let mut out = EtaQuotient::zero();
    for n in lo..=hi {
        let lam = heis.at(n);
        let lb_h = params.heis_exponent(lam);
        let sub = t.with_cap(t.cap - lb_h);
        let other = match partner {
            Partner::FockX(x) => families::fock_x(params, x.at(n), &sub),
            Partner::Singlet { slope, offset, s } => {
                families::singlet(params, slope * n + offset, *s, &sub)?
            }
        };
        if other.is_zero() {
            continue;
        }
        let h = families::heis(
            params,
            lam,
            &t.with_cap(t.cap - other.min_q().unwrap_or_default()),
        );
        out = out.add(&h.mul(&other, t.cap));
    }
    Ok(out)
}

fn cap_of(cutoff: Exponent) -> Exponent {
    cutoff + 1
}

fn expand_label(
    label: &CharLabel,
    params: &ModelParams,
    cutoff: Exponent,
    window: Option<Exponent>,
) -> Result<BiSeries> {
    let w = window.unwrap_or_else(Exponent::zero);
    let e = eval_label(label, params, &Truncation::new(cap_of(cutoff), w))?;
    e.expand(cutoff, window.filter(|_| label.is_z_dependent()))
}

/// `ch 𝓕_μ = q^{(μ-α₀/2)²/2}/η`.
pub fn fock_char(mu: &QuadNumber, params: &ModelParams, cutoff: Exponent) -> Result<BiSeries> {
    expand_label(&CharLabel::Fock(mu.clone()), params, cutoff, None)
}

/// `ch M_{r,s}` for `r >= 1`, `1 <= s <= p`.
pub fn singlet_char(r: i64, s: i64, params: &ModelParams, cutoff: Exponent) -> Result<BiSeries> {
    expand_label(&CharLabel::Singlet { r, s }, params, cutoff, None)
}

/// `ch W_{r,s}` for `r ∈ {1, 2}`, `1 <= s <= p`.
pub fn triplet_char(r: i64, s: i64, params: &ModelParams, cutoff: Exponent) -> Result<BiSeries> {
    expand_label(&CharLabel::Triplet { r, s }, params, cutoff, None)
}

/// Characters of the lattice modules `𝒱_{[α_{r,s}]}` and `𝖵_{[x]}`.
pub fn lattice_char(
    label: &CharLabel,
    params: &ModelParams,
    cutoff: Exponent,
    window: Exponent,
) -> Result<BiSeries> {
    match label {
        CharLabel::LatticeV { .. } | CharLabel::LatticeVminus(_) => {
            expand_label(label, params, cutoff, Some(window))
        }
        other => Err(Error::LabelOutOfRange(alloc::format!(
            "{other} is not a lattice module"
        ))),
    }
}

/// `ch 𝖥_λ = z^λ q^{λ²/(4k)}/η`.
pub fn heis_lorentz_char(
    lambda: Exponent,
    params: &ModelParams,
    cutoff: Exponent,
) -> Result<BiSeries> {
    let t = Truncation::new(cap_of(cutoff), lambda.abs());
    families::heis(params, lambda, &t).expand(cutoff, None)
}

/// `ch T_λ^s` within `|z| <= window`.
pub fn standard_affine_char(
    lambda: Exponent,
    s: i64,
    params: &ModelParams,
    cutoff: Exponent,
    window: Exponent,
) -> Result<BiSeries> {
    expand_label(
        &CharLabel::Standard { lambda, s },
        params,
        cutoff,
        Some(window),
    )
}

/// `ch L^s` within `|z| <= window`.
pub fn irr_affine_char(
    label: IrrLabel,
    s: i64,
    params: &ModelParams,
    cutoff: Exponent,
    window: Exponent,
) -> Result<BiSeries> {
    expand_label(
        &CharLabel::IrrAffine { label, s },
        params,
        cutoff,
        Some(window),
    )
}

/// Coefficients of `ch M_{r,s}` at `q^{h-c/24+n}` for `n = 0..=max_level`.
pub fn singlet_graded_dims(
    r: i64,
    s: i64,
    params: &ModelParams,
    max_level: u32,
) -> Result<Vec<i64>> {
    let lead = params.rs_exponent(r, s) - Exponent::new(1, 24);
    let series = singlet_char(r, s, params, lead + i64::from(max_level))?;
    (0..=i64::from(max_level))
        .map(|n| {
            let c = series.coeff(Exponent::zero(), lead + n);
            c.to_integer()
                .and_then(|c| num_traits::ToPrimitive::to_i64(&c))
                .ok_or_else(|| Error::ExponentOverflow(alloc::format!("coefficient {c}")))
        })
        .collect()
}

/// Any label; `window` is ignored for z-free modules.
pub fn character(
    label: &CharLabel,
    params: &ModelParams,
    cutoff: Exponent,
    window: Exponent,
) -> Result<BiSeries> {
    match label {
        CharLabel::HeisLorentz(l) => heis_lorentz_char(*l, params, cutoff),
        _ => expand_label(label, params, cutoff, Some(window)),
    }
}

pub(crate) fn describe(parts: &[(&str, String)]) -> String {
    let mut s = String::new();
    for (i, (k, v)) in parts.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(k);
        s.push('=');
        s.push_str(v);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::exponent;

    #[test]
    fn product_of_windowed_factors_is_rejected() {
        let m = ModelParams::new(2).unwrap();
        let a = Recipe::Char(CharLabel::HeisLorentz(exponent(1, 1)));
        let r = Recipe::product(a.clone(), a);
        assert_eq!(
            r.evaluate(&m, exponent(3, 1), exponent(4, 1)),
            Err(Error::WindowedProduct)
        );
    }

    #[test]
    fn heis_times_fock_is_standard_term() {
        // 𝖥_λ · 𝓕x(λ) = z^λ / η² at p = 2
        let m = ModelParams::new(2).unwrap();
        let lam = exponent(3, 2);
        let r = Recipe::product(
            Recipe::Char(CharLabel::HeisLorentz(lam)),
            Recipe::Char(CharLabel::Fock(QuadNumber::rational(crate::num::rat(2, 1)))),
        );
        let s = r.evaluate(&m, exponent(4, 1), exponent(5, 1)).unwrap();
        let eta2 = crate::num::eta_power(-2, exponent(4, 1)).shift(lam, exponent(0, 1));
        assert!(s.agrees_with(&eta2));
        assert_eq!(s.len(), eta2.len());
    }
}
