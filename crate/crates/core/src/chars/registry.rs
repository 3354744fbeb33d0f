//! Built-in character identities. Each entry lists its parameter sets and
//! builds both sides as [`Recipe`] trees; the verifier only ever sees recipes.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::families::IrrLabel;
use super::params::ModelParams;
use super::recipe::{describe, Affine, CharLabel, Partner, Recipe};
use crate::error::{Error, Result};
use crate::num::{exponent, Exponent, Mismatch};

/// One parameter choice of an identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub p: u32,
    pub params: String,
    pub lhs: Recipe,
    pub rhs: Recipe,
}

pub struct Identity {
    pub id: &'static str,
    pub summary: &'static str,
    cases: fn() -> Vec<Case>,
}

impl Identity {
    pub fn cases(&self) -> Vec<Case> {
        (self.cases)()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchResult {
    pub identity: String,
    pub p: u32,
    pub params: String,
    pub passed: bool,
    pub first_mismatch: Option<Mismatch>,
    /// Number of compared coefficients (the larger of the two sides).
    pub terms: usize,
    /// Evaluation error or other reason for failure without a mismatch.
    pub note: Option<String>,
}

fn e(n: i64, d: i64) -> Exponent {
    exponent(n, d)
}

fn lin(slope: Exponent, offset: Exponent) -> Affine {
    Affine::new(slope, offset)
}

fn vminus(x: Exponent) -> Recipe {
    Recipe::Char(CharLabel::LatticeVminus(x))
}

fn w(r: i64, s: i64) -> Recipe {
    Recipe::Char(CharLabel::Triplet { r, s })
}

fn m(r: i64, s: i64) -> Recipe {
    Recipe::Char(CharLabel::Singlet { r, s })
}

fn vlat(r: i64, s: i64) -> Recipe {
    Recipe::Char(CharLabel::LatticeV { r, s })
}

fn standard(lambda: Exponent, s: i64) -> Recipe {
    Recipe::Char(CharLabel::Standard { lambda, s })
}

fn irr(label: IrrLabel, s: i64) -> Recipe {
    Recipe::Char(CharLabel::IrrAffine { label, s })
}

fn vw(x: Exponent, tw: Recipe) -> Recipe {
    Recipe::product(vminus(x), tw)
}

fn case(p: u32, params: &[(&str, String)], lhs: Recipe, rhs: Recipe) -> Case {
    Case {
        p,
        params: describe(params),
        lhs,
        rhs,
    }
}

fn show(x: Exponent) -> String {
    x.to_string()
}

const P2_LAMBDAS: [(i64, i64); 5] = [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)];
const P3_LAMBDAS: [(i64, i64); 6] = [(0, 1), (1, 3), (2, 3), (-2, 3), (1, 2), (1, 1)];
const FLOWS: core::ops::RangeInclusive<i64> = -2..=2;

fn p2_standard_branch() -> Vec<Case> {
    let mut out = Vec::new();
    for (a, b) in P2_LAMBDAS {
        let lam = e(a, b);
        for s in FLOWS {
            let heis = lin(e(2, 1), lam - e(s, 2));
            let rhs = Recipe::BranchSum {
                heis,
                partner: Partner::FockX(lin(e(2, 1), lam)),
            };
            out.push(case(
                2,
                &[("lambda", show(lam)), ("s", s.to_string())],
                standard(lam, s),
                rhs,
            ));
        }
    }
    out
}

fn p2_irr_branch() -> Vec<Case> {
    let mut out = Vec::new();
    for (lam, label) in [(0, IrrLabel::L0), (1, IrrLabel::L1)] {
        for s in FLOWS {
            let rhs = Recipe::BranchSum {
                heis: lin(e(2, 1), e(lam, 1) - e(s, 2)),
                partner: Partner::Singlet {
                    slope: 2,
                    offset: lam + 1,
                    s: 1,
                },
            };
            out.push(case(
                2,
                &[("lambda", lam.to_string()), ("s", s.to_string())],
                irr(label, s),
                rhs,
            ));
        }
    }
    out
}

fn p2_b2_e() -> Vec<Case> {
    let mut out = Vec::new();
    for (a, b) in &P2_LAMBDAS[..4] {
        let lam = e(*a, *b);
        for s in FLOWS {
            let lhs = Recipe::sum([standard(lam, s), standard(lam + 1, s)]);
            let rhs = Recipe::BranchSum {
                heis: lin(e(1, 1), lam - e(s, 2)),
                partner: Partner::FockX(lin(e(1, 1), lam)),
            };
            out.push(case(
                2,
                &[("lambda", show(lam)), ("s", s.to_string())],
                lhs,
                rhs,
            ));
        }
    }
    out
}

fn p2_b2_l() -> Vec<Case> {
    FLOWS
        .map(|s| {
            let lhs = Recipe::sum([irr(IrrLabel::L0, s), irr(IrrLabel::L1, s)]);
            let rhs = Recipe::BranchSum {
                heis: lin(e(1, 1), -e(s, 2)),
                partner: Partner::Singlet {
                    slope: 1,
                    offset: 1,
                    s: 1,
                },
            };
            case(2, &[("s", s.to_string())], lhs, rhs)
        })
        .collect()
}

/// W(2)-characters of the branching functions `Σ_n 𝓕_{2n+(j+1)/2}`.
fn p2_branching_w(j: i64) -> Recipe {
    match j {
        0 => w(1, 2),
        2 => w(2, 2),
        _ => Recipe::sum([w(1, 1), w(2, 1)]),
    }
}

fn p2_a2_typ() -> Vec<Case> {
    let mut out = Vec::new();
    for j in 0..4 {
        for r in 0..4 {
            let lhs = Recipe::StandardOrbit {
                lambda: e(j, 2),
                r,
                step: 4,
            };
            let rhs = vw(e(j - r, 2), p2_branching_w(j));
            out.push(case(
                2,
                &[("j", j.to_string()), ("r", r.to_string())],
                lhs,
                rhs,
            ));
        }
    }
    out
}

fn p2_w_chars() -> Vec<Case> {
    [(0, (1, 2)), (1, (2, 1)), (2, (2, 2)), (3, (1, 1))]
        .into_iter()
        .map(|(j, (r, s))| case(2, &[("j", j.to_string())], vlat(r, s), p2_branching_w(j)))
        .collect()
}

fn p2_a2_irr() -> Vec<Case> {
    let mut out = Vec::new();
    for (lam, label) in [(0, IrrLabel::L0), (1, IrrLabel::L1)] {
        for r in 0..4 {
            let lhs = Recipe::IrrOrbit { label, r, step: 4 };
            let rhs = vw(e(lam, 1) - e(r, 2), w(lam + 1, 1));
            out.push(case(
                2,
                &[("lambda", lam.to_string()), ("r", r.to_string())],
                lhs,
                rhs,
            ));
        }
    }
    out
}

fn p2_ext_vacuum() -> Vec<Case> {
    let lhs = Recipe::IrrOrbit {
        label: IrrLabel::L0,
        r: 0,
        step: 4,
    };
    vec![case(2, &[], lhs, vw(e(0, 1), w(1, 1)))]
}

fn p2_aa2_e() -> Vec<Case> {
    (0..4)
        .map(|r| {
            let lhs = Recipe::sum([0, 1].map(|lam| Recipe::StandardOrbit {
                lambda: e(lam, 1),
                r,
                step: 4,
            }));
            let rhs = Recipe::sum([vw(e(1, 1) - e(r, 2), w(2, 2)), vw(-e(r, 2), w(1, 2))]);
            case(2, &[("r", r.to_string())], lhs, rhs)
        })
        .collect()
}

fn p2_aa2_l_at(r: i64) -> Case {
    let lhs = Recipe::sum([IrrLabel::L0, IrrLabel::L1].map(|label| Recipe::IrrOrbit {
        label,
        r,
        step: 4,
    }));
    let rhs = Recipe::sum([vw(e(1, 1) - e(r, 2), w(2, 1)), vw(-e(r, 2), w(1, 1))]);
    case(2, &[("r", r.to_string())], lhs, rhs)
}

fn p2_aa2_l() -> Vec<Case> {
    (0..4).map(p2_aa2_l_at).collect()
}

fn p2_aa2_vacuum() -> Vec<Case> {
    let lhs = Recipe::sum([IrrLabel::L0, IrrLabel::L1].map(|label| Recipe::IrrOrbit {
        label,
        r: 0,
        step: 4,
    }));
    let rhs = Recipe::sum([vw(e(0, 1), w(1, 1)), vw(e(1, 1), w(2, 1))]);
    vec![case(2, &[], lhs, rhs)]
}

fn p3_standard_branch() -> Vec<Case> {
    let mut out = Vec::new();
    for (a, b) in P3_LAMBDAS {
        let lam = e(a, b);
        for s in FLOWS {
            let rhs = Recipe::BranchSum {
                heis: lin(e(2, 1), lam - e(4 * s, 3)),
                partner: Partner::FockX(lin(e(2, 1), lam)),
            };
            out.push(case(
                3,
                &[("lambda", show(lam)), ("s", s.to_string())],
                standard(lam, s),
                rhs,
            ));
        }
    }
    out
}

fn p3_irr(label: IrrLabel, offset: Exponent, s_singlet: i64) -> Vec<Case> {
    FLOWS
        .map(|s| {
            let rhs = Recipe::BranchSum {
                heis: lin(e(2, 1), offset - e(4 * s, 3)),
                partner: Partner::Singlet {
                    slope: 1,
                    offset: 0,
                    s: s_singlet,
                },
            };
            case(3, &[("s", s.to_string())], irr(label, s), rhs)
        })
        .collect()
}

fn p3_irr_l0() -> Vec<Case> {
    p3_irr(IrrLabel::L0, e(-2, 1), 1)
}

fn p3_irr_lm23() -> Vec<Case> {
    p3_irr(IrrLabel::Lm23, e(-8, 3), 2)
}

const P3_ORBIT_LAMBDAS: [(i64, i64); 3] = [(0, 1), (2, 3), (-2, 3)];

fn p3_a3_typ() -> Vec<Case> {
    let mut out = Vec::new();
    for (a, b) in P3_ORBIT_LAMBDAS {
        let lam = e(a, b);
        let s_lab = (lam * 3 / 2).to_integer();
        for r in 0..3 {
            let lhs = Recipe::StandardOrbit {
                lambda: lam,
                r,
                step: 3,
            };
            let rhs = Recipe::sum([
                vw(lam - e(4 * r, 3), vlat(2, s_lab)),
                vw(lam + 2 - e(4 * r, 3), vlat(1, s_lab)),
            ]);
            out.push(case(
                3,
                &[("lambda", show(lam)), ("r", r.to_string())],
                lhs,
                rhs,
            ));
        }
    }
    out
}

fn p3_a3_typ0() -> Vec<Case> {
    (0..3)
        .map(|r| {
            let lhs = Recipe::StandardOrbit {
                lambda: e(0, 1),
                r,
                step: 3,
            };
            let rhs = Recipe::sum([
                vw(-e(4 * r, 3), w(1, 3)),
                vw(e(2, 1) - e(4 * r, 3), w(2, 3)),
            ]);
            case(3, &[("r", r.to_string())], lhs, rhs)
        })
        .collect()
}

fn p3_w_chars() -> Vec<Case> {
    let table: [((i64, i64), Recipe); 6] = [
        ((2, 0), w(1, 3)),
        ((1, 0), w(2, 3)),
        ((1, 1), Recipe::sum([w(1, 1), w(2, 2)])),
        ((2, 1), Recipe::sum([w(2, 1), w(1, 2)])),
        ((1, -1), Recipe::sum([w(1, 1), w(2, 2)])),
        ((2, -1), Recipe::sum([w(2, 1), w(1, 2)])),
    ];
    table
        .into_iter()
        .map(|((r, s), rhs)| {
            case(
                3,
                &[("r", r.to_string()), ("s", s.to_string())],
                vlat(r, s),
                rhs,
            )
        })
        .collect()
}

fn p3_a3_l0() -> Vec<Case> {
    (0..3)
        .map(|r| {
            let lhs = Recipe::IrrOrbit {
                label: IrrLabel::L0,
                r,
                step: 3,
            };
            let rhs = Recipe::sum([
                vw(e(2, 1) - e(4 * r, 3), w(2, 1)),
                vw(-e(4 * r, 3), w(1, 1)),
            ]);
            case(3, &[("r", r.to_string())], lhs, rhs)
        })
        .collect()
}

fn p3_a3_lm23() -> Vec<Case> {
    (0..3)
        .map(|r| {
            let lhs = Recipe::IrrOrbit {
                label: IrrLabel::Lm23,
                r,
                step: 3,
            };
            let rhs = Recipe::sum([
                vw(e(4, 3) - e(4 * r, 3), w(2, 2)),
                vw(e(-2, 3) - e(4 * r, 3), w(1, 2)),
            ]);
            case(3, &[("r", r.to_string())], lhs, rhs)
        })
        .collect()
}

fn p3_ext_vacuum() -> Vec<Case> {
    let lhs = Recipe::IrrOrbit {
        label: IrrLabel::L0,
        r: 0,
        step: 3,
    };
    vec![case(
        3,
        &[],
        lhs,
        Recipe::sum([vw(e(0, 1), w(1, 1)), vw(e(2, 1), w(2, 1))]),
    )]
}

const GENERAL_P: core::ops::RangeInclusive<u32> = 2..=5;

fn triplet_singlet_sum() -> Vec<Case> {
    let mut out = Vec::new();
    for p in GENERAL_P {
        for r in 1..=2 {
            for s in 1..=p as i64 {
                let params = [("r", r.to_string()), ("s", s.to_string())];
                out.push(case(p, &params, w(r, s), Recipe::SingletSum { r, s }));
            }
        }
    }
    out
}

fn lattice_ses() -> Vec<Case> {
    let mut out = Vec::new();
    for p in GENERAL_P {
        let pi = p as i64;
        for r in 1..=2 {
            for s in 1..pi {
                let rhs = Recipe::sum([w(r, s), w(3 - r, pi - s)]);
                out.push(case(
                    p,
                    &[("r", r.to_string()), ("s", s.to_string())],
                    vlat(r, s),
                    rhs,
                ));
            }
        }
    }
    out
}

fn singlet_ses() -> Vec<Case> {
    let mut out = Vec::new();
    for p in GENERAL_P {
        let params = ModelParams::new(p).expect("p >= 2");
        let pi = p as i64;
        for r in 1..=3 {
            for s in 1..pi {
                let lhs = Recipe::Char(CharLabel::Fock(params.alpha_rs(r, s)));
                let rhs = Recipe::sum([m(r, s), m(r + 1, pi - s)]);
                out.push(case(
                    p,
                    &[("r", r.to_string()), ("s", s.to_string())],
                    lhs,
                    rhs,
                ));
            }
        }
    }
    out
}

static REGISTRY: &[Identity] = &[
    Identity {
        id: "p2-standard-branch",
        summary: "T_λ^s = Σ_n 𝖥_{2n+λ-s/2} · 𝓕_{2n+λ+1/2} at k = -1/2",
        cases: p2_standard_branch,
    },
    Identity {
        id: "p2-irr-branch",
        summary: "L_λ^s = Σ_n 𝖥_{2n+λ-s/2} · M_{2n+λ+1,1} at k = -1/2",
        cases: p2_irr_branch,
    },
    Identity {
        id: "p2-B2-E",
        summary: "E_λ^s = T_λ^s + T_{λ+1}^s = Σ_n 𝖥_{n+λ-s/2} · 𝓕_{n+λ+1/2}",
        cases: p2_b2_e,
    },
    Identity {
        id: "p2-B2-L",
        summary: "L_0^s + L_1^s = Σ_n 𝖥_{n-s/2} · M_{n+1,1}",
        cases: p2_b2_l,
    },
    Identity {
        id: "p2-A2-typ",
        summary: "Σ_{s∈4Z} T_{j/2}^{r+s} = 𝖵_{[(j-r)/2]} · (W(2) branching function)",
        cases: p2_a2_typ,
    },
    Identity {
        id: "p2-W-chars",
        summary: "lattice characters 𝒱_{[α_{r,s}]} as sums of W(2) characters",
        cases: p2_w_chars,
    },
    Identity {
        id: "p2-A2-irr",
        summary: "Σ_{s∈4Z} L_λ^{s+r} = 𝖵_{[λ-r/2]} · W_{λ+1,1}",
        cases: p2_a2_irr,
    },
    Identity {
        id: "p2-ext-vacuum",
        summary: "Σ_{s∈4Z} L_0^s = 𝖵_{[0]} · W_{1,1}",
        cases: p2_ext_vacuum,
    },
    Identity {
        id: "p2-AA2-E",
        summary: "Σ_{s∈4Z} E_0^{r+s} = 𝖵_{[1-r/2]} W_{2,2} + 𝖵_{[-r/2]} W_{1,2}",
        cases: p2_aa2_e,
    },
    Identity {
        id: "p2-AA2-L",
        summary: "Σ_{s∈4Z} (L_0 + L_1)^{r+s} = 𝖵_{[1-r/2]} W_{2,1} + 𝖵_{[-r/2]} W_{1,1}",
        cases: p2_aa2_l,
    },
    Identity {
        id: "p2-AA2-vacuum",
        summary: "Σ_{s∈4Z} (L_0 + L_1)^s = 𝖵_{[0]} W_{1,1} + 𝖵_{[1]} W_{2,1}",
        cases: p2_aa2_vacuum,
    },
    Identity {
        id: "p3-standard-branch",
        summary: "T_λ^s = Σ_n 𝖥_{2n+λ-4s/3} · 𝓕_{(2n+λ)/α₀+α₀/2} at k = -4/3",
        cases: p3_standard_branch,
    },
    Identity {
        id: "p3-irr-L0",
        summary: "L_0^s = Σ_n 𝖥_{2n-2-4s/3} · M_{n,1}",
        cases: p3_irr_l0,
    },
    Identity {
        id: "p3-irr-Lm23",
        summary: "L_{-2/3}^s = Σ_n 𝖥_{2n-8/3-4s/3} · M_{n,2}",
        cases: p3_irr_lm23,
    },
    Identity {
        id: "p3-A3-typ",
        summary:
            "Σ_{s∈3Z} T_λ^{s+r} = 𝖵_{[λ-4r/3]} 𝒱_{[α_{2,3λ/2}]} + 𝖵_{[λ+2-4r/3]} 𝒱_{[α_{1,3λ/2}]}",
        cases: p3_a3_typ,
    },
    Identity {
        id: "p3-A3-typ0",
        summary: "Σ_{s∈3Z} T_0^{s+r} = 𝖵_{[-4r/3]} W_{1,3} + 𝖵_{[2-4r/3]} W_{2,3}",
        cases: p3_a3_typ0,
    },
    Identity {
        id: "p3-W-chars",
        summary: "lattice characters 𝒱_{[α_{r,s}]} as sums of W(3) characters",
        cases: p3_w_chars,
    },
    Identity {
        id: "p3-A3-L0",
        summary: "Σ_{s∈3Z} L_0^{s+r} = 𝖵_{[2-4r/3]} W_{2,1} + 𝖵_{[-4r/3]} W_{1,1}",
        cases: p3_a3_l0,
    },
    Identity {
        id: "p3-A3-Lm23",
        summary: "Σ_{s∈3Z} L_{-2/3}^{s+r} = 𝖵_{[4/3-4r/3]} W_{2,2} + 𝖵_{[-2/3-4r/3]} W_{1,2}",
        cases: p3_a3_lm23,
    },
    Identity {
        id: "p3-ext-vacuum",
        summary: "Σ_{s∈3Z} L_0^s = 𝖵_{[0]} W_{1,1} + 𝖵_{[2]} W_{2,1}",
        cases: p3_ext_vacuum,
    },
    Identity {
        id: "triplet-singlet-sum",
        summary: "W_{r,s} = Σ_k M_{2k+r,s}",
        cases: triplet_singlet_sum,
    },
    Identity {
        id: "lattice-ses",
        summary: "𝒱_{[α_{r,s}]} = W_{r,s} + W_{3-r,p-s}",
        cases: lattice_ses,
    },
    Identity {
        id: "singlet-ses",
        summary: "𝓕_{α_{r,s}} = M_{r,s} + M_{r+1,p-s}",
        cases: singlet_ses,
    },
];

/// All built-in identities, sorted by id.
pub fn identities() -> Vec<&'static Identity> {
    let mut v: Vec<_> = REGISTRY.iter().collect();
    v.sort_by_key(|i| i.id);
    v
}

pub fn identity(id: &str) -> Result<&'static Identity> {
    REGISTRY
        .iter()
        .find(|i| i.id == id)
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

/// Evaluate both sides of one case and compare them.
pub fn verify_case(
    identity: &str,
    case: &Case,
    cutoff: Exponent,
    window: Exponent,
) -> BranchResult {
    let mut out = BranchResult {
        identity: identity.to_string(),
        p: case.p,
        params: case.params.clone(),
        passed: false,
        first_mismatch: None,
        terms: 0,
        note: None,
    };
    let sides = ModelParams::new(case.p).and_then(|params| {
        let l = case.lhs.evaluate(&params, cutoff, window)?;
        let r = case.rhs.evaluate(&params, cutoff, window)?;
        Ok((l, r))
    });
    match sides {
        Err(err) => out.note = Some(err.to_string()),
        Ok((l, r)) => {
            out.terms = l.len().max(r.len());
            out.first_mismatch = l.first_mismatch(&r);
            if out.terms == 0 {
                out.note = Some("both sides vanish in range".to_string());
            } else {
                out.passed = out.first_mismatch.is_none();
            }
        }
    }
    out
}

/// Check every parameter set of `id` (restricted to `p` if given).
pub fn verify_branching(
    id: &str,
    p: Option<u32>,
    cutoff: Exponent,
    window: Exponent,
) -> Result<Vec<BranchResult>> {
    let ident = identity(id)?;
    let cases: Vec<Case> = ident
        .cases()
        .into_iter()
        .filter(|c| p.is_none_or(|p| c.p == p))
        .collect();
    if cases.is_empty() {
        return Err(Error::LabelOutOfRange(alloc::format!(
            "{id} has no cases at p = {}",
            p.unwrap_or(0)
        )));
    }
    Ok(cases
        .iter()
        .map(|c| verify_case(ident.id, c, cutoff, window))
        .collect())
}
