use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};
use voa_coset_core::chars::{
    self, identities, verify_case, BranchResult, CharLabel, Identity, IrrLabel, ModelParams,
};
use voa_coset_core::fock;
use voa_coset_core::num::{BiSeries, Exponent};
use voa_coset_core::ope::{self, Report};
use voa_coset_core::Error;

use crate::json as enc;

const THREADS_VAR: &str = "VOA_COSET_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "voa-coset",
    version,
    about = "Exact free field OPEs, characters and branching identities for the (1, p) models"
)]
pub struct Cli {
    /// Model parameter, at least 2.
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    pub p: u32,
    /// q cutoff, an integer or `num/den`.
    #[arg(long, global = true, default_value = "20", value_parser = parse_exponent, allow_hyphen_values = true)]
    pub order: Exponent,
    /// Largest |z| exponent kept in z-dependent characters.
    #[arg(long, global = true, default_value = "20", value_parser = parse_exponent, allow_hyphen_values = true)]
    pub zwindow: Exponent,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Fock module of α_{r,s}
    Fock,
    /// Singlet module M_{r,s}
    Singlet,
    /// Triplet module W_{r,s}
    Triplet,
    /// Lattice module of α_{r,s}
    Lattice,
    /// Lorentzian lattice module of --lambda
    LatticeMinus,
    /// Lorentzian Heisenberg module of --lambda
    Heis,
    /// Standard sl(2) module of --lambda, flowed by --s
    Standard,
    /// Irreducible sl(2) module --label, flowed by --s
    Irr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IrrArg {
    #[value(name = "L0")]
    L0,
    #[value(name = "L1")]
    L1,
    #[value(name = "Lm23")]
    Lm23,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the generating fields T, T', W-, W0, W+, e, h, f.
    Gens,
    /// OPE of two generating fields, e.g. `ope e f`.
    Ope {
        a: String,
        b: String,
        /// Highest regular order (z-w)^n to include.
        #[arg(long, default_value_t = 0)]
        regular: i64,
    },
    /// Compare the e, h, f, T OPEs with the Feigin-Semikhatov coefficients.
    CheckFs,
    /// Normalize the null fields of B_5 and the closed form of f.
    CheckNull,
    /// Check that the generating fields lie in the screening kernels.
    CheckKernel,
    /// Check regularity of OPEs between the two commuting subalgebras.
    CheckHowe,
    /// Expand a character.
    Char {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, allow_hyphen_values = true)]
        r: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        s: Option<i64>,
        #[arg(long, value_parser = parse_exponent, allow_hyphen_values = true)]
        lambda: Option<Exponent>,
        #[arg(long, value_enum, ignore_case = true)]
        label: Option<IrrArg>,
    },
    /// Verify character identities at the chosen p.
    Branch {
        /// Glob over identity ids.
        #[arg(long, default_value = "*")]
        identity: String,
        /// List the matching identities instead of checking them.
        #[arg(long)]
        list: bool,
    },
    /// Kernel of the screening charge on the Fock module of α_{r,1}, by exact rank computation.
    Oracle {
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        r: i64,
        #[arg(long, default_value_t = 8)]
        levels: u32,
    },
}

fn parse_exponent(s: &str) -> Result<Exponent, String> {
    s.trim()
        .parse::<Exponent>()
        .map_err(|_| format!("`{s}` is not an integer or num/den"))
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Core(
                Error::LabelOutOfRange(_)
                | Error::UnknownIdentity(_)
                | Error::Multivalued(_)
                | Error::IrrationalExponent(_),
            ) => 2,
            _ => 1,
        }
    }
}

struct Output {
    passed: bool,
    text: String,
    json: Value,
}

/// Parse `args`, run the command and write its report to `out`.
/// Returns the process exit status: 0 if every check passed, 1 on a failed
/// check or computation error, 2 on a usage error.
pub fn run<I, T>(args: I, out: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = configure_threads().and_then(|()| execute(&cli));
    let written = result.and_then(|o| {
        match cli.format {
            Format::Text => out.write_all(o.text.as_bytes())?,
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &o.json).map_err(std::io::Error::from)?;
                writeln!(out)?;
            }
        }
        Ok(o.passed)
    });
    match written {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(f) => {
            eprintln!("error: {f}");
            f.exit_code()
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::Usage(format!(
            "{THREADS_VAR} must be a positive integer, got `{v}`"
        ))
    })?;
    // already initialised when run twice in one process
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn execute(cli: &Cli) -> Result<Output, Failure> {
    if cli.zwindow <= Exponent::from_integer(0) {
        return Err(Failure::Usage("--zwindow must be positive".into()));
    }
    match &cli.command {
        Command::Gens => gens(cli.p),
        Command::Ope { a, b, regular } => ope_cmd(cli.p, a, b, *regular),
        Command::CheckFs => Ok(report(&ope::check_fs_match(cli.p)?)),
        Command::CheckNull => Ok(report(&ope::check_null_relations(cli.p)?)),
        Command::CheckKernel => Ok(report(&ope::check_kernel_membership(cli.p)?)),
        Command::CheckHowe => Ok(report(&ope::check_howe_commutation(cli.p)?)),
        Command::Char {
            family,
            r,
            s,
            lambda,
            label,
        } => char_cmd(cli, *family, *r, *s, *lambda, *label),
        Command::Branch { identity, list } => branch(cli, identity, *list),
        Command::Oracle { r, levels } => oracle(cli.p, *r, *levels),
    }
}

fn gens(p: u32) -> Result<Output, Failure> {
    let g = ope::make_generators(p)?;
    let m = ModelParams::new(p)?;
    let mut text = format!("generating fields at p = {p}, k = {}\n", m.k);
    let mut fields = Vec::new();
    for (name, f) in g.named() {
        writeln!(text, "{name:>3} = {f}").unwrap();
        fields.push(json!({"name": name, "field": enc::field(f)}));
    }
    Ok(Output {
        passed: true,
        text,
        json: json!({"p": p, "k": enc::rational(&m.k), "generators": fields}),
    })
}

fn ope_cmd(p: u32, a: &str, b: &str, regular: i64) -> Result<Output, Failure> {
    if regular < 0 {
        return Err(Failure::Usage("--regular must be at least 0".into()));
    }
    let g = ope::make_generators(p)?;
    let lookup = |name: &str| {
        g.get(name).ok_or_else(|| {
            let known: Vec<&str> = g.named().iter().map(|(n, _)| *n).collect();
            Failure::Usage(format!(
                "unknown field `{name}`; expected one of {}",
                known.join(", ")
            ))
        })
    };
    let x = ope::ope(lookup(a)?, lookup(b)?, regular)?;
    let mut text = format!("{a}(z) {b}(w) at p = {p}, through (z-w)^{regular}\n");
    let mut coeffs = Vec::new();
    for (n, c) in x.entries() {
        writeln!(text, "  (z-w)^{n}: {c}").unwrap();
        coeffs.push(json!({"order": n, "field": enc::field(c)}));
    }
    if coeffs.is_empty() {
        text.push_str("  all coefficients vanish\n");
    }
    Ok(Output {
        passed: true,
        text,
        json: json!({"p": p, "a": a, "b": b, "regular_cutoff": regular, "coefficients": coeffs}),
    })
}

fn report(r: &Report) -> Output {
    let mut text = r.to_string();
    let ok = r.entries.iter().filter(|e| e.passed).count();
    writeln!(text, "{ok} of {} match", r.entries.len()).unwrap();
    let entry = |e: &ope::CheckEntry| {
        json!({
            "label": e.label,
            "status": if e.passed { "match" } else { "mismatch" },
            "expected": e.expected,
            "actual": e.actual,
        })
    };
    let mut json = json!({
        "title": r.title,
        "p": r.p,
        "status": status(r.all_passed()),
        "entries": r.entries.iter().map(entry).collect::<Vec<_>>(),
    });
    if let Some(e) = r.first_failure() {
        writeln!(
            text,
            "first counterexample: {}: expected {}, got {}",
            e.label, e.expected, e.actual
        )
        .unwrap();
        json["first_failure"] = entry(e);
    }
    Output {
        passed: r.all_passed(),
        text,
        json,
    }
}

fn status(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "fail"
    }
}

fn char_cmd(
    cli: &Cli,
    family: Family,
    r: Option<i64>,
    s: Option<i64>,
    lambda: Option<Exponent>,
    label: Option<IrrArg>,
) -> Result<Output, Failure> {
    let family_name = family
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let need = |v: Option<i64>, flag: &str| {
        v.ok_or_else(|| Failure::Usage(format!("--family {family_name} needs --{flag}")))
    };
    let need_lambda =
        || lambda.ok_or_else(|| Failure::Usage(format!("--family {family_name} needs --lambda")));
    let m = ModelParams::new(cli.p)?;
    let (order, window) = (cli.order, cli.zwindow);
    if order < Exponent::from_integer(0) {
        return Err(Failure::Usage("--order must not be negative".into()));
    }
    let label = match family {
        Family::Fock => CharLabel::Fock(m.alpha_rs(need(r, "r")?, need(s, "s")?)),
        Family::Singlet => CharLabel::Singlet {
            r: need(r, "r")?,
            s: need(s, "s")?,
        },
        Family::Triplet => CharLabel::Triplet {
            r: need(r, "r")?,
            s: need(s, "s")?,
        },
        Family::Lattice => CharLabel::LatticeV {
            r: need(r, "r")?,
            s: need(s, "s")?,
        },
        Family::LatticeMinus => CharLabel::LatticeVminus(need_lambda()?),
        Family::Heis => CharLabel::HeisLorentz(need_lambda()?),
        Family::Standard => CharLabel::Standard {
            lambda: need_lambda()?,
            s: need(s, "s")?,
        },
        Family::Irr => {
            let l = label.ok_or_else(|| Failure::Usage("--family irr needs --label".into()))?;
            CharLabel::IrrAffine {
                label: match l {
                    IrrArg::L0 => IrrLabel::L0,
                    IrrArg::L1 => IrrLabel::L1,
                    IrrArg::Lm23 => IrrLabel::Lm23,
                },
                s: need(s, "s")?,
            }
        }
    };
    let eval = |cutoff: Exponent| -> Result<BiSeries, Error> {
        match &label {
            CharLabel::Fock(mu) => chars::fock_char(mu, &m, cutoff),
            CharLabel::Singlet { r, s } => chars::singlet_char(*r, *s, &m, cutoff),
            CharLabel::Triplet { r, s } => chars::triplet_char(*r, *s, &m, cutoff),
            CharLabel::LatticeV { .. } | CharLabel::LatticeVminus(_) => {
                chars::lattice_char(&label, &m, cutoff, window)
            }
            CharLabel::HeisLorentz(l) => chars::heis_lorentz_char(*l, &m, cutoff),
            CharLabel::Standard { lambda, s } => {
                chars::standard_affine_char(*lambda, *s, &m, cutoff, window)
            }
            CharLabel::IrrAffine { label, s } => {
                chars::irr_affine_char(*label, *s, &m, cutoff, window)
            }
        }
    };
    let z_dependent = label.is_z_dependent();
    // z-free characters are q^lead (1 + O(q)); --order counts levels above lead.
    // z-dependent ones have no common leading power, so --order is absolute.
    let (series, lead) = if z_dependent {
        (eval(order)?, None)
    } else {
        let lead = leading_exponent(&eval)?;
        (eval(lead + order)?, Some(lead))
    };

    let mut text = format!("{label} at p = {}\n", cli.p);
    match lead {
        Some(l) => writeln!(
            text,
            "q cutoff {} ({order} above the leading exponent {l})",
            series.q_cutoff()
        ),
        None => writeln!(text, "q cutoff {order}, |z| <= {window}"),
    }
    .unwrap();
    if let Some((z, q, c)) = series.terms().next() {
        let zpart = if z_dependent {
            format!(" z^{z}")
        } else {
            String::new()
        };
        writeln!(text, "leading term: {c}{zpart} q^{q}").unwrap();
    }
    for (z, q, c) in series.terms() {
        if z_dependent {
            writeln!(text, "  q^{q:<8} z^{z:<6} {c}").unwrap();
        } else {
            writeln!(text, "  q^{q:<8} {c}").unwrap();
        }
    }
    let json = json!({
        "family": family_name,
        "label": label.to_string(),
        "p": cli.p,
        "q_cutoff": enc::exponent(&series.q_cutoff()),
        "z_window": series.z_window().map(|w| enc::exponent(&w)),
        "leading_exponent": lead.map(|l| enc::exponent(&l)),
        "series": enc::series(&series),
    });
    Ok(Output {
        passed: true,
        text,
        json,
    })
}

/// Lowest q exponent of a character whose q-support is bounded below.
fn leading_exponent(
    eval: &dyn Fn(Exponent) -> Result<BiSeries, Error>,
) -> Result<Exponent, Failure> {
    let step = Exponent::from_integer(4);
    let mut cutoff = Exponent::from_integer(0);
    while cutoff <= Exponent::from_integer(400) {
        if let Some(q) = eval(cutoff)?.min_q() {
            return Ok(q);
        }
        cutoff += step;
    }
    Err(Error::NonTerminating("no term below q^400".into()).into())
}

fn branch(cli: &Cli, pattern: &str, list: bool) -> Result<Output, Failure> {
    let pat = glob::Pattern::new(pattern)
        .map_err(|e| Failure::Usage(format!("bad --identity pattern `{pattern}`: {e}")))?;
    let selected: Vec<&'static Identity> = identities()
        .into_iter()
        .filter(|i| pat.matches(i.id))
        .collect();
    if selected.is_empty() {
        return Err(Failure::Usage(format!("no identity matches `{pattern}`")));
    }
    if list {
        return Ok(list_identities(&selected));
    }
    if cli.order <= Exponent::from_integer(0) {
        return Err(Failure::Usage("--order must be positive".into()));
    }
    let p = cli.p;
    let jobs: Vec<_> = selected
        .iter()
        .flat_map(|i| {
            i.cases()
                .into_iter()
                .filter(|c| c.p == p)
                .map(move |c| (*i, c))
        })
        .collect();
    if jobs.is_empty() {
        return Err(Failure::Usage(format!(
            "no identity matching `{pattern}` has cases at p = {p}"
        )));
    }
    let results: Vec<(&Identity, BranchResult)> = jobs
        .par_iter()
        .map(|(i, c)| (*i, verify_case(i.id, c, cli.order, cli.zwindow)))
        .collect();
    Ok(branch_output(p, cli.order, cli.zwindow, &results))
}

fn list_identities(selected: &[&Identity]) -> Output {
    let mut text = String::new();
    let mut rows = Vec::new();
    for i in selected {
        let mut ps: Vec<u32> = i.cases().iter().map(|c| c.p).collect();
        ps.dedup();
        let ps_text: Vec<String> = ps.iter().map(u32::to_string).collect();
        writeln!(
            text,
            "{:<22} p = {:<10} {}",
            i.id,
            ps_text.join(","),
            i.summary
        )
        .unwrap();
        rows.push(json!({"identity": i.id, "summary": i.summary, "p": ps}));
    }
    Output {
        passed: true,
        text,
        json: Value::Array(rows),
    }
}

fn branch_output(
    p: u32,
    order: Exponent,
    window: Exponent,
    results: &[(&Identity, BranchResult)],
) -> Output {
    let mut text = format!("character identities at p = {p}, q cutoff {order}, |z| <= {window}\n");
    let mut seen = Vec::new();
    for (i, _) in results {
        if !seen.contains(&i.id) {
            seen.push(i.id);
            writeln!(text, "  {}: {}", i.id, i.summary).unwrap();
        }
    }
    let id_w = results
        .iter()
        .map(|(i, _)| i.id.len())
        .max()
        .unwrap_or(0)
        .max(8);
    let par_w = results
        .iter()
        .map(|(_, r)| r.params.chars().count())
        .max()
        .unwrap_or(0)
        .max(10);
    writeln!(
        text,
        "{:<id_w$}  {:<par_w$}  {:>6}  status",
        "identity", "parameters", "terms"
    )
    .unwrap();
    let mut rows = Vec::new();
    let mut first_failure = None;
    for (i, r) in results {
        writeln!(
            text,
            "{:<id_w$}  {:<par_w$}  {:>6}  {}",
            r.identity,
            r.params,
            r.terms,
            status(r.passed)
        )
        .unwrap();
        let mut row = json!({
            "identity": r.identity,
            "summary": i.summary,
            "p": r.p,
            "params": r.params,
            "status": status(r.passed),
            "terms": r.terms,
        });
        if let Some(m) = &r.first_mismatch {
            row["first_mismatch"] = json!({
                "z": enc::exponent(&m.z),
                "q": enc::exponent(&m.q),
                "left": enc::quad(&m.left),
                "right": enc::quad(&m.right),
            });
        }
        if let Some(n) = &r.note {
            row["note"] = json!(n);
        }
        if !r.passed && first_failure.is_none() {
            first_failure = Some(r);
        }
        rows.push(row);
    }
    let ok = results.iter().filter(|(_, r)| r.passed).count();
    writeln!(text, "{ok} of {} parameter sets pass", results.len()).unwrap();
    if let Some(r) = first_failure {
        let why = r
            .first_mismatch
            .as_ref()
            .map(|m| m.to_string())
            .or_else(|| r.note.clone())
            .unwrap_or_default();
        writeln!(
            text,
            "first counterexample: {} ({}): {why}",
            r.identity, r.params
        )
        .unwrap();
    }
    Output {
        passed: first_failure.is_none(),
        text,
        json: Value::Array(rows),
    }
}

fn oracle(p: u32, r: i64, levels: u32) -> Result<Output, Failure> {
    if r < 1 {
        return Err(Failure::Usage(format!("--r must be at least 1, got {r}")));
    }
    let m = ModelParams::new(p)?;
    let mu = m.alpha_rs(r, 1);
    let sm = fock::screening_matrix(&mu, &m, levels)?;
    let character = chars::singlet_graded_dims(r, 1, &m, levels)?;
    let mut text = format!(
        "ker Q- on the Fock module of α({r},1) = {mu} at p = {p}\nscreening lowers the level by {}\n",
        sm.level_offset
    );
    writeln!(text, "level  dim  rank  kernel  ch M({r},1)").unwrap();
    let mut kernel = Vec::new();
    let mut blocks = Vec::new();
    let mut first_failure = None;
    for (b, ch) in sm.blocks.iter().zip(&character) {
        let n = b.source_level as u32;
        let dim = fock::partitions(n, n).len();
        let rank = fock::rank(&b.rows);
        let k = dim - rank;
        let mark = if k as i64 == *ch { "" } else { "  <- differs" };
        writeln!(text, "{n:>5}  {dim:>3}  {rank:>4}  {k:>6}  {ch:>8}{mark}").unwrap();
        if k as i64 != *ch && first_failure.is_none() {
            first_failure = Some((n, k, *ch));
        }
        kernel.push(k);
        let rows: Vec<Vec<Value>> = b
            .rows
            .iter()
            .map(|row| row.iter().map(enc::quad).collect())
            .collect();
        blocks.push(json!({
            "source_level": b.source_level,
            "target_level": b.target_level,
            "dim": dim,
            "rank": rank,
            "rows": rows,
        }));
    }
    let passed = first_failure.is_none();
    match first_failure {
        Some((n, k, ch)) => writeln!(
            text,
            "first counterexample: level {n}: kernel {k}, character {ch}"
        ),
        None => writeln!(text, "kernel dimensions agree with the singlet character"),
    }
    .unwrap();
    let json = json!({
        "p": p,
        "r": r,
        "levels": levels,
        "status": status(passed),
        "source_weight": enc::quad(&sm.source_weight),
        "target_weight": enc::quad(&sm.target_weight),
        "level_offset": sm.level_offset,
        "kernel": kernel,
        "character": character,
        "blocks": blocks,
    });
    Ok(Output { passed, text, json })
}
