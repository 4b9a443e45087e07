//! The `divfree` command-line front end.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cohomology::{cohomology, is_exact, Exactness, TruncationParams};
use crate::descriptor::{catalog_entry, catalog_names, Descriptor};
use crate::error::{Error, Result};
use crate::exterior::parse_form;
use crate::fields::{flexibility_check, make_catalog_volume, Flexibility, VectorField, VolumeForm};
use crate::identities::run_identity_suite;
use crate::liealg::{default_lie_params, l0_module_quotient, semi_compatible, surface_theorem};
use crate::parse::parse_element;
use crate::rings::{truncated_basis_weighted, Ring};
use crate::slspan::spanning_set_report;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "divfree", version, about = "Differential forms and divergence-free fields on affine varieties")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Variety descriptor file (JSON).
    #[arg(long, global = true, conflicts_with_all = ["inline", "catalog"])]
    pub variety: Option<PathBuf>,
    /// Variety descriptor given inline as JSON.
    #[arg(long, global = true, conflicts_with = "catalog")]
    pub inline: Option<String>,
    /// Named catalog variety, e.g. danielewski3 or lines3.
    #[arg(long, global = true)]
    pub catalog: Option<String>,
    /// Maximal degree of the truncation window.
    #[arg(long, global = true)]
    pub window: Option<i64>,
    /// Cap on negative exponents and pole orders.
    #[arg(long = "neg-cap", global = true)]
    pub neg_cap: Option<i32>,
    /// Extra degrees used for boundary and product spaces.
    #[arg(long, global = true)]
    pub slack: Option<i64>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Render a plain-text table instead of JSON.
    #[arg(long, global = true)]
    pub human: bool,
    /// Ceiling on the dimension of any truncated space.
    #[arg(long = "max-dimension", global = true, default_value_t = 20000)]
    pub max_dimension: usize,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Truncated de Rham cohomology.
    Cohomology,
    /// Both sides of the quotient formula dim L_J/[L0,L0] on a surface.
    SurfaceTheorem,
    /// Whether a closed form is exact.
    IsExact {
        #[arg(long)]
        form: String,
    },
    /// Divergence, brackets, μ, μ⁻¹, ψ and Lie derivatives.
    FieldCalc(FieldCalc),
    /// Spanning set of Λ²(sl_n) by nilpotent pairs.
    SlSpan {
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Run every catalog claim and print PASS/FAIL per claim.
    #[command(alias = "verify-paper")]
    Verify {
        /// Random cases per variety for the identity suites.
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
    /// List catalog variety names.
    Catalog,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Op {
    Divergence,
    Bracket,
    Mu,
    MuInverse,
    Psi,
    LieDerivative,
    Apply,
}

#[derive(Args, Debug, Clone)]
pub struct FieldCalc {
    #[arg(long, value_enum)]
    pub op: Op,
    /// Vector field as `var=expr;var=expr`, e.g. `x=x;y=-y`.
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub field2: Option<String>,
    /// Differential form, e.g. `x*dy - y*dx`.
    #[arg(long)]
    pub form: Option<String>,
    #[arg(long)]
    pub function: Option<String>,
}

/// Exit status for an error: 2 input validation, 3 internal consistency,
/// 4 resource cap.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceCap(_) => 4,
        Error::Inconsistent(_) | Error::BrokenCertificate(_) | Error::CertificateSearch(_) | Error::WindowMismatch(_) => 3,
        _ => 2,
    }
}

/// A finished run: the report and the exit status it implies.
pub struct Outcome {
    pub report: Value,
    pub code: i32,
    pub human: String,
}

fn descriptor(common: &Common) -> Result<Option<Descriptor>> {
    if let Some(path) = &common.variety {
        let text = std::fs::read_to_string(path)?;
        return Descriptor::from_json_str(&text).map(Some);
    }
    if let Some(text) = &common.inline {
        return Descriptor::from_json_str(text).map(Some);
    }
    if let Some(name) = &common.catalog {
        return catalog_entry(name)
            .map(Some)
            .ok_or_else(|| Error::InvalidDescriptor(format!("unknown catalog name `{name}`")));
    }
    Ok(None)
}

fn require_descriptor(common: &Common) -> Result<Descriptor> {
    descriptor(common)?.ok_or_else(|| Error::InvalidDescriptor("one of --variety, --inline or --catalog is required".into()))
}

fn params(common: &Common, base: TruncationParams) -> Result<TruncationParams> {
    let p = TruncationParams {
        max_degree: common.window.unwrap_or(base.max_degree),
        neg_cap: common.neg_cap.unwrap_or(base.neg_cap),
        slack: common.slack.unwrap_or(base.slack),
    };
    if p.max_degree < 1 || p.neg_cap < 0 || p.slack < 0 {
        return Err(Error::InvalidDescriptor("window must be positive and neg-cap, slack non-negative".into()));
    }
    Ok(p)
}

/// Refuses truncations whose largest space would exceed the ceiling.
fn check_cap(ring: &Ring, p: &TruncationParams, cap: usize) -> Result<()> {
    let big = p.window().enlarged(2 * p.slack);
    let functions = truncated_basis_weighted(ring, &big, ring.cohomology_weights()).len();
    let n = ring.coordinates();
    let widest = (0..=n).map(|k| binomial(n, k)).max().unwrap_or(1);
    let estimate = functions * widest;
    if estimate > cap {
        return Err(Error::ResourceCap(format!("truncated space of dimension {estimate} exceeds the ceiling {cap}")));
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn need<'a>(value: &'a Option<String>, flag: &str) -> Result<&'a str> {
    value.as_deref().ok_or_else(|| Error::InvalidDescriptor(format!("--{flag} is required for this operation")))
}

fn field_value(vol: &VolumeForm, v: &VectorField) -> Result<Value> {
    Ok(json!({ "field": v.to_json()["components"], "divergence": vol.divergence(v)?.to_string() }))
}

fn envelope(command: &str, desc: Option<&Descriptor>, params: Value, seed: u64, result: Value) -> Value {
    json!({
        "version": VERSION,
        "command": command,
        "descriptor": desc,
        "params": params,
        "seed": seed,
        "result": result,
    })
}

fn run_cohomology(common: &Common) -> Result<Outcome> {
    let desc = require_descriptor(common)?;
    let ring = desc.ring()?;
    let p = params(common, TruncationParams::default())?;
    check_cap(&ring, &p, common.max_dimension)?;
    let report = cohomology(&ring, &p)?;
    let mut result = report.to_json();
    result["h"] = json!(report.betti_numbers());
    let human = format!("h = {:?}  stable = {}\n", report.betti_numbers(), report.is_stable());
    Ok(Outcome { report: envelope("cohomology", Some(&desc), json!(p), common.seed, result), code: 0, human })
}

fn run_surface(common: &Common) -> Result<Outcome> {
    let desc = require_descriptor(common)?;
    let ring = desc.ring()?;
    if !ring.is_surface() {
        return Err(Error::Unsupported("surface-theorem needs a surface".into()));
    }
    let cparams = TruncationParams::default();
    let lparams = params(common, default_lie_params())?;
    check_cap(&ring, &cparams, common.max_dimension)?;
    check_cap(&ring, &lparams, common.max_dimension)?;
    let vol = make_catalog_volume(&ring)?;
    let r = surface_theorem(&vol, &cparams, &lparams)?;
    let consistent = r.formula_agrees && r.l0_mod_lj_agrees;
    let result = json!({
        "dim_LJ_mod_comm": r.formula_value,
        "brute_force": r.brute_force_value,
        "consistent": consistent,
        "details": r,
    });
    let human = format!(
        "dim L_J/[L0,L0]: formula {} brute force {}  consistent = {consistent}\n",
        r.formula_value, r.brute_force_value
    );
    let params = json!({ "cohomology": cparams, "lie": lparams });
    let code = if consistent { 0 } else { 3 };
    Ok(Outcome { report: envelope("surface-theorem", Some(&desc), params, common.seed, result), code, human })
}

fn run_is_exact(common: &Common, form: &str) -> Result<Outcome> {
    let desc = require_descriptor(common)?;
    let ring = desc.ring()?;
    let p = params(common, TruncationParams::default())?;
    check_cap(&ring, &p, common.max_dimension)?;
    let eta = parse_form(form, &ring)?;
    let (result, human) = match is_exact(&eta, &p)? {
        Exactness::Exact { primitive, window } => {
            if primitive.d() != eta {
                return Err(Error::Inconsistent("primitive does not differentiate to the form".into()));
            }
            let h = format!("EXACT: primitive {primitive}\n");
            (json!({ "verdict": "EXACT", "primitive": primitive.to_json(), "window_degree": window.max_degree }), h)
        }
        Exactness::NotExactWithin { window, .. } => (
            json!({ "verdict": "NOT-EXACT-WITHIN", "window_degree": window.max_degree }),
            format!("NOT-EXACT-WITHIN degree {}\n", window.max_degree),
        ),
    };
    let result = json!({ "input": form, "form": eta.to_json(), "exactness": result });
    Ok(Outcome { report: envelope("is-exact", Some(&desc), json!(p), common.seed, result), code: 0, human })
}

fn run_field_calc(common: &Common, fc: &FieldCalc) -> Result<Outcome> {
    let desc = require_descriptor(common)?;
    let ring = desc.ring()?;
    let vol = make_catalog_volume(&ring)?;
    let mut input = serde_json::Map::new();
    for (k, v) in [("field", &fc.field), ("field2", &fc.field2), ("form", &fc.form), ("function", &fc.function)] {
        if let Some(s) = v {
            input.insert(k.into(), json!(s));
        }
    }
    let field = |flag: &str, v: &Option<String>| -> Result<VectorField> { VectorField::parse_spec(&ring, need(v, flag)?) };
    let output = match fc.op {
        Op::Divergence => json!({ "function": vol.divergence(&field("field", &fc.field)?)?.to_string() }),
        Op::Bracket => {
            let b = field("field", &fc.field)?.bracket(&field("field2", &fc.field2)?)?;
            field_value(&vol, &b)?
        }
        Op::Mu => json!({ "form": vol.mu(&field("field", &fc.field)?)?.to_json() }),
        Op::MuInverse => {
            let eta = parse_form(need(&fc.form, "form")?, &ring)?;
            field_value(&vol, &vol.mu_inverse(&eta)?)?
        }
        Op::Psi => {
            let p = vol.psi(&field("field", &fc.field)?, &field("field2", &fc.field2)?)?;
            json!({ "form": p.to_json() })
        }
        Op::LieDerivative => {
            let eta = parse_form(need(&fc.form, "form")?, &ring)?;
            json!({ "form": field("field", &fc.field)?.lie_derivative(&eta).to_json() })
        }
        Op::Apply => {
            let f = parse_element(need(&fc.function, "function")?, &ring)?;
            json!({ "function": field("field", &fc.field)?.apply(&f).to_string() })
        }
    };
    let op = format!("{:?}", fc.op).to_lowercase();
    let human = format!("{op}: {output}\n");
    let result = json!({ "op": op, "input": input, "result": output });
    Ok(Outcome { report: envelope("field-calc", Some(&desc), Value::Null, common.seed, result), code: 0, human })
}

fn run_sl_span(common: &Common, n: usize) -> Result<Outcome> {
    if !(2..=6).contains(&n) {
        return Err(Error::InvalidDescriptor("n must lie in 2..=6".into()));
    }
    let r = spanning_set_report(n)?;
    let code = if r.span.spans { 0 } else { 3 };
    let human = format!("sl_{n}: {} pairs, rank {} of {}, spans = {}\n", r.pairs.len(), r.span.rank, r.span.expected, r.span.spans);
    let result = json!({ "rank": r.span.rank, "spans": r.span.spans, "report": r });
    Ok(Outcome { report: envelope("sl-span", None, json!({ "n": n }), common.seed, result), code, human })
}

/// One verified statement.
struct Claim {
    name: String,
    anchor: &'static str,
    expected: Value,
    got: Value,
    /// `Some(true)` PASS, `Some(false)` FAIL, `None` UNSTABLE.
    status: Option<bool>,
}

impl Claim {
    fn label(&self) -> &'static str {
        match self.status {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "UNSTABLE",
        }
    }
}

fn ring_of(name: &str) -> Result<Ring> {
    catalog_entry(name).expect("catalog name").ring()
}

fn verify_claims(common: &Common, cases: usize) -> Result<(Vec<Claim>, TruncationParams)> {
    let cp = params(common, TruncationParams::default())?;
    let lp = default_lie_params();
    let mut claims = Vec::new();
    let mut push = |name: String, anchor, expected: Value, got: Value, stable: bool| {
        let status = if expected == got { Some(true) } else if stable { Some(false) } else { None };
        claims.push(Claim { name, anchor, expected, got, status });
    };

    let mut golden: Vec<(String, &'static str, Vec<usize>)> = vec![
        ("affine2".into(), "affine plane is acyclic", vec![1, 0, 0]),
        ("torus2".into(), "torus cohomology", vec![1, 2, 1]),
    ];
    for d in 2..=5 {
        golden.push((format!("danielewski{d}"), "Danielewski h1 = 0, h2 = d - 1", vec![1, 0, d - 1]));
    }
    for k in 2..=4 {
        golden.push((format!("lines{k}"), "line arrangement h1 = k, h2 = k - 1", vec![1, k, k - 1]));
    }
    let mut stable_of = std::collections::BTreeMap::new();
    for (name, anchor, h) in &golden {
        let ring = ring_of(name)?;
        check_cap(&ring, &cp, common.max_dimension)?;
        let r = cohomology(&ring, &cp)?;
        stable_of.insert(name.clone(), r.is_stable());
        push(format!("cohomology {name}"), anchor, json!(h), json!(r.betti_numbers()), r.is_stable());
    }

    let surface_cases: Vec<(String, &'static str, i64)> = vec![
        ("affine2".into(), "L_J = [L0, L0] on the plane", 0),
        ("torus2".into(), "L_J = [L0, L0] on the torus", 0),
        ("lines3".into(), "L_J = [L0, L0] on three lines", 0),
        ("danielewski2".into(), "quotient formula, d - 2", 0),
        ("danielewski3".into(), "quotient formula, d - 2", 1),
        ("danielewski4".into(), "quotient formula, d - 2", 2),
    ];
    for (name, anchor, expected) in &surface_cases {
        let ring = ring_of(name)?;
        let vol = make_catalog_volume(&ring)?;
        let r = match surface_theorem(&vol, &cp, &lp) {
            Ok(r) => r,
            Err(Error::WindowMismatch(m)) => {
                push(format!("surface formula {name}"), anchor, json!(expected), json!({ "window": m }), false);
                continue;
            }
            Err(e) => return Err(e),
        };
        let stable = r.cohomology_stable;
        let got = json!({ "formula": r.formula_value, "brute_force": r.brute_force_value });
        push(format!("surface formula {name}"), anchor, json!({ "formula": expected, "brute_force": expected }), got, stable);
    }

    for (name, exact) in [("affine2", true), ("danielewski1", true), ("torus2", false), ("danielewski2", false), ("danielewski3", false)] {
        let ring = ring_of(name)?;
        let vol = make_catalog_volume(&ring)?;
        let verdict = match is_exact(vol.form(), &cp)? {
            Exactness::Exact { primitive, .. } => primitive.d() == *vol.form(),
            Exactness::NotExactWithin { .. } => false,
        };
        push(format!("volume form exact {name}"), "omega exact iff d <= 1", json!(exact), json!(verdict), true);
    }

    for name in ["affine2", "torus2", "danielewski2", "danielewski3", "lines3"] {
        let ring = ring_of(name)?;
        let vol = make_catalog_volume(&ring)?;
        let h2 = cohomology(&ring, &cp)?;
        let m = l0_module_quotient(&vol, &lp)?;
        let stable = *stable_of.get(name).unwrap_or(&h2.is_stable());
        push(
            format!("module quotient {name}"),
            "dim C[X]/L0 C[X] = h2",
            json!(h2.betti_numbers()[2]),
            json!(m.quotient_dimension),
            stable,
        );
    }

    for name in ["affine2", "affine3", "torus2", "danielewski2", "danielewski3", "lines3"] {
        let ring = ring_of(name)?;
        let vol = make_catalog_volume(&ring)?;
        let ok = match flexibility_check(&vol.jacobian_generators()?, 4)? {
            Flexibility::Flexible { minors, multipliers } => {
                let sum = minors.iter().zip(&multipliers).fold(crate::rings::RingElement::zero(&ring), |acc, (m, c)| acc + m * c);
                sum.is_one()
            }
            Flexibility::NotWithinBound { .. } => false,
        };
        push(format!("flexibility {name}"), "Jacobian fields are flexible", json!(true), json!(ok), true);
    }

    let sc = |name: &str, a: &str, b: &str| -> Result<&'static str> {
        let ring = ring_of(name)?;
        let vol = make_catalog_volume(&ring)?;
        Ok(semi_compatible(&vol, &VectorField::parse_spec(&ring, a)?, &VectorField::parse_spec(&ring, b)?, &lp)?.label())
    };
    push("semi-compatible d/dx, d/dy".into(), "coordinate fields", json!("YES-UNIT"), json!(sc("affine2", "x=1", "y=1")?), true);
    push("semi-compatible x d/dx, y d/dy".into(), "torus Euler fields", json!("YES-UNIT"), json!(sc("torus2", "x=x", "y=y")?), true);
    push("semi-compatible d/dx, d/dx".into(), "kernel products C[y]", json!("UNDECIDED-WITHIN"), json!(sc("affine2", "x=1", "x=1")?), true);

    for (n, rank) in [(2usize, 3usize), (3, 28)] {
        let r = spanning_set_report(n)?;
        let certified = r.pairs.iter().all(|p| p.certificate.verify() && p.a.is_nilpotent() && p.b.is_nilpotent());
        push(
            format!("sl{n} spanning set"),
            "wedges of nilpotent pairs span",
            json!({ "rank": rank, "spans": true, "certified": true }),
            json!({ "rank": r.span.rank, "spans": r.span.spans, "certified": certified }),
            true,
        );
    }

    for name in ["affine2", "affine3", "torus2", "danielewski2", "danielewski3", "lines3"] {
        let ring = ring_of(name)?;
        let vol = make_catalog_volume(&ring)?;
        let r = run_identity_suite(&vol, common.seed, cases)?;
        let failed: Vec<&str> = r.checks.iter().filter(|c| c.failed > 0).map(|c| c.name).collect();
        push(format!("identities {name}"), "calculus identities", json!([]), json!(failed), true);
    }
    Ok((claims, cp))
}

fn run_verify(common: &Common, cases: usize) -> Result<Outcome> {
    let (claims, cp) = verify_claims(common, cases)?;
    let mut human = String::new();
    for c in &claims {
        let _ = writeln!(human, "{:<8} {:<40} {}", c.label(), c.name, c.anchor);
    }
    let failures = claims.iter().filter(|c| c.status == Some(false)).count();
    let unstable = claims.iter().filter(|c| c.status.is_none()).count();
    let _ = writeln!(human, "{} claims, {failures} failed, {unstable} unstable", claims.len());
    let rows: Vec<Value> = claims
        .iter()
        .map(|c| json!({ "claim": c.name, "anchor": c.anchor, "status": c.label(), "expected": c.expected, "got": c.got }))
        .collect();
    let result = json!({ "claims": rows, "failures": failures, "unstable": unstable });
    let params = json!({ "cohomology": cp, "lie": default_lie_params(), "cases": cases });
    let code = if failures > 0 { 3 } else { 0 };
    Ok(Outcome { report: envelope("verify", None, params, common.seed, result), code, human })
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let c = &cli.common;
    match &cli.command {
        Command::Cohomology => run_cohomology(c),
        Command::SurfaceTheorem => run_surface(c),
        Command::IsExact { form } => run_is_exact(c, form),
        Command::FieldCalc(fc) => run_field_calc(c, fc),
        Command::SlSpan { n } => run_sl_span(c, *n),
        Command::Verify { cases } => run_verify(c, *cases),
        Command::Catalog => {
            let entries: Vec<Value> = catalog_names()
                .iter()
                .map(|n| json!({ "name": n, "descriptor": catalog_entry(n) }))
                .collect();
            let human = catalog_names().join("\n") + "\n";
            Ok(Outcome { report: envelope("catalog", None, Value::Null, c.seed, json!(entries)), code: 0, human })
        }
    }
}

/// Parses arguments, runs, writes the report and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let started = Instant::now();
    match run(&cli) {
        Ok(outcome) => {
            let text = if cli.common.human {
                outcome.human.clone()
            } else {
                serde_json::to_string_pretty(&outcome.report).expect("report serializes") + "\n"
            };
            if matches!(cli.command, Command::Verify { .. }) && !cli.common.human {
                eprint!("{}", outcome.human);
            }
            let written = match &cli.common.out {
                Some(path) => std::fs::write(path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return 2;
            }
            if cli.common.human {
                eprintln!("finished in {:.2?}", started.elapsed());
            }
            outcome.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
