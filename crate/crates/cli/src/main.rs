//! `emfd`: JSON front end to emfd-core.
//!
//! Exit status 0 on success, 1 when a computation or verdict fails (with a
//! JSON payload on stdout), 2 on usage or parse errors (stdout empty).

use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use emfd_core::charclass::{build_sphere_bundle, chi, cobordism_order, phi, xi};
use emfd_core::emanifold::{eclass_solve, haefliger, sigma_geometric, sigma_quasi, EClassSolution};
use emfd_core::io::{self, BundleInput, Context, EClassInput, GeometricInput, HaefligerInput, QuasiInput};
use emfd_core::linkdiag::{is_algebraically_split, link_signature, linking_matrix, parse_pd, seifert_matrix, LinkDiagram};
use emfd_core::milnor::{milnor_sigma_model, mu123};
use emfd_core::rng::DEFAULT_SEED;
use emfd_core::verify::{self, SUITES};
use emfd_core::{Error, Q};

#[derive(Parser)]
#[command(name = "emfd", version, about = "Exact invariants of e-manifolds and link diagrams")]
struct Cli {
    /// Spaces of indentation in the JSON output; 0 prints one line.
    #[arg(long, global = true, default_value_t = 0)]
    json_indent: usize,
    /// Seed of the instance generator used by `verify`.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants of a PD-coded link (file path or inline PD text).
    Link { op: LinkOp, input: String },
    /// Characteristic numbers and σ from a JSON document (file path or inline JSON).
    Manifold { op: ManifoldOp, input: String },
    /// Runs a verification suite.
    Verify {
        #[arg(value_parser = suite_names())]
        suite: String,
    },
}

fn suite_names() -> clap::builder::PossibleValuesParser {
    let mut names: Vec<&'static str> = SUITES.to_vec();
    names.push("all");
    clap::builder::PossibleValuesParser::new(names)
}

#[derive(Clone, Copy, ValueEnum)]
enum LinkOp {
    Lk,
    Split,
    Seifert,
    Signature,
    Mu,
    Sigma,
}

#[derive(Clone, Copy, ValueEnum)]
enum ManifoldOp {
    Chi,
    Xi,
    Phi,
    Order,
    SphereBundle,
    SigmaQuasi,
    SigmaGeometric,
    Haefliger,
    EclassSolve,
}

/// A finished command: payload plus whether it succeeded.
struct Outcome {
    ok: bool,
    payload: Value,
    note: Option<String>,
}

impl Outcome {
    fn ok(payload: Value) -> Self {
        Outcome { ok: true, payload, note: None }
    }

    fn fail(mut payload: Value, reason: String) -> Self {
        if let Value::Object(m) = &mut payload {
            m.insert("reason".into(), Value::String(reason.clone()));
        }
        Outcome { ok: false, payload, note: Some(reason) }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn read_link(input: &str) -> Result<LinkDiagram, Error> {
    let p = Path::new(input);
    if p.is_file() {
        let text = std::fs::read_to_string(p).map_err(|e| Error::Schema(format!("cannot read {input}: {e}")))?;
        return parse_pd(&text);
    }
    if !input.contains('(') && !input.contains("components") {
        return Err(Error::Schema(format!("no such file: {input}")));
    }
    parse_pd(input)
}

fn link(op: LinkOp, input: &str) -> Result<Outcome, Error> {
    let l = read_link(input)?;
    Ok(Outcome::ok(match op {
        LinkOp::Lk => json!({
            "components": l.num_components(),
            "lk": linking_matrix(&l),
            "self_writhe": l.self_writhe(),
        }),
        LinkOp::Split => json!({ "split": is_algebraically_split(&l), "lk": linking_matrix(&l) }),
        LinkOp::Seifert => {
            let mut v = to_value(&seifert_matrix(&l)?);
            v["signature"] = json!(link_signature(&l)?);
            v
        }
        LinkOp::Signature => json!({ "signature": link_signature(&l)? }),
        LinkOp::Mu => json!({ "mu123": mu123(&l)? }),
        LinkOp::Sigma => {
            let mu = mu123(&l)?;
            let (model, sigma) = milnor_sigma_model(mu)?;
            json!({ "mu123": mu, "sigma": Q(sigma), "model": QuasiInput::of(&model) })
        }
    }))
}

fn read_document(input: &str) -> Result<(Value, Context), Error> {
    if input.trim_start().starts_with('{') {
        return Ok((io::parse_json(input)?, Context::default()));
    }
    let p = Path::new(input);
    let text = std::fs::read_to_string(p).map_err(|e| Error::Schema(format!("cannot read {input}: {e}")))?;
    Ok((io::parse_json(&text)?, Context::for_file(p)))
}

fn manifold(op: ManifoldOp, input: &str) -> Result<Outcome, Error> {
    let (doc, cx) = read_document(input)?;
    Ok(match op {
        ManifoldOp::Chi => {
            let (w, e) = io::six_input(doc, &cx)?;
            let (a, b) = chi(&w, &e)?;
            Outcome::ok(json!({ "chi": io::pair(&a, &b) }))
        }
        ManifoldOp::Phi => {
            let (w, e) = io::six_input(doc, &cx)?;
            let (a, b) = phi(&w, &e)?;
            Outcome::ok(json!({ "phi": io::pair(&a, &b) }))
        }
        ManifoldOp::Order => {
            let (w, e) = io::six_input(doc, &cx)?;
            let n = cobordism_order(&w, &e)?.to_string();
            Outcome::ok(json!({ "order": n.parse::<u64>().map_or(Value::String(n), Value::from) }))
        }
        ManifoldOp::Xi => {
            let d = io::from_value::<BundleInput>(doc)?.build(&cx)?;
            let (s, p) = xi(&d)?;
            Outcome::ok(json!({ "xi": [Q(emfd_core::exactlin::q(s)), Q(p)] }))
        }
        ManifoldOp::SphereBundle => {
            let d = io::from_value::<BundleInput>(doc)?.build(&cx)?;
            let s = build_sphere_bundle(&d)?;
            Outcome::ok(json!({ "model": s.total.to_spec(), "e": s.ef.to_coeffs() }))
        }
        ManifoldOp::SigmaQuasi => {
            let d = io::from_value::<QuasiInput>(doc)?.build(&cx)?;
            Outcome::ok(json!({ "sigma": Q(sigma_quasi(&d)?), "lambda": Q(d.self_linking()?) }))
        }
        ManifoldOp::SigmaGeometric => {
            let d = io::from_value::<GeometricInput>(doc)?.build(&cx)?;
            Outcome::ok(json!({ "sigma": Q(sigma_geometric(&d)?) }))
        }
        ManifoldOp::Haefliger => {
            let r = haefliger(&io::from_value::<HaefligerInput>(doc)?.build()?)?;
            if r.integral {
                Outcome::ok(to_value(&r))
            } else {
                Outcome::fail(to_value(&r), format!("H = {} is not an integer", r.h))
            }
        }
        ManifoldOp::EclassSolve => {
            let input = io::from_value::<EClassInput>(doc)?;
            let (m, target) = input.build()?;
            let sol = eclass_solve(&m, &target, input.ker_ix_dim)?;
            match &sol {
                EClassSolution::Affine { ker_dim_matches: Some(false), kernel_basis, .. } => Outcome::fail(
                    to_value(&sol),
                    format!(
                        "kernel has dimension {}, ker_iX_dim is {}",
                        kernel_basis.len(),
                        input.ker_ix_dim.unwrap_or_default()
                    ),
                ),
                _ => Outcome::ok(to_value(&sol)),
            }
        }
    })
}

fn verify_cmd(suite: &str, seed: u64) -> Result<Outcome, Error> {
    let (pass, payload, lines) = if suite == "all" {
        let r = verify::run_all(seed);
        let lines = r.suites.iter().map(summary).collect::<Vec<_>>();
        (r.pass, to_value(&r), lines)
    } else {
        let r = verify::run(suite, seed)?;
        (r.pass, to_value(&r), vec![summary(&r)])
    };
    for l in &lines {
        eprintln!("{l}");
    }
    Ok(if pass {
        Outcome::ok(payload)
    } else {
        Outcome { ok: false, payload, note: Some("verification failed".into()) }
    })
}

fn summary(r: &verify::SuiteReport) -> String {
    let n: usize = r.instances.values().sum();
    let verdict = if r.pass { "pass" } else { "FAIL" };
    format!("{}: {verdict}, {n} instances, {} counterexamples", r.suite, r.counterexamples.len())
}

fn render(v: &Value, indent: usize) -> String {
    if indent == 0 {
        return v.to_string();
    }
    let pad = vec![b' '; indent];
    let mut out = Vec::new();
    let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
    let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
    serde::Serialize::serialize(v, &mut ser).expect("in-memory write");
    String::from_utf8(out).expect("JSON is UTF-8")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Link { op, input } => link(*op, input),
        Command::Manifold { op, input } => manifold(*op, input),
        Command::Verify { suite } => verify_cmd(suite, cli.seed),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) if e.is_input_error() => {
            eprintln!("emfd: {e}");
            return ExitCode::from(2);
        }
        Err(e) => Outcome::fail(json!({ "error": e.kind() }), e.reason()),
    };
    if let Some(n) = &outcome.note {
        eprintln!("emfd: {n}");
    }
    println!("{}", render(&outcome.payload, cli.json_indent));
    ExitCode::from(if outcome.ok { 0 } else { 1 })
}
