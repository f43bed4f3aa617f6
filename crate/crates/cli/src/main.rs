//! `mwt`: batch front end for the engine.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 engine failure, 3 tower finding.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mwt::field::parse::{make_field, parse_elem};
use mwt::field::place::Place;
use mwt::field::tensor::SimpleExtension;
use mwt::gw::GWClass;
use mwt::harness::{self, Catalog, Config, Status};
use mwt::kmw::{MWElement, Projection};
use mwt::mw_corr::{self, EtaleScheme, MWCor};
use mwt::residues;
use mwt::rost_schmid::{self as rs, Cycle, Morphism, Scheme};
use mwt::transfers::{GtrInstance, Mutation, Transfers};
use mwt::{Elem, Field, Poly};

#[derive(Parser)]
#[command(name = "mwt", version, about = "Exact Milnor-Witt K-theory, transfers and Rost-Schmid complexes")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Normal form and invariants of a virtual quadratic form.
    Gw(GwArgs),
    /// Normal form of a Milnor-Witt K-theory element.
    Kmw(KmwArgs),
    /// Residue and specialization at a place of a rational function field.
    Residue(ResidueArgs),
    /// Transfer along a simple extension F[x]/(f).
    Transfer(TransferArgs),
    /// Rost-Schmid complex of a line: differential, A^0, push-forward along t -> t^m.
    Rs(RsArgs),
    /// Composite of classes on Spec F_1 ⊔ ... with the transposed graph to Spec k.
    Corr(CorrArgs),
    /// Run the verification suites.
    Check(CheckArgs),
}

#[derive(Args)]
struct GwArgs {
    /// Field descriptor, e.g. "GF(9)", "Q", "Q[i]/(i^2+1)", "GF(3)(t)".
    #[arg(long)]
    field: String,
    /// Form literal, e.g. "<1,2> - <3>", "h", "n_eps(3)".
    #[arg(long)]
    form: String,
    /// Compare with another form.
    #[arg(long)]
    equals: Option<String>,
}

#[derive(Args)]
struct KmwArgs {
    #[arg(long)]
    field: String,
    /// Element literal, e.g. "[2] + eta*[2,2]".
    #[arg(long)]
    elem: String,
    /// Multiply by a second element.
    #[arg(long)]
    times: Option<String>,
    /// Image in Milnor K-theory or the Witt ring.
    #[arg(long, value_enum)]
    project: Option<Theory>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Theory {
    Milnor,
    Witt,
}

#[derive(Args)]
struct ResidueArgs {
    /// A rational function field, e.g. "GF(3)(t)".
    #[arg(long)]
    field: String,
    #[arg(long)]
    elem: String,
    /// Monic irreducible polynomial in the field variable, or "inf".
    #[arg(long)]
    place: String,
}

#[derive(Args)]
struct TransferArgs {
    /// Base field descriptor.
    #[arg(long)]
    field: String,
    /// Minimal polynomial in x of the generator.
    #[arg(long)]
    ext: String,
    /// Element of F[x]/(f).
    #[arg(long)]
    elem: String,
    /// Skip the normalization by the derivative of f.
    #[arg(long)]
    raw: bool,
}

#[derive(Args)]
struct RsArgs {
    /// Constant field of the line.
    #[arg(long)]
    field: String,
    #[arg(long, value_enum, default_value_t = Line::Projective)]
    line: Line,
    /// Cycle literal, e.g. "{ gen: [t] }" or "{ (t+1): <2>, inf: 1 }".
    #[arg(long)]
    cycle: String,
    #[arg(long, value_enum, default_value_t = RsOp::Differential)]
    op: RsOp,
    /// Exponent for the push-forward along t -> t^m.
    #[arg(long, default_value_t = 2)]
    m: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum Line {
    Affine,
    Projective,
}

#[derive(Clone, Copy, ValueEnum)]
enum RsOp {
    Differential,
    A0,
    Push,
}

#[derive(Args)]
struct CorrArgs {
    /// Base field.
    #[arg(long)]
    field: String,
    /// Component fields, repeated.
    #[arg(long = "component", required = true)]
    components: Vec<String>,
    /// One class per component, repeated in the same order.
    #[arg(long = "class", required = true)]
    classes: Vec<String>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random samples per check and instance.
    #[arg(long, default_value_t = 4)]
    samples: usize,
    /// Catalog field, repeated; defaults to the built-in catalog.
    #[arg(long = "catalog")]
    catalog: Vec<String>,
    /// Run only this check, repeated.
    #[arg(long = "only")]
    only: Vec<String>,
    /// Coefficient theory, repeated; defaults to all three.
    #[arg(long = "instance", value_enum)]
    instances: Vec<Instance>,
    /// Corrupt the transfers to show the checks are not vacuous.
    #[arg(long, value_enum)]
    mutation: Option<MutationArg>,
    /// Report wall times (makes the output non-reproducible).
    #[arg(long)]
    timings: bool,
    /// List the check ids and exit.
    #[arg(long)]
    list: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Instance {
    Kmw,
    Km,
    W,
}

#[derive(Clone, Copy, ValueEnum)]
enum MutationArg {
    FlipInfinitySign,
    DropEpsilon,
}

enum Failure {
    Usage(String),
    Engine(String),
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn engine(e: impl std::fmt::Display) -> Failure {
    Failure::Engine(e.to_string())
}

/// Printed output and the exit status it carries.
struct Output {
    text: String,
    json: String,
    code: u8,
}

impl Output {
    fn ok(text: String, json: Value) -> Output {
        Output {
            text,
            json: format!("{json}\n"),
            code: 0,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(&cli.command) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => print!("{}", out.json),
            }
            ExitCode::from(out.code)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Engine(m)) => {
            eprintln!("engine error: {m}");
            ExitCode::from(2)
        }
    }
}

fn execute(cmd: &Command) -> Result<Output, Failure> {
    match cmd {
        Command::Gw(a) => gw(a),
        Command::Kmw(a) => kmw(a),
        Command::Residue(a) => residue(a),
        Command::Transfer(a) => transfer(a),
        Command::Rs(a) => rost_schmid(a),
        Command::Corr(a) => corr(a),
        Command::Check(a) => check(a),
    }
}

fn record(command: &str, fields: Value) -> Value {
    let mut v = json!({ "schema": harness::SCHEMA, "command": command });
    if let (Some(obj), Value::Object(extra)) = (v.as_object_mut(), fields) {
        obj.extend(extra);
    }
    v
}

fn field(desc: &str) -> Result<Field, Failure> {
    make_field(desc).map_err(usage)
}

fn gw(a: &GwArgs) -> Result<Output, Failure> {
    let k = field(&a.field)?;
    let q = GWClass::parse(&k, &a.form).map_err(usage)?;
    let other = a.equals.as_deref().map(|s| GWClass::parse(&k, s)).transpose().map_err(usage)?;
    let reduced = q.reduced();
    let det = k.format(&q.determinant());
    let equal = other.map(|o| q.eq_gw(&o)).transpose().map_err(engine)?;
    let mut text = format!("{reduced}\nrank {}\ndeterminant {det}\n", q.rank());
    if let Some(e) = equal {
        text.push_str(&format!("equal {e}\n"));
    }
    let json = record(
        "gw",
        json!({ "field": k.descriptor(), "form": reduced.to_string(), "rank": q.rank(), "determinant": det, "equal": equal }),
    );
    Ok(Output::ok(text, json))
}

fn kmw(a: &KmwArgs) -> Result<Output, Failure> {
    let k = field(&a.field)?;
    let x = MWElement::parse(&k, &a.elem).map_err(usage)?;
    let y = a.times.as_deref().map(|s| MWElement::parse(&k, s)).transpose().map_err(usage)?;
    let mut z = match y {
        Some(y) => x.mul(&y).map_err(engine)?,
        None => x,
    };
    let proj = match a.project {
        None => Projection::Full,
        Some(Theory::Milnor) => Projection::Milnor,
        Some(Theory::Witt) => Projection::Witt,
    };
    z = residues::project(&z, proj);
    let zero = z.is_zero_in(proj).map_err(engine)?;
    let text = format!("{z}\ndegree {}\nzero {zero}\n", z.degree());
    let json = record(
        "kmw",
        json!({ "field": k.descriptor(), "result": z.to_string(), "degree": z.degree(), "zero": zero }),
    );
    Ok(Output::ok(text, json))
}

fn polynomial(ff: &Field, s: &str) -> Result<Poly, Failure> {
    match parse_elem(ff, s).map_err(usage)? {
        Elem::Frac(n, d) if d.degree() == Some(0) => {
            let b = ff.base().expect("rational function field");
            let inv = b.inv(&d.coeffs()[0]).map_err(usage)?;
            Ok(n.map(|c| b.mul(c, &inv)))
        }
        _ => Err(usage(format!("{s} is not a polynomial"))),
    }
}

fn residue(a: &ResidueArgs) -> Result<Output, Failure> {
    let ff = field(&a.field)?;
    if !ff.is_ratfunc() {
        return Err(usage(format!("{ff} is not a rational function field")));
    }
    let x = MWElement::parse(&ff, &a.elem).map_err(usage)?;
    let v = if a.place.trim() == "inf" {
        Place::infinity(&ff).map_err(usage)?
    } else {
        Place::finite(&ff, polynomial(&ff, &a.place)?).map_err(usage)?
    };
    let (s, r) = residues::theta(&x, &v).map_err(engine)?;
    let text = format!("residue {r}\nspecialization {s}\n");
    let json = record(
        "residue",
        json!({ "field": ff.descriptor(), "place": v.label(), "residue": r.to_string(), "specialization": s.to_string() }),
    );
    Ok(Output::ok(text, json))
}

fn transfer(a: &TransferArgs) -> Result<Output, Failure> {
    let e = field(&a.field)?;
    let f = field(&format!("{}[x]/({})", e.descriptor(), a.ext))?;
    let ext = SimpleExtension::structural(&f).map_err(usage)?;
    let beta = MWElement::parse(&f, &a.elem).map_err(usage)?;
    let mut ctx = Transfers::new();
    let tr = if a.raw {
        ctx.raw(&beta, &ext)
    } else {
        ctx.canonical(&beta, &ext)
    }
    .map_err(engine)?;
    let tr = residues::project(&tr.untwisted(), Projection::Full);
    let shown = if tr.degree() == 0 {
        GWClass::from_mw(&tr).map_err(engine)?.reduced().to_string()
    } else {
        tr.to_string()
    };
    let text = format!("{shown}\n");
    let json = record(
        "transfer",
        json!({ "base": e.descriptor(), "extension": f.descriptor(), "raw": a.raw, "result": shown }),
    );
    Ok(Output::ok(text, json))
}

fn rost_schmid(a: &RsArgs) -> Result<Output, Failure> {
    let k = field(&a.field)?;
    let x = match a.line {
        Line::Affine => Scheme::affine_line(&k),
        Line::Projective => Scheme::projective_line(&k),
    };
    let c = Cycle::parse(&x, &a.cycle).map_err(usage)?;
    let (label, result) = match a.op {
        RsOp::Differential => ("differential", rs::differential(&c).map_err(engine)?.to_string()),
        RsOp::Push => {
            let f = Morphism::power(&x, a.m).map_err(usage)?;
            let out = rs::pushforward(&mut Transfers::new(), &f, &c).map_err(engine)?;
            ("pushforward", out.to_string())
        }
        RsOp::A0 => {
            let m = rs::a0(&c).map_err(engine)?;
            let shown = match (&m.constant, m.unramified) {
                (Some(c), _) => format!("unramified, constant {c}"),
                (None, true) => "unramified".to_string(),
                (None, false) => "ramified".to_string(),
            };
            ("a0", shown)
        }
    };
    let text = format!("{result}\n");
    let json = record("rs", json!({ "scheme": x.to_string(), "op": label, "result": result }));
    Ok(Output::ok(text, json))
}

fn corr(a: &CorrArgs) -> Result<Output, Failure> {
    let k = field(&a.field)?;
    if a.components.len() != a.classes.len() {
        return Err(usage("give one --class per --component"));
    }
    let fields: Vec<Field> = a.components.iter().map(|d| field(d)).collect::<Result<_, _>>()?;
    let classes: Vec<GWClass> = fields
        .iter()
        .zip(&a.classes)
        .map(|(f, s)| GWClass::parse(f, s))
        .collect::<mwt::Result<_>>()
        .map_err(usage)?;
    let x = EtaleScheme::new(&k, &fields).map_err(usage)?;
    let pt = EtaleScheme::point(&k).map_err(engine)?;
    let graph = MWCor::from_fn(&x, &pt, |_, _, p| Ok(GWClass::one(&p.residue))).map_err(engine)?;
    let out = mw_corr::act_on_class(&mut Transfers::new(), &graph, &classes).map_err(engine)?;
    let shown = out.reduced().to_string();
    let text = format!("{x} -> Spec {k}\n{shown}\n");
    let json = record("corr", json!({ "source": x.to_string(), "base": k.descriptor(), "result": shown }));
    Ok(Output::ok(text, json))
}

fn check(a: &CheckArgs) -> Result<Output, Failure> {
    if a.list {
        let ids: Vec<&str> = harness::check_ids().collect();
        let text = ids.iter().map(|i| format!("{i}\n")).collect();
        return Ok(Output::ok(text, record("check", json!({ "checks": ids }))));
    }
    let catalog = if a.catalog.is_empty() {
        Catalog::default()
    } else {
        let d: Vec<&str> = a.catalog.iter().map(String::as_str).collect();
        Catalog::parse(&d).map_err(usage)?
    };
    let instances = if a.instances.is_empty() {
        GtrInstance::ALL.to_vec()
    } else {
        a.instances
            .iter()
            .map(|i| {
                GtrInstance(match i {
                    Instance::Kmw => Projection::Full,
                    Instance::Km => Projection::Milnor,
                    Instance::W => Projection::Witt,
                })
            })
            .collect()
    };
    let cfg = Config {
        catalog,
        seed: a.seed,
        samples: a.samples,
        instances,
        mutation: a.mutation.map(|m| match m {
            MutationArg::FlipInfinitySign => Mutation::FlipInfinitySign,
            MutationArg::DropEpsilon => Mutation::DropEpsilon,
        }),
        deterministic: !a.timings,
        only: (!a.only.is_empty()).then(|| a.only.clone()),
    };
    let report = harness::run(&cfg).map_err(usage)?;
    let mut text = String::new();
    for r in &report.results {
        let status = match r.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Finding => "FINDING",
            Status::Error => "ERROR",
        };
        text.push_str(&format!("{status:<8} {:<32} {}", r.id, r.anchor));
        if a.timings {
            text.push_str(&format!(" ({} ms)", r.millis));
        }
        text.push('\n');
        if let Some(w) = &r.witness {
            text.push_str(&format!("         witness: {w}\n"));
        }
    }
    Ok(Output {
        text,
        json: report.to_json_lines(),
        code: report.exit_code() as u8,
    })
}
