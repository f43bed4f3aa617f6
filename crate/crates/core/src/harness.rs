//! Seeded verification suites: every structural identity of the engine as an executable check,
//! with a deterministic JSON-lines report.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::embed::Embedding;
use crate::field::parse::make_field;
use crate::field::place::{Place, PlaceKind};
use crate::field::tensor::SimpleExtension;
use crate::field::{Elem, Field, FieldKind, Poly};
use crate::gw::{scharlau_transfer, GWClass};
use crate::kmw::{MWElement, Projection};
use crate::mw_corr::{self, EtaleScheme, MWCor};
use crate::residues::{self, Coresidues};
use crate::rost_schmid::{self as rs, Cycle, Morphism, Point, Scheme};
use crate::sample;
use crate::transfers::{self, primitive_extension, GtrInstance, Mutation, TowerPresentation, Transfers};

/// Version tag carried by every report record.
pub const SCHEMA: &str = "mwt.v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A tower presentation changed a transfer. Not an engine failure.
    Finding,
    /// The engine returned an error while running the check.
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub schema: &'static str,
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub witness: Option<String>,
    pub millis: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub results: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.status == Status::Pass)
    }

    pub fn get(&self, id: &str) -> Option<&CheckResult> {
        self.results.iter().find(|r| r.id == id)
    }

    pub fn findings(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| r.status == Status::Finding)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results
            .iter()
            .filter(|r| matches!(r.status, Status::Fail | Status::Error))
    }

    /// `0` when everything passes, `2` on a failure or error, `3` when the only deviations are
    /// findings.
    pub fn exit_code(&self) -> i32 {
        if self.failures().next().is_some() {
            2
        } else if self.findings().next().is_some() {
            3
        } else {
            0
        }
    }

    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&serde_json::to_string(r).expect("report records serialize"));
            out.push('\n');
        }
        out
    }
}

/// The fields a run draws its instances from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    entries: Vec<Field>,
}

pub const DEFAULT_CATALOG: [&str; 6] = ["GF(3)", "GF(5)", "GF(9)", "GF(3)(t)", "Q", "Q[i]/(i^2+1)"];

impl Default for Catalog {
    fn default() -> Catalog {
        Catalog::parse(&DEFAULT_CATALOG).expect("default catalog is supported")
    }
}

impl Catalog {
    pub fn new(entries: Vec<Field>) -> Result<Catalog> {
        if entries.is_empty() {
            return Err(Error::Invalid("empty catalog".into()));
        }
        for k in &entries {
            if !supported(k) {
                return Err(Error::Unsupported(format!("catalog entry {k}")));
            }
        }
        Ok(Catalog { entries })
    }

    pub fn parse(descriptors: &[&str]) -> Result<Catalog> {
        Catalog::new(descriptors.iter().map(|d| make_field(d)).collect::<Result<_>>()?)
    }

    pub fn entries(&self) -> &[Field] {
        &self.entries
    }

    fn finite(&self) -> impl Iterator<Item = &Field> {
        self.entries.iter().filter(|k| k.is_finite())
    }

    /// Rational function fields in one variable over the finite entries, and the function field
    /// entries themselves.
    fn function_fields(&self) -> Vec<Field> {
        let mut out: Vec<Field> = Vec::new();
        for k in &self.entries {
            let ff = if k.is_finite() {
                Field::rational_functions(k, "t")
            } else if k.is_ratfunc() {
                k.clone()
            } else {
                continue;
            };
            if !out.contains(&ff) {
                out.push(ff);
            }
        }
        out
    }

    fn characteristics(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.finite().map(|k| k.characteristic()).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }
}

fn supported(k: &Field) -> bool {
    match k.kind() {
        FieldKind::Rationals => true,
        FieldKind::RatFunc { base } => base.is_finite(),
        _ if k.is_finite() => true,
        _ => k.is_number_field() && k.dim_over_ground() == 2,
    }
}

/// The quadratic extension attached to a catalog entry.
pub fn catalog_extension(k: &Field) -> Result<SimpleExtension> {
    if let Some(q) = k.order() {
        return primitive_extension(k, &Field::gf(q * q)?);
    }
    match k.kind() {
        FieldKind::Rationals => primitive_extension(k, &make_field("Q[i]/(i^2+1)")?),
        FieldKind::RatFunc { .. } => {
            let t = k.gen();
            let m = Poly::new(vec![k.neg(&t), k.zero(), k.one()]);
            SimpleExtension::structural(&Field::extension(k, m, "x")?)
        }
        _ => {
            let m = Poly::new(vec![k.from_i64(-2), k.zero(), k.one()]);
            primitive_extension(k, &Field::extension(k, m, "r")?)
        }
    }
}

/// Further separable extensions used by the trace-form comparison.
fn unicity_extensions(k: &Field) -> Result<Vec<SimpleExtension>> {
    let mut out = vec![catalog_extension(k)?];
    if let Some(q) = k.order() {
        if k.dim_over_ground() == 1 {
            out.push(primitive_extension(k, &Field::gf(q * q * q)?)?);
        }
    } else if matches!(k.kind(), FieldKind::Rationals) {
        out.push(primitive_extension(k, &make_field("Q[r]/(r^2-2)")?)?);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Config {
    pub catalog: Catalog,
    pub seed: u64,
    /// Random samples per check and instance.
    pub samples: usize,
    pub instances: Vec<GtrInstance>,
    pub mutation: Option<Mutation>,
    /// Zero the timings so that reports are byte-identical.
    pub deterministic: bool,
    /// Restrict to these check ids.
    pub only: Option<Vec<String>>,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            catalog: Catalog::default(),
            seed: 0,
            samples: 4,
            instances: GtrInstance::ALL.to_vec(),
            mutation: None,
            deterministic: true,
            only: None,
        }
    }
}

enum Outcome {
    Pass,
    Fail(String),
    Finding(String),
}

struct Run<'a> {
    cfg: &'a Config,
    rng: ChaCha8Rng,
    ctx: Transfers,
}

type CheckFn = fn(&mut Run) -> Result<Outcome>;

/// A named check with the identity it exercises.
#[derive(Clone, Copy)]
pub struct CheckSpec {
    pub id: &'static str,
    pub anchor: &'static str,
    run: CheckFn,
}

impl std::fmt::Debug for CheckSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CheckSpec").field("id", &self.id).finish()
    }
}

pub const CHECKS: &[CheckSpec] = &[
    CheckSpec {
        id: "corr.category_laws",
        anchor: "(γ∘β)∘α = γ∘(β∘α) and id∘α = α = α∘id",
        run: corr_category_laws,
    },
    CheckSpec {
        id: "corr.graph_transfer",
        anchor: "⟨1⟩ on the transposed graph of Spec F → Spec E acts as Tr_{F/E}",
        run: corr_graph_transfer,
    },
    CheckSpec {
        id: "residue.constant_squares",
        anchor: "∂_w∘res = 0 and ∂_w([π_w]·res x) = res_{κ(w)}(x) for w trivial on the constants",
        run: residue_constant_squares,
    },
    CheckSpec {
        id: "residue.coresidue",
        anchor: "∂_x∘ρ_x = id and ∂_y∘ρ_x = 0 for finite y ≠ x",
        run: residue_coresidue,
    },
    CheckSpec {
        id: "residue.restriction_square",
        anchor: "∂_w∘res_{F/E} = e_ε⟨ū⟩·res_{κ(w)/κ(v)}∘∂_v with π_v = u·π_w^e",
        run: residue_restriction_square,
    },
    CheckSpec {
        id: "residue.split_exact",
        anchor: "0 → M(F) → M(F(t)) → ⊕_x M_{-1}(κ(x)) → 0 is split exact",
        run: residue_split_exact,
    },
    CheckSpec {
        id: "residue.unit_commutation",
        anchor: "∂_v([u]·x) = ε[ū]·∂_v(x) for a v-unit u",
        run: residue_unit_commutation,
    },
    CheckSpec {
        id: "rs.functoriality",
        anchor: "(g∘f)_* = g_*∘f_* and g^*∘f_* = f'_*∘g'^*",
        run: rs_functoriality,
    },
    CheckSpec {
        id: "rs.gw_action_commutes",
        anchor: "d∘⟨a⟩ = ⟨a⟩∘d",
        run: rs_gw_action_commutes,
    },
    CheckSpec {
        id: "rs.pullback_commutes",
        anchor: "g^*∘d = d∘g^*",
        run: rs_pullback_commutes,
    },
    CheckSpec {
        id: "rs.pushforward_commutes",
        anchor: "d∘f_* = f_*∘d",
        run: rs_pushforward_commutes,
    },
    CheckSpec {
        id: "transfer.base_change.catalog",
        anchor: "res_{L/E}∘Tr_{F/E} = Σ_p (m_p)_ε·Tr_{R_p/L}∘res_{R_p/F} over F ⊗_E L = Π_p R_p",
        run: transfer_base_change_catalog,
    },
    CheckSpec {
        id: "transfer.base_change.generator",
        anchor: "res_{L/E}∘tr_{x/E} = Σ_y (e_y)_ε·tr_{y/L}∘res over the points y of A^1_L above x",
        run: transfer_base_change_generator,
    },
    CheckSpec {
        id: "transfer.functoriality",
        anchor: "Tr_{F/E} = Tr_{K/E}∘Tr_{F/K} for E ⊂ K ⊂ F",
        run: transfer_functoriality,
    },
    CheckSpec {
        id: "transfer.kernel_kill",
        anchor: "tr_{x/E}(1)·β = 0 for β in the kernel of res_{E(x)/E}",
        run: transfer_kernel_kill,
    },
    CheckSpec {
        id: "transfer.projection.base",
        anchor: "Tr_{F/E}(⟨a⟩·μ) = ⟨a⟩·Tr_{F/E}(μ) for a ∈ E",
        run: transfer_projection_base,
    },
    CheckSpec {
        id: "transfer.projection.top",
        anchor: "Tr_{F/E}(⟨a⟩·res μ) = Tr_{F/E}(⟨a⟩)·μ for a ∈ F",
        run: transfer_projection_top,
    },
    CheckSpec {
        id: "transfer.residue_compat",
        anchor: "∂_v∘Tr_{F/E} = Σ_{w|v} Tr_{κ(w)/κ(v)}∘∂_w",
        run: transfer_residue_compat,
    },
    CheckSpec {
        id: "transfer.tower_independence",
        anchor: "tower transfers agree for different generating systems of F/E",
        run: transfer_tower_independence,
    },
    CheckSpec {
        id: "transfer.unicity",
        anchor: "canonical transfer = trace form on GW",
        run: transfer_unicity,
    },
];

pub fn check_ids() -> impl Iterator<Item = &'static str> {
    CHECKS.iter().map(|c| c.id)
}

/// Runs the selected checks. With no samples the report is empty.
pub fn run(cfg: &Config) -> Result<Report> {
    if let Some(only) = &cfg.only {
        if let Some(bad) = only.iter().find(|id| !CHECKS.iter().any(|c| c.id == id.as_str())) {
            return Err(Error::Invalid(format!("unknown check {bad}")));
        }
    }
    let mut report = Report::default();
    if cfg.samples == 0 {
        return Ok(report);
    }
    let mut specs: Vec<&CheckSpec> = CHECKS
        .iter()
        .filter(|c| cfg.only.as_ref().is_none_or(|o| o.iter().any(|id| id == c.id)))
        .collect();
    specs.sort_by_key(|c| c.id);
    for spec in specs {
        report.results.push(run_one(cfg, spec));
    }
    Ok(report)
}

fn run_one(cfg: &Config, spec: &CheckSpec) -> CheckResult {
    let mut run = Run {
        cfg,
        rng: sample::substream(cfg.seed, spec.id),
        ctx: Transfers::with_mutation(cfg.mutation),
    };
    let start = Instant::now();
    let outcome = (spec.run)(&mut run);
    let millis = if cfg.deterministic {
        0
    } else {
        start.elapsed().as_millis() as u64
    };
    let (status, witness) = match outcome {
        Ok(Outcome::Pass) => (Status::Pass, None),
        Ok(Outcome::Fail(w)) => (Status::Fail, Some(w)),
        Ok(Outcome::Finding(w)) => (Status::Finding, Some(w)),
        Err(e) => (Status::Error, Some(e.to_string())),
    };
    CheckResult {
        schema: SCHEMA,
        id: spec.id.to_string(),
        anchor: spec.anchor.to_string(),
        status,
        witness,
        millis,
    }
}

// ---- helpers ----

macro_rules! ensure {
    ($cond:expr, $($w:tt)*) => {
        if !$cond {
            return Ok(Outcome::Fail(format!($($w)*)));
        }
    };
}

fn degree<R: Rng + ?Sized>(rng: &mut R, choices: &[i64]) -> i64 {
    *choices.choose(rng).expect("nonempty degree list")
}

fn finite_place<R: Rng + ?Sized>(ff: &Field, max_deg: usize, rng: &mut R) -> Result<Place> {
    let k = ff.base().expect("rational function field");
    let d = rng.gen_range(1..=max_deg);
    Place::finite(ff, sample::irreducible(k, d, rng)?)
}

/// A unit at `v` of the function field.
fn unit_at<R: Rng + ?Sized>(v: &Place, rng: &mut R) -> Result<Elem> {
    loop {
        let u = sample::unit(v.field(), rng)?;
        if v.valuation(&u)? == 0 {
            return Ok(u);
        }
    }
}

fn quadratic_discriminant(ext: &SimpleExtension) -> Option<Elem> {
    let m = ext.minpoly();
    if m.degree() != Some(2) {
        return None;
    }
    let e = ext.base();
    let c = m.coeffs();
    let b2 = e.mul(&c[1], &c[1]);
    Some(e.sub(&b2, &e.mul(&e.from_i64(4), &c[0])))
}

// ---- transfers ----

fn transfer_functoriality(run: &mut Run) -> Result<Outcome> {
    let mut chains = Vec::new();
    for p in run.cfg.catalog.characteristics() {
        let top = if p == 3 { 6 } else { 4 };
        let k = Field::prime(p)?;
        let f = Field::gf(p.pow(top))?;
        for mid in (2..top).filter(|d| top % d == 0) {
            chains.push((k.clone(), Field::gf(p.pow(mid))?, f.clone()));
        }
    }
    for (e, k, f) in chains {
        let direct = primitive_extension(&e, &f)?;
        let lower = primitive_extension(&e, &k)?;
        let upper = primitive_extension(&k, &f)?;
        for _ in 0..run.cfg.samples {
            let n = degree(&mut run.rng, &[-2, -1, 0, 1, 2]);
            let beta = sample::mw(&f, n, 2, &mut run.rng)?;
            for inst in &run.cfg.instances {
                let ok = transfers::functoriality_check(&mut run.ctx, &direct, &lower, &upper, &beta, inst.projection())?;
                ensure!(ok, "{e} ⊂ {k} ⊂ {f}, {}, β = {beta}", inst.name());
            }
        }
    }
    Ok(Outcome::Pass)
}

fn transfer_base_change_generator(run: &mut Run) -> Result<Outcome> {
    let fields: Vec<Field> = run.cfg.catalog.finite().cloned().collect();
    for e in fields {
        let l_ext = catalog_extension(&e)?;
        let e_to_l = l_ext.base_embedding().clone().then(l_ext.to_field().clone());
        for _ in 0..run.cfg.samples {
            let d = run.rng.gen_range(2..=3);
            let pi = sample::irreducible(&e, d, &mut run.rng)?;
            let f = Field::extension_unchecked(&e, pi, "x");
            let ext = SimpleExtension::structural(&f)?;
            let n = degree(&mut run.rng, &[-1, 0, 1]);
            let beta = sample::mw(&f, n, 2, &mut run.rng)?;
            for inst in &run.cfg.instances {
                let rep = transfers::verify_base_change(&mut run.ctx, &ext, &e_to_l, &beta, inst.projection())?;
                ensure!(
                    rep.equal,
                    "E = {e}, F = {f}, L = {}, {}, β = {beta}: {} ≠ {}",
                    e_to_l.dst(),
                    inst.name(),
                    rep.left,
                    rep.right
                );
            }
        }
    }
    Ok(Outcome::Pass)
}

/// `(E, F = E[x]/(f), E → L)` for the fixed base-change catalog.
pub fn base_change_catalog() -> Result<Vec<(SimpleExtension, Embedding)>> {
    let gf3 = Field::prime(3)?;
    let gf9 = Field::gf(9)?;
    let gf27 = Field::gf(27)?;
    let q = Field::rationals();
    let qi = make_field("Q[i]/(i^2+1)")?;
    let s = make_field("GF(3)(s)")?;
    let cube = Poly::new(vec![s.neg(&s.gen()), s.zero(), s.zero(), s.one()]);
    let root = Field::extension(&s, cube, "x")?;
    let root_ext = SimpleExtension::structural(&root)?;
    let root_emb = root_ext.base_embedding().clone().then(root_ext.to_field().clone());
    Ok(vec![
        (primitive_extension(&gf3, &gf9)?, Embedding::natural(&gf3, &gf9)?),
        (primitive_extension(&gf3, &gf27)?, Embedding::natural(&gf3, &gf9)?),
        (primitive_extension(&q, &qi)?, Embedding::natural(&q, &qi)?),
        (root_ext, root_emb),
    ])
}

fn transfer_base_change_catalog(run: &mut Run) -> Result<Outcome> {
    for (ext, e_to_l) in base_change_catalog()? {
        let f = ext.field().clone();
        for _ in 0..run.cfg.samples {
            let n = degree(&mut run.rng, &[-1, 0, 1]);
            let beta = sample::mw(&f, n, 2, &mut run.rng)?;
            for inst in &run.cfg.instances {
                let rep = transfers::verify_base_change(&mut run.ctx, &ext, &e_to_l, &beta, inst.projection())?;
                ensure!(
                    rep.equal,
                    "E = {}, F = {f}, L = {}, {}, β = {beta}: {} ≠ {}",
                    ext.base(),
                    e_to_l.dst(),
                    inst.name(),
                    rep.left,
                    rep.right
                );
            }
        }
        // The unit class separates `(m)_ε` from `m` on the inseparable instance.
        let one = MWElement::one(&f);
        let rep = transfers::verify_base_change(&mut run.ctx, &ext, &e_to_l, &one, Projection::Full)?;
        ensure!(rep.equal, "E = {}, F = {f}, β = 1: {} ≠ {}", ext.base(), rep.left, rep.right);
    }
    Ok(Outcome::Pass)
}

fn projection(run: &mut Run, top: bool) -> Result<Outcome> {
    let fields = run.cfg.catalog.entries().to_vec();
    for e in fields {
        let ext = catalog_extension(&e)?;
        let f = ext.field().clone();
        for _ in 0..run.cfg.samples {
            let n = degree(&mut run.rng, &[-1, 0, 1]);
            for inst in &run.cfg.instances {
                let proj = inst.projection();
                if top {
                    let a = sample::unit(&f, &mut run.rng)?;
                    let mu = sample::mw(&e, n, 2, &mut run.rng)?;
                    let ok = transfers::projection_check_top(&mut run.ctx, &ext, &a, &mu, proj)?;
                    ensure!(ok, "F/E = {f}/{e}, {}, a = {}, μ = {mu}", inst.name(), f.format(&a));
                } else {
                    let a = sample::unit(&e, &mut run.rng)?;
                    let mu = sample::mw(&f, n, 2, &mut run.rng)?;
                    let ok = transfers::projection_check_base(&mut run.ctx, &ext, &a, &mu, proj)?;
                    ensure!(ok, "F/E = {f}/{e}, {}, a = {}, μ = {mu}", inst.name(), e.format(&a));
                }
            }
        }
    }
    Ok(Outcome::Pass)
}

fn transfer_projection_base(run: &mut Run) -> Result<Outcome> {
    projection(run, false)
}

fn transfer_projection_top(run: &mut Run) -> Result<Outcome> {
    projection(run, true)
}

/// `E = B(t)`, `F = E[x]/(x^2 - t)` and the places `(t)` (ramified), `(t - 1)` (split) and
/// `(t^2 + 1)` or a random place.
fn residue_compat_instances(run: &mut Run) -> Result<Vec<(SimpleExtension, Place)>> {
    let mut out = Vec::new();
    for ff in run.cfg.catalog.function_fields() {
        let b = ff.base().expect("function field").clone();
        let ext = catalog_extension(&ff)?;
        out.push((ext.clone(), Place::finite(&ff, Poly::x(&b))?));
        out.push((ext.clone(), Place::finite(&ff, Poly::linear(&b, &b.one()))?));
        out.push((ext, finite_place(&ff, 2, &mut run.rng)?));
    }
    Ok(out)
}

fn transfer_residue_compat(run: &mut Run) -> Result<Outcome> {
    for (ext, v) in residue_compat_instances(run)? {
        let f = ext.field().clone();
        for _ in 0..run.cfg.samples {
            let n = degree(&mut run.rng, &[0, 1, 2]);
            let beta = sample::mw(&f, n, 2, &mut run.rng)?;
            let (l, r) = transfers::residue_transfer_sides(&mut run.ctx, &ext, &v, &beta)?;
            for inst in &run.cfg.instances {
                ensure!(
                    l.eq_proj(&r, inst.projection())?,
                    "F = {f}, v = {}, {}, β = {beta}: {l} ≠ {r}",
                    v.label(),
                    inst.name()
                );
            }
        }
    }
    Ok(Outcome::Pass)
}

fn transfer_unicity(run: &mut Run) -> Result<Outcome> {
    let fields: Vec<Field> = run
        .cfg
        .catalog
        .entries()
        .iter()
        .filter(|k| !k.is_ratfunc())
        .cloned()
        .collect();
    for e in fields {
        for ext in unicity_extensions(&e)? {
            let f = ext.field().clone();
            let mut elems = vec![f.one()];
            for _ in 0..run.cfg.samples {
                elems.push(sample::unit(&f, &mut run.rng)?);
            }
            for a in elems {
                let (bt, sch, eq) = transfers::unicity_check(&mut run.ctx, &ext, &a)?;
                ensure!(eq, "F/E = {f}/{e}, a = {}: {bt} ≠ {sch}", f.format(&a));
            }
        }
    }
    Ok(Outcome::Pass)
}

fn transfer_kernel_kill(run: &mut Run) -> Result<Outcome> {
    let fields = run.cfg.catalog.entries().to_vec();
    for e in fields {
        // Kernel membership is decided in `F`, where equality must be available.
        if e.is_number_field() {
            continue;
        }
        let ext = catalog_extension(&e)?;
        let Some(disc) = quadratic_discriminant(&ext) else { continue };
        // `⟨disc⟩ - 1` dies in `F`, where the discriminant is a square.
        let base = MWElement::angle(&e, &disc)?.sub(&MWElement::one(&e))?;
        let mut kernel = vec![MWElement::zero(&e, 0), base.clone(), base.eta_mul()];
        for _ in 0..run.cfg.samples {
            let c = sample::nontrivial_unit(&e, &mut run.rng)?;
            kernel.push(base.mul(&MWElement::bracket(&e, &c)?)?);
        }
        for beta in kernel {
            let ok = transfers::kernel_kill_check(&mut run.ctx, &ext, &beta)?;
            ensure!(ok, "F/E = {}/{e}, β = {beta}", ext.field());
        }
    }
    Ok(Outcome::Pass)
}

/// Pairs of tower presentations of the same extension.
pub fn tower_pairs() -> Result<Vec<(TowerPresentation, TowerPresentation)>> {
    let gf3 = Field::prime(3)?;
    let gf81 = Field::gf(81)?;
    let g = gf81.gen();
    let via_gf9 = TowerPresentation::new(Embedding::natural(&gf3, &gf81)?, vec![gf81.pow(&g, 10)?, g.clone()])?;
    let direct = TowerPresentation::new(Embedding::natural(&gf3, &gf81)?, vec![g])?;
    let q = Field::rationals();
    let bq = make_field("Q[x]/(x^4-10*x^2+1)")?;
    let x = bq.gen();
    let x3 = bq.pow(&x, 3)?;
    let half = bq.inv(&bq.from_i64(2))?;
    let nine_x = bq.mul(&bq.from_i64(9), &x);
    let eleven_x = bq.mul(&bq.from_i64(11), &x);
    let sqrt2 = bq.mul(&half, &bq.sub(&x3, &nine_x));
    let sqrt3 = bq.mul(&half, &bq.sub(&eleven_x, &x3));
    let via_sqrt2 = TowerPresentation::new(Embedding::natural(&q, &bq)?, vec![sqrt2, sqrt3])?;
    let primitive = TowerPresentation::new(Embedding::natural(&q, &bq)?, vec![x])?;
    Ok(vec![(via_gf9, direct), (via_sqrt2, primitive)])
}

fn transfer_tower_independence(run: &mut Run) -> Result<Outcome> {
    for (a, b) in tower_pairs()? {
        let f = a.field().clone();
        for _ in 0..run.cfg.samples {
            let n = degree(&mut run.rng, &[-1, 0, 1]);
            let beta = sample::mw(&f, n, 2, &mut run.rng)?;
            let ta = run.ctx.tower(&beta, &a)?;
            let tb = run.ctx.tower(&beta, &b)?;
            if !ta.eq_in(&tb)? {
                return Ok(Outcome::Finding(format!(
                    "{f} over {} with degrees {:?} and {:?}, β = {beta}: {ta} ≠ {tb}",
                    a.base(),
                    a.degrees(),
                    b.degrees()
                )));
            }
        }
    }
    Ok(Outcome::Pass)
}

// ---- residues ----

fn residue_split_exact(run: &mut Run) -> Result<Outcome> {
    for ff in run.cfg.catalog.function_fields() {
        let k = ff.base().expect("function field").clone();
        let emb = Embedding::natural(&k, &ff)?;
        for _ in 0..run.cfg.samples {
            let n = degree(&mut run.rng, &[0, 1, 2]);
            let gamma = sample::mw(&ff, n, 2, &mut run.rng)?;
            let mut cores = Coresidues::new();
            let rec = residues::milnor_reconstruct(&gamma, &mut cores)?;
            let back = rec.assemble(&ff, &mut cores)?;
            ensure!(back.eq_in(&gamma)?, "{ff}, γ = {gamma}: reassembled as {back}");
            let c = sample::mw(&k, n, 2, &mut run.rng)?;
            let rc = c.map_field(&emb)?;
            for y in residues::finite_support(&rc)? {
                let r = residues::residue(&rc, &y)?;
                ensure!(r.is_zero()?, "{ff}, c = {c}: residue {r} at {}", y.label());
            }
        }
    }
    Ok(Outcome::Pass)
}

fn residue_coresidue(run: &mut Run) -> Result<Outcome> {
    for ff in run.cfg.catalog.function_fields() {
        for _ in 0..run.cfg.samples {
            let x = finite_place(&ff, 3, &mut run.rng)?;
            let kx = x.residue_field().clone();
            let n = degree(&mut run.rng, &[-1, 0, 1, 2]);
            let beta = sample::mw(&kx, n, 2, &mut run.rng)?;
            let gamma = residues::coresidue(&beta, &x)?;
            let back = residues::theta(&gamma, &x)?.1;
            ensure!(back.eq_in(&beta)?, "{ff}, x = {}, β = {beta}: ∂_x ρ_x β = {back}", x.label());
            for y in residues::finite_support(&gamma)? {
                if y == x {
                    continue;
                }
                let r = residues::residue(&gamma, &y)?;
                ensure!(r.is_zero()?, "{ff}, x = {}, β = {beta}: residue {r} at {}", x.label(), y.label());
            }
        }
    }
    Ok(Outcome::Pass)
}

fn residue_restriction_square(run: &mut Run) -> Result<Outcome> {
    for (ext, v) in residue_compat_instances(run)? {
        let e = ext.base().clone();
        let f = ext.field().clone();
        for _ in 0..run.cfg.samples {
            let n = degree(&mut run.rng, &[0, 1, 2]);
            let x = sample::mw(&e, n, 2, &mut run.rng)?;
            for inst in &run.cfg.instances {
                let ok = transfers::restriction_square_check(&x, &v, &f, inst.projection())?;
                ensure!(ok, "F = {f}, v = {}, {}, x = {x}", v.label(), inst.name());
            }
        }
    }
    Ok(Outcome::Pass)
}

fn residue_constant_squares(run: &mut Run) -> Result<Outcome> {
    for ff in run.cfg.catalog.function_fields() {
        let k = ff.base().expect("function field").clone();
        for _ in 0..run.cfg.samples {
            let w = finite_place(&ff, 3, &mut run.rng)?;
            let n = degree(&mut run.rng, &[-1, 0, 1]);
            let x = sample::mw(&k, n, 2, &mut run.rng)?;
            for inst in &run.cfg.instances {
                let ok = transfers::constant_residue_check(&x, &w, inst.projection())?;
                ensure!(ok, "{ff}, w = {}, {}, x = {x}", w.label(), inst.name());
            }
        }
    }
    Ok(Outcome::Pass)
}

fn residue_unit_commutation(run: &mut Run) -> Result<Outcome> {
    for ff in run.cfg.catalog.function_fields() {
        for _ in 0..run.cfg.samples {
            let v = finite_place(&ff, 2, &mut run.rng)?;
            let u = unit_at(&v, &mut run.rng)?;
            let n = degree(&mut run.rng, &[0, 1]);
            let x = sample::mw(&ff, n, 2, &mut run.rng)?;
            for inst in &run.cfg.instances {
                let ok = transfers::unit_commutation_check(&x, &u, &v, inst.projection())?;
                ensure!(ok, "{ff}, v = {}, u = {}, {}, x = {x}", v.label(), ff.format(&u), inst.name());
            }
        }
    }
    Ok(Outcome::Pass)
}

// ---- Rost-Schmid complexes ----

/// A codimension 0 cycle on a line with a random generic entry.
pub fn random_generic<R: Rng + ?Sized>(x: &Scheme, n: i64, rng: &mut R) -> Result<Cycle> {
    let gamma = sample::mw(x.function_field(), n, 2, rng)?;
    Cycle::generic(x, &gamma)
}

/// A codimension 1 cycle on a line supported on one or two random points, sometimes `∞`.
pub fn random_closed<R: Rng + ?Sized>(x: &Scheme, n: i64, rng: &mut R) -> Result<Cycle> {
    let mut c = Cycle::zero(x, 1, n);
    for _ in 0..rng.gen_range(1..=2) {
        let pi = sample::irreducible(x.base(), rng.gen_range(1..=2), rng)?;
        let p = Point::Closed(PlaceKind::Finite(pi));
        let k = x.residue_field(&p)?;
        c.add_entry(p, sample::mw(&k, n - 1, 2, rng)?)?;
    }
    if matches!(x.kind(), rs::SchemeKind::ProjectiveLine) && rng.gen_bool(0.5) {
        let p = Point::Closed(PlaceKind::Infinity);
        c.add_entry(p, sample::mw(x.base(), n - 1, 2, rng)?)?;
    }
    Ok(c)
}

/// `t ↦ t^2` on `P^1_{GF(5)}` and `P^1_{GF(9)} → P^1_{GF(3)}`.
pub fn finite_morphisms() -> Result<Vec<Morphism>> {
    let p5 = Scheme::projective_line(&Field::prime(5)?);
    let p3 = Scheme::projective_line(&Field::prime(3)?);
    Ok(vec![Morphism::power(&p5, 2)?, Morphism::base_change(&p3, &Field::gf(9)?)?])
}

fn rs_pushforward_commutes(run: &mut Run) -> Result<Outcome> {
    for f in finite_morphisms()? {
        let x = f.source();
        for _ in 0..run.cfg.samples {
            let n = degree(&mut run.rng, &[-1, 0, 1, 2]);
            let c = random_generic(&x, n, &mut run.rng)?;
            let lhs = rs::differential(&rs::pushforward(&mut run.ctx, &f, &c)?)?;
            let rhs = rs::pushforward(&mut run.ctx, &f, &rs::differential(&c)?)?;
            for inst in &run.cfg.instances {
                ensure!(lhs.eq_proj(&rhs, inst.projection())?, "{x} → {}, {}, c = {c}: {lhs} ≠ {rhs}", f.target(), inst.name());
            }
        }
    }
    Ok(Outcome::Pass)
}

fn rs_pullback_commutes(run: &mut Run) -> Result<Outcome> {
    let p3 = Scheme::projective_line(&Field::prime(3)?);
    let gf9 = Field::gf(9)?;
    let g = Morphism::base_change(&p3, &gf9)?;
    let a5 = Scheme::affine_line(&Field::prime(5)?);
    let s = Morphism::structure(&a5)?;
    for _ in 0..run.cfg.samples {
        let n = degree(&mut run.rng, &[-1, 0, 1, 2]);
        let c = random_generic(&p3, n, &mut run.rng)?;
        let lhs = rs::pullback(&g, &rs::differential(&c)?)?;
        let rhs = rs::differential(&rs::pullback(&g, &c)?)?;
        ensure!(lhs.eq_proj(&rhs, Projection::Full)?, "{}, c = {c}: {lhs} ≠ {rhs}", g.source());
        let k = Scheme::point(a5.base());
        let c0 = Cycle::generic(&k, &sample::mw(a5.base(), n, 2, &mut run.rng)?)?;
        let d = rs::differential(&rs::pullback(&s, &c0)?)?;
        ensure!(d.is_zero(), "{a5} → {k}, c = {c0}: d g^* c = {d}");
    }
    Ok(Outcome::Pass)
}

fn rs_gw_action_commutes(run: &mut Run) -> Result<Outcome> {
    for f in finite_morphisms()? {
        let x = f.source();
        for _ in 0..run.cfg.samples {
            let n = degree(&mut run.rng, &[-1, 0, 1, 2]);
            let c = random_generic(&x, n, &mut run.rng)?;
            let a = sample::unit(x.base(), &mut run.rng)?;
            let lhs = rs::differential(&rs::gw_action(&a, &c)?)?;
            let rhs = rs::gw_action(&a, &rs::differential(&c)?)?;
            ensure!(lhs.eq_proj(&rhs, Projection::Full)?, "{x}, a = {}, c = {c}: {lhs} ≠ {rhs}", x.base().format(&a));
        }
    }
    Ok(Outcome::Pass)
}

fn rs_functoriality(run: &mut Run) -> Result<Outcome> {
    let gf3 = Field::prime(3)?;
    let gf9 = Field::gf(9)?;
    let p3 = Scheme::projective_line(&gf3);
    let p9 = Scheme::projective_line(&gf9);
    // P^1_{GF(9)} → P^1_{GF(3)} by squaring then descending, and by descending then squaring.
    let sq_then_bc = Morphism::power(&p9, 2)?.then(Morphism::base_change(&p3, &gf9)?)?;
    let bc_then_sq = Morphism::base_change(&p3, &gf9)?.then(Morphism::power(&p3, 2)?)?;
    let p5 = Scheme::projective_line(&Field::prime(5)?);
    // t ↦ t^6 through both factorizations.
    let two_three = Morphism::power(&p5, 2)?.then(Morphism::power(&p5, 3)?)?;
    let three_two = Morphism::power(&p5, 3)?.then(Morphism::power(&p5, 2)?)?;
    // Pull-back to the line after push-forward from Spec GF(9), and the other way round.
    let a3 = Scheme::affine_line(&gf3);
    let a9 = Scheme::affine_line(&gf9);
    let f = Morphism::base_change(&Scheme::point(&gf3), &gf9)?;
    let g = Morphism::structure(&a3)?;
    let f_line = Morphism::base_change(&a3, &gf9)?;
    let g_big = Morphism::structure(&a9)?;
    for _ in 0..run.cfg.samples {
        let n = degree(&mut run.rng, &[-1, 0, 1, 2]);
        for (a, b) in [(&sq_then_bc, &bc_then_sq), (&two_three, &three_two)] {
            let x = a.source();
            for c in [random_generic(&x, n, &mut run.rng)?, random_closed(&x, n, &mut run.rng)?] {
                let l = rs::pushforward(&mut run.ctx, a, &c)?;
                let r = rs::pushforward(&mut run.ctx, b, &c)?;
                ensure!(l.eq_proj(&r, Projection::Full)?, "{x} → {}, c = {c}: {l} ≠ {r}", a.target());
            }
        }
        let c = Cycle::generic(&Scheme::point(&gf9), &sample::mw(&gf9, n, 2, &mut run.rng)?)?;
        let l = rs::pullback(&g, &rs::pushforward(&mut run.ctx, &f, &c)?)?;
        let r = rs::pushforward(&mut run.ctx, &f_line, &rs::pullback(&g_big, &c)?)?;
        ensure!(l.eq_proj(&r, Projection::Full)?, "base change square, c = {c}: {l} ≠ {r}");
    }
    Ok(Outcome::Pass)
}

// ---- correspondences ----

fn random_scheme<R: Rng + ?Sized>(k: &Field, big: &Field, rng: &mut R) -> Result<EtaleScheme> {
    let n = rng.gen_range(1..=2);
    let fields: Vec<Field> = (0..n)
        .map(|_| if rng.gen_bool(0.5) { big.clone() } else { k.clone() })
        .collect();
    EtaleScheme::new(k, &fields)
}

fn corr_bases(run: &Run) -> Vec<Field> {
    run.cfg
        .catalog
        .entries()
        .iter()
        .filter(|k| (k.is_finite() && k.dim_over_ground() == 1) || matches!(k.kind(), FieldKind::Rationals))
        .cloned()
        .collect()
}

fn corr_category_laws(run: &mut Run) -> Result<Outcome> {
    for k in corr_bases(run) {
        let big = catalog_extension(&k)?.field().clone();
        for _ in 0..run.cfg.samples {
            let x = random_scheme(&k, &big, &mut run.rng)?;
            let y = random_scheme(&k, &big, &mut run.rng)?;
            let z = random_scheme(&k, &big, &mut run.rng)?;
            let w = random_scheme(&k, &big, &mut run.rng)?;
            let a = mw_corr::random_cor(&x, &y, &mut run.rng)?;
            let b = mw_corr::random_cor(&y, &z, &mut run.rng)?;
            let c = mw_corr::random_cor(&z, &w, &mut run.rng)?;
            ensure!(
                mw_corr::associativity_check(&mut run.ctx, &a, &b, &c)?,
                "associativity over {k}: {a}{b}{c}"
            );
            ensure!(mw_corr::unit_check(&mut run.ctx, &a)?, "unit law over {k}: {a}");
        }
    }
    Ok(Outcome::Pass)
}

fn corr_graph_transfer(run: &mut Run) -> Result<Outcome> {
    for k in corr_bases(run) {
        let ext = catalog_extension(&k)?;
        let f = ext.field().clone();
        let mut classes = vec![GWClass::one(&f)];
        for _ in 0..run.cfg.samples {
            classes.push(sample::gw(&f, 2, &mut run.rng)?);
        }
        for q in classes {
            let (via_cor, via_tr) = mw_corr::graph_transfer_sides(&mut run.ctx, &ext, &q)?;
            let trace = scharlau_transfer(&q, &ext)?;
            ensure!(
                via_cor.eq_gw(&via_tr)? && via_tr.eq_gw(&trace)?,
                "{f}/{k}, q = {q}: correspondence {via_cor}, transfer {via_tr}, trace form {trace}"
            );
        }
        let round = MWCor::from_gw(&EtaleScheme::from_extensions(&k, vec![ext.clone()])?, &[GWClass::one(&f)])?.to_gw()?;
        ensure!(round.len() == 1 && round[0].eq_gw(&GWClass::one(&f))?, "{f}/{k}: GW round trip gave {round:?}");
    }
    Ok(Outcome::Pass)
}
