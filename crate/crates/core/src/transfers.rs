//! Bass-Tate transfers `tr_{x/F} = -∂_∞ ∘ ρ_x`, their canonical normalization, transfers
//! along towers of generators, the base-change evaluator and the axiom checks of generalized
//! transfers.
//!
//! Conventions. Coresidues live on `F(t)`; the residue at infinity used by the transfer is taken
//! with respect to the uniformizer `-1/t`, i.e. it is `⟨-1⟩ ∂^{1/t}_∞`. With it the transfer along
//! a degree one point is the identity. The canonical transfer along a separable stage
//! `E[x]/(f)` is `β ↦ tr_{x/E}(⟨f'(x)⟩ β)`, which identifies the twist by the relative
//! canonical line through `dx ↦ f'(x)`; on `GW` it agrees with the trace form.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::embed::{minimal_polynomial, Embedding, LinearSection};
use crate::field::place::{self, Place};
use crate::field::tensor::{tensor_decompose, ArtinComponent, SimpleExtension};
use crate::field::{poly, Elem, Field, FieldKind, Poly};
use crate::gw::{scharlau_transfer, GWClass};
use crate::kmw::{MWElement, Projection};
use crate::residues::{self, Coresidues};

/// Deliberate corruptions used to show that the checks are not vacuous.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mutation {
    /// Use `∂^{1/t}_∞` instead of `⟨-1⟩ ∂^{1/t}_∞` in the transfer.
    FlipInfinitySign,
    /// Weight base-change components by the integer length instead of its `ε`-version.
    DropEpsilon,
}

fn fresh_var(k: &Field, preferred: &[&str]) -> String {
    let used = |v: &str| {
        let mut cur = Some(k);
        while let Some(f) = cur {
            if f.var() == v {
                return true;
            }
            cur = f.base();
        }
        false
    };
    for v in preferred {
        if !used(v) {
            return v.to_string();
        }
    }
    let mut i = 0;
    loop {
        let v = format!("{}{i}", preferred[0]);
        if !used(&v) {
            return v;
        }
        i += 1;
    }
}

/// Transfers `K^MW_*(F[t]/(π)) → K^MW_*(F)` for one base field `F`, sharing a coresidue cache.
pub struct BassTate {
    base: Field,
    ring: Field,
    cores: Coresidues,
    mutation: Option<Mutation>,
}

impl BassTate {
    pub fn new(base: &Field) -> BassTate {
        let var = fresh_var(base, &["t", "T", "z"]);
        BassTate {
            base: base.clone(),
            ring: Field::rational_functions(base, &var),
            cores: Coresidues::new(),
            mutation: None,
        }
    }

    pub fn with_mutation(mut self, m: Option<Mutation>) -> BassTate {
        self.mutation = m;
        self
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    /// The rational function field `F(t)` carrying the coresidues.
    pub fn ring(&self) -> &Field {
        &self.ring
    }

    /// The closed point of `A^1_F` cut out by the monic irreducible `pi`.
    pub fn point(&self, pi: &Poly) -> Result<Place> {
        Place::finite(&self.ring, pi.clone())
    }

    /// `tr_{x/F}(β)` for `β` over `κ(x) = F[t]/(π)`.
    pub fn transfer_at(&mut self, beta: &MWElement, pi: &Poly) -> Result<MWElement> {
        let x = self.point(pi)?;
        if beta.field() != x.residue_field() {
            return Err(Error::FieldMismatch(
                beta.field().descriptor(),
                x.residue_field().descriptor(),
            ));
        }
        let rho = self.cores.coresidue(beta, &x)?;
        let inf = Place::infinity(&self.ring)?;
        let r = match self.mutation {
            Some(Mutation::FlipInfinitySign) => residues::theta(&rho, &inf)?.1,
            _ => {
                let m1 = self.ring.neg(&self.ring.one());
                residues::residue_with_uniformizer(&rho, &inf, &m1)?
            }
        };
        Ok(tidy(r.neg()))
    }

    /// Generator-bound transfer along a stage `E[x]/(f)` of `ext` (its `base` must be `F`).
    pub fn raw(&mut self, beta: &MWElement, ext: &SimpleExtension) -> Result<MWElement> {
        let b = self.stage_to_residue(beta, ext)?;
        self.transfer_at(&b, ext.minpoly())
    }

    /// The canonical transfer along `ext`: `tr(⟨f'(x)⟩ β)` when `f' ≠ 0`, `tr(β)` otherwise.
    pub fn canonical(&mut self, beta: &MWElement, ext: &SimpleExtension) -> Result<MWElement> {
        match different(ext)? {
            Some(d) => {
                let twisted = MWElement::angle(ext.field(), &d)?.mul(&beta.clone().untwisted())?;
                self.raw(&twisted, ext)
            }
            None => self.raw(beta, ext),
        }
    }

    fn stage_to_residue(&self, beta: &MWElement, ext: &SimpleExtension) -> Result<MWElement> {
        if ext.base() != &self.base {
            return Err(Error::FieldMismatch(
                ext.base().descriptor(),
                self.base.descriptor(),
            ));
        }
        if beta.field() != ext.field() {
            return Err(Error::FieldMismatch(
                beta.field().descriptor(),
                ext.field().descriptor(),
            ));
        }
        let x = self.point(ext.minpoly())?;
        let kappa = x.residue_field().clone();
        let t = self.ring.gen();
        let root = x.reduce(&t)?;
        let base_to_kappa = if kappa == self.base {
            Embedding::identity(&self.base)
        } else {
            Embedding::natural(&self.base, &kappa)?
        };
        let stage_to_kappa = Embedding::generator(ext.stage(), &kappa, base_to_kappa, root)?;
        let emb = ext.section().clone().then(stage_to_kappa);
        Ok(beta.clone().untwisted().map_field(&emb)?)
    }
}

fn tidy(x: MWElement) -> MWElement {
    if x.field().is_finite() {
        x.normalize()
    } else {
        x
    }
}

/// `f'(θ)` for the generator `θ` of `ext`, or `None` when `f' = 0`.
pub fn different(ext: &SimpleExtension) -> Result<Option<Elem>> {
    let e = ext.base();
    let d = poly::derivative(e, ext.minpoly());
    if d.is_zero() {
        return Ok(None);
    }
    let stage = ext.stage();
    let lifted = d.map(|c| stage.constant(c.clone()));
    let v = poly::eval(stage, &lifted, &stage.gen());
    Ok(Some(ext.to_field().apply(&v)?))
}

/// Transfer engines keyed by base field, with an optional mutation applied throughout.
#[derive(Default)]
pub struct Transfers {
    engines: HashMap<Field, BassTate>,
    mutation: Option<Mutation>,
}

impl Transfers {
    pub fn new() -> Transfers {
        Transfers::default()
    }

    pub fn with_mutation(m: Option<Mutation>) -> Transfers {
        Transfers {
            engines: HashMap::new(),
            mutation: m,
        }
    }

    pub fn mutation(&self) -> Option<Mutation> {
        self.mutation
    }

    pub fn engine(&mut self, base: &Field) -> &mut BassTate {
        let m = self.mutation;
        self.engines
            .entry(base.clone())
            .or_insert_with(|| BassTate::new(base).with_mutation(m))
    }

    pub fn raw(&mut self, beta: &MWElement, ext: &SimpleExtension) -> Result<MWElement> {
        self.engine(ext.base()).raw(beta, ext)
    }

    pub fn canonical(&mut self, beta: &MWElement, ext: &SimpleExtension) -> Result<MWElement> {
        self.engine(ext.base()).canonical(beta, ext)
    }

    pub fn at(&mut self, beta: &MWElement, base: &Field, pi: &Poly) -> Result<MWElement> {
        self.engine(base).transfer_at(beta, pi)
    }

    /// Composite of canonical transfers along the stages of a tower, top stage first.
    pub fn tower(&mut self, beta: &MWElement, tower: &TowerPresentation) -> Result<MWElement> {
        let mut x = beta.clone().untwisted().map_field(&tower.section)?;
        for ext in tower.stages.iter().rev() {
            x = self.canonical(&x, ext)?;
        }
        Ok(x)
    }
}

/// Generator-bound transfer `tr_{x/E}` along `ext`.
pub fn bass_tate(beta: &MWElement, ext: &SimpleExtension) -> Result<MWElement> {
    Transfers::new().raw(beta, ext)
}

/// Canonical transfer along `ext`.
pub fn transfer(beta: &MWElement, ext: &SimpleExtension) -> Result<MWElement> {
    Transfers::new().canonical(beta, ext)
}

/// `F` over `E` as successive simple extensions `K_i = K_{i-1}[y_i]/(m_i)` generated by a list
/// of elements of `F`.
#[derive(Clone, Debug)]
pub struct TowerPresentation {
    base: Field,
    field: Field,
    generators: Vec<Elem>,
    stages: Vec<SimpleExtension>,
    section: Embedding,
}

impl TowerPresentation {
    /// `base_emb: E → F` and generators in `F`.
    pub fn new(base_emb: Embedding, generators: Vec<Elem>) -> Result<TowerPresentation> {
        let e = base_emb.src().clone();
        let f = base_emb.dst().clone();
        if e.ground() != f.ground() {
            return Err(Error::InvalidTower(format!("{f} is not finite over {e}")));
        }
        let mut cur = e.clone();
        let mut cur_emb = base_emb;
        let mut stages = Vec::new();
        for (i, x) in generators.iter().enumerate() {
            if !f.contains(x) {
                return Err(Error::InvalidTower(format!("generator {i} is not in {f}")));
            }
            let m = minimal_polynomial(&cur_emb, x)?;
            let var = fresh_var(&cur, &[&format!("y{}", i + 1)]);
            let k = Field::extension_unchecked(&cur, m, &var);
            cur_emb = Embedding::generator(&k, &f, cur_emb, x.clone())?;
            stages.push(SimpleExtension::structural(&k)?);
            cur = k;
        }
        if cur.dim_over_ground() != f.dim_over_ground() {
            return Err(Error::InvalidTower(format!(
                "the generators span a subfield of degree {} of {f} over its ground field",
                cur.dim_over_ground()
            )));
        }
        let section = LinearSection::new(cur_emb)?.into_embedding();
        Ok(TowerPresentation {
            base: e,
            field: f,
            generators,
            stages,
            section,
        })
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn stages(&self) -> &[SimpleExtension] {
        &self.stages
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.degree()).collect()
    }
}

/// `tr_{x_1, ..., x_r / E}(β)` with canonical stage transfers.
pub fn tower_transfer(beta: &MWElement, tower: &TowerPresentation) -> Result<MWElement> {
    Transfers::new().tower(beta, tower)
}

/// Both sides of the base-change formula for a single stage `F = E[x]/(f)` and `E → L`.
#[derive(Clone, Debug)]
pub struct BaseChangeReport {
    /// `res_{L/E}(tr_{x/E} β)`.
    pub left: MWElement,
    /// `Σ_p (m_p)_ε tr_{x_p/L}(ψ_p β)`.
    pub right: MWElement,
    /// Residue field degree and length of each component.
    pub components: Vec<(usize, u32)>,
    pub equal: bool,
}

/// Evaluates `res_{L/E} ∘ tr_{x/E} = Σ_p (m_p)_ε tr_{x_p/L} ∘ res_{R_p/F}`, where the
/// components of `F ⊗_E L` and their lengths come from factoring `f` over `L`.
pub fn verify_base_change(
    ctx: &mut Transfers,
    ext: &SimpleExtension,
    e_to_l: &Embedding,
    beta: &MWElement,
    proj: Projection,
) -> Result<BaseChangeReport> {
    let l = e_to_l.dst().clone();
    let left = ctx.raw(beta, ext)?.map_field(e_to_l)?;
    let comps = tensor_decompose(ext, e_to_l)?;
    let mut right = MWElement::zero(&l, beta.degree());
    for c in &comps {
        right = right.add(&component_term(ctx, c, &l, beta)?)?;
    }
    let equal = left.eq_proj(&right, proj)?;
    Ok(BaseChangeReport {
        left: tidy(left),
        right: tidy(right),
        components: comps.iter().map(|c| (c.degree(), c.length)).collect(),
        equal,
    })
}

fn component_term(
    ctx: &mut Transfers,
    c: &ArtinComponent,
    l: &Field,
    beta: &MWElement,
) -> Result<MWElement> {
    let b = beta.clone().untwisted().map_field(&c.psi)?;
    let t = ctx.at(&b, l, &c.factor)?;
    let weight = match ctx.mutation() {
        Some(Mutation::DropEpsilon) => MWElement::from_int(l, c.length as i64),
        _ => MWElement::n_eps(l, c.length as i64),
    };
    Ok(weight.mul(&t)?)
}

// ---- checks ----

/// `Tr(⟨ψ(a)⟩ μ) = ⟨a⟩ Tr(μ)` for `a` over `E` and `μ` over `F`.
pub fn projection_check_base(
    ctx: &mut Transfers,
    ext: &SimpleExtension,
    a: &Elem,
    mu: &MWElement,
    proj: Projection,
) -> Result<bool> {
    let e = ext.base();
    let pa = ext.restrict(a)?;
    let lhs = ctx.canonical(&MWElement::angle(ext.field(), &pa)?.mul(mu)?, ext)?;
    let rhs = MWElement::angle(e, a)?.mul(&ctx.canonical(mu, ext)?)?;
    lhs.eq_proj(&rhs, proj)
}

/// `Tr(⟨a⟩ res(μ)) = Tr(⟨a⟩) μ` for `a` over `F` and `μ` over `E`.
pub fn projection_check_top(
    ctx: &mut Transfers,
    ext: &SimpleExtension,
    a: &Elem,
    mu: &MWElement,
    proj: Projection,
) -> Result<bool> {
    let f = ext.field();
    let res_mu = mu.clone().untwisted().map_field(ext.base_embedding())?;
    let lhs = ctx.canonical(&MWElement::angle(f, a)?.mul(&res_mu)?, ext)?;
    let rhs = ctx.canonical(&MWElement::angle(f, a)?, ext)?.mul(&mu.clone().untwisted())?;
    lhs.eq_proj(&rhs, proj)
}

/// `tr_{x/E}(1) · β = 0` for `β` in the kernel of restriction.
pub fn kernel_kill_check(ctx: &mut Transfers, ext: &SimpleExtension, beta: &MWElement) -> Result<bool> {
    let res = beta.clone().untwisted().map_field(ext.base_embedding())?;
    if !res.is_zero()? {
        return Err(Error::Invalid("element is not in the kernel of restriction".into()));
    }
    let one = MWElement::one(ext.field());
    let t = ctx.raw(&one, ext)?;
    t.mul(&beta.clone().untwisted())?.is_zero()
}

/// Functoriality along `E ⊂ K ⊂ F` presented by primitive elements: `Tr_{F/E} = Tr_{K/E} ∘ Tr_{F/K}`.
pub fn functoriality_check(
    ctx: &mut Transfers,
    direct: &SimpleExtension,
    lower: &SimpleExtension,
    upper: &SimpleExtension,
    beta: &MWElement,
    proj: Projection,
) -> Result<bool> {
    let a = ctx.canonical(beta, direct)?;
    let mid = ctx.canonical(beta, upper)?;
    let b = ctx.canonical(&mid, lower)?;
    a.eq_proj(&b, proj)
}

/// Canonical transfer against the trace form on a rank one class.
pub fn unicity_check(ctx: &mut Transfers, ext: &SimpleExtension, a: &Elem) -> Result<(MWElement, GWClass, bool)> {
    let f = ext.field();
    let bt = ctx.canonical(&MWElement::angle(f, a)?, ext)?;
    let sch = scharlau_transfer(&GWClass::angle(f, a)?, ext)?;
    let eq = bt.eq_in(&sch.to_mw())?;
    Ok((tidy(bt), sch, eq))
}

/// A place of a radical extension `F` of `E = B(t)` above `v`, with the data needed to compare
/// residues: ramification `e`, residue field embedding and the residue `ū` of `π_v / π_w^e`.
#[derive(Clone, Debug)]
pub struct RamifiedPlace {
    pub place: Place,
    pub e: u32,
    pub residue_embedding: Embedding,
    pub unit: Elem,
}

pub fn places_over(v: &Place, f: &Field) -> Result<Vec<RamifiedPlace>> {
    places_over_along(v, &Embedding::natural(v.field(), f)?)
}

/// As [`places_over`], for an explicit embedding of function fields.
pub fn places_over_along(v: &Place, emb: &Embedding) -> Result<Vec<RamifiedPlace>> {
    let f = emb.dst();
    let pv = emb.apply(&v.uniformizer()?)?;
    let mut out = Vec::new();
    for pa in place::places_above(v, f)? {
        let pw = pa.place.uniformizer()?;
        let q = f.div(&pv, &f.pow(&pw, pa.e as i64)?)?;
        let (k, unit) = pa.place.decompose(&q)?;
        debug_assert_eq!(k, 0);
        out.push(RamifiedPlace {
            place: pa.place,
            e: pa.e,
            residue_embedding: pa.residue_embedding,
            unit,
        });
    }
    Ok(out)
}

/// The restriction square: `∂_w(res x) = e_ε ⟨ū⟩ res_{κ(w)/κ(v)}(∂_v x)` with `π_v = u π_w^e`.
pub fn restriction_square_check(x: &MWElement, v: &Place, f: &Field, proj: Projection) -> Result<bool> {
    let emb = Embedding::natural(v.field(), f)?;
    let rx = x.clone().untwisted().map_field(&emb)?;
    let dv = residues::theta(x, v)?.1;
    for w in places_over(v, f)? {
        let kw = w.place.residue_field().clone();
        let lhs = residues::theta(&rx, &w.place)?.1;
        let rhs = MWElement::n_eps(&kw, w.e as i64)
            .mul(&MWElement::angle(&kw, &w.unit)?)?
            .mul(&dv.map_field(&w.residue_embedding)?)?;
        if !lhs.eq_proj(&rhs, proj)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `∂_v(tr_{x/E} β)` and `Σ_w tr_{x̄/κ(v)}(∂_w β)` for a radical extension `F = E[x]/(f)` of a
/// function field `E`. Residues are taken for the uniformizers `π_v`, `π_w`, and the residue
/// extension `κ(w)/κ(v)` is generated by the reduction `x̄` of `x` (by `1` when it is trivial).
pub fn residue_transfer_sides(
    ctx: &mut Transfers,
    ext: &SimpleExtension,
    v: &Place,
    beta: &MWElement,
) -> Result<(MWElement, MWElement)> {
    let f = ext.field();
    let kv = v.residue_field().clone();
    let tr = ctx.raw(beta, ext)?;
    let lhs = residues::theta(&tr, v)?.1;
    let x = ext.to_field().apply(&ext.stage().gen())?;
    let mut rhs = MWElement::zero(&kv, beta.degree() - 1);
    for w in places_over(v, f)? {
        let kw = w.place.residue_field().clone();
        let dw = residues::theta(&beta.clone().untwisted(), &w.place)?.1;
        let theta = if kw.dim_over_ground() == kv.dim_over_ground() {
            kw.one()
        } else {
            w.place.reduce(&x)?
        };
        let stage = SimpleExtension::from_generator(w.residue_embedding.clone(), &theta)?;
        rhs = rhs.add(&ctx.raw(&dw, &stage)?)?;
    }
    Ok((tidy(lhs), tidy(rhs)))
}

/// `∂_v ∘ Tr_{F/E} = Σ_w Tr_{κ(w)/κ(v)} ∘ ∂_w`.
pub fn residue_transfer_check(
    ctx: &mut Transfers,
    ext: &SimpleExtension,
    v: &Place,
    beta: &MWElement,
    proj: Projection,
) -> Result<bool> {
    let (l, r) = residue_transfer_sides(ctx, ext, v, beta)?;
    l.eq_proj(&r, proj)
}

/// For `F = B(t)` over the constants `B` and a finite place `w`: `∂_w ∘ res = 0` and
/// `∂_w([π_w] · res x) = res_{κ(w)/B}(x)`.
pub fn constant_residue_check(x: &MWElement, w: &Place, proj: Projection) -> Result<bool> {
    let f = w.field().clone();
    let b = x.field().clone();
    let rx = x.clone().untwisted().map_field(&Embedding::natural(&b, &f)?)?;
    let kw = w.residue_field().clone();
    let r0 = residues::theta(&rx, w)?.1;
    if !r0.is_zero_in(proj)? {
        return Ok(false);
    }
    let pi = MWElement::bracket(&f, &w.uniformizer()?)?;
    let r1 = residues::theta(&pi.mul(&rx)?, w)?.1;
    let to_kw = if kw == b {
        Embedding::identity(&b)
    } else {
        Embedding::natural(&b, &kw)?
    };
    r1.eq_proj(&x.clone().untwisted().map_field(&to_kw)?, proj)
}

/// `∂_v([u] x) = ε[ū] ∂_v(x)` for a `v`-unit `u`.
pub fn unit_commutation_check(x: &MWElement, u: &Elem, v: &Place, proj: Projection) -> Result<bool> {
    let (k, ubar) = v.decompose(u)?;
    if k != 0 {
        return Err(Error::Invalid("not a unit at the place".into()));
    }
    let f = x.field();
    let kv = v.residue_field();
    let lhs = residues::theta(&MWElement::bracket(f, u)?.mul(x)?, v)?.1;
    let rhs = MWElement::epsilon(kv)
        .mul(&MWElement::bracket(kv, &ubar)?)?
        .mul(&residues::theta(x, v)?.1)?;
    lhs.eq_proj(&rhs, proj)
}

/// One of the three coefficient theories with transfers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GtrInstance(pub Projection);

impl GtrInstance {
    pub const ALL: [GtrInstance; 3] = [
        GtrInstance(Projection::Full),
        GtrInstance(Projection::Milnor),
        GtrInstance(Projection::Witt),
    ];

    pub fn name(&self) -> &'static str {
        match self.0 {
            Projection::Full => "KMW",
            Projection::Milnor => "KM",
            Projection::Witt => "W",
        }
    }

    pub fn projection(&self) -> Projection {
        self.0
    }

    pub fn eq(&self, a: &MWElement, b: &MWElement) -> Result<bool> {
        a.eq_proj(b, self.0)
    }

    pub fn restrict(&self, x: &MWElement, emb: &Embedding) -> Result<MWElement> {
        Ok(x.map_field(emb)?.project(self.0))
    }

    pub fn gw_action(&self, a: &Elem, x: &MWElement) -> Result<MWElement> {
        Ok(MWElement::angle(x.field(), a)?.mul(x)?.project(self.0))
    }

    pub fn residue(&self, x: &MWElement, v: &Place) -> Result<MWElement> {
        Ok(residues::theta(x, v)?.1.project(self.0))
    }

    pub fn transfer(&self, ctx: &mut Transfers, x: &MWElement, ext: &SimpleExtension) -> Result<MWElement> {
        Ok(ctx.canonical(x, ext)?.project(self.0))
    }
}

/// `E → F` for fields where the canonical inclusion exists, as a simple extension generated by
/// the generator of `F`.
pub fn primitive_extension(e: &Field, f: &Field) -> Result<SimpleExtension> {
    let emb = Embedding::natural(e, f)?;
    let theta = match f.kind() {
        FieldKind::Ext { .. } => f.gen(),
        _ => return Err(Error::InvalidTower(format!("{f} is not a finite extension of {e}"))),
    };
    SimpleExtension::from_generator(emb, &theta)
}
