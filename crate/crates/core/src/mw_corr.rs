//! Finite Milnor-Witt correspondences between zero-dimensional étale schemes.
//!
//! A correspondence `X → Y` assigns to every point of `X ×_k Y`, i.e. every local factor of
//! `F_i ⊗_k F_j`, a class in `GW` of its residue field. Composition pulls both factors back to
//! the points of `X × Y × Z`, multiplies, weights by the `ε`-length and pushes forward to
//! `X × Z` by canonical transfers.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::embed::{Embedding, LinearSection};
use crate::field::tensor::{tensor_decompose, ArtinComponent, SimpleExtension};
use crate::field::{poly, Elem, Field, FieldKind};
use crate::gw::GWClass;
use crate::sample;
use crate::transfers::Transfers;

/// `Spec F_1 ⊔ ... ⊔ Spec F_r` over `k`, each `F_i` with a chosen primitive element.
#[derive(Clone, Debug)]
pub struct EtaleScheme {
    base: Field,
    components: Vec<SimpleExtension>,
}

impl PartialEq for EtaleScheme {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
            && self.components.len() == other.components.len()
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.field() == b.field() && a.minpoly() == b.minpoly())
    }
}

fn supported_base(k: &Field) -> Result<()> {
    if k.is_finite() || matches!(k.kind(), FieldKind::Rationals) {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("étale schemes over {k}")))
    }
}

impl EtaleScheme {
    /// Components given as extension fields of `k`, presented by their generators.
    pub fn new(k: &Field, fields: &[Field]) -> Result<EtaleScheme> {
        supported_base(k)?;
        let mut components = Vec::with_capacity(fields.len());
        for f in fields {
            let ext = if f == k {
                SimpleExtension::trivial(k)?
            } else {
                SimpleExtension::from_generator(Embedding::natural(k, f)?, &f.gen())?
            };
            components.push(ext);
        }
        Ok(EtaleScheme {
            base: k.clone(),
            components,
        })
    }

    /// Components given by explicit presentations over `k`.
    pub fn from_extensions(k: &Field, components: Vec<SimpleExtension>) -> Result<EtaleScheme> {
        supported_base(k)?;
        if let Some(c) = components.iter().find(|c| c.base() != k) {
            return Err(Error::FieldMismatch(c.base().descriptor(), k.descriptor()));
        }
        Ok(EtaleScheme {
            base: k.clone(),
            components,
        })
    }

    /// `Spec k`.
    pub fn point(k: &Field) -> Result<EtaleScheme> {
        EtaleScheme::new(k, &[k.clone()])
    }

    pub fn empty(k: &Field) -> Result<EtaleScheme> {
        EtaleScheme::new(k, &[])
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn components(&self) -> &[SimpleExtension] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn disjoint_union(&self, other: &EtaleScheme) -> Result<EtaleScheme> {
        if self.base != other.base {
            return Err(Error::FieldMismatch(self.base.descriptor(), other.base.descriptor()));
        }
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        Ok(EtaleScheme {
            base: self.base.clone(),
            components,
        })
    }
}

impl fmt::Display for EtaleScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.components.iter().map(|c| format!("Spec {}", c.field())).collect();
        write!(f, "{}", parts.join(" ⊔ "))
    }
}

/// The generator of a component, as an element of the component field.
fn generator(ext: &SimpleExtension) -> Result<Elem> {
    ext.to_field().apply(&ext.stage().gen())
}

/// Points of `F_i ⊗_k F_j`, with residue fields over `F_i`: `phi: F_i → R`, `psi: F_j → R`.
fn points(src: &SimpleExtension, dst: &SimpleExtension) -> Result<Vec<ArtinComponent>> {
    tensor_decompose(dst, src.base_embedding())
}

#[derive(Clone, Debug)]
struct Block {
    points: Vec<ArtinComponent>,
    entries: Vec<GWClass>,
}

/// A finite `MW`-correspondence `X → Y` between zero-dimensional schemes.
#[derive(Clone, Debug)]
pub struct MWCor {
    source: EtaleScheme,
    target: EtaleScheme,
    blocks: Vec<Vec<Block>>,
}

impl MWCor {
    pub fn zero(source: &EtaleScheme, target: &EtaleScheme) -> Result<MWCor> {
        if source.base != target.base {
            return Err(Error::FieldMismatch(source.base.descriptor(), target.base.descriptor()));
        }
        let mut blocks = Vec::with_capacity(source.len());
        for a in &source.components {
            let mut row = Vec::with_capacity(target.len());
            for b in &target.components {
                let pts = points(a, b)?;
                let entries = pts.iter().map(|p| GWClass::zero(&p.residue)).collect();
                row.push(Block { points: pts, entries });
            }
            blocks.push(row);
        }
        Ok(MWCor {
            source: source.clone(),
            target: target.clone(),
            blocks,
        })
    }

    /// The correspondence with the entry `f(i, j, point)` at every point.
    pub fn from_fn(
        source: &EtaleScheme,
        target: &EtaleScheme,
        mut f: impl FnMut(usize, usize, &ArtinComponent) -> Result<GWClass>,
    ) -> Result<MWCor> {
        let mut c = MWCor::zero(source, target)?;
        for (i, row) in c.blocks.iter_mut().enumerate() {
            for (j, b) in row.iter_mut().enumerate() {
                for (p, e) in b.points.iter().zip(b.entries.iter_mut()) {
                    let v = f(i, j, p)?;
                    if v.field() != &p.residue {
                        return Err(Error::FieldMismatch(v.field().descriptor(), p.residue.descriptor()));
                    }
                    *e = v;
                }
            }
        }
        Ok(c)
    }

    /// The diagonal correspondence with `⟨1⟩` at the diagonal point of each component.
    pub fn identity(x: &EtaleScheme) -> Result<MWCor> {
        MWCor::from_fn(x, x, |i, j, p| {
            let ext = &x.components[i];
            let theta = generator(ext)?;
            let diagonal = i == j && p.degree() == 1 && p.phi.apply(&theta)? == p.psi.apply(&theta)?;
            Ok(if diagonal {
                GWClass::one(&p.residue)
            } else {
                GWClass::zero(&p.residue)
            })
        })
    }

    /// The class `⟨1⟩` on the graph of `Spec F → Spec k`, as a correspondence `Spec F → Spec k`.
    pub fn transpose_graph(ext: &SimpleExtension) -> Result<MWCor> {
        let k = ext.base();
        let x = EtaleScheme::from_extensions(k, vec![ext.clone()])?;
        let y = EtaleScheme::point(k)?;
        MWCor::from_fn(&x, &y, |_, _, p| Ok(GWClass::one(&p.residue)))
    }

    /// `Cor(Spec k, X) ≅ ⊕_j GW(F_j)`: classes over the component fields to a correspondence.
    pub fn from_gw(x: &EtaleScheme, classes: &[GWClass]) -> Result<MWCor> {
        if classes.len() != x.len() {
            return Err(Error::Invalid(format!("{} classes for {} components", classes.len(), x.len())));
        }
        let pt = EtaleScheme::point(&x.base)?;
        MWCor::from_fn(&pt, x, |_, j, p| classes[j].map_field(&p.psi))
    }

    /// The inverse of [`MWCor::from_gw`].
    pub fn to_gw(&self) -> Result<Vec<GWClass>> {
        if self.source.len() != 1 || self.source.components[0].degree() != 1 {
            return Err(Error::Invalid("to_gw expects a correspondence out of Spec k".into()));
        }
        self.blocks[0]
            .iter()
            .map(|b| {
                let p = &b.points[0];
                let back = LinearSection::new(p.psi.clone())?.into_embedding();
                b.entries[0].map_field(&back)
            })
            .collect()
    }

    pub fn source(&self) -> &EtaleScheme {
        &self.source
    }

    pub fn target(&self) -> &EtaleScheme {
        &self.target
    }

    /// Residue fields and entries of the block `(i, j)`.
    pub fn block(&self, i: usize, j: usize) -> Vec<(&Field, &GWClass)> {
        let b = &self.blocks[i][j];
        b.points.iter().map(|p| &p.residue).zip(b.entries.iter()).collect()
    }

    pub fn add(&self, other: &MWCor) -> Result<MWCor> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (row, orow) in out.blocks.iter_mut().zip(&other.blocks) {
            for (b, ob) in row.iter_mut().zip(orow) {
                for (e, oe) in b.entries.iter_mut().zip(&ob.entries) {
                    *e = e.add(oe)?.reduced();
                }
            }
        }
        Ok(out)
    }

    fn same_shape(&self, other: &MWCor) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Invalid("correspondences between different schemes".into()));
        }
        Ok(())
    }

    /// Exact equality of all entries.
    pub fn eq_cor(&self, other: &MWCor) -> Result<bool> {
        self.same_shape(other)?;
        for (row, orow) in self.blocks.iter().zip(&other.blocks) {
            for (b, ob) in row.iter().zip(orow) {
                for (e, oe) in b.entries.iter().zip(&ob.entries) {
                    if !e.eq_gw(oe)? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// `α ∘ β` for `β = self: X → Y` and `α: Y → Z`.
    pub fn then(&self, ctx: &mut Transfers, alpha: &MWCor) -> Result<MWCor> {
        compose(ctx, self, alpha)
    }
}

impl fmt::Display for MWCor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} -> {}", self.source, self.target)?;
        for (i, row) in self.blocks.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                for (k, (p, e)) in b.points.iter().zip(&b.entries).enumerate() {
                    writeln!(f, "  ({i},{j}) point {k} over {}: {e}", p.residue)?;
                }
            }
        }
        Ok(())
    }
}

fn vanishes(x: &GWClass) -> bool {
    x.positive().is_empty() && x.negative().is_empty()
}

/// Embedding of the residue field of a point `q` of `F_a ⊗ F_l` into `S`, given `F_a → S` and
/// the image of the generator of `F_l`.
fn point_into(q: &ArtinComponent, base: &Embedding, theta_l: &Elem) -> Result<Embedding> {
    if q.degree() == 1 {
        Ok(base.clone())
    } else {
        Embedding::generator(&q.residue, base.dst(), base.clone(), theta_l.clone())
    }
}

fn lies_over(q: &ArtinComponent, base: &Embedding, theta_l: &Elem) -> Result<bool> {
    let s = base.dst();
    Ok(poly::eval(s, &base.apply_poly(&q.factor)?, theta_l).is_zero())
}

/// `α ∘ β = (q_XZ)_* [(q_XY)^* β · (q_YZ)^* α]` for `β: X → Y`, `α: Y → Z`.
pub fn compose(ctx: &mut Transfers, beta: &MWCor, alpha: &MWCor) -> Result<MWCor> {
    if beta.target != alpha.source {
        return Err(Error::Invalid(format!(
            "cannot compose {} -> {} with {} -> {}",
            beta.source, beta.target, alpha.source, alpha.target
        )));
    }
    let x = &beta.source;
    let y = &beta.target;
    let z = &alpha.target;
    let mut out = MWCor::zero(x, z)?;
    for i in 0..x.len() {
        for l in 0..z.len() {
            let ext_l = &z.components[l];
            let theta_l = generator(ext_l)?;
            for j in 0..y.len() {
                let theta_j = generator(&y.components[j])?;
                let bblock = &beta.blocks[i][j];
                for (p, bp) in bblock.points.iter().zip(&bblock.entries) {
                    if vanishes(bp) {
                        continue;
                    }
                    let k_to_r = x.components[i].base_embedding().clone().then(p.phi.clone());
                    for c in tensor_decompose(ext_l, &k_to_r)? {
                        let theta_l_s = c.psi.apply(&theta_l)?;
                        let fj_to_s = p.psi.clone().then(c.phi.clone());
                        let fi_to_s = p.phi.clone().then(c.phi.clone());
                        let ablock = &alpha.blocks[j][l];
                        let Some(qa) = position_over(&ablock.points, &fj_to_s, &theta_l_s)? else {
                            return Err(Error::Invalid("point of Y x Z not found".into()));
                        };
                        let a_entry = &ablock.entries[qa];
                        if vanishes(a_entry) {
                            continue;
                        }
                        let oblock = &out.blocks[i][l];
                        let Some(qo) = position_over(&oblock.points, &fi_to_s, &theta_l_s)? else {
                            return Err(Error::Invalid("point of X x Z not found".into()));
                        };
                        let s = c.residue.clone();
                        let b_s = bp.map_field(&c.phi)?;
                        let a_s = a_entry.map_field(&point_into(&ablock.points[qa], &fj_to_s, &theta_l_s)?)?;
                        let weight = GWClass::n_epsilon(c.length as i64, &s)?;
                        let prod = weight.mul(&b_s.mul(&a_s)?)?;
                        let q = &oblock.points[qo];
                        let r_to_s = point_into(q, &fi_to_s, &theta_l_s)?;
                        let ext = SimpleExtension::from_generator(r_to_s, &fj_to_s.apply(&theta_j)?)?;
                        let tr = ctx.canonical(&prod.to_mw(), &ext)?;
                        let tr = GWClass::from_mw(&tr)?;
                        let e = &mut out.blocks[i][l].entries[qo];
                        *e = e.add(&tr)?.reduced();
                    }
                }
            }
        }
    }
    Ok(out)
}

fn position_over(pts: &[ArtinComponent], base: &Embedding, theta_l: &Elem) -> Result<Option<usize>> {
    for (n, q) in pts.iter().enumerate() {
        if lies_over(q, base, theta_l)? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// A correspondence with random virtual forms of rank at most two at every point.
pub fn random_cor<R: Rng + ?Sized>(x: &EtaleScheme, y: &EtaleScheme, rng: &mut R) -> Result<MWCor> {
    MWCor::from_fn(x, y, |_, _, p| {
        if rng.gen_bool(0.25) {
            Ok(GWClass::zero(&p.residue))
        } else {
            Ok(sample::gw(&p.residue, 2, rng)?.reduced())
        }
    })
}

/// `MW`-correspondences act on `K^MW_0` of the target: `α^*` for `α: X → Spec k` sends `b` to
/// `α ∘ b` (used to read off transfers).
pub fn act_on_class(ctx: &mut Transfers, alpha: &MWCor, classes: &[GWClass]) -> Result<GWClass> {
    let b = MWCor::from_gw(alpha.source(), classes)?;
    let out = compose(ctx, &b, alpha)?;
    let v = out.to_gw()?;
    match v.as_slice() {
        [one] => Ok(one.clone()),
        _ => Err(Error::Invalid("target is not Spec k".into())),
    }
}

/// `γ ∘ (β ∘ α) = (γ ∘ β) ∘ α`.
pub fn associativity_check(ctx: &mut Transfers, a: &MWCor, b: &MWCor, c: &MWCor) -> Result<bool> {
    let ab = compose(ctx, a, b)?;
    let left = compose(ctx, &ab, c)?;
    let bc = compose(ctx, b, c)?;
    let right = compose(ctx, a, &bc)?;
    left.eq_cor(&right)
}

/// `id ∘ α = α = α ∘ id`.
pub fn unit_check(ctx: &mut Transfers, a: &MWCor) -> Result<bool> {
    let l = compose(ctx, &MWCor::identity(a.source())?, a)?;
    let r = compose(ctx, a, &MWCor::identity(a.target())?)?;
    Ok(l.eq_cor(a)? && r.eq_cor(a)?)
}

/// Composing with the transposed graph of `Spec F → Spec k` is the canonical transfer, and on
/// `GW` it agrees with the trace-form transfer. Returns both sides.
pub fn graph_transfer_sides(ctx: &mut Transfers, ext: &SimpleExtension, q: &GWClass) -> Result<(GWClass, GWClass)> {
    let g = MWCor::transpose_graph(ext)?;
    let via_cor = act_on_class(ctx, &g, std::slice::from_ref(q))?;
    let via_tr = GWClass::from_mw(&ctx.canonical(&q.to_mw(), ext)?)?;
    Ok((via_cor, via_tr))
}
