//! The Rost-Schmid complex `C^*(X, K^MW_n)` of schemes of dimension at most one: cycles in
//! codimension 0 and 1, the differential, push-forward along finite morphisms, pull-back along
//! smooth ones, the `GW`-action, boundary maps and `A^0`.
//!
//! Closed points of `A^1_F` and `P^1_F` are monic irreducible polynomials in `t` (plus `∞`), and
//! the line of a closed point is trivialized by its polynomial (by `1/t` at `∞`), so every entry is
//! a plain element of `K^MW_{n-p}(κ(x))`. Push-forwards use generator-bound transfers: along
//! `t ↦ t^m` the function field transfer is generated by `t`, along a constant field extension
//! `F'/F` by the generator of `F'`, and on a closed point by the image of the same generator.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::embed::{minimal_polynomial, Embedding};
use crate::field::model::RationalModel;
use crate::field::parse::parse_elem;
use crate::field::place::{self, Place, PlaceKind};
use crate::field::tensor::SimpleExtension;
use crate::field::{poly, Elem, Field, FieldKind, Poly};
use crate::kmw::{parse_mw, MWElement, Projection};
use crate::residues::{self, Coresidues};
use crate::transfers::{places_over_along, Transfers};

/// The shapes of scheme the complex is computed on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemeKind {
    /// `Spec F`.
    Point,
    /// `A^1_F`.
    AffineLine,
    /// `P^1_F`.
    ProjectiveLine,
    /// `Spec O_v` for a place `v` of a function field.
    LocalRing(Place),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scheme {
    kind: SchemeKind,
    base: Field,
    function_field: Field,
}

impl Scheme {
    pub fn point(f: &Field) -> Scheme {
        Scheme {
            kind: SchemeKind::Point,
            base: f.clone(),
            function_field: f.clone(),
        }
    }

    pub fn affine_line(f: &Field) -> Scheme {
        Scheme {
            kind: SchemeKind::AffineLine,
            base: f.clone(),
            function_field: Field::rational_functions(f, "t"),
        }
    }

    pub fn projective_line(f: &Field) -> Scheme {
        Scheme {
            kind: SchemeKind::ProjectiveLine,
            base: f.clone(),
            function_field: Field::rational_functions(f, "t"),
        }
    }

    /// `Spec O_v`; its generic point is the field of `v`.
    pub fn local_ring(v: &Place) -> Scheme {
        let k = v.field().clone();
        Scheme {
            kind: SchemeKind::LocalRing(v.clone()),
            base: v.rat_field_of().base().cloned().unwrap_or_else(|| k.clone()),
            function_field: k,
        }
    }

    pub fn kind(&self) -> &SchemeKind {
        &self.kind
    }

    /// The constants `F` of `Spec F`, `A^1_F`, `P^1_F`.
    pub fn base(&self) -> &Field {
        &self.base
    }

    /// The residue field of the generic point.
    pub fn function_field(&self) -> &Field {
        &self.function_field
    }

    pub fn dimension(&self) -> usize {
        match self.kind {
            SchemeKind::Point => 0,
            _ => 1,
        }
    }

    fn is_line(&self) -> bool {
        matches!(self.kind, SchemeKind::AffineLine | SchemeKind::ProjectiveLine)
    }

    /// The same kind of scheme over other constants.
    pub fn over(&self, f: &Field) -> Result<Scheme> {
        match self.kind {
            SchemeKind::Point => Ok(Scheme::point(f)),
            SchemeKind::AffineLine => Ok(Scheme::affine_line(f)),
            SchemeKind::ProjectiveLine => Ok(Scheme::projective_line(f)),
            SchemeKind::LocalRing(_) => Err(Error::Unsupported("base change of a local ring".into())),
        }
    }

    /// The closed point `p` as a place of the function field.
    pub fn place(&self, p: &PlaceKind) -> Result<Place> {
        match (&self.kind, p) {
            (SchemeKind::AffineLine | SchemeKind::ProjectiveLine, PlaceKind::Finite(pi)) => {
                Place::finite(&self.function_field, pi.clone())
            }
            (SchemeKind::ProjectiveLine, PlaceKind::Infinity) => Place::infinity(&self.function_field),
            (SchemeKind::LocalRing(v), k) if v.kind() == k => Ok(v.clone()),
            _ => Err(Error::Invalid(format!("{} is not a closed point of {self}", point_label(self, p)))),
        }
    }

    pub fn residue_field(&self, p: &Point) -> Result<Field> {
        match p {
            Point::Generic => Ok(self.function_field.clone()),
            Point::Closed(k) => Ok(self.place(k)?.residue_field().clone()),
        }
    }

    /// Closed points where an element of the function field may have a residue.
    fn support(&self, x: &MWElement) -> Result<Vec<Place>> {
        match &self.kind {
            SchemeKind::Point => Ok(vec![]),
            SchemeKind::AffineLine => residues::finite_support(x),
            SchemeKind::ProjectiveLine => {
                let mut out = residues::finite_support(x)?;
                out.push(Place::infinity(&self.function_field)?);
                Ok(out)
            }
            SchemeKind::LocalRing(v) => Ok(vec![v.clone()]),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SchemeKind::Point => write!(f, "Spec {}", self.base),
            SchemeKind::AffineLine => write!(f, "A1_{}", self.base),
            SchemeKind::ProjectiveLine => write!(f, "P1_{}", self.base),
            SchemeKind::LocalRing(v) => write!(f, "Spec O_{} in {}", v.label(), self.function_field),
        }
    }
}

fn point_label(x: &Scheme, p: &PlaceKind) -> String {
    match p {
        PlaceKind::Finite(pi) => format!("({})", poly::format(x.base(), pi, "t")),
        PlaceKind::Infinity => "inf".into(),
        PlaceKind::Padic(p) => format!("p={p}"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Generic,
    Closed(PlaceKind),
}

fn tidy(x: MWElement) -> MWElement {
    if x.field().is_finite() {
        x.normalize()
    } else {
        x
    }
}

fn vanishes(x: &MWElement) -> bool {
    match x.is_zero() {
        Ok(z) => z,
        Err(_) => x.is_structurally_zero(),
    }
}

/// An element of `C^p(X, K^MW_n) = ⊕_{x ∈ X^(p)} K^MW_{n-p}(κ(x))` with `p ∈ {0, 1}`.
#[derive(Clone, Debug)]
pub struct Cycle {
    scheme: Scheme,
    codim: usize,
    degree: i64,
    entries: BTreeMap<Point, MWElement>,
}

impl Cycle {
    pub fn zero(x: &Scheme, codim: usize, degree: i64) -> Cycle {
        Cycle {
            scheme: x.clone(),
            codim,
            degree,
            entries: BTreeMap::new(),
        }
    }

    /// The codimension 0 cycle with generic entry `γ`.
    pub fn generic(x: &Scheme, gamma: &MWElement) -> Result<Cycle> {
        if gamma.field() != x.function_field() {
            return Err(Error::FieldMismatch(
                gamma.field().descriptor(),
                x.function_field().descriptor(),
            ));
        }
        let mut c = Cycle::zero(x, 0, gamma.degree());
        c.add_entry(Point::Generic, gamma.clone())?;
        Ok(c)
    }

    /// A codimension 1 cycle of `C^1(X, K^MW_n)` from entries at closed points.
    pub fn closed(x: &Scheme, degree: i64, entries: Vec<(PlaceKind, MWElement)>) -> Result<Cycle> {
        if x.dimension() == 0 {
            return Err(Error::Invalid(format!("{x} has no closed points of codimension 1")));
        }
        let mut c = Cycle::zero(x, 1, degree);
        for (p, v) in entries {
            c.add_entry(Point::Closed(p), v)?;
        }
        Ok(c)
    }

    /// Adds `v` to the entry at `p`, checking its field and degree.
    pub fn add_entry(&mut self, p: Point, v: MWElement) -> Result<()> {
        let expected_codim = usize::from(p != Point::Generic);
        if expected_codim != self.codim {
            return Err(Error::Invalid("point of the wrong codimension".into()));
        }
        let k = self.scheme.residue_field(&p)?;
        if v.field() != &k {
            return Err(Error::FieldMismatch(v.field().descriptor(), k.descriptor()));
        }
        let want = self.degree - self.codim as i64;
        if v.degree() != want {
            return Err(Error::DegreeMismatch(v.degree(), want));
        }
        let v = v.untwisted();
        let sum = match self.entries.remove(&p) {
            Some(old) => old.add(&v)?,
            None => v,
        };
        let sum = tidy(sum);
        if !vanishes(&sum) {
            self.entries.insert(p, sum);
        }
        Ok(())
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    /// The degree `n` of the coefficient sheaf `K^MW_n`.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Point, &MWElement)> {
        self.entries.iter()
    }

    pub fn entry(&self, p: &Point) -> Option<&MWElement> {
        self.entries.get(p)
    }

    /// The generic entry of a codimension 0 cycle (zero when absent).
    pub fn generic_entry(&self) -> MWElement {
        self.entries
            .get(&Point::Generic)
            .cloned()
            .unwrap_or_else(|| MWElement::zero(self.scheme.function_field(), self.degree))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &Cycle) -> Result<Cycle> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (p, v) in &other.entries {
            out.add_entry(p.clone(), v.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Cycle {
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v = v.neg();
        }
        out
    }

    fn compatible(&self, other: &Cycle) -> Result<()> {
        if self.scheme != other.scheme {
            return Err(Error::Invalid(format!("cycles on {} and {}", self.scheme, other.scheme)));
        }
        if self.codim != other.codim {
            return Err(Error::Invalid("cycles of different codimension".into()));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        Ok(())
    }

    /// Entrywise equality in the chosen quotient.
    pub fn eq_proj(&self, other: &Cycle, proj: Projection) -> Result<bool> {
        self.compatible(other)?;
        let diff = self.add(&other.neg())?;
        for v in diff.entries.values() {
            if !v.is_zero_in(proj)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Reads `{ gen: <elem> }` or `{ (pi_1): <elem>, ..., inf: <elem> }`.
    pub fn parse(x: &Scheme, s: &str) -> Result<Cycle> {
        let body = s.trim();
        let inner = body
            .strip_prefix('{')
            .and_then(|b| b.strip_suffix('}'))
            .ok_or_else(|| Error::Parse {
                pos: 0,
                msg: "a cycle literal is enclosed in braces".into(),
            })?;
        let mut items: Vec<(Point, MWElement)> = Vec::new();
        for part in split_top_level(inner)? {
            let (key, val) = split_key(&part)?;
            let key = key.trim();
            let point = if key == "gen" {
                Point::Generic
            } else if key == "inf" {
                Point::Closed(PlaceKind::Infinity)
            } else if let Some(p) = key.strip_prefix('(').and_then(|k| k.strip_suffix(')')) {
                Point::Closed(PlaceKind::Finite(parse_point(x, p)?))
            } else {
                return Err(Error::Parse {
                    pos: 0,
                    msg: format!("unknown point `{key}`"),
                });
            };
            let k = x.residue_field(&point)?;
            items.push((point, parse_mw(&k, val.trim())?));
        }
        let Some((first, v)) = items.first() else {
            return Err(Error::Parse {
                pos: 0,
                msg: "empty cycle literal".into(),
            });
        };
        let codim = usize::from(*first != Point::Generic);
        let mut c = Cycle::zero(x, codim, v.degree() + codim as i64);
        for (p, v) in items {
            c.add_entry(p, v)?;
        }
        Ok(c)
    }
}

fn parse_point(x: &Scheme, s: &str) -> Result<Poly> {
    let a = parse_elem(x.function_field(), s)?;
    let Elem::Frac(n, d) = &a else {
        return Err(Error::Parse {
            pos: 0,
            msg: format!("`{s}` is not a polynomial in t"),
        });
    };
    if d.deg() != 0 || n.deg() < 1 {
        return Err(Error::Parse {
            pos: 0,
            msg: format!("`{s}` is not a nonconstant polynomial in t"),
        });
    }
    Ok(poly::monic(x.base(), &poly::div_exact(x.base(), n, d)?))
}

fn split_top_level(s: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' | '<' | '{' => depth += 1,
            ')' | ']' | '>' | '}' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse {
                        pos: i,
                        msg: "unbalanced brackets".into(),
                    });
                }
            }
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if depth != 0 {
        return Err(Error::Parse {
            pos: s.len(),
            msg: "unbalanced brackets".into(),
        });
    }
    if !cur.trim().is_empty() {
        out.push(cur);
    }
    Ok(out.into_iter().filter(|p| !p.trim().is_empty()).collect())
}

fn split_key(s: &str) -> Result<(&str, &str)> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' | '<' => depth += 1,
            ')' | ']' | '>' => depth -= 1,
            ':' if depth == 0 => return Ok((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    Err(Error::Parse {
        pos: 0,
        msg: format!("missing `:` in `{}`", s.trim()),
    })
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(p, v)| match p {
                Point::Generic => format!("gen: {v}"),
                Point::Closed(k) => format!("{}: {v}", point_label(&self.scheme, k)),
            })
            .collect();
        write!(f, "{{ {} }}", parts.join(", "))
    }
}

// ---- the differential and boundary maps ----

/// `d: C^0 → C^1`, the sum of the residues of the generic entry at all closed points.
pub fn differential(c: &Cycle) -> Result<Cycle> {
    let x = c.scheme();
    if x.dimension() == 0 {
        return Ok(Cycle::zero(x, 1, c.degree()));
    }
    if c.codim() != 0 {
        return Ok(Cycle::zero(x, 2, c.degree()));
    }
    let gamma = c.generic_entry();
    let mut out = Cycle::zero(x, 1, c.degree());
    for y in x.support(&gamma)? {
        let r = residues::theta(&gamma, &y)?.1;
        out.add_entry(Point::Closed(y.kind().clone()), r)?;
    }
    Ok(out)
}

/// The boundary map of `Z ⊂ X ⊃ X∖Z` on a codimension 0 cycle of `X∖Z`: the residues of its
/// generic entry at the points of `Z`.
pub fn boundary(c: &Cycle, z: &[PlaceKind]) -> Result<Cycle> {
    let x = c.scheme();
    if c.codim() != 0 {
        return Err(Error::Invalid("the boundary map starts in codimension 0".into()));
    }
    let gamma = c.generic_entry();
    let mut out = Cycle::zero(x, 1, c.degree());
    for p in z {
        let y = x.place(p)?;
        out.add_entry(Point::Closed(p.clone()), residues::theta(&gamma, &y)?.1)?;
    }
    Ok(out)
}

/// Multiplication by `⟨a⟩` for a global unit `a`: a nonzero constant on `Spec F`, `A^1_F`,
/// `P^1_F`, a `v`-unit of the function field on `Spec O_v`.
pub fn gw_action(a: &Elem, c: &Cycle) -> Result<Cycle> {
    let x = c.scheme();
    let k = x.function_field();
    let (global, value_at): (Elem, Box<dyn Fn(&Place) -> Result<Elem>>) = match x.kind() {
        SchemeKind::LocalRing(v) => {
            if v.valuation(a)? != 0 {
                return Err(Error::Invalid("not a unit on the local ring".into()));
            }
            (a.clone(), Box::new(move |y: &Place| y.reduce(a)))
        }
        _ => {
            if a.is_zero() || !x.base().contains(a) {
                return Err(Error::Invalid(format!("not a nonzero constant of {}", x.base())));
            }
            let b = x.base().clone();
            let lifted = if x.dimension() == 0 { a.clone() } else { k.constant(a.clone()) };
            let a = a.clone();
            (
                lifted,
                Box::new(move |y: &Place| {
                    let kappa = y.residue_field();
                    if *kappa == b {
                        Ok(a.clone())
                    } else {
                        Embedding::natural(&b, kappa)?.apply(&a)
                    }
                }),
            )
        }
    };
    let mut out = Cycle::zero(x, c.codim(), c.degree());
    for (p, v) in c.entries() {
        let unit = match p {
            Point::Generic => global.clone(),
            Point::Closed(q) => value_at(&x.place(q)?)?,
        };
        let kp = v.field().clone();
        out.add_entry(p.clone(), MWElement::angle(&kp, &unit)?.mul(v)?)?;
    }
    Ok(out)
}

// ---- morphisms ----

/// Morphisms between the supported schemes.
#[derive(Clone, Debug)]
pub enum Morphism {
    Identity(Scheme),
    /// `t ↦ t^m` on `A^1_F` or `P^1_F`.
    Power { scheme: Scheme, m: u32 },
    /// `X_{F'} → X_F` for `X` a point, the affine or the projective line.
    BaseChange { source: Scheme, target: Scheme },
    /// The structure map `A^1_F → Spec F` or `P^1_F → Spec F`.
    Structure(Scheme),
    /// The first map followed by the second.
    Compose(Box<Morphism>, Box<Morphism>),
}

impl Morphism {
    pub fn power(x: &Scheme, m: u32) -> Result<Morphism> {
        if !x.is_line() || m == 0 {
            return Err(Error::Unsupported(format!("t -> t^{m} on {x}")));
        }
        if m as u64 % x.base().characteristic().max(1) == 0 && x.base().characteristic() != 0 {
            return Err(Error::Unsupported("inseparable power maps".into()));
        }
        Ok(Morphism::Power { scheme: x.clone(), m })
    }

    /// `X_{F'} → X_F` for the canonical inclusion `F ⊂ F'`.
    pub fn base_change(target: &Scheme, big: &Field) -> Result<Morphism> {
        Embedding::natural(target.base(), big)?;
        if big.dim_over_ground() % target.base().dim_over_ground() != 0 || big.ground() != target.base().ground() {
            return Err(Error::Unsupported(format!("{big} over {}", target.base())));
        }
        Ok(Morphism::BaseChange {
            source: target.over(big)?,
            target: target.clone(),
        })
    }

    pub fn structure(x: &Scheme) -> Result<Morphism> {
        if !x.is_line() {
            return Err(Error::Unsupported(format!("structure map of {x}")));
        }
        Ok(Morphism::Structure(x.clone()))
    }

    /// `self` followed by `g`.
    pub fn then(self, g: Morphism) -> Result<Morphism> {
        if self.target() != g.source() {
            return Err(Error::Invalid(format!(
                "cannot compose a map to {} with a map from {}",
                self.target(),
                g.source()
            )));
        }
        Ok(Morphism::Compose(Box::new(self), Box::new(g)))
    }

    pub fn source(&self) -> Scheme {
        match self {
            Morphism::Identity(x) | Morphism::Power { scheme: x, .. } | Morphism::Structure(x) => x.clone(),
            Morphism::BaseChange { source, .. } => source.clone(),
            Morphism::Compose(f, _) => f.source(),
        }
    }

    pub fn target(&self) -> Scheme {
        match self {
            Morphism::Identity(x) | Morphism::Power { scheme: x, .. } => x.clone(),
            Morphism::BaseChange { target, .. } => target.clone(),
            Morphism::Structure(x) => Scheme::point(x.base()),
            Morphism::Compose(_, g) => g.target(),
        }
    }

    /// The exponent `m` of the induced map `t ↦ t^m` of a finite morphism, `None` for the
    /// structure maps.
    pub fn exponent(&self) -> Option<u32> {
        match self {
            Morphism::Identity(_) | Morphism::BaseChange { .. } => Some(1),
            Morphism::Power { m, .. } => Some(*m),
            Morphism::Structure(_) => None,
            Morphism::Compose(f, g) => Some(f.exponent()? * g.exponent()?),
        }
    }

    /// Whether two morphisms are the same map of schemes.
    pub fn same_map(&self, other: &Morphism) -> bool {
        self.source() == other.source()
            && self.target() == other.target()
            && self.exponent() == other.exponent()
    }
}

/// `F(t)[u]/(u^m - t)`, which the rational model identifies with `F(u)`.
fn power_cover(ff: &Field, m: u32) -> Result<(Field, RationalModel)> {
    let mut c = vec![ff.zero(); m as usize + 1];
    c[0] = ff.neg(&ff.gen());
    c[m as usize] = ff.one();
    let k = Field::extension_unchecked(ff, Poly::new(c), "u");
    let model = RationalModel::of(&k).ok_or_else(|| Error::Unsupported("power cover".into()))?;
    Ok((k, model))
}

/// `F(t)[a]/(m_α)` for the generator `α` of `F'` over `F`, with `F'(t) → F(t)[a]/(m_α)`.
fn constant_cover(small: &Field, big: &Field, ff_small: &Field, ff_big: &Field) -> Result<(Field, Embedding)> {
    let alpha = SimpleExtension::from_generator(Embedding::natural(small, big)?, &big.gen())?;
    let m = alpha.minpoly().map(|c| ff_small.constant(c.clone()));
    let k = Field::extension_unchecked(ff_small, m, "a");
    let to_k = Embedding::generator(alpha.stage(), &k, Embedding::natural(small, &k)?, k.gen())?;
    let big_to_k = alpha.section().clone().then(to_k);
    let t = k.constant(ff_small.gen());
    let emb = Embedding::generator(ff_big, &k, big_to_k, t)?;
    Ok((k, emb))
}

/// `F(t) → F'(t)` fixing `t`.
fn constant_inclusion(ff_small: &Field, ff_big: &Field) -> Result<Embedding> {
    Embedding::generator(ff_small, ff_big, Embedding::natural(ff_small.base().unwrap(), ff_big)?, ff_big.gen())
}

/// Generator-bound transfer `κ(w) → κ(v)` generated by `theta`, or the identity when the
/// residue fields have the same degree.
fn residue_transfer(
    ctx: &mut Transfers,
    beta: &MWElement,
    kv: &Field,
    kw: &Field,
    residue_embedding: &Embedding,
    theta: impl FnOnce() -> Result<Elem>,
) -> Result<MWElement> {
    if kv.dim_over_ground() == kw.dim_over_ground() {
        // The residue embedding may be a nontrivial automorphism, e.g. a Frobenius.
        if kv == kw && fixes_generators(residue_embedding)? {
            return Ok(beta.clone());
        }
        let stage = SimpleExtension::from_generator(residue_embedding.clone(), &kw.one())?;
        return ctx.raw(beta, &stage);
    }
    let stage = SimpleExtension::from_generator(residue_embedding.clone(), &theta()?)?;
    ctx.raw(beta, &stage)
}

/// Whether an embedding `K → K` fixes the generators of every stage of `K`.
fn fixes_generators(emb: &Embedding) -> Result<bool> {
    let k = emb.src();
    let mut stage = k.clone();
    loop {
        let g = Embedding::natural(&stage, k)?.apply(&stage.gen())?;
        if emb.apply(&g)? != g {
            return Ok(false);
        }
        match stage.kind() {
            FieldKind::Ext { base, .. } => stage = base.clone(),
            _ => return Ok(true),
        }
    }
}

fn find_above(v: &Place, big: &Field, kind: &PlaceKind) -> Result<place::PlaceAbove> {
    place::places_above(v, big)?
        .into_iter()
        .find(|pa| pa.place.kind() == kind)
        .ok_or_else(|| Error::Invalid("point not found above its image".into()))
}

/// Minimal polynomial over `F` of an element of a residue field over `F`.
fn image_point(f: &Field, kappa: &Field, a: &Elem) -> Result<Poly> {
    if kappa == f {
        return Ok(Poly::linear(f, a));
    }
    minimal_polynomial(&Embedding::natural(f, kappa)?, a)
}

/// `f_*: C^p(X) → C^p(Y)` for a finite morphism `f: X → Y`.
pub fn pushforward(ctx: &mut Transfers, f: &Morphism, c: &Cycle) -> Result<Cycle> {
    if c.scheme() != &f.source() {
        return Err(Error::Invalid(format!("cycle on {} pushed along a map from {}", c.scheme(), f.source())));
    }
    match f {
        Morphism::Identity(_) => Ok(c.clone()),
        Morphism::Compose(a, b) => {
            let mid = pushforward(ctx, a, c)?;
            pushforward(ctx, b, &mid)
        }
        Morphism::Structure(_) => Err(Error::Unsupported("push-forward along a non-finite morphism".into())),
        Morphism::Power { scheme, m } => push_power(ctx, scheme, *m, c),
        Morphism::BaseChange { source, target } => push_base_change(ctx, source, target, c),
    }
}

fn push_power(ctx: &mut Transfers, x: &Scheme, m: u32, c: &Cycle) -> Result<Cycle> {
    if m == 1 {
        return Ok(c.clone());
    }
    let ff = x.function_field().clone();
    let f = x.base().clone();
    let (k, model) = power_cover(&ff, m)?;
    let mut out = Cycle::zero(x, c.codim(), c.degree());
    for (p, v) in c.entries() {
        match p {
            Point::Generic => {
                let lifted = v.map_entries(&k, |e| model.from_model(e))?;
                let tr = ctx.raw(&lifted, &SimpleExtension::structural(&k)?)?;
                out.add_entry(Point::Generic, tr)?;
            }
            Point::Closed(PlaceKind::Infinity) => out.add_entry(p.clone(), v.clone())?,
            Point::Closed(kind) => {
                let PlaceKind::Finite(pi) = kind else { unreachable!() };
                let w = Place::finite(&k, pi.clone())?;
                let kw = w.residue_field().clone();
                let ubar = w.reduce(&k.gen())?;
                let y = image_point(&f, &kw, &kw.pow(&ubar, m as i64)?)?;
                let vplace = Place::finite(&ff, y.clone())?;
                let pa = find_above(&vplace, &k, kind)?;
                let tr = residue_transfer(ctx, v, vplace.residue_field(), &kw, &pa.residue_embedding, || {
                    pa.place.reduce(&k.gen())
                })?;
                out.add_entry(Point::Closed(PlaceKind::Finite(y)), tr)?;
            }
        }
    }
    Ok(out)
}

fn push_base_change(ctx: &mut Transfers, source: &Scheme, target: &Scheme, c: &Cycle) -> Result<Cycle> {
    let small = target.base().clone();
    let big = source.base().clone();
    let mut out = Cycle::zero(target, c.codim(), c.degree());
    if small == big {
        for (p, v) in c.entries() {
            out.add_entry(p.clone(), v.clone())?;
        }
        return Ok(out);
    }
    let alpha_ext = SimpleExtension::from_generator(Embedding::natural(&small, &big)?, &big.gen())?;
    for (p, v) in c.entries() {
        match (p, source.dimension()) {
            (Point::Generic, 0) => out.add_entry(Point::Generic, ctx.raw(v, &alpha_ext)?)?,
            (Point::Generic, _) => {
                let (k, emb) = constant_cover(&small, &big, target.function_field(), source.function_field())?;
                let tr = ctx.raw(&v.map_field(&emb)?, &SimpleExtension::structural(&k)?)?;
                out.add_entry(Point::Generic, tr)?;
            }
            (Point::Closed(PlaceKind::Infinity), _) => out.add_entry(p.clone(), ctx.raw(v, &alpha_ext)?)?,
            (Point::Closed(kind), _) => {
                let w = source.place(kind)?;
                let kw = w.residue_field().clone();
                let tbar = w.reduce(&source.function_field().gen())?;
                let y = image_point(&small, &kw, &tbar)?;
                let vplace = target.place(&PlaceKind::Finite(y.clone()))?;
                let pa = find_above(&vplace, source.function_field(), kind)?;
                let tr = residue_transfer(ctx, v, vplace.residue_field(), &kw, &pa.residue_embedding, || {
                    Embedding::natural(&big, &kw)?.apply(&big.gen())
                })?;
                out.add_entry(Point::Closed(PlaceKind::Finite(y)), tr)?;
            }
        }
    }
    Ok(out)
}

/// `g^*: C^p(Y) → C^p(X)` for a smooth morphism `g: X → Y`. On closed points the entry is
/// restricted and multiplied by `e_ε ⟨ū⟩`, where `π_y = u π_x^e`.
pub fn pullback(g: &Morphism, c: &Cycle) -> Result<Cycle> {
    if c.scheme() != &g.target() {
        return Err(Error::Invalid(format!("cycle on {} pulled back along a map to {}", c.scheme(), g.target())));
    }
    match g {
        Morphism::Identity(_) => Ok(c.clone()),
        Morphism::Compose(a, b) => pullback(a, &pullback(b, c)?),
        Morphism::Power { .. } => Err(Error::Unsupported("pull-back along a ramified cover".into())),
        Morphism::Structure(x) => {
            let mut out = Cycle::zero(x, c.codim(), c.degree());
            let emb = Embedding::natural(x.base(), x.function_field())?;
            for (p, v) in c.entries() {
                out.add_entry(p.clone(), v.map_field(&emb)?)?;
            }
            Ok(out)
        }
        Morphism::BaseChange { source, target } => {
            let mut out = Cycle::zero(source, c.codim(), c.degree());
            if source.dimension() == 0 {
                let emb = Embedding::natural(target.base(), source.base())?;
                for (p, v) in c.entries() {
                    out.add_entry(p.clone(), v.map_field(&emb)?)?;
                }
                return Ok(out);
            }
            let emb = if source.base() == target.base() {
                Embedding::identity(target.function_field())
            } else {
                constant_inclusion(target.function_field(), source.function_field())?
            };
            for (p, v) in c.entries() {
                match p {
                    Point::Generic => out.add_entry(Point::Generic, v.map_field(&emb)?)?,
                    Point::Closed(kind) => {
                        let y = target.place(kind)?;
                        for w in places_over_along(&y, &emb)? {
                            let kw = w.place.residue_field().clone();
                            let weight = MWElement::n_eps(&kw, w.e as i64).mul(&MWElement::angle(&kw, &w.unit)?)?;
                            let r = weight.mul(&v.map_field(&w.residue_embedding)?)?;
                            out.add_entry(Point::Closed(w.place.kind().clone()), r)?;
                        }
                    }
                }
            }
            Ok(out)
        }
    }
}

// ---- A^0 ----

/// Membership of a codimension 0 cycle in `A^0 = ker d`, with a preimage in `K^MW_n(F)` where the
/// split exact sequence of the affine line provides one.
#[derive(Clone, Debug)]
pub struct A0Membership {
    pub unramified: bool,
    /// `c ∈ K^MW_n(F)` with `res(c)` equal to the cycle.
    pub constant: Option<MWElement>,
}

/// Decides whether `c` lies in `A^0(X, K^MW_n)`; on `Spec F`, `A^1_F` and `P^1_F` an
/// unramified class is identified with a constant one, and the identification is verified.
pub fn a0(c: &Cycle) -> Result<A0Membership> {
    let x = c.scheme();
    if c.codim() != 0 {
        return Err(Error::Invalid("A^0 is computed on codimension 0 cycles".into()));
    }
    if x.dimension() == 0 {
        return Ok(A0Membership {
            unramified: true,
            constant: Some(c.generic_entry()),
        });
    }
    let unramified = differential(c)?.is_zero();
    if !unramified || !x.is_line() {
        return Ok(A0Membership {
            unramified,
            constant: None,
        });
    }
    let gamma = c.generic_entry();
    let rec = residues::milnor_reconstruct(&gamma, &mut Coresidues::new())?;
    let constant = tidy(rec.constant);
    let back = constant.map_field(&Embedding::natural(x.base(), x.function_field())?)?;
    if !back.eq_in(&gamma)? {
        return Err(Error::Invalid("unramified class is not constant".into()));
    }
    Ok(A0Membership {
        unramified,
        constant: Some(constant),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_of_t_is_one_at_origin() {
        let f = Field::prime(3).unwrap();
        let x = Scheme::affine_line(&f);
        let c = Cycle::parse(&x, "{ gen: [t] }").unwrap();
        let d = differential(&c).unwrap();
        assert_eq!(d.to_string(), "{ (t): 1 }");
    }

    #[test]
    fn literal_round_trip() {
        let f = Field::prime(5).unwrap();
        let x = Scheme::projective_line(&f);
        let c = Cycle::parse(&x, "{ (t^2+2): <t> - 1, inf: 2*<2> }").unwrap();
        let again = Cycle::parse(&x, &c.to_string()).expect(&c.to_string());
        assert!(c.eq_proj(&again, Projection::Full).unwrap());
    }
}
