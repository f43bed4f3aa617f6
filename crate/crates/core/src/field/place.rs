//! Discrete valuations of geometric type on `B(t)` (and on radical extensions of it through
//! their rational model), and p-adic valuations of the rationals.

use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::embed::Embedding;
use super::model::RationalModel;
use super::{factor, poly, Elem, Field, FieldKind, Poly};
use crate::error::{Error, Result};
use crate::numtheory;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaceKind {
    /// Monic irreducible polynomial in the variable of the (model) rational function field.
    Finite(Poly),
    /// The place at infinity, uniformizer `1/t`.
    Infinity,
    /// A prime of the rationals.
    Padic(u64),
}

#[derive(Clone, Debug)]
pub struct Place {
    field: Field,
    chart: Option<Arc<RationalModel>>,
    kind: PlaceKind,
    residue: Field,
}

impl PartialEq for Place {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.kind == other.kind
    }
}

impl Eq for Place {}

impl Place {
    fn rat_field(field: &Field) -> Result<(Field, Option<Arc<RationalModel>>)> {
        match field.kind() {
            FieldKind::RatFunc { .. } => Ok((field.clone(), None)),
            _ => match RationalModel::of(field) {
                Some(m) => Ok((m.model().clone(), Some(Arc::new(m)))),
                None => Err(Error::Unsupported(format!("places of {field}"))),
            },
        }
    }

    /// The finite place of `field` given by a monic irreducible polynomial over the constants
    /// (in the model variable for radical extensions).
    pub fn finite(field: &Field, pi: Poly) -> Result<Place> {
        let (rat, chart) = Place::rat_field(field)?;
        let b = rat.base().unwrap().clone();
        if pi.deg() < 1 || !pi.is_monic(&b) {
            return Err(Error::Invalid("place polynomial must be monic of positive degree".into()));
        }
        if !factor::is_irreducible(&b, &pi)? {
            return Err(Error::Reducible(poly::format(&b, &pi, rat.var())));
        }
        Ok(Place::finite_unchecked(field, &rat, chart, pi))
    }

    fn finite_unchecked(
        field: &Field,
        rat: &Field,
        chart: Option<Arc<RationalModel>>,
        pi: Poly,
    ) -> Place {
        let b = rat.base().unwrap();
        let residue = if pi.deg() == 1 {
            b.clone()
        } else {
            Field::extension_unchecked(b, pi.clone(), rat.var())
        };
        Place {
            field: field.clone(),
            chart,
            kind: PlaceKind::Finite(pi),
            residue,
        }
    }

    pub fn infinity(field: &Field) -> Result<Place> {
        let (rat, chart) = Place::rat_field(field)?;
        Ok(Place {
            field: field.clone(),
            chart,
            kind: PlaceKind::Infinity,
            residue: rat.base().unwrap().clone(),
        })
    }

    pub fn padic(p: u64) -> Result<Place> {
        Ok(Place {
            field: Field::rationals(),
            chart: None,
            kind: PlaceKind::Padic(p),
            residue: Field::prime(p)?,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn residue_field(&self) -> &Field {
        &self.residue
    }

    pub fn kind(&self) -> &PlaceKind {
        &self.kind
    }

    pub fn is_infinite(&self) -> bool {
        self.kind == PlaceKind::Infinity
    }

    pub fn chart(&self) -> Option<&RationalModel> {
        self.chart.as_deref()
    }

    /// The rational function field in which the place polynomial lives.
    pub fn rat_field_of(&self) -> Field {
        match &self.chart {
            Some(m) => m.model().clone(),
            None => self.field.clone(),
        }
    }

    /// Degree of the residue field over the constants.
    pub fn degree(&self) -> usize {
        match &self.kind {
            PlaceKind::Finite(p) => p.degree().unwrap(),
            _ => 1,
        }
    }

    pub fn polynomial(&self) -> Option<&Poly> {
        match &self.kind {
            PlaceKind::Finite(p) => Some(p),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            PlaceKind::Finite(p) => {
                let rat = self.rat_field_of();
                format!("({})", poly::format(rat.base().unwrap(), p, rat.var()))
            }
            PlaceKind::Infinity => "inf".into(),
            PlaceKind::Padic(p) => format!("p={p}"),
        }
    }

    fn chart_in(&self, a: &Elem) -> Result<Elem> {
        match &self.chart {
            Some(m) => m.to_model(a),
            None => Ok(a.clone()),
        }
    }

    fn chart_out(&self, a: Elem) -> Result<Elem> {
        match &self.chart {
            Some(m) => m.from_model(&a),
            None => Ok(a),
        }
    }

    pub fn uniformizer(&self) -> Result<Elem> {
        let rat = self.rat_field_of();
        let u = match &self.kind {
            PlaceKind::Finite(p) => rat.from_poly(p.clone()),
            PlaceKind::Infinity => rat.inv(&rat.gen())?,
            PlaceKind::Padic(p) => Elem::Q(BigRational::from_integer((*p).into())),
        };
        self.chart_out(u)
    }

    /// Writes a nonzero `a` as `uniformizer^k * unit` and returns `k` with the residue of the unit.
    pub fn decompose(&self, a: &Elem) -> Result<(i64, Elem)> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let a = self.chart_in(a)?;
        match (&self.kind, &a) {
            (PlaceKind::Finite(pi), Elem::Frac(n, d)) => {
                let rat = self.rat_field_of();
                let b = rat.base().unwrap();
                let (vn, n1) = poly::strip(b, n, pi);
                let (vd, d1) = poly::strip(b, d, pi);
                let rn = self.reduce_poly(&n1)?;
                let rd = self.reduce_poly(&d1)?;
                Ok((vn - vd, self.residue.div(&rn, &rd)?))
            }
            (PlaceKind::Infinity, Elem::Frac(n, d)) => {
                let b = self.residue.clone();
                Ok((
                    d.deg() - n.deg(),
                    b.div(n.lead().unwrap(), d.lead().unwrap())?,
                ))
            }
            (PlaceKind::Padic(p), Elem::Q(x)) => {
                let pb = BigUint::from(*p);
                let v = numtheory::val_rat(x, &pb);
                let pv = BigRational::from_integer(num_bigint::BigInt::from(*p)).pow(v as i32);
                let unit = x / pv;
                Ok((v, Elem::Fp(numtheory::rat_mod(&unit, *p))))
            }
            _ => Err(Error::FieldMismatch(self.field.descriptor(), format!("{a:?}"))),
        }
    }

    pub fn valuation(&self, a: &Elem) -> Result<i64> {
        Ok(self.decompose(a)?.0)
    }

    /// Residue class of an element with nonnegative valuation.
    pub fn reduce(&self, a: &Elem) -> Result<Elem> {
        if a.is_zero() {
            return Ok(self.residue.zero());
        }
        let (v, u) = self.decompose(a)?;
        match v {
            0 => Ok(u),
            v if v > 0 => Ok(self.residue.zero()),
            _ => Err(Error::NotRegular(self.label())),
        }
    }

    fn reduce_poly(&self, f: &Poly) -> Result<Elem> {
        let PlaceKind::Finite(pi) = &self.kind else {
            unreachable!()
        };
        let rat = self.rat_field_of();
        let b = rat.base().unwrap();
        if pi.deg() == 1 {
            Ok(poly::eval(b, f, &b.neg(&pi.coeffs()[0])))
        } else {
            Ok(Elem::Ext(poly::rem(b, f, pi)?))
        }
    }

    /// The lift of a residue class to a polynomial of degree below the place degree.
    pub fn lift(&self, x: &Elem) -> Result<Elem> {
        let rat = self.rat_field_of();
        let p = match (&self.kind, x) {
            (PlaceKind::Finite(pi), _) if pi.deg() == 1 => Poly::constant(x.clone()),
            (PlaceKind::Finite(_), Elem::Ext(p)) => p.clone(),
            (PlaceKind::Infinity, _) => Poly::constant(x.clone()),
            (PlaceKind::Padic(_), Elem::Fp(v)) => {
                return Ok(Elem::Q(BigRational::from_integer((*v).into())))
            }
            _ => return Err(Error::FieldMismatch(self.residue.descriptor(), format!("{x:?}"))),
        };
        self.chart_out(rat.from_poly(p))
    }
}

/// Places where a nonzero element is not a unit: finite places first (by degree, then
/// polynomial), infinity last.
pub fn places_of_support(field: &Field, a: &Elem) -> Result<Vec<Place>> {
    if a.is_zero() {
        return Err(Error::Invalid("support of zero".into()));
    }
    if matches!(field.kind(), FieldKind::Rationals) {
        let Elem::Q(x) = a else { unreachable!() };
        return numtheory::primes_of_rational(x)
            .into_iter()
            .map(|p| Place::padic(u64::try_from(&p).map_err(|_| Error::Unsupported("huge prime".into()))?))
            .collect::<Result<Vec<_>>>()
            .map(|v| v.into_iter().filter(|pl| pl.residue.characteristic() != 2).collect());
    }
    let (rat, chart) = Place::rat_field(field)?;
    let b = rat.base().unwrap();
    let am = match &chart {
        Some(m) => m.to_model(a)?,
        None => a.clone(),
    };
    let Elem::Frac(n, d) = &am else { unreachable!() };
    let mut polys: Vec<Poly> = Vec::new();
    for p in [n, d] {
        if p.deg() > 0 {
            polys.extend(factor::factor(b, p)?.factors.into_iter().map(|(f, _)| f));
        }
    }
    polys.sort_by(|x, y| (x.deg(), x).cmp(&(y.deg(), y)));
    polys.dedup();
    let mut out: Vec<Place> = polys
        .into_iter()
        .map(|p| Place::finite_unchecked(field, &rat, chart.clone(), p))
        .collect();
    if n.deg() != d.deg() {
        out.push(Place {
            field: field.clone(),
            chart,
            kind: PlaceKind::Infinity,
            residue: b.clone(),
        });
    }
    Ok(out)
}

/// A place above another one in a finite extension, with ramification index and the
/// induced residue field embedding.
#[derive(Clone, Debug)]
pub struct PlaceAbove {
    pub place: Place,
    pub e: u32,
    pub residue_embedding: Embedding,
}

/// Places of `big` above `v`, for `big` either a radical extension `E[x]/(x^m - t)` of
/// `E = B(t)` or a constant field extension `L(t)` of `B(t)`.
pub fn places_above(v: &Place, big: &Field) -> Result<Vec<PlaceAbove>> {
    let small = v.field();
    if let Some(m) = RationalModel::of(big) {
        if big.base() != Some(small) {
            return Err(Error::FieldMismatch(small.descriptor(), big.descriptor()));
        }
        let model = m.model().clone();
        let b = model.base().unwrap().clone();
        let deg = m.degree();
        let chart = Some(Arc::new(m));
        return match v.kind() {
            PlaceKind::Infinity => {
                let w = Place {
                    field: big.clone(),
                    chart,
                    kind: PlaceKind::Infinity,
                    residue: b.clone(),
                };
                Ok(vec![PlaceAbove {
                    place: w,
                    e: deg as u32,
                    residue_embedding: Embedding::identity(&b),
                }])
            }
            PlaceKind::Finite(pi) => {
                let mut inflated = vec![b.zero(); pi.degree().unwrap() * deg + 1];
                for (i, c) in pi.coeffs().iter().enumerate() {
                    inflated[i * deg] = c.clone();
                }
                let pu = Poly::new(inflated);
                let mut out = Vec::new();
                for (g, e) in factor::factor(&b, &pu)?.factors {
                    let w = Place::finite_unchecked(big, &model, chart.clone(), g);
                    // t -> u^m
                    let emb = residue_embedding(v, &w, |kw| {
                        let u = w_gen(&w, kw);
                        kw.pow(&u, deg as i64).unwrap()
                    })?;
                    out.push(PlaceAbove {
                        place: w,
                        e,
                        residue_embedding: emb,
                    });
                }
                Ok(out)
            }
            PlaceKind::Padic(_) => Err(Error::Unsupported("p-adic places above".into())),
        };
    }
    let (FieldKind::RatFunc { base: l }, FieldKind::RatFunc { base: b }) = (big.kind(), small.kind())
    else {
        return Err(Error::Unsupported(format!("places of {big} above {small}")));
    };
    match v.kind() {
        PlaceKind::Infinity => Ok(vec![PlaceAbove {
            place: Place::infinity(big)?,
            e: 1,
            residue_embedding: Embedding::natural(b, l)?,
        }]),
        PlaceKind::Finite(pi) => {
            let pl = pi.try_map(|c| super::embed::embed_natural(b, l, c))?;
            let mut out = Vec::new();
            for (g, e) in factor::factor(l, &pl)?.factors {
                let w = Place::finite_unchecked(big, big, None, g);
                let emb = residue_embedding(v, &w, |kw| w_gen(&w, kw))?;
                out.push(PlaceAbove {
                    place: w,
                    e,
                    residue_embedding: emb,
                });
            }
            Ok(out)
        }
        PlaceKind::Padic(_) => Err(Error::Unsupported("p-adic places above".into())),
    }
}

/// Image of the variable in the residue field of w.
fn w_gen(w: &Place, kw: &Field) -> Elem {
    match w.kind() {
        PlaceKind::Finite(p) if p.deg() == 1 => kw.neg(&p.coeffs()[0]),
        _ => kw.gen(),
    }
}

fn residue_embedding(v: &Place, w: &Place, image: impl Fn(&Field) -> Elem) -> Result<Embedding> {
    let kv = v.residue_field();
    let kw = w.residue_field();
    let vb = v.rat_field_of().base().unwrap().clone();
    let base = Embedding::natural(&vb, kw)?;
    if v.degree() == 1 {
        Ok(base)
    } else {
        Embedding::generator(kv, kw, base, image(kw))
    }
}

/// Sign of a nonzero rational, used by the real place.
pub fn real_sign(x: &BigRational) -> i32 {
    if x.is_negative() {
        -1
    } else if x.is_one() || x.is_positive() {
        1
    } else {
        0
    }
}
