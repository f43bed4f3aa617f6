//! Concrete fields of odd or zero characteristic with canonical element representatives.
//!
//! A [`Field`] is one of: a prime field, the rationals, a simple algebraic extension
//! `B[x]/(m)` of another field, or a rational function field `B(t)`. Elements are
//! plain [`Elem`] values whose structural equality is field equality.

pub mod conway;
pub mod embed;
pub mod factor;
pub mod linalg;
pub mod model;
pub mod parse;
pub mod place;
pub mod poly;
pub mod tensor;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::numtheory;
pub use poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Fp(u64),
    Q(BigRational),
    Ext(Poly),
    /// Numerator and monic denominator, coprime.
    Frac(Poly, Poly),
}

impl Elem {
    pub fn is_zero(&self) -> bool {
        match self {
            Elem::Fp(x) => *x == 0,
            Elem::Q(x) => x.is_zero(),
            Elem::Ext(p) => p.is_zero(),
            Elem::Frac(n, _) => n.is_zero(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum FieldKind {
    Prime(u64),
    Rationals,
    Ext { base: Field, modulus: Poly },
    RatFunc { base: Field },
}

struct FieldInner {
    kind: FieldKind,
    var: String,
    name: Option<String>,
    nonsquare: OnceLock<Option<Elem>>,
}

#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (&self.0.kind, &other.0.kind) {
            (FieldKind::Prime(p), FieldKind::Prime(q)) => p == q,
            (FieldKind::Rationals, FieldKind::Rationals) => true,
            (
                FieldKind::Ext { base: b1, modulus: m1 },
                FieldKind::Ext { base: b2, modulus: m2 },
            ) => m1 == m2 && b1 == b2,
            (FieldKind::RatFunc { base: b1 }, FieldKind::RatFunc { base: b2 }) => b1 == b2,
            _ => false,
        }
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0.kind {
            FieldKind::Prime(p) => {
                0u8.hash(state);
                p.hash(state);
            }
            FieldKind::Rationals => 1u8.hash(state),
            FieldKind::Ext { base, modulus } => {
                2u8.hash(state);
                base.hash(state);
                modulus.hash(state);
            }
            FieldKind::RatFunc { base } => {
                3u8.hash(state);
                base.hash(state);
            }
        }
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.descriptor())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.descriptor())
    }
}

impl Field {
    fn build(kind: FieldKind, var: &str, name: Option<String>) -> Field {
        Field(Arc::new(FieldInner {
            kind,
            var: var.to_string(),
            name,
            nonsquare: OnceLock::new(),
        }))
    }

    pub fn prime(p: u64) -> Result<Field> {
        if p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if !numtheory::is_prime_u64(p) {
            return Err(Error::NotPrimePower(p));
        }
        Ok(Field::build(FieldKind::Prime(p), "", None))
    }

    /// The finite field with `q` elements, presented over its prime field by a Conway polynomial.
    pub fn gf(q: u64) -> Result<Field> {
        let (p, k) = numtheory::prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        let fp = Field::prime(p)?;
        if k == 1 {
            return Ok(fp);
        }
        let modulus = conway::conway_polynomial(p, k)?;
        Ok(Field::build(
            FieldKind::Ext { base: fp, modulus },
            "a",
            Some(format!("GF({q})")),
        ))
    }

    pub fn rationals() -> Field {
        Field::build(FieldKind::Rationals, "", None)
    }

    pub fn rational_functions(base: &Field, var: &str) -> Field {
        Field::build(FieldKind::RatFunc { base: base.clone() }, var, None)
    }

    /// `base[var]/(modulus)`, checking that the modulus is monic and irreducible.
    pub fn extension(base: &Field, modulus: Poly, var: &str) -> Result<Field> {
        if modulus.deg() < 1 || !modulus.is_monic(base) {
            return Err(Error::Invalid("minimal polynomial must be monic of positive degree".into()));
        }
        if !factor::is_irreducible(base, &modulus)? {
            return Err(Error::Reducible(poly::format(base, &modulus, var)));
        }
        Ok(Field::extension_unchecked(base, modulus, var))
    }

    pub fn extension_unchecked(base: &Field, modulus: Poly, var: &str) -> Field {
        Field::build(
            FieldKind::Ext {
                base: base.clone(),
                modulus,
            },
            var,
            None,
        )
    }

    /// Same field with a different variable name.
    pub fn renamed(&self, var: &str) -> Field {
        Field::build(self.0.kind.clone(), var, self.0.name.clone())
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0.kind
    }

    pub fn var(&self) -> &str {
        &self.0.var
    }

    pub fn base(&self) -> Option<&Field> {
        match &self.0.kind {
            FieldKind::Ext { base, .. } | FieldKind::RatFunc { base } => Some(base),
            _ => None,
        }
    }

    pub fn modulus(&self) -> Option<&Poly> {
        match &self.0.kind {
            FieldKind::Ext { modulus, .. } => Some(modulus),
            _ => None,
        }
    }

    /// Degree over the immediate base for an extension, 1 otherwise.
    pub fn ext_degree(&self) -> usize {
        self.modulus().map_or(1, |m| m.degree().unwrap())
    }

    pub fn is_ext(&self) -> bool {
        matches!(self.0.kind, FieldKind::Ext { .. })
    }

    pub fn is_ratfunc(&self) -> bool {
        matches!(self.0.kind, FieldKind::RatFunc { .. })
    }

    pub fn characteristic(&self) -> u64 {
        match &self.0.kind {
            FieldKind::Prime(p) => *p,
            FieldKind::Rationals => 0,
            FieldKind::Ext { base, .. } | FieldKind::RatFunc { base } => base.characteristic(),
        }
    }

    pub fn is_finite(&self) -> bool {
        match &self.0.kind {
            FieldKind::Prime(_) => true,
            FieldKind::Ext { base, .. } => base.is_finite(),
            _ => false,
        }
    }

    /// Number of elements of a finite field.
    pub fn order(&self) -> Option<u64> {
        match &self.0.kind {
            FieldKind::Prime(p) => Some(*p),
            FieldKind::Ext { base, modulus } => {
                let q = base.order()?;
                q.checked_pow(modulus.degree().unwrap() as u32)
            }
            _ => None,
        }
    }

    /// The first field below the extension tower: a prime field, the rationals or a
    /// rational function field.
    pub fn ground(&self) -> &Field {
        match &self.0.kind {
            FieldKind::Ext { base, .. } => base.ground(),
            _ => self,
        }
    }

    pub fn dim_over_ground(&self) -> usize {
        match &self.0.kind {
            FieldKind::Ext { base, modulus } => base.dim_over_ground() * modulus.degree().unwrap(),
            _ => 1,
        }
    }

    /// True when the field is a simple extension tower over the rationals.
    pub fn is_number_field(&self) -> bool {
        self.characteristic() == 0 && matches!(self.ground().kind(), FieldKind::Rationals)
    }

    pub fn descriptor(&self) -> String {
        match &self.0.kind {
            FieldKind::Prime(p) => format!("GF({p})"),
            FieldKind::Rationals => "Q".into(),
            FieldKind::Ext { base, modulus } => match &self.0.name {
                Some(n) => n.clone(),
                None => format!(
                    "{}[{}]/({})",
                    base.descriptor(),
                    self.var(),
                    poly::format(base, modulus, self.var())
                ),
            },
            FieldKind::RatFunc { base } => format!("{}({})", base.descriptor(), self.var()),
        }
    }

    // ---- constants ----

    pub fn zero(&self) -> Elem {
        match &self.0.kind {
            FieldKind::Prime(_) => Elem::Fp(0),
            FieldKind::Rationals => Elem::Q(BigRational::zero()),
            FieldKind::Ext { .. } => Elem::Ext(Poly::zero()),
            FieldKind::RatFunc { base } => Elem::Frac(Poly::zero(), Poly::one(base)),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        match a {
            Elem::Fp(x) => *x == 1,
            Elem::Q(x) => x.is_one(),
            Elem::Ext(p) => p.coeffs().len() == 1 && self.base().unwrap().is_one(&p.coeffs()[0]),
            Elem::Frac(n, d) => {
                let b = self.base().unwrap();
                n.is_one(b) && d.is_one(b)
            }
        }
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        match &self.0.kind {
            FieldKind::Prime(p) => Elem::Fp(n.rem_euclid(*p as i64) as u64),
            FieldKind::Rationals => Elem::Q(BigRational::from_integer(BigInt::from(n))),
            FieldKind::Ext { base, .. } => Elem::Ext(Poly::constant(base.from_i64(n))),
            FieldKind::RatFunc { base } => {
                Elem::Frac(Poly::constant(base.from_i64(n)), Poly::one(base))
            }
        }
    }

    pub fn from_rational(&self, r: &BigRational) -> Result<Elem> {
        match &self.0.kind {
            FieldKind::Prime(p) => {
                let pb = BigInt::from(*p);
                let n = (r.numer() % &pb + &pb) % &pb;
                let d = (r.denom() % &pb + &pb) % &pb;
                let (n, d) = (n.to_u64().unwrap(), d.to_u64().unwrap());
                if d == 0 {
                    return Err(Error::DivisionByZero);
                }
                Ok(Elem::Fp(numtheory::mul_mod(n, numtheory::inv_mod(d, *p), *p)))
            }
            FieldKind::Rationals => Ok(Elem::Q(r.clone())),
            FieldKind::Ext { base, .. } | FieldKind::RatFunc { base } => {
                Ok(self.constant(base.from_rational(r)?))
            }
        }
    }

    /// Embeds an element of the immediate base field.
    pub fn constant(&self, c: Elem) -> Elem {
        match &self.0.kind {
            FieldKind::Ext { .. } => Elem::Ext(Poly::constant(c)),
            FieldKind::RatFunc { base } => Elem::Frac(Poly::constant(c), Poly::one(base)),
            _ => c,
        }
    }

    /// The adjoined generator of an extension or the variable of a rational function field.
    pub fn gen(&self) -> Elem {
        match &self.0.kind {
            FieldKind::Ext { base, modulus } => {
                if modulus.degree() == Some(1) {
                    Elem::Ext(Poly::constant(base.neg(&modulus.coeffs()[0])))
                } else {
                    Elem::Ext(Poly::x(base))
                }
            }
            FieldKind::RatFunc { base } => Elem::Frac(Poly::x(base), Poly::one(base)),
            _ => self.one(),
        }
    }

    /// Element of `B(t)` given by a polynomial over `B`.
    pub fn from_poly(&self, p: Poly) -> Elem {
        match &self.0.kind {
            FieldKind::RatFunc { base } => Elem::Frac(p, Poly::one(base)),
            FieldKind::Ext { base, modulus } => {
                Elem::Ext(poly::rem(base, &p, modulus).expect("nonzero modulus"))
            }
            _ => panic!("from_poly on a field without a variable"),
        }
    }

    /// Reduced fraction n/d in `B(t)`.
    pub fn frac(&self, n: Poly, d: Poly) -> Result<Elem> {
        let base = match &self.0.kind {
            FieldKind::RatFunc { base } => base,
            _ => return Err(Error::Invalid("frac on a non rational function field".into())),
        };
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if n.is_zero() {
            return Ok(self.zero());
        }
        let (n, d) = if d.degree() == Some(0) {
            (n, d)
        } else {
            let g = poly::gcd(base, &n, &d);
            if g.degree() == Some(0) {
                (n, d)
            } else {
                (
                    poly::div_exact(base, &n, &g)?,
                    poly::div_exact(base, &d, &g)?,
                )
            }
        };
        let lc = d.lead().unwrap().clone();
        if base.is_one(&lc) {
            return Ok(Elem::Frac(n, d));
        }
        let inv = base.inv(&lc)?;
        Ok(Elem::Frac(poly::scale(base, &n, &inv), poly::scale(base, &d, &inv)))
    }

    // ---- arithmetic ----

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.0.kind, a, b) {
            (FieldKind::Prime(p), Elem::Fp(x), Elem::Fp(y)) => Elem::Fp((x + y) % p),
            (FieldKind::Rationals, Elem::Q(x), Elem::Q(y)) => Elem::Q(x + y),
            (FieldKind::Ext { base, .. }, Elem::Ext(x), Elem::Ext(y)) => {
                Elem::Ext(poly::add(base, x, y))
            }
            (FieldKind::RatFunc { base }, Elem::Frac(n1, d1), Elem::Frac(n2, d2)) => {
                if d1 == d2 {
                    if d1.degree() == Some(0) {
                        return Elem::Frac(poly::add(base, n1, n2), d1.clone());
                    }
                    return self.frac(poly::add(base, n1, n2), d1.clone()).unwrap();
                }
                let n = poly::add(base, &poly::mul(base, n1, d2), &poly::mul(base, n2, d1));
                self.frac(n, poly::mul(base, d1, d2)).unwrap()
            }
            _ => panic!("element does not belong to {}", self.descriptor()),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (&self.0.kind, a) {
            (FieldKind::Prime(p), Elem::Fp(x)) => Elem::Fp((p - x) % p),
            (FieldKind::Rationals, Elem::Q(x)) => Elem::Q(-x),
            (FieldKind::Ext { base, .. }, Elem::Ext(x)) => Elem::Ext(poly::neg(base, x)),
            (FieldKind::RatFunc { base }, Elem::Frac(n, d)) => {
                Elem::Frac(poly::neg(base, n), d.clone())
            }
            _ => panic!("element does not belong to {}", self.descriptor()),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.0.kind, a, b) {
            (FieldKind::Prime(p), Elem::Fp(x), Elem::Fp(y)) => {
                Elem::Fp(numtheory::mul_mod(*x, *y, *p))
            }
            (FieldKind::Rationals, Elem::Q(x), Elem::Q(y)) => Elem::Q(x * y),
            (FieldKind::Ext { base, modulus }, Elem::Ext(x), Elem::Ext(y)) => {
                Elem::Ext(poly::mul_mod(base, x, y, modulus))
            }
            (FieldKind::RatFunc { base }, Elem::Frac(n1, d1), Elem::Frac(n2, d2)) => {
                if n1.is_zero() || n2.is_zero() {
                    return self.zero();
                }
                if d1.degree() == Some(0) && d2.degree() == Some(0) {
                    return Elem::Frac(poly::mul(base, n1, n2), Poly::one(base));
                }
                self.frac(poly::mul(base, n1, n2), poly::mul(base, d1, d2))
                    .unwrap()
            }
            _ => panic!("element does not belong to {}", self.descriptor()),
        }
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match (&self.0.kind, a) {
            (FieldKind::Prime(p), Elem::Fp(x)) => Elem::Fp(numtheory::inv_mod(*x, *p)),
            (FieldKind::Rationals, Elem::Q(x)) => Elem::Q(x.recip()),
            (FieldKind::Ext { base, modulus }, Elem::Ext(x)) => {
                let (g, s, _) = poly::xgcd(base, x, modulus);
                if g.degree() != Some(0) {
                    return Err(Error::DivisionByZero);
                }
                Elem::Ext(poly::rem(base, &s, modulus)?)
            }
            (FieldKind::RatFunc { .. }, Elem::Frac(n, d)) => self.frac(d.clone(), n.clone())?,
            _ => panic!("element does not belong to {}", self.descriptor()),
        })
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Elem, e: i64) -> Result<Elem> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        Ok(self.pow_big(&base, &BigUint::from(e.unsigned_abs())))
    }

    pub fn pow_big(&self, a: &Elem, e: &BigUint) -> Elem {
        let mut r = self.one();
        for i in (0..e.bits()).rev() {
            r = self.mul(&r, &r);
            if e.bit(i) {
                r = self.mul(&r, a);
            }
        }
        r
    }

    pub fn sum<'a>(&self, it: impl IntoIterator<Item = &'a Elem>) -> Elem {
        it.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    pub fn product<'a>(&self, it: impl IntoIterator<Item = &'a Elem>) -> Elem {
        it.into_iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    /// Checks that `a` is a structurally valid element of this field.
    pub fn contains(&self, a: &Elem) -> bool {
        match (&self.0.kind, a) {
            (FieldKind::Prime(p), Elem::Fp(x)) => x < p,
            (FieldKind::Rationals, Elem::Q(_)) => true,
            (FieldKind::Ext { base, modulus }, Elem::Ext(x)) => {
                x.deg() < modulus.deg() && x.coeffs().iter().all(|c| base.contains(c))
            }
            (FieldKind::RatFunc { base }, Elem::Frac(n, d)) => {
                d.is_monic(base)
                    && n.coeffs().iter().chain(d.coeffs()).all(|c| base.contains(c))
            }
            _ => false,
        }
    }

    // ---- finite fields ----

    /// Square test in a finite field.
    pub fn is_square_finite(&self, a: &Elem) -> Result<bool> {
        let q = self
            .order()
            .ok_or_else(|| Error::Unsupported(format!("square test over {}", self)))?;
        if a.is_zero() {
            return Ok(true);
        }
        Ok(self.is_one(&self.pow_big(a, &BigUint::from((q - 1) / 2))))
    }

    /// The i-th element of a finite field in the coordinate enumeration order.
    pub fn element_at(&self, mut i: u64) -> Elem {
        match &self.0.kind {
            FieldKind::Prime(_) => Elem::Fp(i),
            FieldKind::Ext { base, modulus } => {
                let qb = base.order().expect("finite field");
                let mut c = Vec::new();
                for _ in 0..modulus.degree().unwrap() {
                    c.push(base.element_at(i % qb));
                    i /= qb;
                }
                Elem::Ext(Poly::new(c))
            }
            _ => panic!("element_at on an infinite field"),
        }
    }

    pub fn index_of(&self, a: &Elem) -> u64 {
        match (&self.0.kind, a) {
            (FieldKind::Prime(_), Elem::Fp(x)) => *x,
            (FieldKind::Ext { base, .. }, Elem::Ext(p)) => {
                let qb = base.order().expect("finite field");
                p.coeffs()
                    .iter()
                    .rev()
                    .fold(0, |acc, c| acc * qb + base.index_of(c))
            }
            _ => panic!("index_of on an infinite field"),
        }
    }

    /// All elements of a finite field in enumeration order.
    pub fn elements(&self) -> Result<Vec<Elem>> {
        let q = self
            .order()
            .ok_or_else(|| Error::Unsupported(format!("enumeration of {}", self)))?;
        Ok((0..q).map(|i| self.element_at(i)).collect())
    }

    pub fn random_finite<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        let q = self.order().expect("finite field");
        self.element_at(rng.gen_range(0..q))
    }

    /// First non-square in enumeration order, for finite fields.
    pub fn canonical_nonsquare(&self) -> Option<Elem> {
        self.0
            .nonsquare
            .get_or_init(|| {
                let q = self.order()?;
                (1..q)
                    .map(|i| self.element_at(i))
                    .find(|a| !self.is_square_finite(a).unwrap())
            })
            .clone()
    }

    // ---- coordinates over the ground field ----

    pub fn coords(&self, a: &Elem) -> Vec<Elem> {
        match (&self.0.kind, a) {
            (FieldKind::Ext { base, modulus }, Elem::Ext(p)) => {
                let mut out = Vec::with_capacity(self.dim_over_ground());
                for i in 0..modulus.degree().unwrap() {
                    out.extend(base.coords(&p.coeff(base, i)));
                }
                out
            }
            _ => vec![a.clone()],
        }
    }

    pub fn from_coords(&self, c: &[Elem]) -> Elem {
        match &self.0.kind {
            FieldKind::Ext { base, modulus } => {
                let d = base.dim_over_ground();
                let coeffs = (0..modulus.degree().unwrap())
                    .map(|i| base.from_coords(&c[i * d..(i + 1) * d]))
                    .collect();
                Elem::Ext(Poly::new(coeffs))
            }
            _ => c[0].clone(),
        }
    }

    // ---- formatting ----

    pub fn format(&self, a: &Elem) -> String {
        match (&self.0.kind, a) {
            (FieldKind::Prime(_), Elem::Fp(x)) => x.to_string(),
            (FieldKind::Rationals, Elem::Q(x)) => {
                if x.is_integer() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
            (FieldKind::Ext { base, .. }, Elem::Ext(p)) => poly::format(base, p, self.var()),
            (FieldKind::RatFunc { base }, Elem::Frac(n, d)) => {
                let ns = poly::format(base, n, self.var());
                if d.is_one(base) {
                    ns
                } else {
                    let n_atomic = n.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1
                        && n.coeffs().iter().all(|c| base.is_atomic(c));
                    let ns = if n_atomic { ns } else { format!("({ns})") };
                    format!("{ns}/({})", poly::format(base, d, self.var()))
                }
            }
            _ => format!("<{a:?} not in {}>", self.descriptor()),
        }
    }

    /// Whether the printed form of `a` can be used as a factor without parentheses.
    pub fn is_atomic(&self, a: &Elem) -> bool {
        match a {
            Elem::Fp(_) => true,
            Elem::Q(x) => !x.is_negative() || x.is_integer(),
            Elem::Ext(p) => {
                let b = self.base().unwrap();
                let nz: Vec<&Elem> = p.coeffs().iter().filter(|c| !c.is_zero()).collect();
                nz.len() <= 1 && nz.iter().all(|c| b.is_atomic(c))
            }
            Elem::Frac(n, d) => {
                let b = self.base().unwrap();
                d.is_one(b)
                    && n.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1
                    && n.coeffs().iter().all(|c| b.is_atomic(c))
            }
        }
    }
}
