//! Milnor-Witt K-theory of concrete fields.
//!
//! An [`MWElement`] of degree `n` is an integer combination of symbols `η^m[u_1,...,u_k]`
//! with `k - m = n`. Equality is decided through the Milnor and Witt images, see
//! [`invariants`].

pub mod gaussian;
pub mod invariants;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{parse_err, Error, Result};
use crate::field::embed::Embedding;
use crate::field::parse::{parse_elem_at, Cursor};
use crate::field::{Elem, Field};
pub use invariants::Projection;

/// A formal line, with the generator used to trivialize it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Twist(Vec<(String, String)>);

impl Twist {
    pub fn trivial() -> Twist {
        Twist(Vec::new())
    }

    pub fn line(label: impl Into<String>, generator: impl Into<String>) -> Twist {
        Twist(vec![(label.into(), generator.into())])
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }

    /// Tensor product; trivialized by the product of the generators.
    pub fn tensor(&self, other: &Twist) -> Twist {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        v.sort();
        Twist(v)
    }

    pub fn parts(&self) -> &[(String, String)] {
        &self.0
    }
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (l, g) in &self.0 {
            write!(f, "@{l}({g})")?;
        }
        Ok(())
    }
}

/// `η^eta [entries]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub eta: u32,
    pub entries: Vec<Elem>,
}

impl Symbol {
    pub fn degree(&self) -> i64 {
        self.entries.len() as i64 - self.eta as i64
    }
}

#[derive(Clone, Debug)]
pub struct MWElement {
    field: Field,
    degree: i64,
    twist: Twist,
    terms: BTreeMap<Symbol, i64>,
}

impl PartialEq for MWElement {
    /// Structural equality of representatives. Use [`MWElement::eq_in`] for equality in
    /// K-theory.
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.degree == other.degree
            && self.twist == other.twist
            && self.terms == other.terms
    }
}

impl Eq for MWElement {}

impl std::hash::Hash for MWElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.hash(state);
        self.degree.hash(state);
        self.twist.hash(state);
        self.terms.hash(state);
    }
}

impl MWElement {
    pub fn zero(k: &Field, degree: i64) -> MWElement {
        MWElement {
            field: k.clone(),
            degree,
            twist: Twist::trivial(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_int(k: &Field, n: i64) -> MWElement {
        let mut x = MWElement::zero(k, 0);
        x.insert(
            Symbol {
                eta: 0,
                entries: Vec::new(),
            },
            n,
        );
        x
    }

    pub fn one(k: &Field) -> MWElement {
        MWElement::from_int(k, 1)
    }

    /// `coeff * η^eta [entries]`.
    pub fn symbol(k: &Field, coeff: i64, eta: u32, entries: Vec<Elem>) -> Result<MWElement> {
        if let Some(z) = entries.iter().find(|u| u.is_zero() || !k.contains(u)) {
            return Err(Error::Invalid(format!("symbol entry {z:?} is not a unit of {k}")));
        }
        let sym = Symbol { eta, entries };
        let mut x = MWElement::zero(k, sym.degree());
        x.insert(sym, coeff);
        Ok(x)
    }

    pub(crate) fn symbol_unchecked(k: &Field, coeff: i64, eta: u32, entries: Vec<Elem>) -> MWElement {
        let sym = Symbol { eta, entries };
        let mut x = MWElement::zero(k, sym.degree());
        x.insert(sym, coeff);
        x
    }

    /// `[u]`.
    pub fn bracket(k: &Field, u: &Elem) -> Result<MWElement> {
        MWElement::symbol(k, 1, 0, vec![u.clone()])
    }

    /// `[u_1, ..., u_n]`.
    pub fn brackets(k: &Field, us: &[Elem]) -> Result<MWElement> {
        MWElement::symbol(k, 1, 0, us.to_vec())
    }

    pub fn eta(k: &Field) -> MWElement {
        MWElement::symbol_unchecked(k, 1, 1, Vec::new())
    }

    /// `⟨a⟩ = 1 + η[a]`.
    pub fn angle(k: &Field, a: &Elem) -> Result<MWElement> {
        let mut x = MWElement::symbol(k, 1, 1, vec![a.clone()])?;
        x.insert(
            Symbol {
                eta: 0,
                entries: Vec::new(),
            },
            1,
        );
        Ok(x)
    }

    /// `h = 1 + ⟨-1⟩`.
    pub fn hyperbolic(k: &Field) -> MWElement {
        let m1 = k.neg(&k.one());
        MWElement::one(k).add_unchecked(&MWElement::angle(k, &m1).unwrap())
    }

    /// `ε = -⟨-1⟩`.
    pub fn epsilon(k: &Field) -> MWElement {
        MWElement::angle(k, &k.neg(&k.one())).unwrap().neg()
    }

    /// `n_ε`: `Σ_{i=1}^n ⟨-1⟩^{i-1}` for `n >= 0` and `ε (-n)_ε` for `n < 0`.
    pub fn n_eps(k: &Field, n: i64) -> MWElement {
        if n < 0 {
            return MWElement::epsilon(k).mul_unchecked(&MWElement::n_eps(k, -n));
        }
        let mut x = MWElement::from_int(k, n);
        x.insert(
            Symbol {
                eta: 1,
                entries: vec![k.neg(&k.one())],
            },
            n / 2,
        );
        x
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn twist(&self) -> &Twist {
        &self.twist
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Symbol, i64)> {
        self.terms.iter().map(|(s, c)| (s, *c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn with_twist(mut self, t: Twist) -> MWElement {
        self.twist = t;
        self
    }

    /// Drops the twist, identifying the line with the trivial one through its declared generator.
    pub fn untwisted(mut self) -> MWElement {
        self.twist = Twist::trivial();
        self
    }

    /// Adds `c * sym`, using `[1] = 0`, `η^2[-1] = -2η` (from `ηh = 0`) and the commutativity
    /// of brackets in the presence of `η` (`ηε = η`).
    fn insert(&mut self, mut sym: Symbol, mut c: i64) {
        if c == 0 || sym.entries.iter().any(|u| self.field.is_one(u)) {
            return;
        }
        if sym.eta >= 1 {
            let m1 = self.field.neg(&self.field.one());
            while sym.eta >= 2 {
                let Some(i) = sym.entries.iter().position(|u| *u == m1) else {
                    break;
                };
                sym.entries.remove(i);
                sym.eta -= 1;
                c *= -2;
            }
            sym.entries.sort();
        }
        match self.terms.entry(sym) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    fn compatible(&self, other: &MWElement) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.descriptor(),
                other.field.descriptor(),
            ));
        }
        if self.twist != other.twist {
            return Err(Error::TwistMismatch(
                self.twist.to_string(),
                other.twist.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &MWElement) -> Result<MWElement> {
        self.compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        Ok(self.add_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &MWElement) -> MWElement {
        let mut x = self.clone();
        x.add_assign(other);
        x
    }

    pub(crate) fn add_assign(&mut self, other: &MWElement) {
        self.add_scaled(other, 1);
    }

    pub(crate) fn add_scaled(&mut self, other: &MWElement, c: i64) {
        for (s, v) in &other.terms {
            self.insert(s.clone(), c * v);
        }
    }

    pub fn sub(&self, other: &MWElement) -> Result<MWElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MWElement {
        self.scale(-1)
    }

    pub fn scale(&self, c: i64) -> MWElement {
        let mut x = MWElement::zero(&self.field, self.degree).with_twist(self.twist.clone());
        if c != 0 {
            for (s, v) in &self.terms {
                x.terms.insert(s.clone(), v * c);
            }
        }
        x
    }

    /// Graded product; twists tensor.
    pub fn mul(&self, other: &MWElement) -> Result<MWElement> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.descriptor(),
                other.field.descriptor(),
            ));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &MWElement) -> MWElement {
        let mut x = MWElement::zero(&self.field, self.degree + other.degree)
            .with_twist(self.twist.tensor(&other.twist));
        for (s, a) in &self.terms {
            for (t, b) in &other.terms {
                let mut entries = s.entries.clone();
                entries.extend(t.entries.iter().cloned());
                x.insert(
                    Symbol {
                        eta: s.eta + t.eta,
                        entries,
                    },
                    a * b,
                );
            }
        }
        x
    }

    pub fn eta_mul(&self) -> MWElement {
        self.mul_unchecked(&MWElement::eta(&self.field))
    }

    /// `ε^{deg} x`, the sign picked up when a degree-one element moves past `x`.
    pub fn conj(&self) -> MWElement {
        if self.degree.rem_euclid(2) == 0 {
            self.clone()
        } else {
            MWElement::epsilon(&self.field).mul_unchecked(self)
        }
    }

    /// Image under a field embedding (restriction of scalars' left adjoint: entrywise).
    pub fn map_field(&self, emb: &Embedding) -> Result<MWElement> {
        if emb.src() != &self.field {
            return Err(Error::FieldMismatch(
                emb.src().descriptor(),
                self.field.descriptor(),
            ));
        }
        let k = emb.dst().clone();
        let mut x = MWElement::zero(&k, self.degree).with_twist(self.twist.clone());
        for (s, c) in &self.terms {
            let entries = s.entries.iter().map(|u| emb.apply(u)).collect::<Result<Vec<_>>>()?;
            x.insert(
                Symbol {
                    eta: s.eta,
                    entries,
                },
                *c,
            );
        }
        Ok(x)
    }

    /// Replaces every entry by `f(entry)` in the field `k`.
    pub fn map_entries(&self, k: &Field, f: impl Fn(&Elem) -> Result<Elem>) -> Result<MWElement> {
        let mut x = MWElement::zero(k, self.degree).with_twist(self.twist.clone());
        for (s, c) in &self.terms {
            let entries = s.entries.iter().map(&f).collect::<Result<Vec<_>>>()?;
            x.insert(
                Symbol {
                    eta: s.eta,
                    entries,
                },
                *c,
            );
        }
        Ok(x)
    }

    /// Image in Milnor K-theory (η-free terms) or the full element.
    pub fn project(&self, p: Projection) -> MWElement {
        match p {
            Projection::Milnor => {
                let mut x = self.clone();
                x.terms.retain(|s, _| s.eta == 0);
                x
            }
            _ => self.clone(),
        }
    }

    /// A canonical representative where one is available (finite fields; degree `<= 0`
    /// over the rationals), the element itself otherwise.
    pub fn normalize(&self) -> MWElement {
        invariants::normalize(self).unwrap_or_else(|_| self.clone())
    }

    pub fn is_zero(&self) -> Result<bool> {
        invariants::is_zero(self, Projection::Full)
    }

    pub fn is_zero_in(&self, p: Projection) -> Result<bool> {
        invariants::is_zero(self, p)
    }

    /// Equality in `K^MW_n(F)`.
    pub fn eq_in(&self, other: &MWElement) -> Result<bool> {
        self.eq_proj(other, Projection::Full)
    }

    pub fn eq_proj(&self, other: &MWElement, p: Projection) -> Result<bool> {
        self.sub(other)?.is_zero_in(p)
    }

    pub fn parse(k: &Field, s: &str) -> Result<MWElement> {
        parse_mw(k, s)
    }
}

impl fmt::Display for MWElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            let (sign, a) = if *c < 0 { ("-", -c) } else { ("+", *c) };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if a != 1 || (s.eta == 0 && s.entries.is_empty()) {
                parts.push(a.to_string());
            }
            match s.eta {
                0 => {}
                1 => parts.push("eta".into()),
                m => parts.push(format!("eta^{m}")),
            }
            if !s.entries.is_empty() {
                let e: Vec<String> = s.entries.iter().map(|u| self.field.format(u)).collect();
                parts.push(format!("[{}]", e.join(", ")));
            }
            write!(f, "{}", parts.join("*"))?;
        }
        write!(f, "{}", self.twist)
    }
}

/// Parses `eta^m*[u1,...,ur]` terms with integer coefficients, joined by `+`/`-`, followed by
/// optional `@L(generator)` twist suffixes.
pub fn parse_mw(k: &Field, s: &str) -> Result<MWElement> {
    let mut c = Cursor::new(s);
    let mut out: Option<MWElement> = None;
    let mut first = true;
    loop {
        if c.at_end() || c.peek() == Some(b'@') {
            break;
        }
        let sign = if c.eat(b'-') {
            -1
        } else if c.eat(b'+') || first {
            1
        } else {
            return Err(c.err("expected '+' or '-'"));
        };
        first = false;
        let at = c.pos;
        let term = parse_term(k, &mut c)?.scale(sign);
        out = Some(match out {
            None => term,
            Some(x) => {
                if x.degree != term.degree && !term.terms.is_empty() && !x.terms.is_empty() {
                    return Err(parse_err(at, "terms of different degrees"));
                }
                let d = if x.terms.is_empty() { term.degree } else { x.degree };
                let mut y = x;
                y.degree = d;
                y.add_assign(&term);
                y
            }
        });
    }
    let mut x = out.ok_or_else(|| c.err("empty element"))?;
    while c.eat(b'@') {
        let label = c.ident().ok_or_else(|| c.err("expected a line label"))?;
        c.expect(b'(')?;
        let g = c.balanced(b'(', b')')?;
        x.twist = x.twist.tensor(&Twist::line(label, g.trim()));
    }
    if !c.at_end() {
        return Err(c.err("unexpected input"));
    }
    Ok(x)
}

fn parse_term(k: &Field, c: &mut Cursor) -> Result<MWElement> {
    let mut coeff: i64 = 1;
    let mut eta = 0u32;
    let mut entries = Vec::new();
    let mut any = false;
    if let Some(n) = c.integer() {
        coeff = n
            .to_i64()
            .ok_or_else(|| c.err("coefficient too large"))?;
        any = true;
        if !c.eat(b'*') {
            return Ok(MWElement::from_int(k, coeff));
        }
    }
    if c.eat(b'<') {
        let at = c.pos;
        let a = parse_elem_at(k, c)?;
        c.expect(b'>')?;
        let angle = MWElement::angle(k, &a).map_err(|_| parse_err(at, "<0> is not a form"))?;
        let rest = if c.eat(b'*') { parse_term(k, c)? } else { MWElement::one(k) };
        return Ok(angle.mul_unchecked(&rest).scale(coeff));
    }
    if c.eat_str("eta") {
        eta = 1;
        if c.eat(b'^') {
            let n: BigInt = c.integer().ok_or_else(|| c.err("expected an exponent"))?;
            eta = n.to_u32().ok_or_else(|| c.err("exponent too large"))?;
        }
        any = true;
        if !c.eat(b'*') {
            return Ok(MWElement::symbol_unchecked(k, coeff, eta, entries));
        }
    }
    if c.eat(b'[') {
        loop {
            let at = c.pos;
            let u = parse_elem_at(k, c)?;
            if u.is_zero() {
                return Err(parse_err(at, "symbol entries must be nonzero"));
            }
            entries.push(u);
            if c.eat(b']') {
                break;
            }
            c.expect(b',')?;
        }
        return Ok(MWElement::symbol_unchecked(k, coeff, eta, entries));
    }
    if any {
        return Err(c.err("expected a symbol after '*'"));
    }
    Err(c.err("expected a term"))
}
