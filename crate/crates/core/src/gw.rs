//! Grothendieck-Witt and Witt classes of diagonal forms, their invariants, and the trace-form
//! transfer along a finite separable extension.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{parse_err, Error, Result};
use crate::field::embed::Embedding;
use crate::field::linalg::{self, Matrix};
use crate::field::parse::{parse_elem_at, Cursor};
use crate::field::tensor::SimpleExtension;
use crate::field::{poly, Elem, Field, FieldKind};
use crate::kmw::{MWElement, Projection, Twist};
use crate::numtheory;

/// A virtual form `⟨a_1, ..., a_r⟩ - ⟨b_1, ..., b_s⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GWClass {
    field: Field,
    twist: Twist,
    pos: Vec<Elem>,
    neg: Vec<Elem>,
}

impl GWClass {
    pub fn zero(k: &Field) -> GWClass {
        GWClass {
            field: k.clone(),
            twist: Twist::trivial(),
            pos: Vec::new(),
            neg: Vec::new(),
        }
    }

    pub fn one(k: &Field) -> GWClass {
        GWClass::diagonal(k, &[k.one()]).unwrap()
    }

    /// `⟨a_1, ..., a_r⟩`.
    pub fn diagonal(k: &Field, entries: &[Elem]) -> Result<GWClass> {
        if let Some(z) = entries.iter().find(|a| a.is_zero() || !k.contains(a)) {
            return Err(Error::Invalid(format!("diagonal entry {z:?} is not a unit of {k}")));
        }
        let mut x = GWClass::zero(k);
        x.pos = entries.to_vec();
        x.tidy();
        Ok(x)
    }

    pub fn angle(k: &Field, a: &Elem) -> Result<GWClass> {
        GWClass::diagonal(k, std::slice::from_ref(a))
    }

    /// `h = ⟨1, -1⟩`.
    pub fn hyperbolic(k: &Field) -> GWClass {
        GWClass::diagonal(k, &[k.one(), k.neg(&k.one())]).unwrap()
    }

    /// `n_ε = Σ_{i=1}^n ⟨-1⟩^{i-1}`.
    pub fn n_epsilon(n: i64, k: &Field) -> Result<GWClass> {
        if n < 0 {
            return Err(Error::Invalid(format!("n_eps needs n >= 0, got {n}")));
        }
        let m1 = k.neg(&k.one());
        let entries: Vec<Elem> = (0..n)
            .map(|i| if i % 2 == 0 { k.one() } else { m1.clone() })
            .collect();
        GWClass::diagonal(k, &entries)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn twist(&self) -> &Twist {
        &self.twist
    }

    pub fn with_twist(mut self, t: Twist) -> GWClass {
        self.twist = t;
        self
    }

    pub fn positive(&self) -> &[Elem] {
        &self.pos
    }

    pub fn negative(&self) -> &[Elem] {
        &self.neg
    }

    /// Cancels entries occurring on both sides and sorts.
    fn tidy(&mut self) {
        self.pos.sort();
        self.neg.sort();
        let (mut i, mut j) = (0, 0);
        let (mut p, mut n) = (Vec::new(), Vec::new());
        while i < self.pos.len() && j < self.neg.len() {
            match self.pos[i].cmp(&self.neg[j]) {
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
                std::cmp::Ordering::Less => {
                    p.push(self.pos[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    n.push(self.neg[j].clone());
                    j += 1;
                }
            }
        }
        p.extend_from_slice(&self.pos[i..]);
        n.extend_from_slice(&self.neg[j..]);
        self.pos = p;
        self.neg = n;
    }

    fn compatible(&self, other: &GWClass) -> Result<()> {
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

    pub fn add(&self, other: &GWClass) -> Result<GWClass> {
        self.compatible(other)?;
        let mut x = self.clone();
        x.pos.extend(other.pos.iter().cloned());
        x.neg.extend(other.neg.iter().cloned());
        x.tidy();
        Ok(x)
    }

    pub fn neg(&self) -> GWClass {
        GWClass {
            field: self.field.clone(),
            twist: self.twist.clone(),
            pos: self.neg.clone(),
            neg: self.pos.clone(),
        }
    }

    pub fn sub(&self, other: &GWClass) -> Result<GWClass> {
        self.add(&other.neg())
    }

    /// Product; `⟨a⟩⟨b⟩ = ⟨ab⟩`, twists tensor.
    pub fn mul(&self, other: &GWClass) -> Result<GWClass> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.descriptor(),
                other.field.descriptor(),
            ));
        }
        let k = &self.field;
        let mut x = GWClass::zero(k).with_twist(self.twist.tensor(&other.twist));
        for (a_side, b_side, same) in [
            (&self.pos, &other.pos, true),
            (&self.neg, &other.neg, true),
            (&self.pos, &other.neg, false),
            (&self.neg, &other.pos, false),
        ] {
            for a in a_side {
                for b in b_side {
                    let ab = k.mul(a, b);
                    if same {
                        x.pos.push(ab);
                    } else {
                        x.neg.push(ab);
                    }
                }
            }
        }
        x.tidy();
        Ok(x)
    }

    pub fn scale(&self, n: i64) -> GWClass {
        let base = if n < 0 { self.neg() } else { self.clone() };
        let mut x = GWClass::zero(&self.field).with_twist(self.twist.clone());
        for _ in 0..n.unsigned_abs() {
            x.pos.extend(base.pos.iter().cloned());
            x.neg.extend(base.neg.iter().cloned());
        }
        x.tidy();
        x
    }

    /// Virtual rank.
    pub fn rank(&self) -> i64 {
        self.pos.len() as i64 - self.neg.len() as i64
    }

    /// Determinant `Π a_i / Π b_j`, a representative of the discriminant class.
    pub fn determinant(&self) -> Elem {
        let k = &self.field;
        let num = k.product(&self.pos);
        let den = k.product(&self.neg);
        k.div(&num, &den).unwrap()
    }

    /// Signature over the rationals.
    pub fn signature(&self) -> Result<i64> {
        if !matches!(self.field.kind(), FieldKind::Rationals) {
            return Err(Error::Unsupported(format!("signature over {}", self.field)));
        }
        let count = |v: &[Elem]| -> i64 {
            v.iter()
                .map(|a| match a {
                    Elem::Q(x) if x.is_negative() => -1,
                    _ => 1,
                })
                .sum()
        };
        Ok(count(&self.pos) - count(&self.neg))
    }

    /// Hasse invariant `Π_{i<j} (a_i, a_j)_p` over the rationals. A virtual class is first made
    /// honest through `-⟨b⟩ + h = ⟨-b⟩`.
    pub fn hasse(&self, p: u64) -> Result<i32> {
        if !matches!(self.field.kind(), FieldKind::Rationals) {
            return Err(Error::Unsupported(format!("Hasse invariant over {}", self.field)));
        }
        let k = &self.field;
        let mut form: Vec<BigRational> = Vec::new();
        for a in &self.pos {
            form.push(rat(a));
        }
        for b in &self.neg {
            form.push(rat(&k.neg(b)));
        }
        let pb = BigUint::from(p);
        let mut acc = 1;
        let mut d = BigRational::one();
        for a in &form {
            acc *= numtheory::hilbert_symbol(&d, a, &pb);
            d *= a;
        }
        Ok(acc)
    }

    /// As an element of `K^MW_0 = GW`.
    pub fn to_mw(&self) -> MWElement {
        let k = &self.field;
        let mut x = MWElement::zero(k, 0).with_twist(self.twist.clone());
        for a in &self.pos {
            x.add_assign(&MWElement::angle(k, a).unwrap());
        }
        for b in &self.neg {
            x.add_scaled(&MWElement::angle(k, b).unwrap(), -1);
        }
        x
    }

    /// From an element of `K^MW_0`, expanding `η[u_1]...[u_m]`-free terms through
    /// `η[a] = ⟨a⟩ - 1` and `η^m [u_1, ..., u_m] = Π (⟨u_i⟩ - 1)`.
    pub fn from_mw(x: &MWElement) -> Result<GWClass> {
        if x.degree() != 0 {
            return Err(Error::DegreeMismatch(x.degree(), 0));
        }
        let k = x.field();
        let mut out = GWClass::zero(k).with_twist(x.twist().clone());
        for (s, c) in x.terms() {
            let n = s.entries.len();
            for mask in 0u32..(1 << n) {
                let mut a = k.one();
                for (i, u) in s.entries.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        a = k.mul(&a, u);
                    }
                }
                let sign = if (n - mask.count_ones() as usize) % 2 == 0 { c } else { -c };
                let target = if sign > 0 { &mut out.pos } else { &mut out.neg };
                for _ in 0..sign.unsigned_abs() {
                    target.push(a.clone());
                }
            }
        }
        out.tidy();
        Ok(out)
    }

    /// Extension of scalars along a field embedding.
    pub fn map_field(&self, emb: &Embedding) -> Result<GWClass> {
        if emb.src() != &self.field {
            return Err(Error::FieldMismatch(self.field.descriptor(), emb.src().descriptor()));
        }
        let map = |v: &[Elem]| v.iter().map(|a| emb.apply(a)).collect::<Result<Vec<_>>>();
        let k = emb.dst();
        let out = GWClass::diagonal(k, &map(&self.pos)?)?.sub(&GWClass::diagonal(k, &map(&self.neg)?)?)?;
        Ok(out.with_twist(self.twist.clone()))
    }

    /// Equality in `GW(F)`.
    pub fn eq_gw(&self, other: &GWClass) -> Result<bool> {
        self.compatible(other)?;
        self.sub(other)?.to_mw().is_zero()
    }

    /// Equality in `W(F)`.
    pub fn eq_witt(&self, other: &GWClass) -> Result<bool> {
        self.compatible(other)?;
        self.sub(other)?.to_mw().is_zero_in(Projection::Witt)
    }

    /// A short diagonal representative over a finite field (`rank` copies of `⟨1⟩`, one of
    /// them replaced by the nonsquare when the discriminant is not a square).
    pub fn reduced(&self) -> GWClass {
        let k = &self.field;
        if !k.is_finite() {
            return self.clone();
        }
        let r = self.rank();
        let d = self.determinant();
        let square = k.is_square_finite(&d).unwrap();
        let g = k.canonical_nonsquare().unwrap();
        let mut entries: Vec<Elem> = (0..r.unsigned_abs()).map(|_| k.one()).collect();
        let mut x = GWClass::zero(k).with_twist(self.twist.clone());
        if r == 0 {
            if !square {
                x.pos = vec![g, k.one()];
                x.neg = vec![k.one(), k.one()];
                x.tidy();
            }
            return x;
        }
        if !square {
            entries[0] = if r > 0 { g } else { k.inv(&g).unwrap() };
        }
        if r > 0 {
            x.pos = entries;
        } else {
            x.neg = entries;
        }
        x.tidy();
        x
    }

    pub fn parse(k: &Field, s: &str) -> Result<GWClass> {
        parse_gw(k, s)
    }
}

fn rat(a: &Elem) -> BigRational {
    match a {
        Elem::Q(x) => x.clone(),
        _ => panic!("expected a rational"),
    }
}

impl fmt::Display for GWClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = &self.field;
        let list = |v: &[Elem]| v.iter().map(|a| k.format(a)).collect::<Vec<_>>().join(",");
        match (self.pos.is_empty(), self.neg.is_empty()) {
            (true, true) => write!(f, "0")?,
            (false, true) => write!(f, "<{}>", list(&self.pos))?,
            (true, false) => write!(f, "-<{}>", list(&self.neg))?,
            (false, false) => write!(f, "<{}> - <{}>", list(&self.pos), list(&self.neg))?,
        }
        write!(f, "{}", self.twist)
    }
}

/// Parses `<a,...>`, `h`, `n_eps(k)` and integers joined by `+`/`-`, with optional
/// `@L(generator)` suffixes.
pub fn parse_gw(k: &Field, s: &str) -> Result<GWClass> {
    let mut c = Cursor::new(s);
    let mut acc = GWClass::zero(k);
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
        let at = c.pos;
        let mut mult = 1i64;
        if let Some(n) = c.integer() {
            mult = i64::try_from(n).map_err(|_| parse_err(at, "coefficient too large"))?;
            if !c.eat(b'*') {
                acc = acc.add(&GWClass::one(k).scale(sign * mult))?;
                first = false;
                continue;
            }
        }
        let term = if c.eat(b'<') {
            let mut entries = Vec::new();
            loop {
                let at = c.pos;
                let a = parse_elem_at(k, &mut c)?;
                if a.is_zero() {
                    return Err(parse_err(at, "diagonal entries must be nonzero"));
                }
                entries.push(a);
                if c.eat(b'>') {
                    break;
                }
                c.expect(b',')?;
            }
            GWClass::diagonal(k, &entries)?
        } else if c.eat_str("n_eps") {
            c.expect(b'(')?;
            let n = c.integer().ok_or_else(|| c.err("expected an integer"))?;
            c.expect(b')')?;
            let n = i64::try_from(n).map_err(|_| c.err("argument too large"))?;
            GWClass::n_epsilon(n, k)?
        } else if c.eat(b'h') {
            GWClass::hyperbolic(k)
        } else if first && c.eat(b'0') {
            GWClass::zero(k)
        } else {
            return Err(c.err("expected <...>, h, n_eps(k) or an integer"));
        };
        first = false;
        acc = acc.add(&term.scale(sign * mult))?;
    }
    if first {
        return Err(c.err("empty form"));
    }
    while c.eat(b'@') {
        let label = c.ident().ok_or_else(|| c.err("expected a line label"))?;
        c.expect(b'(')?;
        let g = c.balanced(b'(', b')')?;
        acc.twist = acc.twist.tensor(&Twist::line(label, g.trim()));
    }
    if !c.at_end() {
        return Err(c.err("unexpected input"));
    }
    Ok(acc)
}

/// Trace form transfer: `⟨a⟩ ↦` the `E`-form `(x, y) ↦ Tr_{F/E}(a x y)`, diagonalized.
pub fn scharlau_transfer(q: &GWClass, ext: &SimpleExtension) -> Result<GWClass> {
    if q.field() != ext.field() {
        return Err(Error::FieldMismatch(
            q.field().descriptor(),
            ext.field().descriptor(),
        ));
    }
    let e = ext.base();
    let deriv = poly::derivative(e, ext.minpoly());
    if deriv.is_zero() {
        return Err(Error::Inseparable);
    }
    let stage = ext.stage();
    let d = ext.degree();
    let x = stage.gen();
    let powers: Vec<Elem> = (0..d).map(|i| stage.pow(&x, i as i64).unwrap()).collect();
    let form_of = |a: &Elem| -> Result<Vec<Elem>> {
        let a = ext.to_stage(a)?;
        let g: Matrix = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let v = stage.mul(&a, &stage.mul(&powers[i], &powers[j]));
                        ext.trace_stage(&v)
                    })
                    .collect()
            })
            .collect();
        Ok(linalg::diagonalize_symmetric(e, &g))
    };
    let mut out = GWClass::zero(e);
    for a in &q.pos {
        out.pos.extend(form_of(a)?);
    }
    for b in &q.neg {
        out.neg.extend(form_of(b)?);
    }
    if out.pos.iter().chain(out.neg.iter()).any(|a| a.is_zero()) {
        return Err(Error::Inseparable);
    }
    out.tidy();
    Ok(out)
}
