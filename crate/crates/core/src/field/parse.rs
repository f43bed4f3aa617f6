//! Field descriptors (`GF(q)`, `Q`, `<field>(t)`, `<field>[x]/(<poly>)`) and element
//! expressions over a field.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::embed::embed_natural;
use super::{Elem, Field, FieldKind};
use crate::error::{parse_err, Error, Result};

/// Byte cursor shared by the literal parsers of the crate.
pub(crate) struct Cursor<'a> {
    s: &'a [u8],
    pub pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(s: &'a str) -> Cursor<'a> {
        Cursor {
            s: s.as_bytes(),
            pos: 0,
        }
    }

    pub fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    pub fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn eat_str(&mut self, t: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(t.as_bytes()) {
            self.pos += t.len();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    pub fn err(&self, msg: impl Into<String>) -> Error {
        parse_err(self.pos, msg)
    }

    pub fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len()
            && (self.s[self.pos].is_ascii_alphabetic()
                || self.s[self.pos] == b'_'
                || (self.pos > start && self.s[self.pos].is_ascii_digit()))
        {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    pub fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| {
            std::str::from_utf8(&self.s[start..self.pos])
                .unwrap()
                .parse()
                .unwrap()
        })
    }

    /// Bytes up to (not including) the matching close of an already consumed `open`.
    pub fn balanced(&mut self, open: u8, close: u8) -> Result<&'a str> {
        let start = self.pos;
        let mut depth = 1;
        while self.pos < self.s.len() {
            let c = self.s[self.pos];
            if c == open {
                depth += 1;
            } else if c == close {
                depth -= 1;
                if depth == 0 {
                    let out = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                    self.pos += 1;
                    return Ok(out);
                }
            }
            self.pos += 1;
        }
        Err(parse_err(start, format!("unclosed '{}'", open as char)))
    }
}

/// Builds a field from its descriptor.
pub fn make_field(descriptor: &str) -> Result<Field> {
    let mut c = Cursor::new(descriptor);
    let mut k = if c.eat_str("GF(") {
        let q = c.integer().ok_or_else(|| c.err("expected an integer"))?;
        c.expect(b')')?;
        let q = q.to_u64().ok_or_else(|| c.err("field order too large"))?;
        Field::gf(q)?
    } else if c.eat(b'Q') {
        Field::rationals()
    } else {
        return Err(c.err("expected GF(q) or Q"));
    };
    loop {
        if c.eat(b'(') {
            let v = c.ident().ok_or_else(|| c.err("expected a variable name"))?;
            c.expect(b')')?;
            check_fresh(&k, &v, c.pos)?;
            k = Field::rational_functions(&k, &v);
        } else if c.eat(b'[') {
            let v = c.ident().ok_or_else(|| c.err("expected a variable name"))?;
            c.expect(b']')?;
            c.expect(b'/')?;
            c.expect(b'(')?;
            let at = c.pos;
            let text = c.balanced(b'(', b')')?;
            check_fresh(&k, &v, at)?;
            let ring = Field::rational_functions(&k, &v);
            let m = match parse_elem(&ring, text).map_err(|e| shift(e, at))? {
                Elem::Frac(n, d) if d.degree() == Some(0) => n,
                _ => return Err(parse_err(at, "minimal polynomial must be a polynomial")),
            };
            k = Field::extension(&k, m, &v)?;
        } else if c.at_end() {
            return Ok(k);
        } else {
            return Err(c.err("unexpected input"));
        }
    }
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        e => e,
    }
}

fn check_fresh(k: &Field, v: &str, pos: usize) -> Result<()> {
    let mut cur = Some(k);
    while let Some(f) = cur {
        if f.var() == v {
            return Err(parse_err(pos, format!("variable {v} already in use")));
        }
        cur = f.base();
    }
    Ok(())
}

/// Parses an element expression over `k` (integers, rationals, the variables of the tower,
/// `+ - * / ^` and parentheses).
pub fn parse_elem(k: &Field, s: &str) -> Result<Elem> {
    let mut c = Cursor::new(s);
    let v = expr(k, &mut c)?;
    if !c.at_end() {
        return Err(c.err("unexpected input"));
    }
    Ok(v)
}

/// Parses an element expression at the cursor, stopping before a character that cannot
/// continue it.
pub(crate) fn parse_elem_at(k: &Field, c: &mut Cursor) -> Result<Elem> {
    expr(k, c)
}

fn expr(k: &Field, c: &mut Cursor) -> Result<Elem> {
    let mut acc = if c.eat(b'-') {
        k.neg(&term(k, c)?)
    } else {
        c.eat(b'+');
        term(k, c)?
    };
    loop {
        if c.eat(b'+') {
            acc = k.add(&acc, &term(k, c)?);
        } else if c.eat(b'-') {
            acc = k.sub(&acc, &term(k, c)?);
        } else {
            return Ok(acc);
        }
    }
}

fn term(k: &Field, c: &mut Cursor) -> Result<Elem> {
    let mut acc = power(k, c)?;
    loop {
        if c.eat(b'*') {
            acc = k.mul(&acc, &power(k, c)?);
        } else if c.eat(b'/') {
            let at = c.pos;
            let d = power(k, c)?;
            acc = k.div(&acc, &d).map_err(|_| parse_err(at, "division by zero"))?;
        } else if matches!(c.peek(), Some(b'(')) || c.peek().is_some_and(|b| b.is_ascii_alphabetic()) {
            acc = k.mul(&acc, &power(k, c)?);
        } else {
            return Ok(acc);
        }
    }
}

fn power(k: &Field, c: &mut Cursor) -> Result<Elem> {
    let base = primary(k, c)?;
    if c.eat(b'^') {
        let neg = c.eat(b'-');
        let at = c.pos;
        let e = c
            .integer()
            .and_then(|e| e.to_i64())
            .ok_or_else(|| c.err("expected an exponent"))?;
        let e = if neg { -e } else { e };
        return k.pow(&base, e).map_err(|_| parse_err(at, "zero to a negative power"));
    }
    Ok(base)
}

fn primary(k: &Field, c: &mut Cursor) -> Result<Elem> {
    if c.eat(b'(') {
        let v = expr(k, c)?;
        c.expect(b')')?;
        return Ok(v);
    }
    if c.eat(b'-') {
        return Ok(k.neg(&power(k, c)?));
    }
    if let Some(n) = c.integer() {
        return k.from_rational(&BigRational::from_integer(n));
    }
    let at = c.pos;
    if let Some(name) = c.ident() {
        return variable(k, &name).ok_or_else(|| parse_err(at, format!("unknown variable {name}")));
    }
    Err(c.err("expected an element"))
}

fn variable(k: &Field, name: &str) -> Option<Elem> {
    let mut cur = Some(k);
    while let Some(f) = cur {
        if f.var() == name && matches!(f.kind(), FieldKind::Ext { .. } | FieldKind::RatFunc { .. }) {
            return embed_natural(f, k, &f.gen()).ok();
        }
        cur = f.base();
    }
    None
}
