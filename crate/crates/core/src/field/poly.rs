//! Dense univariate polynomials over a [`Field`], stored low degree first.

use num_bigint::BigUint;
use num_traits::Zero;

use super::{Elem, Field};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly(Vec<Elem>);

impl Poly {
    pub fn new(mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn constant(c: Elem) -> Poly {
        Poly::new(vec![c])
    }

    pub fn one(k: &Field) -> Poly {
        Poly(vec![k.one()])
    }

    /// The polynomial `x`.
    pub fn x(k: &Field) -> Poly {
        Poly(vec![k.zero(), k.one()])
    }

    pub fn monomial(k: &Field, c: Elem, n: usize) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![k.zero(); n];
        v.push(c);
        Poly(v)
    }

    /// `x - c`.
    pub fn linear(k: &Field, c: &Elem) -> Poly {
        Poly(vec![k.neg(c), k.one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Degree with -1 for the zero polynomial.
    pub fn deg(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn lead(&self) -> Option<&Elem> {
        self.0.last()
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<Elem> {
        self.0
    }

    pub fn coeff(&self, k: &Field, i: usize) -> Elem {
        self.0.get(i).cloned().unwrap_or_else(|| k.zero())
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn is_one(&self, k: &Field) -> bool {
        self.0.len() == 1 && k.is_one(&self.0[0])
    }

    pub fn is_monic(&self, k: &Field) -> bool {
        self.lead().is_some_and(|c| k.is_one(c))
    }

    pub fn map(&self, f: impl Fn(&Elem) -> Elem) -> Poly {
        Poly::new(self.0.iter().map(f).collect())
    }

    pub fn try_map(&self, f: impl Fn(&Elem) -> Result<Elem>) -> Result<Poly> {
        Ok(Poly::new(self.0.iter().map(f).collect::<Result<_>>()?))
    }
}

pub fn add(k: &Field, a: &Poly, b: &Poly) -> Poly {
    let n = a.0.len().max(b.0.len());
    let mut v = Vec::with_capacity(n);
    for i in 0..n {
        v.push(match (a.0.get(i), b.0.get(i)) {
            (Some(x), Some(y)) => k.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        });
    }
    Poly::new(v)
}

pub fn neg(k: &Field, a: &Poly) -> Poly {
    Poly(a.0.iter().map(|c| k.neg(c)).collect())
}

pub fn sub(k: &Field, a: &Poly, b: &Poly) -> Poly {
    add(k, a, &neg(k, b))
}

pub fn scale(k: &Field, a: &Poly, c: &Elem) -> Poly {
    if c.is_zero() {
        return Poly::zero();
    }
    Poly::new(a.0.iter().map(|x| k.mul(x, c)).collect())
}

pub fn shift(k: &Field, a: &Poly, n: usize) -> Poly {
    if a.is_zero() {
        return Poly::zero();
    }
    let mut v = vec![k.zero(); n];
    v.extend(a.0.iter().cloned());
    Poly(v)
}

pub fn mul(k: &Field, a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let mut v = vec![k.zero(); a.0.len() + b.0.len() - 1];
    for (i, x) in a.0.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.0.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            v[i + j] = k.add(&v[i + j], &k.mul(x, y));
        }
    }
    Poly::new(v)
}

pub fn pow(k: &Field, a: &Poly, mut e: u64) -> Poly {
    let mut base = a.clone();
    let mut r = Poly::one(k);
    while e > 0 {
        if e & 1 == 1 {
            r = mul(k, &r, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(k, &base, &base);
        }
    }
    r
}

pub fn divrem(k: &Field, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
    let db = b.degree().ok_or(Error::DivisionByZero)?;
    if a.deg() < b.deg() {
        return Ok((Poly::zero(), a.clone()));
    }
    let inv = k.inv(b.lead().unwrap())?;
    let mut r = a.0.clone();
    let mut q = vec![k.zero(); a.0.len() - db];
    for i in (0..q.len()).rev() {
        let c = k.mul(&r[i + db], &inv);
        if c.is_zero() {
            continue;
        }
        for (j, y) in b.0.iter().enumerate() {
            if !y.is_zero() {
                r[i + j] = k.sub(&r[i + j], &k.mul(&c, y));
            }
        }
        q[i] = c;
    }
    r.truncate(db);
    Ok((Poly::new(q), Poly::new(r)))
}

pub fn rem(k: &Field, a: &Poly, b: &Poly) -> Result<Poly> {
    Ok(divrem(k, a, b)?.1)
}

/// Exact quotient; errors if `b` does not divide `a`.
pub fn div_exact(k: &Field, a: &Poly, b: &Poly) -> Result<Poly> {
    let (q, r) = divrem(k, a, b)?;
    if !r.is_zero() {
        return Err(Error::Invalid("inexact polynomial division".into()));
    }
    Ok(q)
}

pub fn monic(k: &Field, a: &Poly) -> Poly {
    match a.lead() {
        None => Poly::zero(),
        Some(c) if k.is_one(c) => a.clone(),
        Some(c) => scale(k, a, &k.inv(c).expect("nonzero leading coefficient")),
    }
}

pub fn gcd(k: &Field, a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = rem(k, &x, &y).expect("nonzero divisor");
        x = y;
        y = r;
    }
    monic(k, &x)
}

/// Returns (g, s, t) with s*a + t*b = g and g monic.
pub fn xgcd(k: &Field, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Poly::one(k), Poly::zero());
    let (mut t0, mut t1) = (Poly::zero(), Poly::one(k));
    while !r1.is_zero() {
        let (q, r) = divrem(k, &r0, &r1).expect("nonzero divisor");
        let s = sub(k, &s0, &mul(k, &q, &s1));
        let t = sub(k, &t0, &mul(k, &q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    match r0.lead().cloned() {
        None => (r0, s0, t0),
        Some(c) => {
            let inv = k.inv(&c).expect("nonzero");
            (scale(k, &r0, &inv), scale(k, &s0, &inv), scale(k, &t0, &inv))
        }
    }
}

pub fn eval(k: &Field, f: &Poly, x: &Elem) -> Elem {
    let mut acc = k.zero();
    for c in f.0.iter().rev() {
        acc = k.add(&k.mul(&acc, x), c);
    }
    acc
}

pub fn derivative(k: &Field, f: &Poly) -> Poly {
    Poly::new(
        f.0.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| k.mul(&k.from_i64(i as i64), c))
            .collect(),
    )
}

/// f(g)
pub fn compose(k: &Field, f: &Poly, g: &Poly) -> Poly {
    let mut acc = Poly::zero();
    for c in f.0.iter().rev() {
        acc = add(k, &mul(k, &acc, g), &Poly::constant(c.clone()));
    }
    acc
}

pub fn mul_mod(k: &Field, a: &Poly, b: &Poly, m: &Poly) -> Poly {
    rem(k, &mul(k, a, b), m).expect("nonzero modulus")
}

pub fn pow_mod(k: &Field, a: &Poly, e: &BigUint, m: &Poly) -> Poly {
    let mut r = rem(k, &Poly::one(k), m).expect("nonzero modulus");
    if e.is_zero() {
        return r;
    }
    let base = rem(k, a, m).expect("nonzero modulus");
    for i in (0..e.bits()).rev() {
        r = mul_mod(k, &r, &r, m);
        if e.bit(i) {
            r = mul_mod(k, &r, &base, m);
        }
    }
    r
}

pub fn product(k: &Field, polys: &[Poly]) -> Poly {
    polys.iter().fold(Poly::one(k), |acc, p| mul(k, &acc, p))
}

/// Valuation of `a` at the irreducible `p` together with the cofactor.
pub fn strip(k: &Field, a: &Poly, p: &Poly) -> (i64, Poly) {
    let mut v = 0;
    let mut cur = a.clone();
    if cur.is_zero() {
        return (0, cur);
    }
    loop {
        let (q, r) = divrem(k, &cur, p).expect("nonzero divisor");
        if !r.is_zero() {
            return (v, cur);
        }
        cur = q;
        v += 1;
    }
}

pub fn format(k: &Field, f: &Poly, var: &str) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in f.0.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let cs = k.format(c);
        let atomic = k.is_atomic(c);
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let term = if i == 0 {
            if atomic {
                cs
            } else {
                format!("({cs})")
            }
        } else if k.is_one(c) {
            mono
        } else if k.is_one(&k.neg(c)) && k.characteristic() == 0 {
            format!("-{mono}")
        } else if atomic {
            format!("{cs}*{mono}")
        } else {
            format!("({cs})*{mono}")
        };
        parts.push(term);
    }
    let mut s = String::new();
    for (i, p) in parts.iter().enumerate() {
        if i == 0 {
            s.push_str(p);
        } else if let Some(rest) = p.strip_prefix('-') {
            s.push_str(" - ");
            s.push_str(rest);
        } else {
            s.push_str(" + ");
            s.push_str(p);
        }
    }
    s
}
