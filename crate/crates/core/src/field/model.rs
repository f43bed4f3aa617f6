//! Radical extensions `B(s)[x]/(x^m - s)` are again rational function fields `B(u)`
//! with `s = u^m` and `x = u`. The model gives them factorization, places and equality.

use super::{poly, Elem, Field, FieldKind, Poly};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct RationalModel {
    field: Field,
    model: Field,
    m: usize,
}

impl RationalModel {
    pub fn of(k: &Field) -> Option<RationalModel> {
        let FieldKind::Ext { base, modulus } = k.kind() else {
            return None;
        };
        let FieldKind::RatFunc { base: b } = base.kind() else {
            return None;
        };
        let m = modulus.degree()?;
        let c = modulus.coeffs();
        if c[1..m].iter().any(|x| !x.is_zero()) {
            return None;
        }
        if base.neg(&c[0]) != base.gen() {
            return None;
        }
        Some(RationalModel {
            field: k.clone(),
            model: Field::rational_functions(b, k.var()),
            m,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn model(&self) -> &Field {
        &self.model
    }

    /// Degree m of the radical.
    pub fn degree(&self) -> usize {
        self.m
    }

    /// B(s) -> B(u), s -> u^m.
    pub fn base_to_model(&self, c: &Elem) -> Result<Elem> {
        let b = self.model.base().unwrap();
        let Elem::Frac(n, d) = c else {
            return Err(Error::Invalid("expected a rational function".into()));
        };
        let inflate = |p: &Poly| -> Poly {
            let mut v = vec![b.zero(); p.coeffs().len().saturating_sub(1) * self.m + 1];
            for (i, x) in p.coeffs().iter().enumerate() {
                v[i * self.m] = x.clone();
            }
            Poly::new(v)
        };
        self.model.frac(inflate(n), inflate(d))
    }

    pub fn to_model(&self, a: &Elem) -> Result<Elem> {
        let Elem::Ext(p) = a else {
            return Err(Error::Invalid("expected an extension element".into()));
        };
        let u = self.model.gen();
        let mut acc = self.model.zero();
        for c in p.coeffs().iter().rev() {
            acc = self.model.add(&self.model.mul(&acc, &u), &self.base_to_model(c)?);
        }
        Ok(acc)
    }

    pub fn from_model(&self, a: &Elem) -> Result<Elem> {
        let Elem::Frac(n, d) = a else {
            return Err(Error::Invalid("expected a rational function".into()));
        };
        let k = &self.field;
        let r = k.base().unwrap();
        let x = k.gen();
        let ev = |p: &Poly| -> Elem {
            let lifted = p.map(|c| k.constant(r.constant(c.clone())));
            poly::eval(k, &lifted, &x)
        };
        k.div(&ev(n), &ev(d))
    }
}
