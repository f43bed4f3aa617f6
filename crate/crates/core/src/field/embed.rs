//! Field embeddings, their linear sections, and minimal polynomials.

use std::sync::Arc;

use num_bigint::BigUint;

use super::conway::conway_parameters;
use super::linalg::{self, Matrix};
use super::{factor, poly, Elem, Field, FieldKind, Poly};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub enum Embedding {
    /// The canonical inclusion: prime subfields, base fields of towers, and Conway subfields.
    Natural { src: Field, dst: Field },
    /// Determined by an embedding of the base of `src` and the image of its generator.
    Generator {
        src: Field,
        dst: Field,
        base: Box<Embedding>,
        image: Elem,
    },
    /// `first` followed by `second`.
    Compose(Box<Embedding>, Box<Embedding>),
    /// Inverse of an injective embedding on its image.
    Section(Arc<LinearSection>),
}

impl Embedding {
    pub fn natural(src: &Field, dst: &Field) -> Result<Embedding> {
        embed_natural(src, dst, &src.gen())?;
        Ok(Embedding::Natural {
            src: src.clone(),
            dst: dst.clone(),
        })
    }

    pub fn identity(k: &Field) -> Embedding {
        Embedding::Natural {
            src: k.clone(),
            dst: k.clone(),
        }
    }

    /// Sends the generator of `src` (an extension or rational function field) to `image`.
    pub fn generator(src: &Field, dst: &Field, base: Embedding, image: Elem) -> Result<Embedding> {
        if let FieldKind::Ext { modulus, .. } = src.kind() {
            let m = base.apply_poly(modulus)?;
            if !poly::eval(dst, &m, &image).is_zero() {
                return Err(Error::Invalid(format!(
                    "{} is not a root of the minimal polynomial of {src}",
                    dst.format(&image)
                )));
            }
        }
        Ok(Embedding::Generator {
            src: src.clone(),
            dst: dst.clone(),
            base: Box::new(base),
            image,
        })
    }

    pub fn then(self, second: Embedding) -> Embedding {
        Embedding::Compose(Box::new(self), Box::new(second))
    }

    pub fn src(&self) -> &Field {
        match self {
            Embedding::Natural { src, .. } | Embedding::Generator { src, .. } => src,
            Embedding::Compose(a, _) => a.src(),
            Embedding::Section(s) => s.emb.dst(),
        }
    }

    pub fn dst(&self) -> &Field {
        match self {
            Embedding::Natural { dst, .. } | Embedding::Generator { dst, .. } => dst,
            Embedding::Compose(_, b) => b.dst(),
            Embedding::Section(s) => s.emb.src(),
        }
    }

    pub fn apply(&self, a: &Elem) -> Result<Elem> {
        match self {
            Embedding::Natural { src, dst } => embed_natural(src, dst, a),
            Embedding::Generator {
                src,
                dst,
                base,
                image,
            } => match (src.kind(), a) {
                (FieldKind::Ext { .. }, Elem::Ext(p)) => {
                    let mut acc = dst.zero();
                    for c in p.coeffs().iter().rev() {
                        acc = dst.add(&dst.mul(&acc, image), &base.apply(c)?);
                    }
                    Ok(acc)
                }
                (FieldKind::RatFunc { .. }, Elem::Frac(n, d)) => {
                    let ev = |p: &Poly| -> Result<Elem> {
                        Ok(poly::eval(dst, &base.apply_poly(p)?, image))
                    };
                    dst.div(&ev(n)?, &ev(d)?)
                }
                _ => Err(Error::FieldMismatch(src.descriptor(), format!("{a:?}"))),
            },
            Embedding::Compose(f, g) => g.apply(&f.apply(a)?),
            Embedding::Section(s) => s.preimage(a),
        }
    }

    pub fn apply_poly(&self, f: &Poly) -> Result<Poly> {
        f.try_map(|c| self.apply(c))
    }
}

/// Canonical inclusion of `src` into `dst`.
pub fn embed_natural(src: &Field, dst: &Field, a: &Elem) -> Result<Elem> {
    if src == dst {
        return Ok(a.clone());
    }
    match (src.kind(), a) {
        (FieldKind::Prime(p), Elem::Fp(x)) if dst.characteristic() == *p => {
            return Ok(dst.from_i64(*x as i64))
        }
        (FieldKind::Rationals, Elem::Q(x)) if dst.characteristic() == 0 => {
            return dst.from_rational(x)
        }
        _ => {}
    }
    if src.is_finite() && dst.is_finite() {
        if let (Some((p, n)), Some((q, m))) = (conway_parameters(src), conway_parameters(dst)) {
            if p == q && m % n == 0 {
                let e = (BigUint::from(p).pow(m) - 1u32) / (BigUint::from(p).pow(n) - 1u32);
                let img = dst.pow_big(&dst.gen(), &e);
                let fp = src.base().unwrap();
                let c = match a {
                    Elem::Ext(c) => c.clone(),
                    _ => return embed_natural(fp, dst, a),
                };
                let mut acc = dst.zero();
                for x in c.coeffs().iter().rev() {
                    acc = dst.add(&dst.mul(&acc, &img), &embed_natural(fp, dst, x)?);
                }
                return Ok(acc);
            }
        }
    }
    match dst.kind() {
        FieldKind::Ext { base, .. } | FieldKind::RatFunc { base } => {
            Ok(dst.constant(embed_natural(src, base, a)?))
        }
        _ => Err(Error::FieldMismatch(src.descriptor(), dst.descriptor())),
    }
}

/// Preimages along an injective embedding that is linear over the common ground field.
#[derive(Debug)]
pub struct LinearSection {
    emb: Embedding,
    inverse: Matrix,
    forward: Matrix,
}

impl LinearSection {
    pub fn new(emb: Embedding) -> Result<LinearSection> {
        let (k, f) = (emb.src().clone(), emb.dst().clone());
        if k.ground() != f.ground() {
            return Err(Error::FieldMismatch(k.descriptor(), f.descriptor()));
        }
        let g = k.ground().clone();
        let n = k.dim_over_ground();
        let m = f.dim_over_ground();
        let mut forward: Matrix = vec![Vec::with_capacity(n); m];
        for j in 0..n {
            let unit: Vec<Elem> = (0..n).map(|i| if i == j { g.one() } else { g.zero() }).collect();
            let img = f.coords(&emb.apply(&k.from_coords(&unit))?);
            for (r, x) in img.into_iter().enumerate() {
                forward[r].push(x);
            }
        }
        let inverse = linalg::left_inverse(&g, &forward)
            .ok_or_else(|| Error::Invalid("embedding is not injective".into()))?;
        Ok(LinearSection {
            emb,
            inverse,
            forward,
        })
    }

    pub fn embedding(&self) -> &Embedding {
        &self.emb
    }

    pub fn preimage(&self, a: &Elem) -> Result<Elem> {
        let k = self.emb.src();
        let f = self.emb.dst();
        let g = k.ground();
        let y = f.coords(a);
        let c = linalg::mat_vec(g, &self.inverse, &y);
        if linalg::mat_vec(g, &self.forward, &c) != y {
            return Err(Error::Invalid(format!(
                "{} is not in the image of {}",
                f.format(a),
                k.descriptor()
            )));
        }
        Ok(k.from_coords(&c))
    }

    pub fn into_embedding(self) -> Embedding {
        Embedding::Section(Arc::new(self))
    }
}

/// Minimal polynomial over the ground field of an element of a finite extension of it.
pub fn minimal_polynomial_ground(k: &Field, a: &Elem) -> Result<Poly> {
    let g = k.ground();
    let n = k.dim_over_ground();
    let mut cols: Vec<Vec<Elem>> = Vec::new();
    let mut pw = k.one();
    for j in 0..=n {
        let v = k.coords(&pw);
        if j > 0 {
            let a_mat: Matrix = (0..n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
            if let Some(sol) = linalg::solve(g, &a_mat, &v) {
                let mut coeffs: Vec<Elem> = sol.iter().map(|x| g.neg(x)).collect();
                coeffs.push(g.one());
                return Ok(Poly::new(coeffs));
            }
        }
        cols.push(v);
        pw = k.mul(&pw, a);
    }
    Err(Error::Invalid("no minimal polynomial found".into()))
}

/// Minimal polynomial of `a` in `emb.dst()` over `emb.src()`.
pub fn minimal_polynomial(emb: &Embedding, a: &Elem) -> Result<Poly> {
    let sub = emb.src();
    let f = emb.dst();
    let mg = minimal_polynomial_ground(f, a)?;
    let ground_to_sub = |c: &Elem| embed_natural(f.ground(), sub, c);
    let ms = mg.try_map(ground_to_sub)?;
    for (g, _) in factor::factor(sub, &ms)?.factors {
        if poly::eval(f, &emb.apply_poly(&g)?, a).is_zero() {
            return Ok(g);
        }
    }
    Err(Error::Invalid("minimal polynomial factor not found".into()))
}
