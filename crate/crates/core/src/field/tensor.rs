//! Simple finite extensions `F = E(θ)` with an explicit stage `E[x]/(f)`, their traces and
//! norms, and the decomposition of `F ⊗_E L` into local Artin components.

use super::embed::{minimal_polynomial, Embedding, LinearSection};
use super::linalg::{self, Matrix};
use super::{factor, Elem, Field, Poly};
use crate::error::{Error, Result};

/// `F` over `E` presented as `E[x]/(f)` through a primitive element.
#[derive(Clone, Debug)]
pub struct SimpleExtension {
    base: Field,
    field: Field,
    stage: Field,
    minpoly: Poly,
    base_emb: Embedding,
    to_field: Embedding,
    section: Embedding,
}

impl SimpleExtension {
    /// The defining presentation of an extension field `B[x]/(m)` over `B`.
    pub fn structural(f: &Field) -> Result<SimpleExtension> {
        let (Some(base), Some(m)) = (f.base(), f.modulus()) else {
            return Err(Error::InvalidTower(format!("{f} is not a simple extension")));
        };
        Ok(SimpleExtension {
            base: base.clone(),
            field: f.clone(),
            stage: f.clone(),
            minpoly: m.clone(),
            base_emb: Embedding::natural(base, f)?,
            to_field: Embedding::identity(f),
            section: Embedding::identity(f),
        })
    }

    /// `F` over `E` generated by `theta`, where `base_emb: E -> F`.
    pub fn from_generator(base_emb: Embedding, theta: &Elem) -> Result<SimpleExtension> {
        let e = base_emb.src().clone();
        let f = base_emb.dst().clone();
        if e.ground() != f.ground() {
            return Err(Error::FieldMismatch(e.descriptor(), f.descriptor()));
        }
        let deg = f.dim_over_ground() / e.dim_over_ground();
        let minpoly = minimal_polynomial(&base_emb, theta)?;
        if minpoly.degree() != Some(deg) {
            return Err(Error::InvalidTower(format!(
                "{} does not generate {f} over {e}",
                f.format(theta)
            )));
        }
        let var = if f.var().is_empty() { "x" } else { f.var() };
        let stage = Field::extension_unchecked(&e, minpoly.clone(), var);
        let to_field = Embedding::generator(&stage, &f, base_emb.clone(), theta.clone())?;
        let section = LinearSection::new(to_field.clone())?.into_embedding();
        Ok(SimpleExtension {
            base: e,
            field: f,
            stage,
            minpoly,
            base_emb,
            to_field,
            section,
        })
    }

    /// `E` over itself, presented as `E[x]/(x - 1)`.
    pub fn trivial(e: &Field) -> Result<SimpleExtension> {
        SimpleExtension::from_generator(Embedding::identity(e), &e.one())
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// The presentation `E[x]/(f)`.
    pub fn stage(&self) -> &Field {
        &self.stage
    }

    pub fn minpoly(&self) -> &Poly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap()
    }

    pub fn base_embedding(&self) -> &Embedding {
        &self.base_emb
    }

    /// Stage -> field.
    pub fn to_field(&self) -> &Embedding {
        &self.to_field
    }

    /// Field -> stage.
    pub fn section(&self) -> &Embedding {
        &self.section
    }

    pub fn restrict(&self, a: &Elem) -> Result<Elem> {
        self.base_emb.apply(a)
    }

    pub fn to_stage(&self, a: &Elem) -> Result<Elem> {
        self.section.apply(a)
    }

    /// Matrix of multiplication by a stage element in the basis `1, x, ..., x^{d-1}`.
    pub fn multiplication_matrix(&self, a: &Elem) -> Matrix {
        let e = &self.base;
        let d = self.degree();
        let mut m: Matrix = vec![vec![e.zero(); d]; d];
        let mut col = a.clone();
        let x = self.stage.gen();
        for j in 0..d {
            let Elem::Ext(p) = &col else { unreachable!() };
            for (i, row) in m.iter_mut().enumerate() {
                row[j] = p.coeff(e, i);
            }
            col = self.stage.mul(&col, &x);
        }
        m
    }

    /// Trace of a stage element.
    pub fn trace_stage(&self, a: &Elem) -> Elem {
        let m = self.multiplication_matrix(a);
        self.base.sum(m.iter().enumerate().map(|(i, r)| &r[i]))
    }

    pub fn trace(&self, a: &Elem) -> Result<Elem> {
        Ok(self.trace_stage(&self.to_stage(a)?))
    }

    pub fn norm(&self, a: &Elem) -> Result<Elem> {
        let m = self.multiplication_matrix(&self.to_stage(a)?);
        Ok(linalg::det(&self.base, &m))
    }
}

/// One local factor of `F ⊗_E L`.
#[derive(Clone, Debug)]
pub struct ArtinComponent {
    pub residue: Field,
    pub length: u32,
    /// L -> R/p
    pub phi: Embedding,
    /// F -> R/p
    pub psi: Embedding,
    /// The irreducible factor of the minimal polynomial over `L` cutting out the component.
    pub factor: Poly,
}

impl ArtinComponent {
    /// Degree of the residue field over `L`.
    pub fn degree(&self) -> usize {
        self.factor.degree().unwrap()
    }
}

/// Components of `F ⊗_E L` for `F = E[x]/(f)`, in bijection with the irreducible factors of
/// `f` over `L`; `e_to_l: E -> L`.
pub fn tensor_decompose(ext: &SimpleExtension, e_to_l: &Embedding) -> Result<Vec<ArtinComponent>> {
    if e_to_l.src() != ext.base() {
        return Err(Error::FieldMismatch(
            e_to_l.src().descriptor(),
            ext.base().descriptor(),
        ));
    }
    let l = e_to_l.dst().clone();
    let fl = e_to_l.apply_poly(ext.minpoly())?;
    let mut out = Vec::new();
    for (g, e) in factor::factor(&l, &fl)?.factors {
        let (r, phi, root) = if g.degree() == Some(1) {
            let root = l.neg(&g.coeffs()[0]);
            (l.clone(), Embedding::identity(&l), root)
        } else {
            let r = Field::extension_unchecked(&l, g.clone(), ext.stage().var());
            let phi = Embedding::natural(&l, &r)?;
            let root = r.gen();
            (r, phi, root)
        };
        let k_to_r = Embedding::generator(ext.stage(), &r, e_to_l.clone().then(phi.clone()), root)?;
        let psi = ext.section().clone().then(k_to_r);
        out.push(ArtinComponent {
            residue: r,
            length: e,
            phi,
            psi,
            factor: g,
        });
    }
    debug_assert_eq!(
        out.iter().map(|c| c.length as usize * c.degree()).sum::<usize>(),
        ext.degree()
    );
    Ok(out)
}
