//! Residue, specialization and coresidue maps.
//!
//! For a place `v` with uniformizer `π`, the ring map `Θ_π: K^MW_*(F) → K^MW_*(κ(v))[ξ]`
//! with `ξ^2 = [-1]ξ` sends `[π^k u]` to `[ū] + ξ(k_ε + [k odd] η[ū])`. Writing
//! `Θ_π(x) = s + ξ r`, `r` is the residue `∂^π_v(x)` and `s` the specialization `s^π_v(x)`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::place::{self, Place, PlaceKind};
use crate::field::{Elem, Field, Poly};
use crate::kmw::{MWElement, Projection, Twist};

/// `s + ξ r` over a residue field.
#[derive(Clone, Debug)]
struct XiPair {
    s: MWElement,
    r: MWElement,
}

impl XiPair {
    /// `(a + ξb)(c + ξd) = ac + ξ(ā d + b c + [-1] b̄ d)`.
    fn mul(&self, other: &XiPair, minus_one: &MWElement) -> XiPair {
        let s = self.s.mul_unchecked(&other.s);
        let mut r = self.s.conj().mul_unchecked(&other.r);
        r.add_assign(&self.r.mul_unchecked(&other.s));
        r.add_assign(&minus_one.mul_unchecked(&self.r.conj()).mul_unchecked(&other.r));
        XiPair {
            s: tidy(s),
            r: tidy(r),
        }
    }
}

fn tidy(x: MWElement) -> MWElement {
    if x.field().is_finite() {
        x.normalize()
    } else {
        x
    }
}

/// `Θ([π^k u]) = [ū] + ξ(k_ε + [k odd] η[ū])`.
fn theta_entry(kappa: &Field, k: i64, ubar: &Elem) -> XiPair {
    let s = MWElement::symbol_unchecked(kappa, 1, 0, vec![ubar.clone()]);
    let mut r = MWElement::n_eps(kappa, k);
    if k.rem_euclid(2) == 1 {
        r.add_assign(&MWElement::symbol_unchecked(kappa, 1, 1, vec![ubar.clone()]));
    }
    XiPair { s, r }
}

/// Specialization and residue of `x` at `v`, untwisted, both over `κ(v)`.
pub fn theta(x: &MWElement, v: &Place) -> Result<(MWElement, MWElement)> {
    if x.field() != v.field() {
        return Err(Error::FieldMismatch(
            x.field().descriptor(),
            v.field().descriptor(),
        ));
    }
    let kappa = v.residue_field().clone();
    let n = x.degree();
    let minus_one = MWElement::symbol_unchecked(&kappa, 1, 0, vec![kappa.neg(&kappa.one())]);
    let mut s_tot = MWElement::zero(&kappa, n);
    let mut r_tot = MWElement::zero(&kappa, n - 1);
    for (sym, c) in x.terms() {
        let m = sym.eta;
        let mut acc = XiPair {
            s: MWElement::symbol_unchecked(&kappa, c, m, vec![]),
            r: MWElement::zero(&kappa, -(m as i64) - 1),
        };
        for u in &sym.entries {
            let (k, ubar) = v.decompose(u)?;
            acc = acc.mul(&theta_entry(&kappa, k, &ubar), &minus_one);
        }
        s_tot.add_assign(&acc.s);
        r_tot.add_assign(&acc.r);
    }
    Ok((tidy(s_tot), tidy(r_tot)))
}

fn residue_twist(x: &MWElement, v: &Place) -> Result<Twist> {
    let pi = v.uniformizer()?;
    Ok(x
        .twist()
        .tensor(&Twist::line(format!("L{}", v.label()), v.field().format(&pi))))
}

/// `∂^π_v(x)` in `K^MW_{n-1}(κ(v))`, twisted by the line of `v` trivialized by `π`.
pub fn residue(x: &MWElement, v: &Place) -> Result<MWElement> {
    let t = residue_twist(x, v)?;
    Ok(theta(x, v)?.1.with_twist(t))
}

/// Residue with respect to the uniformizer `u π`: `⟨ū⟩ ∂^π_v`.
pub fn residue_with_uniformizer(x: &MWElement, v: &Place, unit: &Elem) -> Result<MWElement> {
    let (k, ubar) = v.decompose(unit)?;
    if k != 0 {
        return Err(Error::Invalid("uniformizer change by a non-unit".into()));
    }
    let r = theta(x, v)?.1;
    let kappa = v.residue_field();
    Ok(tidy(MWElement::angle(kappa, &ubar)?.mul_unchecked(&r)))
}

/// Specialization `s^π_v(x)` for any `x` (the constant part of `Θ_π`).
pub fn specialization(x: &MWElement, v: &Place) -> Result<MWElement> {
    Ok(theta(x, v)?.0.with_twist(x.twist().clone()))
}

/// Specialization of an element that is regular at `v`.
pub fn specialize(x: &MWElement, v: &Place) -> Result<MWElement> {
    let (s, r) = theta(x, v)?;
    let regular = match r.is_zero() {
        Ok(z) => z,
        Err(_) => r.is_structurally_zero(),
    };
    if !regular {
        return Err(Error::NotRegular(v.label()));
    }
    Ok(s.with_twist(x.twist().clone()))
}

/// Finite places of the rational function field of `x` where some entry is not a unit.
pub fn finite_support(x: &MWElement) -> Result<Vec<Place>> {
    let k = x.field();
    let mut out: Vec<Place> = Vec::new();
    for (s, _) in x.terms() {
        for a in &s.entries {
            for v in place::places_of_support(k, a)? {
                if !v.is_infinite() && !out.contains(&v) {
                    out.push(v);
                }
            }
        }
    }
    out.sort_by(|a, b| a.kind().cmp(b.kind()));
    Ok(out)
}

/// `[π] · β̃` where `β̃` lifts every entry of `β` to a polynomial of degree below `deg π`.
pub fn lift_times_pi(beta: &MWElement, x: &Place) -> Result<MWElement> {
    let f = x.field();
    if beta.field() != x.residue_field() {
        return Err(Error::FieldMismatch(
            beta.field().descriptor(),
            x.residue_field().descriptor(),
        ));
    }
    let lifted = beta.map_entries(f, |u| x.lift(u))?.untwisted();
    let pi = MWElement::symbol_unchecked(f, 1, 0, vec![x.uniformizer()?]);
    Ok(pi.mul_unchecked(&lifted))
}

/// Coresidues on `F(t)`: `ρ_x(β)` has residue `β` at `x` and no residue at any other finite
/// place. Memoized per instance by `(π, β)`.
#[derive(Default)]
pub struct Coresidues {
    cache: HashMap<(Poly, MWElement), MWElement>,
}

impl Coresidues {
    pub fn new() -> Coresidues {
        Coresidues::default()
    }

    pub fn coresidue(&mut self, beta: &MWElement, x: &Place) -> Result<MWElement> {
        let PlaceKind::Finite(pi) = x.kind() else {
            return Err(Error::Invalid("coresidues are defined at finite places".into()));
        };
        let beta = tidy(beta.clone().untwisted());
        let key = (pi.clone(), beta.clone());
        if let Some(g) = self.cache.get(&key) {
            return Ok(g.clone());
        }
        let mut gamma = lift_times_pi(&beta, x)?;
        let gamma0 = gamma.clone();
        for y in finite_support(&gamma0)? {
            if y == *x {
                continue;
            }
            let r = theta(&gamma0, &y)?.1;
            if r.is_structurally_zero() {
                continue;
            }
            let c = self.coresidue(&r, &y)?;
            gamma.add_scaled(&c, -1);
        }
        self.cache.insert(key, gamma.clone());
        Ok(gamma)
    }
}

/// One-shot coresidue.
pub fn coresidue(beta: &MWElement, x: &Place) -> Result<MWElement> {
    Coresidues::new().coresidue(beta, x)
}

/// Decomposition of `γ` along the split exact sequence
/// `0 → M(F) → M(F(t)) → ⊕_x M_{-1}(κ(x)) → 0`.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    /// The constant part `c ∈ M(F)`.
    pub constant: MWElement,
    /// Nonzero residues at finite places.
    pub residues: Vec<(Place, MWElement)>,
}

impl Reconstruction {
    /// `res(c) + Σ_y ρ_y(∂_y γ)`.
    pub fn assemble(&self, f: &Field, cores: &mut Coresidues) -> Result<MWElement> {
        let c = &self.constant;
        let mut out = c.map_entries(f, |u| Ok(f.constant(u.clone())))?;
        for (y, r) in &self.residues {
            out.add_assign(&cores.coresidue(r, y)?);
        }
        Ok(out)
    }
}

/// Splits `γ ∈ M(F(t))` into its constant part and its finite residues.
pub fn milnor_reconstruct(gamma: &MWElement, cores: &mut Coresidues) -> Result<Reconstruction> {
    let f = gamma.field().clone();
    let Some(base) = f.base().filter(|_| f.is_ratfunc()).cloned() else {
        return Err(Error::Unsupported(format!("{f} is not a rational function field")));
    };
    let gamma = gamma.clone().untwisted();
    let mut rest = gamma.clone();
    let mut res = Vec::new();
    for y in finite_support(&gamma)? {
        let r = theta(&gamma, &y)?.1;
        let nonzero = match r.is_zero() {
            Ok(z) => !z,
            Err(_) => !r.is_structurally_zero(),
        };
        if nonzero {
            rest.add_scaled(&cores.coresidue(&r, &y)?, -1);
            res.push((y, r));
        }
    }
    let origin = Place::finite(&f, Poly::x(&base))?;
    let constant = theta(&rest, &origin)?.0;
    Ok(Reconstruction {
        constant,
        residues: res,
    })
}

/// Projection followed by the canonical form where one exists.
pub fn project(x: &MWElement, p: Projection) -> MWElement {
    tidy(x.project(p))
}
