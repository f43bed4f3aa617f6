//! Zero tests and normal forms.
//!
//! `K^MW_n(F)` is the fibered product of `I^n(F)` and `K^M_n(F)` over `I^n/I^{n+1}`, so an
//! element vanishes iff its Milnor image and its Witt image vanish. Both are decided by
//! complete invariants per field: rank and discriminant for finite fields; signature,
//! discriminant, Hasse symbols and tame symbols for the rationals and the Gaussian field;
//! residues at all places plus one specialization for function fields.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::gaussian;
use super::{MWElement, Symbol};
use crate::error::{Error, Result};
use crate::field::model::RationalModel;
use crate::field::place::{self, Place};
use crate::field::{Elem, Field, FieldKind, Poly};
use crate::numtheory;
use crate::residues;

/// Which quotient of `K^MW` an equality is taken in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Projection {
    /// Milnor-Witt K-theory itself.
    Full,
    /// Milnor K-theory (`η = 0`).
    Milnor,
    /// The Witt ring, through `η`-inversion.
    Witt,
}

enum Kind {
    Finite,
    Rationals,
    Gaussian,
    Function,
}

fn kind(k: &Field) -> Result<Kind> {
    if k.is_finite() {
        Ok(Kind::Finite)
    } else if matches!(k.kind(), FieldKind::Rationals) {
        Ok(Kind::Rationals)
    } else if gaussian::is_gaussian(k) {
        Ok(Kind::Gaussian)
    } else if k.is_ratfunc() || RationalModel::of(k).is_some() {
        Ok(Kind::Function)
    } else {
        Err(Error::Unsupported(format!("equality in K^MW({k})")))
    }
}

pub fn is_zero(x: &MWElement, p: Projection) -> Result<bool> {
    if x.terms.is_empty() {
        return Ok(true);
    }
    let k = x.field();
    match kind(k)? {
        Kind::Finite => Ok(match p {
            Projection::Full => finite_milnor_zero(x) && finite_witt_zero(x),
            Projection::Milnor => finite_milnor_zero(x),
            Projection::Witt => finite_witt_zero(x),
        }),
        Kind::Rationals => Ok(match p {
            Projection::Full => rational_milnor_zero(x) && rational_witt_zero(x),
            Projection::Milnor => rational_milnor_zero(x),
            Projection::Witt => rational_witt_zero(x),
        }),
        Kind::Gaussian => Ok(match p {
            Projection::Full => gaussian_milnor_zero(x) && gaussian_witt_zero(x),
            Projection::Milnor => gaussian_milnor_zero(x),
            Projection::Witt => gaussian_witt_zero(x),
        }),
        Kind::Function => function_zero(x, p),
    }
}

/// Canonical representatives over finite fields, and diagonal representatives in degree
/// `<= 0` over the rationals.
pub fn normalize(x: &MWElement) -> Result<MWElement> {
    let k = x.field();
    match kind(k)? {
        Kind::Finite => Ok(finite_normal_form(x)),
        Kind::Rationals if x.degree() <= 0 => Ok(rational_diagonal_form(x)),
        _ => Ok(x.clone()),
    }
}

// ---- shared helpers ----

fn eta_free(x: &MWElement) -> impl Iterator<Item = (&Symbol, i64)> {
    x.terms().filter(|(s, _)| s.eta == 0)
}

/// Sum of the coefficients of the η-free terms (the rank in degree 0).
fn integer_part(x: &MWElement) -> i64 {
    eta_free(x).map(|(_, c)| c).sum()
}

/// Product of `u^c` over the η-free terms `c[u]` in degree one.
fn milnor_product(x: &MWElement) -> Elem {
    let k = x.field();
    let mut acc = k.one();
    for (s, c) in eta_free(x) {
        acc = k.mul(&acc, &k.pow(&s.entries[0], c).unwrap());
    }
    acc
}

/// The Witt image `Σ c Π (⟨u_i⟩ - 1)` as `Σ c_a ⟨a⟩`, dropping symbols with more than
/// `max_entries` entries.
fn witt_expansion(x: &MWElement, max_entries: usize) -> BTreeMap<Elem, i64> {
    let k = x.field();
    let mut out: BTreeMap<Elem, i64> = BTreeMap::new();
    for (s, c) in x.terms() {
        let n = s.entries.len();
        if n > max_entries {
            continue;
        }
        for mask in 0u32..(1 << n) {
            let mut a = k.one();
            for (i, u) in s.entries.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    a = k.mul(&a, u);
                }
            }
            let sign = if (n - mask.count_ones() as usize) % 2 == 0 { 1 } else { -1 };
            *out.entry(a).or_insert(0) += sign * c;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// An honest diagonal form Witt-equivalent to `Σ c_a ⟨a⟩`, using `-⟨a⟩ = ⟨-a⟩`.
fn honest_form(k: &Field, expansion: &BTreeMap<Elem, i64>) -> Vec<Elem> {
    let mut out = Vec::new();
    for (a, c) in expansion {
        let e = if *c > 0 { a.clone() } else { k.neg(a) };
        for _ in 0..c.unsigned_abs() {
            out.push(e.clone());
        }
    }
    out
}

// ---- finite fields ----

fn finite_milnor_zero(x: &MWElement) -> bool {
    let k = x.field();
    match x.degree() {
        n if n < 0 => true,
        0 => integer_part(x) == 0,
        1 => k.is_one(&milnor_product(x)),
        _ => true,
    }
}

/// Rank and determinant of the Witt image; `I^2` vanishes over a finite field.
fn finite_witt_data(x: &MWElement) -> (i64, Elem) {
    let k = x.field();
    let mut rank = 0i64;
    let mut det = k.one();
    for (s, c) in x.terms() {
        match s.entries.len() {
            0 => rank += c,
            1 => det = k.mul(&det, &k.pow(&s.entries[0], c).unwrap()),
            _ => {}
        }
    }
    (rank, det)
}

fn signed_disc(k: &Field, rank: i64, det: &Elem) -> Elem {
    if (rank * (rank - 1) / 2).rem_euclid(2) == 1 {
        k.neg(det)
    } else {
        det.clone()
    }
}

fn finite_witt_zero(x: &MWElement) -> bool {
    let k = x.field();
    let (rank, det) = finite_witt_data(x);
    rank.rem_euclid(2) == 0 && k.is_square_finite(&signed_disc(k, rank, &det)).unwrap()
}

fn finite_normal_form(x: &MWElement) -> MWElement {
    let k = x.field();
    let n = x.degree();
    let g = k.canonical_nonsquare().unwrap();
    let mut out = MWElement::zero(k, n).with_twist(x.twist().clone());
    match n {
        n if n >= 2 => {}
        1 => {
            let u = milnor_product(x);
            out.insert(
                Symbol {
                    eta: 0,
                    entries: vec![u],
                },
                1,
            );
        }
        0 => {
            let (_, det) = finite_witt_data(x);
            out.insert(
                Symbol {
                    eta: 0,
                    entries: vec![],
                },
                integer_part(x),
            );
            if !k.is_square_finite(&det).unwrap() {
                out.insert(
                    Symbol {
                        eta: 1,
                        entries: vec![g],
                    },
                    1,
                );
            }
        }
        _ => {
            let m = (-n) as u32;
            let (rank, det) = finite_witt_data(x);
            let d = signed_disc(k, rank, &det);
            let square = k.is_square_finite(&d).unwrap();
            if rank.rem_euclid(2) == 1 {
                out.insert(
                    Symbol {
                        eta: m,
                        entries: vec![],
                    },
                    1,
                );
                if !square {
                    out.insert(
                        Symbol {
                            eta: m + 1,
                            entries: vec![g],
                        },
                        1,
                    );
                }
            } else if !square {
                out.insert(
                    Symbol {
                        eta: m + 1,
                        entries: vec![g],
                    },
                    1,
                );
            }
        }
    }
    out
}

// ---- the rationals ----

fn q(a: &Elem) -> &BigRational {
    match a {
        Elem::Q(x) => x,
        _ => panic!("not a rational"),
    }
}

fn rat_elem(x: BigRational) -> Elem {
    Elem::Q(x)
}

fn rational_primes(elems: impl IntoIterator<Item = Elem>) -> Vec<BigUint> {
    let mut ps: Vec<BigUint> = elems
        .into_iter()
        .flat_map(|a| numtheory::primes_of_rational(q(&a)))
        .collect();
    ps.sort();
    ps.dedup();
    ps
}

/// Tame symbol of `{a, b}` at an odd prime p, as a residue mod p.
fn rational_tame(a: &BigRational, b: &BigRational, p: &BigUint) -> u64 {
    let pp = p.to_u64().expect("prime fits in u64");
    let va = numtheory::val_rat(a, p);
    let vb = numtheory::val_rat(b, p);
    let pr = BigRational::from_integer(BigInt::from(pp));
    let ua = a / pr.pow(va as i32);
    let ub = b / pr.pow(vb as i32);
    let ra = numtheory::rat_mod(&ua, pp);
    let rb = numtheory::rat_mod(&ub, pp);
    let pow = |x: u64, e: i64| -> u64 {
        if e >= 0 {
            numtheory::pow_mod(x, e as u64, pp)
        } else {
            numtheory::inv_mod(numtheory::pow_mod(x, (-e) as u64, pp), pp)
        }
    };
    let mut t = numtheory::mul_mod(pow(ra, vb), pow(rb, -va), pp);
    if (va * vb) % 2 != 0 {
        t = (pp - t) % pp;
    }
    t
}

fn rational_milnor_zero(x: &MWElement) -> bool {
    let k = x.field();
    match x.degree() {
        n if n < 0 => true,
        0 => integer_part(x) == 0,
        1 => k.is_one(&milnor_product(x)),
        2 => {
            let terms: Vec<(&Symbol, i64)> = eta_free(x).collect();
            let neg: i64 = terms
                .iter()
                .filter(|(s, _)| s.entries.iter().all(|u| q(u).is_negative()))
                .map(|(_, c)| *c)
                .sum();
            if neg.rem_euclid(2) != 0 {
                return false;
            }
            let primes = rational_primes(terms.iter().flat_map(|(s, _)| s.entries.iter().cloned()));
            for p in primes.iter().filter(|p| **p != BigUint::from(2u32)) {
                let pp = p.to_u64().unwrap();
                let mut acc = 1u64;
                for (s, c) in &terms {
                    let t = rational_tame(q(&s.entries[0]), q(&s.entries[1]), p);
                    let t = if *c >= 0 {
                        numtheory::pow_mod(t, *c as u64, pp)
                    } else {
                        numtheory::inv_mod(numtheory::pow_mod(t, c.unsigned_abs(), pp), pp)
                    };
                    acc = numtheory::mul_mod(acc, t, pp);
                }
                if acc != 1 {
                    return false;
                }
            }
            true
        }
        _ => {
            let neg: i64 = eta_free(x)
                .filter(|(s, _)| s.entries.iter().all(|u| q(u).is_negative()))
                .map(|(_, c)| c)
                .sum();
            neg.rem_euclid(2) == 0
        }
    }
}

/// Square class representative: a squarefree integer.
fn rational_class(a: &Elem) -> Elem {
    rat_elem(BigRational::from_integer(numtheory::squarefree_rational(q(a))))
}

fn hasse(form: &[Elem], p: &BigUint) -> i32 {
    let mut acc = 1;
    let mut d = BigRational::one();
    for a in form {
        acc *= numtheory::hilbert_symbol(&d, q(a), p);
        d *= q(a);
    }
    acc
}

fn rational_witt_zero(x: &MWElement) -> bool {
    let k = x.field();
    let exp = witt_expansion(x, usize::MAX);
    let mut classes: BTreeMap<Elem, i64> = BTreeMap::new();
    for (a, c) in exp {
        *classes.entry(rational_class(&a)).or_insert(0) += c;
    }
    classes.retain(|_, c| *c != 0);
    let form = honest_form(k, &classes);
    let m = form.len() as i64;
    if m % 2 != 0 {
        return false;
    }
    let pos = form.iter().filter(|a| q(a).is_positive()).count() as i64;
    if 2 * pos != m {
        return false;
    }
    let det: BigRational = form.iter().map(q).product();
    let sd = if (m / 2) % 2 == 1 { -det } else { det };
    if !numtheory::squarefree_rational(&sd).is_one() || sd.is_negative() {
        return false;
    }
    let half = m / 2;
    let hyperbolic_hasse = |p: &BigUint| -> i32 {
        if (half * (half - 1) / 2) % 2 == 1 {
            numtheory::hilbert_symbol(&-BigRational::one(), &-BigRational::one(), p)
        } else {
            1
        }
    };
    let mut primes = rational_primes(form.iter().cloned());
    primes.push(BigUint::from(2u32));
    primes.sort();
    primes.dedup();
    primes.iter().all(|p| hasse(&form, p) == hyperbolic_hasse(p))
}

/// `Σ c_a ⟨a⟩` with squarefree `a`, written back as `rank + Σ c_a η[a]` (times `η^{-n}` in
/// negative degree, where `⟨-a⟩ = -⟨a⟩` also applies).
fn rational_diagonal_form(x: &MWElement) -> MWElement {
    let k = x.field();
    let n = x.degree();
    let mut classes: BTreeMap<Elem, i64> = BTreeMap::new();
    for (a, c) in witt_expansion(x, usize::MAX) {
        *classes.entry(rational_class(&a)).or_insert(0) += c;
    }
    if n < 0 {
        let mut folded: BTreeMap<Elem, i64> = BTreeMap::new();
        for (a, c) in classes {
            if q(&a).is_negative() {
                *folded.entry(k.neg(&a)).or_insert(0) -= c;
            } else {
                *folded.entry(a).or_insert(0) += c;
            }
        }
        classes = folded;
    }
    classes.retain(|_, c| *c != 0);
    let m = (-n).max(0) as u32;
    let mut out = MWElement::zero(k, n).with_twist(x.twist().clone());
    let rank: i64 = classes.values().sum();
    out.insert(
        Symbol {
            eta: m,
            entries: vec![],
        },
        rank,
    );
    for (a, c) in classes {
        out.insert(
            Symbol {
                eta: m + 1,
                entries: vec![a],
            },
            c,
        );
    }
    out
}

// ---- the Gaussian field ----

fn all_entries(x: &MWElement) -> Vec<&Elem> {
    x.terms().flat_map(|(s, _)| s.entries.iter()).collect()
}

fn gaussian_milnor_zero(x: &MWElement) -> bool {
    let k = x.field();
    match x.degree() {
        n if n < 0 => true,
        0 => integer_part(x) == 0,
        1 => k.is_one(&milnor_product(x)),
        2 => {
            let terms: Vec<(&Symbol, i64)> = eta_free(x).collect();
            let entries: Vec<&Elem> = terms.iter().flat_map(|(s, _)| s.entries.iter()).collect();
            for g in gaussian::odd_primes_of(&entries) {
                let r = g.residue_field();
                let mut acc = r.one();
                for (s, c) in &terms {
                    let t = g.tame(&s.entries[0], &s.entries[1]);
                    acc = r.mul(&acc, &r.pow(&t, *c).unwrap());
                }
                if !r.is_one(&acc) {
                    return false;
                }
            }
            true
        }
        _ => true,
    }
}

fn gaussian_witt_zero(x: &MWElement) -> bool {
    let k = x.field();
    let exp = witt_expansion(x, usize::MAX);
    // -1 is a square, so ⟨-a⟩ = ⟨a⟩ and the sign of a coefficient only matters mod 2
    let form = honest_form(k, &exp);
    if form.len() % 2 != 0 {
        return false;
    }
    let det = k.product(form.iter());
    if !gaussian::is_square(&det) {
        return false;
    }
    for g in gaussian::odd_primes_of(&form.iter().collect::<Vec<_>>()) {
        let mut acc = 1;
        let mut d = k.one();
        for a in &form {
            acc *= g.hilbert(&d, a);
            d = k.mul(&d, a);
        }
        if acc != 1 {
            return false;
        }
    }
    true
}

// ---- function fields ----

fn function_zero(x: &MWElement, p: Projection) -> Result<bool> {
    let x = match p {
        Projection::Witt if x.degree() >= 0 => {
            let mut y = x.clone();
            for _ in 0..=x.degree() {
                y = y.eta_mul();
            }
            return function_zero(&y, Projection::Full);
        }
        Projection::Milnor => x.project(Projection::Milnor),
        _ => x.clone(),
    };
    if x.terms.is_empty() {
        return Ok(true);
    }
    let k = x.field().clone();
    let mut places: Vec<Place> = Vec::new();
    for a in all_entries(&x) {
        for v in place::places_of_support(&k, a)? {
            if !v.is_infinite() && !places.contains(&v) {
                places.push(v);
            }
        }
    }
    for v in &places {
        let r = residues::theta(&x, v)?.1.project(p);
        if !is_zero(&r, p)? {
            return Ok(false);
        }
    }
    let rat = match RationalModel::of(&k) {
        Some(m) => m.model().clone(),
        None => k.clone(),
    };
    let b = rat.base().unwrap().clone();
    let origin = Place::finite(&k, Poly::x(&b))?;
    let s = residues::theta(&x, &origin)?.0.project(p);
    is_zero(&s, p)
}
