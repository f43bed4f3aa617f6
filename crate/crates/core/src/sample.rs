//! Seeded random elements for the verification suites.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{factor, Elem, Field, FieldKind, Poly};
use crate::gw::GWClass;
use crate::kmw::MWElement;

/// The generator behind every randomized check.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for a named sub-check.
pub fn substream(seed: u64, label: &str) -> ChaCha8Rng {
    let h = label
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
    loop {
        let n: i64 = rng.gen_range(-12..=12);
        let d: i64 = rng.gen_range(1..=4);
        if n != 0 {
            return BigRational::new(BigInt::from(n), BigInt::from(d));
        }
    }
}

/// A random polynomial of degree at most `max_deg` over a finite or number field.
pub fn poly<R: Rng + ?Sized>(k: &Field, max_deg: usize, rng: &mut R) -> Result<Poly> {
    let d = rng.gen_range(0..=max_deg);
    let mut c = Vec::with_capacity(d + 1);
    for _ in 0..=d {
        c.push(scalar(k, rng)?);
    }
    Ok(Poly::new(c))
}

/// A random element of a finite field, a finite extension of `Q` or of a rational function
/// field, or a rational function field (a ratio of polynomials of degree at most two over the
/// constants).
pub fn scalar<R: Rng + ?Sized>(k: &Field, rng: &mut R) -> Result<Elem> {
    if k.is_finite() {
        return Ok(k.random_finite(rng));
    }
    match k.kind() {
        FieldKind::Rationals => Ok(Elem::Q(small_rational(rng))),
        FieldKind::RatFunc { base } => {
            let n = poly(base, 2, rng)?;
            let d = loop {
                let d = poly(base, 1, rng)?;
                if !d.is_zero() {
                    break d;
                }
            };
            k.frac(n, d)
        }
        FieldKind::Ext { base, modulus } => {
            let mut c = Vec::new();
            for _ in 0..modulus.degree().unwrap() {
                c.push(if rng.gen_bool(0.6) { scalar(base, rng)? } else { base.zero() });
            }
            Ok(Elem::Ext(Poly::new(c)))
        }
        _ => Err(Error::Unsupported(format!("random elements of {k}"))),
    }
}

pub fn unit<R: Rng + ?Sized>(k: &Field, rng: &mut R) -> Result<Elem> {
    loop {
        let a = scalar(k, rng)?;
        if !a.is_zero() {
            return Ok(a);
        }
    }
}

/// A unit other than `1` where the field has one (`[1] = 0`).
pub fn nontrivial_unit<R: Rng + ?Sized>(k: &Field, rng: &mut R) -> Result<Elem> {
    let mut a = unit(k, rng)?;
    for _ in 0..8 {
        if !k.is_one(&a) {
            break;
        }
        a = unit(k, rng)?;
    }
    Ok(a)
}

/// A random monic irreducible polynomial of the given degree over a finite field.
pub fn irreducible<R: Rng + ?Sized>(k: &Field, deg: usize, rng: &mut R) -> Result<Poly> {
    if !k.is_finite() {
        return Err(Error::Unsupported(format!("random irreducibles over {k}")));
    }
    loop {
        let mut c: Vec<Elem> = (0..deg).map(|_| k.random_finite(rng)).collect();
        c.push(k.one());
        let p = Poly::new(c);
        if factor::is_irreducible(k, &p)? {
            return Ok(p);
        }
    }
}

/// A random element of `K^MW_n(k)`: a sum of at most `max_terms` symbols `c η^m [u_1, ..., u_{n+m}]`
/// with small coefficients and at most one surplus `η`.
pub fn mw<R: Rng + ?Sized>(k: &Field, n: i64, max_terms: usize, rng: &mut R) -> Result<MWElement> {
    let mut x = MWElement::zero(k, n);
    let terms = rng.gen_range(1..=max_terms.max(1));
    for _ in 0..terms {
        let base_eta = (-n).max(0) as u32;
        let eta = base_eta + u32::from(rng.gen_bool(if n <= 0 { 0.6 } else { 0.4 }));
        let len = (n + eta as i64) as usize;
        let mut entries = Vec::with_capacity(len);
        for _ in 0..len {
            entries.push(nontrivial_unit(k, rng)?);
        }
        let c: i64 = *[-2, -1, 1, 1, 2].get(rng.gen_range(0..5)).unwrap();
        x = x.add(&MWElement::symbol(k, c, eta, entries)?)?;
    }
    Ok(x)
}

/// A random virtual form: a diagonal form minus a shorter one.
pub fn gw<R: Rng + ?Sized>(k: &Field, max_rank: usize, rng: &mut R) -> Result<GWClass> {
    let pos: Vec<Elem> = (0..rng.gen_range(1..=max_rank.max(1)))
        .map(|_| unit(k, rng))
        .collect::<Result<_>>()?;
    let neg: Vec<Elem> = (0..rng.gen_range(0..=max_rank / 2))
        .map(|_| unit(k, rng))
        .collect::<Result<_>>()?;
    GWClass::diagonal(k, &pos)?.sub(&GWClass::diagonal(k, &neg)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let k = Field::gf(9).unwrap();
        let a = mw(&k, 1, 3, &mut rng(7)).unwrap();
        let b = mw(&k, 1, 3, &mut rng(7)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.degree(), 1);
        let p = irreducible(&k, 2, &mut substream(1, "x")).unwrap();
        assert!(factor::is_irreducible(&k, &p).unwrap());
    }
}
