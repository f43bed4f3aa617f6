//! Conway polynomials computed by exhaustive search in the standard ordering.
//!
//! `C(p, n)` is the least monic primitive polynomial of degree n over GF(p), in the order
//! that writes it as `x^n - c_{n-1} x^{n-1} + ... + (-1)^n c_0` and compares the tuples
//! `(c_{n-1}, ..., c_0)` lexicographically, subject to `C(p, m)(x^{(p^n-1)/(p^m-1)}) = 0`
//! modulo `C(p, n)` for every proper divisor m of n.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;

use super::{factor, poly, Elem, Field, Poly};
use crate::error::{Error, Result};
use crate::numtheory;

fn cache() -> &'static Mutex<HashMap<(u64, u32), Poly>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Poly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn conway_polynomial(p: u64, n: u32) -> Result<Poly> {
    if let Some(c) = cache().lock().unwrap().get(&(p, n)) {
        return Ok(c.clone());
    }
    let found = search(p, n)?;
    cache().lock().unwrap().insert((p, n), found.clone());
    Ok(found)
}

fn search(p: u64, n: u32) -> Result<Poly> {
    let fp = Field::prime(p)?;
    let order = (p as u128).pow(n);
    if order > 1 << 40 {
        return Err(Error::Unsupported(format!("Conway polynomial for GF({p}^{n})")));
    }
    let order_m1 = BigUint::from(order - 1);
    let cofactors: Vec<BigUint> = numtheory::factor_biguint(&order_m1)
        .into_iter()
        .map(|(r, _)| &order_m1 / r)
        .collect();
    let mut sub: Vec<(Poly, BigUint)> = Vec::new();
    for m in 1..n {
        if n % m == 0 {
            let cm = conway_polynomial(p, m)?;
            let e = &order_m1 / BigUint::from((p as u128).pow(m) - 1);
            sub.push((cm, e));
        }
    }
    let total = (p as u128).pow(n) as u64;
    for idx in 0..total {
        // digits of idx, most significant first, are (c_{n-1}, ..., c_0)
        let mut digits = vec![0u64; n as usize];
        let mut r = idx;
        for d in digits.iter_mut().rev() {
            *d = r % p;
            r /= p;
        }
        let mut coeffs = vec![Elem::Fp(0); n as usize + 1];
        coeffs[n as usize] = Elem::Fp(1);
        for (pos, &c) in digits.iter().enumerate() {
            let i = n as usize - 1 - pos;
            let sign_neg = (n as usize - i) % 2 == 1;
            coeffs[i] = Elem::Fp(if sign_neg { (p - c) % p } else { c });
        }
        let f = Poly::new(coeffs);
        if f.coeffs()[0].is_zero() {
            continue;
        }
        if !factor::is_irreducible(&fp, &f)? {
            continue;
        }
        let x = Poly::x(&fp);
        let primitive = cofactors
            .iter()
            .all(|e| !poly::pow_mod(&fp, &x, e, &f).is_one(&fp));
        if !primitive {
            continue;
        }
        let compatible = sub.iter().all(|(cm, e)| {
            let y = poly::pow_mod(&fp, &x, e, &f);
            let v = poly::rem(&fp, &poly::compose(&fp, cm, &y), &f).unwrap();
            v.is_zero()
        });
        if compatible {
            return Ok(f);
        }
    }
    Err(Error::Invalid(format!("no Conway polynomial found for GF({p}^{n})")))
}

/// Returns (p, n) when `k` is presented as GF(p)[a]/(C(p, n)), including prime fields (n = 1).
pub fn conway_parameters(k: &Field) -> Option<(u64, u32)> {
    match k.kind() {
        super::FieldKind::Prime(p) => Some((*p, 1)),
        super::FieldKind::Ext { base, modulus } => {
            let p = match base.kind() {
                super::FieldKind::Prime(p) => *p,
                _ => return None,
            };
            let n = modulus.degree()? as u32;
            match conway_polynomial(p, n) {
                Ok(c) if &c == modulus => Some((p, n)),
                _ => None,
            }
        }
        _ => None,
    }
}
