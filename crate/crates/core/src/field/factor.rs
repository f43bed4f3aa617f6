//! Polynomial factorization over the supported fields.
//!
//! * finite fields: squarefree decomposition, distinct-degree splitting, Cantor-Zassenhaus;
//! * the rationals: Yun decomposition followed by Zassenhaus with Hensel lifting;
//! * number fields: Trager's norm method;
//! * `B(s)` with `B` finite: rational roots plus the low-degree and `x^p - a` criteria;
//! * `B(s)[x]/(x^m - s)`: through the rational model `B(u)`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::model::RationalModel;
use super::{poly, Elem, Field, FieldKind, Poly};
use crate::error::{Error, Result};
use crate::numtheory;

/// `f = unit * prod(factor^multiplicity)` with monic irreducible factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Elem,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self, k: &Field) -> Poly {
        let mut acc = Poly::constant(self.unit.clone());
        for (f, m) in &self.factors {
            acc = poly::mul(k, &acc, &poly::pow(k, f, *m as u64));
        }
        acc
    }
}

pub fn factor(k: &Field, f: &Poly) -> Result<Factorization> {
    let lc = f
        .lead()
        .cloned()
        .ok_or_else(|| Error::Invalid("factorization of the zero polynomial".into()))?;
    let g = poly::monic(k, f);
    let mut factors = if g.deg() == 0 {
        Vec::new()
    } else if g.deg() == 1 {
        vec![(g, 1)]
    } else if k.is_finite() {
        factor_finite(k, &g)
    } else if matches!(k.kind(), FieldKind::Rationals) {
        factor_rational(&g)
    } else if k.is_number_field() {
        factor_number_field(k, &g)?
    } else if let FieldKind::RatFunc { base } = k.kind() {
        if !base.is_finite() {
            return Err(Error::Unsupported(format!("factorization over {k}")));
        }
        factor_ratfunc(k, &g)?
    } else if let Some(m) = RationalModel::of(k) {
        factor_via_model(&m, &g)?
    } else {
        return Err(Error::Unsupported(format!("factorization over {k}")));
    };
    merge(&mut factors);
    Ok(Factorization { unit: lc, factors })
}

fn merge(factors: &mut Vec<(Poly, u32)>) {
    factors.sort_by(|a, b| (a.0.deg(), &a.0).cmp(&(b.0.deg(), &b.0)));
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (p, m) in factors.drain(..) {
        match out.last_mut() {
            Some((q, n)) if *q == p => *n += m,
            _ => out.push((p, m)),
        }
    }
    *factors = out;
}

pub fn is_irreducible(k: &Field, f: &Poly) -> Result<bool> {
    match f.deg() {
        d if d < 1 => Ok(false),
        1 => Ok(true),
        _ if k.is_finite() => Ok(rabin_irreducible(k, &poly::monic(k, f))),
        _ => {
            let fac = factor(k, f)?;
            Ok(fac.factors.len() == 1 && fac.factors[0].1 == 1)
        }
    }
}

/// Distinct roots of `f` in `k`.
pub fn roots(k: &Field, f: &Poly) -> Result<Vec<Elem>> {
    Ok(factor(k, f)?
        .factors
        .into_iter()
        .filter(|(g, _)| g.deg() == 1)
        .map(|(g, _)| k.neg(&g.coeffs()[0]))
        .collect())
}

// ---------------------------------------------------------------- finite fields

fn order(k: &Field) -> BigUint {
    BigUint::from(k.order().expect("finite field"))
}

fn rabin_irreducible(k: &Field, f: &Poly) -> bool {
    let n = f.degree().unwrap() as u64;
    let q = order(k);
    let x = Poly::x(k);
    let mut powers = Vec::with_capacity(n as usize + 1);
    let mut h = poly::rem(k, &x, f).unwrap();
    powers.push(h.clone());
    for _ in 0..n {
        h = poly::pow_mod(k, &h, &q, f);
        powers.push(h.clone());
    }
    if poly::sub(k, &powers[n as usize], &poly::rem(k, &x, f).unwrap()) != Poly::zero() {
        return false;
    }
    for (r, _) in numtheory::factor_biguint(&BigUint::from(n)) {
        let j = (n / r.to_u64().unwrap()) as usize;
        let g = poly::gcd(k, &poly::sub(k, &powers[j], &x), f);
        if g.deg() > 0 {
            return false;
        }
    }
    true
}

fn pth_root(k: &Field, a: &Elem) -> Elem {
    let q = order(k);
    let p = BigUint::from(k.characteristic());
    k.pow_big(a, &(q / p))
}

fn squarefree_finite(k: &Field, f: &Poly) -> Vec<(Poly, u32)> {
    let p = k.characteristic() as usize;
    let mut out = Vec::new();
    let mut c = poly::gcd(k, f, &poly::derivative(k, f));
    let mut w = poly::div_exact(k, f, &c).unwrap();
    let mut i = 1u32;
    while w.deg() > 0 {
        let y = poly::gcd(k, &w, &c);
        let fac = poly::div_exact(k, &w, &y).unwrap();
        if fac.deg() > 0 {
            out.push((fac, i));
        }
        c = poly::div_exact(k, &c, &y).unwrap();
        w = y;
        i += 1;
    }
    if c.deg() > 0 {
        let coeffs: Vec<Elem> = c
            .coeffs()
            .iter()
            .step_by(p)
            .map(|a| pth_root(k, a))
            .collect();
        let root = Poly::new(coeffs);
        for (g, m) in squarefree_finite(k, &root) {
            out.push((g, m * p as u32));
        }
    }
    out
}

fn distinct_degree(k: &Field, f: &Poly) -> Vec<(Poly, usize)> {
    let q = order(k);
    let x = Poly::x(k);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = poly::rem(k, &x, &rest).unwrap();
    let mut i = 1usize;
    while rest.deg() >= 2 * i as i64 {
        h = poly::pow_mod(k, &h, &q, &rest);
        let g = poly::gcd(k, &rest, &poly::sub(k, &h, &x));
        if g.deg() > 0 {
            rest = poly::div_exact(k, &rest, &g).unwrap();
            h = poly::rem(k, &h, &rest).unwrap();
            out.push((g, i));
        }
        i += 1;
    }
    if rest.deg() > 0 {
        let d = rest.degree().unwrap();
        out.push((rest, d));
    }
    out
}

fn equal_degree(k: &Field, f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.degree().unwrap();
    if n == d {
        return vec![f.clone()];
    }
    let q = order(k);
    let e = (q.pow(d as u32) - 1u32) >> 1;
    let mut parts = vec![f.clone()];
    while parts.len() < n / d {
        let a = Poly::new((0..n).map(|_| k.random_finite(rng)).collect());
        if a.deg() < 1 {
            continue;
        }
        let b = poly::sub(k, &poly::pow_mod(k, &a, &e, f), &Poly::one(k));
        let mut next = Vec::new();
        for u in parts {
            if u.degree().unwrap() == d {
                next.push(u);
                continue;
            }
            let g = poly::gcd(k, &u, &b);
            if g.deg() > 0 && g.deg() < u.deg() {
                let h = poly::div_exact(k, &u, &g).unwrap();
                next.push(g);
                next.push(h);
            } else {
                next.push(u);
            }
        }
        parts = next;
    }
    parts
}

fn factor_finite(k: &Field, f: &Poly) -> Vec<(Poly, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let mut out = Vec::new();
    for (g, m) in squarefree_finite(k, f) {
        for (h, d) in distinct_degree(k, &g) {
            for irr in equal_degree(k, &h, d, &mut rng) {
                out.push((poly::monic(k, &irr), m));
            }
        }
    }
    out
}

// ---------------------------------------------------------------- characteristic zero

/// Yun's squarefree decomposition of a monic polynomial in characteristic zero.
fn yun(k: &Field, f: &Poly) -> Vec<(Poly, u32)> {
    let df = poly::derivative(k, f);
    let a0 = poly::gcd(k, f, &df);
    let mut b = poly::div_exact(k, f, &a0).unwrap();
    let mut c = poly::div_exact(k, &df, &a0).unwrap();
    let mut d = poly::sub(k, &c, &poly::derivative(k, &b));
    let mut i = 1;
    let mut out = Vec::new();
    while b.deg() > 0 {
        let a = poly::gcd(k, &b, &d);
        b = poly::div_exact(k, &b, &a).unwrap();
        c = poly::div_exact(k, &d, &a).unwrap();
        d = poly::sub(k, &c, &poly::derivative(k, &b));
        if a.deg() > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

type ZPoly = Vec<BigInt>;

fn z_trim(mut v: ZPoly) -> ZPoly {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn z_mul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    z_trim(v)
}

fn z_sub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    z_trim(
        (0..n)
            .map(|i| {
                a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default()
            })
            .collect(),
    )
}

fn z_add_scaled(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    z_trim(
        (0..n)
            .map(|i| {
                a.get(i).cloned().unwrap_or_default() + m * b.get(i).cloned().unwrap_or_default()
            })
            .collect(),
    )
}

fn z_mod(a: &ZPoly, m: &BigInt) -> ZPoly {
    z_trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn z_symmetric(a: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m >> 1;
    z_trim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Exact quotient of `a` by the monic `b` over the integers.
fn z_div_monic(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let db = b.len() - 1;
    if a.len() < b.len() {
        return if a.is_empty() { Some(Vec::new()) } else { None };
    }
    let mut r = a.clone();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] -= &c * y;
        }
        q[i] = c;
    }
    if r.iter().all(|c| c.is_zero()) {
        Some(z_trim(q))
    } else {
        None
    }
}

fn to_fp(a: &ZPoly, p: u64) -> Poly {
    let pb = BigInt::from(p);
    Poly::new(
        a.iter()
            .map(|c| Elem::Fp(c.mod_floor(&pb).to_u64().unwrap()))
            .collect(),
    )
}

fn from_fp(a: &Poly) -> ZPoly {
    a.coeffs()
        .iter()
        .map(|c| match c {
            Elem::Fp(x) => BigInt::from(*x),
            _ => unreachable!(),
        })
        .collect()
}

fn hensel_pair(f: &ZPoly, g: &Poly, h: &Poly, fp: &Field, p: u64, k: u32) -> (ZPoly, ZPoly) {
    // s*g + t*h = 1 over GF(p); only t is needed for the correction step
    let (_, _, t) = poly::xgcd(fp, g, h);
    let mut gz = from_fp(g);
    let mut hz = from_fp(h);
    let pb = BigInt::from(p);
    let mut m = pb.clone();
    for _ in 1..k {
        let diff = z_sub(f, &z_mul(&gz, &hz));
        let e: ZPoly = diff.iter().map(|c| c / &m).collect();
        let e = to_fp(&z_trim(e), p);
        let et = poly::mul(fp, &e, &t);
        let (_, dg) = poly::divrem(fp, &et, g).unwrap();
        let dh = poly::div_exact(fp, &poly::sub(fp, &e, &poly::mul(fp, &dg, h)), g).unwrap();
        gz = z_add_scaled(&gz, &from_fp(&dg), &m);
        hz = z_add_scaled(&hz, &from_fp(&dh), &m);
        m *= &pb;
    }
    (z_mod(&gz, &m), z_mod(&hz, &m))
}

fn hensel_multi(f: &ZPoly, facs: &[Poly], fp: &Field, p: u64, k: u32) -> Vec<ZPoly> {
    if facs.len() == 1 {
        return vec![z_mod(f, &BigInt::from(p).pow(k))];
    }
    let mid = facs.len() / 2;
    let g = poly::product(fp, &facs[..mid]);
    let h = poly::product(fp, &facs[mid..]);
    let (gz, hz) = hensel_pair(f, &g, &h, fp, p, k);
    let mut out = hensel_multi(&gz, &facs[..mid], fp, p, k);
    out.extend(hensel_multi(&hz, &facs[mid..], fp, p, k));
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Irreducible monic factors over the integers of a monic squarefree integer polynomial.
fn zassenhaus_monic(g: &ZPoly) -> Vec<ZPoly> {
    let n = g.len() - 1;
    if n <= 1 {
        return vec![g.clone()];
    }
    let mut p = 3u64;
    let (fp, modp) = loop {
        if numtheory::is_prime_u64(p) {
            let fp = Field::prime(p).unwrap();
            let gp = to_fp(g, p);
            if poly::gcd(&fp, &gp, &poly::derivative(&fp, &gp)).deg() == 0 {
                break (fp, gp);
            }
        }
        p += 2;
    };
    let facs: Vec<Poly> = factor_finite(&fp, &modp).into_iter().map(|(f, _)| f).collect();
    if facs.len() == 1 {
        return vec![g.clone()];
    }
    let norm2: BigInt = g.iter().map(|c| c * c).sum();
    let norm = norm2.magnitude().sqrt() + 1u32;
    let bound = BigInt::from_biguint(Sign::Plus, norm) * BigInt::from(2).pow(n as u32 + 1);
    let mut k = 1u32;
    let pb = BigInt::from(p);
    while pb.pow(k) <= bound {
        k += 1;
    }
    let modulus = pb.pow(k);
    let mut lifted = hensel_multi(g, &facs, &fp, p, k);
    let mut rest = g.clone();
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut found = None;
        for combo in combinations(lifted.len(), s) {
            let prod = combo
                .iter()
                .fold(vec![BigInt::one()], |acc, &i| z_mod(&z_mul(&acc, &lifted[i]), &modulus));
            let cand = z_symmetric(&prod, &modulus);
            if let Some(q) = z_div_monic(&rest, &cand) {
                found = Some((combo, cand, q));
                break;
            }
        }
        match found {
            Some((combo, cand, q)) => {
                out.push(cand);
                rest = q;
                lifted = lifted
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !combo.contains(i))
                    .map(|(_, f)| f)
                    .collect();
            }
            None => s += 1,
        }
    }
    if rest.len() > 1 {
        out.push(rest);
    }
    out
}

fn rat_coeffs(f: &Poly) -> Vec<BigRational> {
    f.coeffs()
        .iter()
        .map(|c| match c {
            Elem::Q(x) => x.clone(),
            _ => unreachable!(),
        })
        .collect()
}

/// Primitive integer polynomial with positive leading coefficient proportional to `f`.
fn primitive_integer(f: &Poly) -> ZPoly {
    let c = rat_coeffs(f);
    let den = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: ZPoly = c.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let cont = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let mut ints: ZPoly = ints.iter().map(|x| x / &cont).collect();
    if ints.last().unwrap().is_negative() {
        ints = ints.iter().map(|x| -x).collect();
    }
    ints
}

fn factor_squarefree_integer(g: &ZPoly) -> Vec<ZPoly> {
    let n = g.len() - 1;
    let a = g[n].clone();
    // G(x) = a^{n-1} g(x/a) is monic with integer coefficients
    let gm: ZPoly = (0..=n)
        .map(|i| {
            if i == n {
                BigInt::one()
            } else {
                &g[i] * a.pow((n - 1 - i) as u32)
            }
        })
        .collect();
    zassenhaus_monic(&gm)
        .into_iter()
        .map(|h| {
            // h(a x), then primitive part
            let scaled: ZPoly = h
                .iter()
                .enumerate()
                .map(|(i, c)| c * a.pow(i as u32))
                .collect();
            let cont = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            scaled.iter().map(|x| x / &cont).collect()
        })
        .collect()
}

fn factor_rational(f: &Poly) -> Vec<(Poly, u32)> {
    let q = Field::rationals();
    let mut out = Vec::new();
    for (g, m) in yun(&q, f) {
        let gz = primitive_integer(&g);
        for h in factor_squarefree_integer(&gz) {
            let hp = Poly::new(
                h.iter()
                    .map(|c| Elem::Q(BigRational::from_integer(c.clone())))
                    .collect(),
            );
            out.push((poly::monic(&q, &hp), m));
        }
    }
    out
}

// ---------------------------------------------------------------- number fields

fn det(b: &Field, m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Poly::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != c)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = poly::mul(b, &m[0][c], &det(b, &minor));
        acc = if c % 2 == 0 {
            poly::add(b, &acc, &term)
        } else {
            poly::sub(b, &acc, &term)
        };
    }
    acc
}

/// Norm from `k[x]` to `base[x]` for a simple extension `k = base[a]/(m)`.
pub fn norm_poly(k: &Field, g: &Poly) -> Poly {
    let b = k.base().unwrap();
    let d = k.ext_degree();
    let alpha = k.gen();
    let coord = |e: &Elem, r: usize| -> Elem {
        match e {
            Elem::Ext(p) => p.coeff(b, r),
            _ => unreachable!(),
        }
    };
    let powers: Vec<Elem> = (0..2 * d).map(|i| k.pow(&alpha, i as i64).unwrap()).collect();
    // h_j(x) = sum_i coord_j(g_i) x^i
    let h: Vec<Poly> = (0..d)
        .map(|j| Poly::new(g.coeffs().iter().map(|c| coord(c, j)).collect()))
        .collect();
    let m: Vec<Vec<Poly>> = (0..d)
        .map(|r| {
            (0..d)
                .map(|c| {
                    let mut acc = Poly::zero();
                    for (j, hj) in h.iter().enumerate() {
                        let w = coord(&powers[j + c], r);
                        if !w.is_zero() {
                            acc = poly::add(b, &acc, &poly::scale(b, hj, &w));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    det(b, &m)
}

fn factor_number_field(k: &Field, f: &Poly) -> Result<Vec<(Poly, u32)>> {
    let mut out = Vec::new();
    for (g, m) in yun(k, f) {
        for h in trager(k, &g)? {
            out.push((h, m));
        }
    }
    Ok(out)
}

fn trager(k: &Field, g: &Poly) -> Result<Vec<Poly>> {
    let b = k.base().unwrap();
    let alpha = k.gen();
    for s in [0i64, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5, 6, -6, 7, -7] {
        let sa = k.mul(&k.from_i64(s), &alpha);
        let shift = Poly::new(vec![k.neg(&sa), k.one()]);
        let gs = poly::compose(k, g, &shift);
        let n = norm_poly(k, &gs);
        if poly::gcd(b, &n, &poly::derivative(b, &n)).deg() > 0 {
            continue;
        }
        let back = Poly::new(vec![sa.clone(), k.one()]);
        let mut out = Vec::new();
        for (ni, _) in factor(b, &n)?.factors {
            let nk = ni.map(|c| k.constant(c.clone()));
            let h = poly::gcd(k, &gs, &nk);
            if h.deg() > 0 {
                out.push(poly::monic(k, &poly::compose(k, &h, &back)));
            }
        }
        return Ok(out);
    }
    Err(Error::Unsupported(format!("no squarefree norm found over {k}")))
}

// ---------------------------------------------------------------- rational function fields

fn divisors(b: &Field, c: &Poly) -> Result<Vec<Poly>> {
    let fac = factor(b, c)?;
    let mut out = vec![Poly::one(b)];
    for (p, e) in fac.factors {
        let mut next = Vec::new();
        for d in &out {
            let mut cur = d.clone();
            for _ in 0..=e {
                next.push(cur.clone());
                cur = poly::mul(b, &cur, &p);
            }
        }
        out = next;
    }
    Ok(out)
}

/// A root in `B(s)` of a monic polynomial over `B(s)`, `B` finite, by the rational root theorem.
fn ratfunc_root(k: &Field, f: &Poly) -> Result<Option<Elem>> {
    let b = k.base().unwrap();
    if f.coeffs()[0].is_zero() {
        return Ok(Some(k.zero()));
    }
    let den = f.coeffs().iter().fold(Poly::one(b), |acc, c| match c {
        Elem::Frac(_, d) => {
            let g = poly::gcd(b, &acc, d);
            poly::mul(b, &acc, &poly::div_exact(b, d, &g).unwrap())
        }
        _ => unreachable!(),
    });
    let ints: Vec<Poly> = f
        .coeffs()
        .iter()
        .map(|c| match c {
            Elem::Frac(n, d) => poly::mul(b, n, &poly::div_exact(b, &den, d).unwrap()),
            _ => unreachable!(),
        })
        .collect();
    let nums = divisors(b, &ints[0])?;
    let dens = divisors(b, ints.last().unwrap())?;
    let units: Vec<Elem> = b.elements()?.into_iter().skip(1).collect();
    for a in &nums {
        for d in &dens {
            if poly::gcd(b, a, d).deg() > 0 {
                continue;
            }
            for u in &units {
                let r = k.frac(poly::scale(b, a, u), d.clone())?;
                if poly::eval(k, f, &r).is_zero() {
                    return Ok(Some(r));
                }
            }
        }
    }
    Ok(None)
}

fn factor_ratfunc(k: &Field, f: &Poly) -> Result<Vec<(Poly, u32)>> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    while rest.deg() > 0 {
        match ratfunc_root(k, &rest)? {
            Some(r) => {
                let lin = Poly::linear(k, &r);
                let mut m = 0;
                while rest.deg() > 0 {
                    let (q, rem) = poly::divrem(k, &rest, &lin)?;
                    if !rem.is_zero() {
                        break;
                    }
                    rest = q;
                    m += 1;
                }
                out.push((lin, m));
            }
            None => break,
        }
    }
    let d = rest.deg();
    if d <= 0 {
        return Ok(out);
    }
    let p = k.characteristic() as i64;
    let pure_power = d == p && rest.coeffs()[1..d as usize].iter().all(|c| c.is_zero());
    if d <= 3 || pure_power {
        out.push((rest, 1));
        Ok(out)
    } else {
        Err(Error::Unsupported(format!(
            "rootless factor of degree {d} over {k}"
        )))
    }
}

fn factor_via_model(m: &RationalModel, f: &Poly) -> Result<Vec<(Poly, u32)>> {
    let g = f.try_map(|c| m.to_model(c))?;
    let fac = factor(m.model(), &g)?;
    let k = m.field();
    let mut out = Vec::new();
    for (h, e) in fac.factors {
        let back = h.try_map(|c| m.from_model(c))?;
        out.push((poly::monic(k, &back), e));
    }
    Ok(out)
}
