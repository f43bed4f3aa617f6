//! Local data of the Gaussian field `Q[i]/(i^2+1)` at odd primes: valuations, residues and
//! quadratic characters.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::field::{Elem, Field, FieldKind, Poly};
use crate::numtheory;

/// Whether `k` is `Q[i]/(i^2 + 1)`.
pub fn is_gaussian(k: &Field) -> bool {
    let FieldKind::Ext { base, modulus } = k.kind() else {
        return false;
    };
    if !matches!(base.kind(), FieldKind::Rationals) {
        return false;
    }
    let one = base.one();
    *modulus == Poly::new(vec![one.clone(), base.zero(), one])
}

pub fn parts(a: &Elem) -> (BigRational, BigRational) {
    let Elem::Ext(p) = a else {
        panic!("not a Gaussian element")
    };
    let get = |i: usize| match p.coeffs().get(i) {
        Some(Elem::Q(x)) => x.clone(),
        _ => BigRational::zero(),
    };
    (get(0), get(1))
}

type GInt = (BigInt, BigInt);

fn gmul(a: &GInt, b: &GInt) -> GInt {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn gnorm(a: &GInt) -> BigInt {
    &a.0 * &a.0 + &a.1 * &a.1
}

/// Exact quotient, if `b` divides `a`.
fn gdiv_exact(a: &GInt, b: &GInt) -> Option<GInt> {
    let n = gnorm(b);
    let num = gmul(a, &(b.0.clone(), -&b.1));
    if num.0.is_multiple_of(&n) && num.1.is_multiple_of(&n) {
        Some((num.0 / &n, num.1 / &n))
    } else {
        None
    }
}

fn round_div(a: &BigInt, n: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (a * &two + n).div_floor(&(n * &two))
}

fn grem(a: &GInt, b: &GInt) -> GInt {
    let n = gnorm(b);
    let num = gmul(a, &(b.0.clone(), -&b.1));
    let q = (round_div(&num.0, &n), round_div(&num.1, &n));
    let qb = gmul(&q, b);
    (&a.0 - &qb.0, &a.1 - &qb.1)
}

fn ggcd(mut a: GInt, mut b: GInt) -> GInt {
    while !(b.0.is_zero() && b.1.is_zero()) {
        let r = grem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// An odd prime of `Z[i]`.
#[derive(Clone, Debug)]
pub struct GaussPrime {
    pub p: u64,
    /// For split primes: a generator `π` and the root `ρ` of `x^2+1` mod p with `i ≡ ρ (mod π)`.
    split: Option<(GInt, u64)>,
    residue: Field,
}

impl GaussPrime {
    pub fn residue_field(&self) -> &Field {
        &self.residue
    }

    pub fn label(&self) -> String {
        match &self.split {
            Some((_, rho)) => format!("({}, i-{})", self.p, rho),
            None => format!("({})", self.p),
        }
    }

    fn red(&self, z: &GInt) -> Elem {
        let p = self.p;
        let pb = BigInt::from(p);
        let m = |x: &BigInt| x.mod_floor(&pb).to_u64().unwrap();
        match &self.split {
            Some((_, rho)) => Elem::Fp((m(&z.0) + numtheory::mul_mod(m(&z.1), *rho, p)) % p),
            None => Elem::Ext(Poly::new(vec![Elem::Fp(m(&z.0)), Elem::Fp(m(&z.1))])),
        }
    }

    /// `a = π^v u` with `u` a unit; returns `v` and the residue of `u`.
    pub fn decompose(&self, a: &Elem) -> (i64, Elem) {
        let (x, y) = parts(a);
        let d = x.denom().lcm(y.denom());
        let z: GInt = (
            (&x * BigRational::from_integer(d.clone())).to_integer(),
            (&y * BigRational::from_integer(d.clone())).to_integer(),
        );
        let pb = BigInt::from(self.p);
        let k = &self.residue;
        match &self.split {
            Some((pi, _)) => {
                let mut z = z;
                let mut vz = 0i64;
                while let Some(q) = gdiv_exact(&z, pi) {
                    z = q;
                    vz += 1;
                }
                let mut d = d;
                let mut vd = 0i64;
                while d.is_multiple_of(&pb) {
                    d /= &pb;
                    vd += 1;
                }
                let conj = (pi.0.clone(), -&pi.1);
                let num = self.red(&z);
                let den = k.mul(
                    &self.red(&(d, BigInt::zero())),
                    &k.pow(&self.red(&conj), vd).unwrap(),
                );
                (vz - vd, k.div(&num, &den).unwrap())
            }
            None => {
                let mut z = z;
                let mut vz = 0i64;
                while z.0.is_multiple_of(&pb) && z.1.is_multiple_of(&pb) {
                    z = (&z.0 / &pb, &z.1 / &pb);
                    vz += 1;
                }
                let mut d = d;
                let mut vd = 0i64;
                while d.is_multiple_of(&pb) {
                    d /= &pb;
                    vd += 1;
                }
                let num = self.red(&z);
                let den = self.red(&(d, BigInt::zero()));
                (vz - vd, k.div(&num, &den).unwrap())
            }
        }
    }

    /// `+1` or `-1` according as the residue is a square.
    pub fn chi(&self, u: &Elem) -> i32 {
        if self.residue.is_square_finite(u).unwrap() {
            1
        } else {
            -1
        }
    }

    /// Tame symbol `(-1)^{ab} x^b / y^a` of `{x, y}`.
    pub fn tame(&self, x: &Elem, y: &Elem) -> Elem {
        let k = &self.residue;
        let (a, u) = self.decompose(x);
        let (b, w) = self.decompose(y);
        let mut t = k.div(&k.pow(&u, b).unwrap(), &k.pow(&w, a).unwrap()).unwrap();
        if (a * b) % 2 != 0 {
            t = k.neg(&t);
        }
        t
    }

    pub fn hilbert(&self, x: &Elem, y: &Elem) -> i32 {
        self.chi(&self.tame(x, y))
    }
}

fn prime_above(p: u64) -> GaussPrime {
    let fp = Field::prime(p).unwrap();
    if p % 4 == 3 {
        let one = fp.one();
        let residue = Field::extension_unchecked(&fp, Poly::new(vec![one.clone(), fp.zero(), one]), "i");
        return GaussPrime {
            p,
            split: None,
            residue,
        };
    }
    let rho = numtheory::sqrt_minus_one(p);
    let pi = ggcd((BigInt::from(p), BigInt::zero()), (BigInt::from(rho), BigInt::from(-1)));
    GaussPrime {
        p,
        split: Some((pi, rho)),
        residue: fp,
    }
}

/// The odd primes of `Z[i]` above a rational prime.
pub fn primes_above(p: u64) -> Vec<GaussPrime> {
    let first = prime_above(p);
    match &first.split {
        None => vec![first],
        Some((_, rho)) => {
            let mut second = prime_above(p);
            let rho2 = p - rho;
            let pi2 = ggcd((BigInt::from(p), BigInt::zero()), (BigInt::from(rho2), BigInt::from(-1)));
            second.split = Some((pi2, rho2));
            let mut v = vec![first, second];
            v.sort_by_key(|g| g.split.as_ref().map(|s| s.1));
            v
        }
    }
}

/// Odd primes at which some of the given nonzero elements is not a unit.
pub fn odd_primes_of(elems: &[&Elem]) -> Vec<GaussPrime> {
    let mut ps: Vec<u64> = Vec::new();
    for a in elems {
        let (x, y) = parts(a);
        let n = &x * &x + &y * &y;
        for p in numtheory::primes_of_rational(&n) {
            let p = p.to_u64().expect("prime fits in u64");
            if p != 2 {
                ps.push(p);
            }
        }
    }
    ps.sort_unstable();
    ps.dedup();
    ps.into_iter().flat_map(primes_above).collect()
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

/// Square test in the Gaussian field.
pub fn is_square(a: &Elem) -> bool {
    let (x, y) = parts(a);
    if x.is_zero() && y.is_zero() {
        return true;
    }
    let Some(n) = rational_sqrt(&(&x * &x + &y * &y)) else {
        return false;
    };
    let two = BigRational::from_integer(BigInt::from(2));
    for s in [n.clone(), -n] {
        let u2 = (&x + &s) / &two;
        if u2.is_zero() {
            if y.is_zero() && rational_sqrt(&-x.clone()).is_some() {
                return true;
            }
            continue;
        }
        if let Some(u) = rational_sqrt(&u2) {
            let v = &y / (&two * &u);
            if &u * &u - &v * &v == x {
                return true;
            }
        }
    }
    false
}

/// Norm of `p` as a natural number, for labels.
pub fn norm_of(g: &GaussPrime) -> BigUint {
    match g.split {
        Some(_) => BigUint::from(g.p),
        None => BigUint::from(g.p) * BigUint::from(g.p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::parse::{make_field, parse_elem};

    #[test]
    fn squares_and_valuations() {
        let k = make_field("Q[i]/(i^2+1)").unwrap();
        assert!(is_gaussian(&k));
        assert!(is_square(&parse_elem(&k, "2*i").unwrap()));
        assert!(is_square(&parse_elem(&k, "-1").unwrap()));
        assert!(!is_square(&parse_elem(&k, "3").unwrap()));
        let a = parse_elem(&k, "(2+i)^3*(2-i)/5").unwrap();
        let primes = odd_primes_of(&[&a]);
        assert_eq!(primes.len(), 2);
        let vals: Vec<i64> = primes.iter().map(|g| g.decompose(&a).0).collect();
        assert_eq!(vals.iter().sum::<i64>(), 2);
        assert!(vals.contains(&2) && vals.contains(&0));
    }
}
