//! Integer arithmetic helpers: primality, factorization, Legendre and Hilbert symbols.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Deterministic Miller-Rabin with the first 25 primes as bases; exact below 3.3e24
/// and overwhelmingly reliable above.
pub fn is_prime(n: &BigUint) -> bool {
    if *n < BigUint::from(2u32) {
        return false;
    }
    for &p in SMALL_PRIMES.iter() {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'outer: for &a in SMALL_PRIMES.iter() {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&BigUint::from(n))
}

fn pollard_brent(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                let steps = std::cmp::min(128, r - k);
                for _ in 0..steps {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += steps;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
        c += 1u32;
    }
}

/// Prime factorization of a positive integer, sorted by prime.
pub fn factor_biguint(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut m = n.clone();
    let mut p: u32 = 2;
    while p < 2000 {
        let bp = BigUint::from(p);
        if &bp * &bp > m {
            break;
        }
        let mut e = 0;
        while (&m % &bp).is_zero() {
            m /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![m];
    let mut big: Vec<BigUint> = Vec::new();
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            big.push(m);
            continue;
        }
        let d = pollard_brent(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
    for q in big {
        if let Some(entry) = out.iter_mut().find(|(r, _)| *r == q) {
            entry.1 += 1;
        } else {
            out.push((q, 1));
        }
    }
    out.sort();
    out
}

/// Prime factorization of |n| for a nonzero integer.
pub fn factor_bigint(n: &BigInt) -> Vec<(BigUint, u32)> {
    factor_biguint(n.magnitude())
}

/// Odd primes dividing the numerator or denominator of a nonzero rational.
pub fn primes_of_rational(r: &BigRational) -> Vec<BigUint> {
    let mut ps: Vec<BigUint> = factor_bigint(r.numer())
        .into_iter()
        .chain(factor_bigint(r.denom()))
        .map(|(p, _)| p)
        .collect();
    ps.sort();
    ps.dedup();
    ps
}

/// p-adic valuation of a nonzero integer.
pub fn val_int(n: &BigInt, p: &BigUint) -> u32 {
    let p = BigInt::from_biguint(Sign::Plus, p.clone());
    let mut m = n.clone();
    let mut v = 0;
    while !m.is_zero() && (&m % &p).is_zero() {
        m /= &p;
        v += 1;
    }
    v
}

/// p-adic valuation of a nonzero rational.
pub fn val_rat(r: &BigRational, p: &BigUint) -> i64 {
    val_int(r.numer(), p) as i64 - val_int(r.denom(), p) as i64
}

/// Squarefree integer in the square class of a nonzero rational.
pub fn squarefree_rational(r: &BigRational) -> BigInt {
    let n = r.numer() * r.denom();
    let mut s = BigInt::one();
    for (p, e) in factor_bigint(&n) {
        if e % 2 == 1 {
            s *= BigInt::from_biguint(Sign::Plus, p);
        }
    }
    if n.is_negative() {
        -s
    } else {
        s
    }
}

/// Reduction of a rational number modulo a prime not dividing its denominator.
pub fn rat_mod(r: &BigRational, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let n = r.numer().mod_floor(&pb).to_u64().unwrap();
    let d = r.denom().mod_floor(&pb).to_u64().unwrap();
    assert!(d != 0, "denominator divisible by the prime");
    mul_mod(n, inv_mod(d, p), p)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Inverse modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero");
    pow_mod(a, p - 2, p)
}

/// Legendre symbol (a/p) for an odd prime p, as -1, 0 or 1.
pub fn legendre(a: &BigInt, p: &BigUint) -> i32 {
    let pi = BigInt::from_biguint(Sign::Plus, p.clone());
    let a = a.mod_floor(&pi);
    if a.is_zero() {
        return 0;
    }
    let e = (p - 1u32) >> 1;
    let r = a.magnitude().modpow(&e, p);
    if r.is_one() {
        1
    } else {
        -1
    }
}

fn unit_part(n: &BigInt, p: &BigUint) -> (u32, BigInt) {
    let pi = BigInt::from_biguint(Sign::Plus, p.clone());
    let mut m = n.clone();
    let mut v = 0;
    while (&m % &pi).is_zero() {
        m /= &pi;
        v += 1;
    }
    (v, m)
}

/// Hilbert symbol (a, b)_p over the p-adic numbers for nonzero rationals, p prime.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, p: &BigUint) -> i32 {
    let a = a.numer() * a.denom();
    let b = b.numer() * b.denom();
    let (alpha, u) = unit_part(&a, p);
    let (beta, v) = unit_part(&b, p);
    if *p == BigUint::from(2u32) {
        let m8 = |x: &BigInt| x.mod_floor(&BigInt::from(8)).to_u32().unwrap();
        let eps = |x: u32| ((x as i64 - 1) / 2).rem_euclid(2) as u32;
        let omega = |x: u32| (((x * x) as i64 - 1) / 8).rem_euclid(2) as u32;
        let (u8_, v8) = (m8(&u), m8(&v));
        let e = eps(u8_) * eps(v8) + alpha * omega(v8) + beta * omega(u8_);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let mut s = 1;
        let pm4 = (p % 4u32).to_u32().unwrap();
        if pm4 == 3 && (alpha * beta) % 2 == 1 {
            s = -s;
        }
        if beta % 2 == 1 {
            s *= legendre(&u, p);
        }
        if alpha % 2 == 1 {
            s *= legendre(&v, p);
        }
        s
    }
}

/// Real Hilbert symbol: -1 iff both arguments are negative.
pub fn hilbert_real(a: &BigRational, b: &BigRational) -> i32 {
    if a.is_negative() && b.is_negative() {
        -1
    } else {
        1
    }
}

/// A square root of -1 modulo a prime p ≡ 1 (mod 4).
pub fn sqrt_minus_one(p: u64) -> u64 {
    let mut c = 2;
    loop {
        if pow_mod(c, (p - 1) / 2, p) == p - 1 {
            return pow_mod(c, (p - 1) / 4, p);
        }
        c += 1;
    }
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Returns (p, k) when q = p^k for a prime p.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            break;
        }
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut m = q;
    let mut k = 0;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    if m == 1 {
        Some((p, k))
    } else {
        None
    }
}
