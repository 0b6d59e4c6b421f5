//! Integer and rational helpers shared by every module: parsing, p-adic
//! valuations of integers, factorials, binomials and a small factoring
//! routine (trial division followed by Pollard rho).

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: &Int) -> Rat {
    BigRational::from_integer(n.clone())
}

/// Parses `"n"`, `"-n"` or `"n/d"`. Decimal points are rejected.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("expected an exact rational \"num/den\", got {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

/// Always renders as `"num/den"`.
pub fn format_rational(q: &Rat) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn floor_rat(q: &Rat) -> Int {
    q.floor().to_integer()
}

pub fn ceil_rat(q: &Rat) -> Int {
    q.ceil().to_integer()
}

/// Exponent of `p` in a nonzero integer.
pub fn vp_int(n: &Int, p: u64) -> u64 {
    assert!(!n.is_zero(), "valuation of zero integer");
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Exponent of `p` in a nonzero rational; `None` for zero.
pub fn vp_rat(q: &Rat, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    Some(vp_int(q.numer(), p) as i64 - vp_int(q.denom(), p) as i64)
}

/// Legendre's formula for v_p(n!).
pub fn vp_factorial(n: u64, p: u64) -> u64 {
    let mut v = 0;
    let mut pk = p;
    while pk <= n {
        v += n / pk;
        match pk.checked_mul(p) {
            Some(x) => pk = x,
            None => break,
        }
    }
    v
}

pub fn factorial(n: u64) -> Int {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u64, k: u64) -> Int {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn pow_int(base: &Int, e: u64) -> Int {
    num_traits::pow(base.clone(), e as usize)
}

pub fn pow_rat(base: &Rat, e: i64) -> Rat {
    if e >= 0 {
        num_traits::pow(base.clone(), e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

/// Modular inverse of `a` modulo `m` (both positive, coprime).
pub fn mod_inverse(a: &Int, m: &Int) -> Option<Int> {
    let a = a.mod_floor(m);
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

pub fn lcm_all<'a>(xs: impl IntoIterator<Item = &'a Int>) -> Int {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x))
}

pub fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a Int>) -> Int {
    xs.into_iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

pub fn small_primes(bound: u64) -> Vec<u64> {
    let n = bound as usize + 1;
    let mut sieve = vec![true; n.max(2)];
    sieve[0] = false;
    if n > 1 {
        sieve[1] = false;
    }
    let mut i = 2;
    while i * i < n {
        if sieve[i] {
            let mut j = i * i;
            while j < n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}

pub fn is_prime_u64(n: u64) -> bool {
    is_probable_prime(&BigInt::from(n))
}

/// Miller-Rabin with the first twelve prime bases (deterministic below 3.3e24).
pub fn is_probable_prime(n: &Int) -> bool {
    let two = BigInt::from(2);
    if n < &two {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        let b = BigInt::from(b);
        if n == &b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let mut d = n_minus_1.clone();
    let mut s = 0;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'outer: for &b in &BASES {
        let mut x = BigInt::from(b).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &Int) -> Int {
    let one = BigInt::one();
    let mut c = BigInt::one();
    loop {
        let f = |x: &Int| (x * x + &c) % n;
        let mut x = BigInt::from(2);
        let mut y = x.clone();
        let mut d = one.clone();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            d = (&x - &y).abs().gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization of a nonzero integer, sorted by prime.
pub fn factor(n: &Int) -> Vec<(Int, u32)> {
    assert!(!n.is_zero(), "factoring zero");
    let mut n = n.abs();
    let mut out: Vec<(Int, u32)> = Vec::new();
    for p in small_primes(10_000) {
        let pb = BigInt::from(p);
        if (&pb * &pb) > n {
            break;
        }
        let mut e = 0;
        while (&n % &pb).is_zero() {
            n /= &pb;
            e += 1;
        }
        if e > 0 {
            out.push((pb, e));
        }
    }
    let mut stack = vec![n];
    let mut rest: Vec<Int> = Vec::new();
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            rest.push(m);
            continue;
        }
        let d = pollard_rho(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
    rest.sort();
    for p in rest {
        match out.iter_mut().find(|(q, _)| q == &p) {
            Some(entry) => entry.1 += 1,
            None => out.push((p, 1)),
        }
    }
    out.sort();
    out
}

pub fn to_u64(n: &Int) -> Option<u64> {
    n.to_u64()
}

pub fn biguint(n: &Int) -> BigUint {
    match n.sign() {
        Sign::Minus => panic!("negative value"),
        _ => n.magnitude().clone(),
    }
}

/// Integer nearest to `a/b`, ties rounded up; `b > 0`.
pub fn round_div(a: &Int, b: &Int) -> Int {
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * &two))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_formats() {
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(format_rational(&rat(5, 1)), "5/1");
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn factor_matches_product() {
        let n = BigInt::from(2u64 * 2 * 3 * 1_000_003 * 1_000_033);
        let f = factor(&n);
        assert_eq!(f.len(), 4);
        let back = f.iter().fold(BigInt::one(), |a, (p, e)| a * pow_int(p, *e as u64));
        assert_eq!(back, n);
    }

    #[test]
    fn legendre() {
        assert_eq!(vp_factorial(10, 2), 8);
        assert_eq!(vp_factorial(25, 5), 6);
        assert_eq!(vp_int(&BigInt::from(12), 2), 2);
        assert_eq!(vp_rat(&rat(3, 4), 2), Some(-2));
    }

    #[test]
    fn rounding_division() {
        assert_eq!(round_div(&int(7), &int(2)), int(4));
        assert_eq!(round_div(&int(-7), &int(2)), int(-3));
        assert_eq!(round_div(&int(5), &int(3)), int(2));
    }
}
