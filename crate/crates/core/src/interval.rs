//! Closed real intervals with dyadic-rational endpoints and outward rounding.
//!
//! Every transcendental value used by the height and bound code (logarithms,
//! exponentials) is produced as an enclosing interval, so an inequality that
//! holds between directed endpoints is a proof that it holds between the reals.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{Int, Rat};

/// Default working precision in bits for interval computations.
pub const DEFAULT_BITS: u32 = 192;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
}

fn two_pow(bits: u32) -> Int {
    BigInt::one() << bits
}

/// Dyadic rational with denominator `2^bits` closest below or above `q`.
fn round_dyadic(q: &Rat, bits: u32, up: bool) -> Rat {
    let d = q.denom();
    // already representable: a power of two no larger than 2^bits
    if d.bits() <= bits as u64 + 1 && d.trailing_zeros() == Some(d.bits() - 1) {
        return q.clone();
    }
    let n = q.numer() << bits;
    let f = if up { -((-n).div_floor(d)) } else { n.div_floor(d) };
    BigRational::new(f, two_pow(bits))
}

pub fn round_down(q: &Rat, bits: u32) -> Rat {
    round_dyadic(q, bits, false)
}

pub fn round_up(q: &Rat, bits: u32) -> Rat {
    round_dyadic(q, bits, true)
}

impl Interval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(q: Rat) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    pub fn zero() -> Self {
        Self::point(Rat::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Self::point(Rat::from_integer(BigInt::from(n)))
    }

    pub fn round(&self, bits: u32) -> Self {
        Interval { lo: round_down(&self.lo, bits), hi: round_up(&self.hi, bits) }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &Rat) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rat::zero())
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Every point of `self` is `<=` every point of `other`.
    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    pub fn scale(&self, q: &Rat) -> Interval {
        if q.is_negative() {
            Interval { lo: &self.hi * q, hi: &self.lo * q }
        } else {
            Interval { lo: &self.lo * q, hi: &self.hi * q }
        }
    }

    pub fn sqr(&self) -> Interval {
        if self.lo.is_negative() && self.hi.is_positive() {
            let m = (-&self.lo).max(self.hi.clone());
            Interval { lo: Rat::zero(), hi: &m * &m }
        } else {
            let a = &self.lo * &self.lo;
            let b = &self.hi * &self.hi;
            if a <= b {
                Interval { lo: a, hi: b }
            } else {
                Interval { lo: b, hi: a }
            }
        }
    }

    pub fn recip(&self) -> Interval {
        assert!(!self.contains_zero(), "reciprocal of an interval containing zero");
        Interval { lo: self.hi.recip(), hi: self.lo.recip() }
    }

    pub fn max(&self, o: &Interval) -> Interval {
        Interval { lo: self.lo.clone().max(o.lo.clone()), hi: self.hi.clone().max(o.hi.clone()) }
    }

    pub fn min(&self, o: &Interval) -> Interval {
        Interval { lo: self.lo.clone().min(o.lo.clone()), hi: self.hi.clone().min(o.hi.clone()) }
    }

    /// `max(0, x)`.
    pub fn pos_part(&self) -> Interval {
        self.max(&Interval::zero())
    }

    pub fn pow(&self, e: u32) -> Interval {
        let mut acc = Interval::from_int(1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Natural logarithm; the interval must be strictly positive.
    pub fn ln(&self, bits: u32) -> Interval {
        assert!(self.is_positive(), "logarithm of a non-positive interval");
        let lo = ln_rat(&self.lo, bits).lo;
        let hi = ln_rat(&self.hi, bits).hi;
        Interval { lo, hi }
    }

    pub fn exp(&self, bits: u32) -> Interval {
        let lo = exp_rat(&self.lo, bits).lo;
        let hi = exp_rat(&self.hi, bits).hi;
        Interval { lo, hi }
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / Rat::from_integer(BigInt::from(2))).to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal strings for the endpoints, rounded outward.
    pub fn to_decimal_pair(&self, digits: usize) -> (String, String) {
        (decimal(&self.lo, digits, false), decimal(&self.hi, digits, true))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.to_decimal_pair(20);
        write!(f, "[{a}, {b}]")
    }
}

/// Decimal rendering of `q` with `digits` fractional digits, rounded down or up.
pub fn decimal(q: &Rat, digits: usize, up: bool) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let s = q * Rat::from_integer(scale.clone());
    let n = if up { s.ceil().to_integer() } else { s.floor().to_integer() };
    let neg = n.is_negative();
    let mut a = n.abs().to_string();
    if digits > 0 {
        while a.len() <= digits {
            a.insert(0, '0');
        }
        a.insert(a.len() - digits, '.');
    }
    if neg {
        a.insert(0, '-');
    }
    a
}

fn fixed_floor(q: &Rat, w: u32) -> Int {
    (q * Rat::from_integer(two_pow(w))).floor().to_integer()
}

fn fixed_ceil(q: &Rat, w: u32) -> Int {
    (q * Rat::from_integer(two_pow(w))).ceil().to_integer()
}

fn shr_ceil(a: &Int, w: u32) -> Int {
    (a + two_pow(w) - BigInt::one()) >> w
}

/// Enclosure of `atanh(z)` for a rational `0 <= z <= 1/2`, in fixed point.
fn atanh_small(z: &Rat, bits: u32) -> Interval {
    if z.is_zero() {
        return Interval::zero();
    }
    let w = bits + 24;
    // lower bound: truncate everything downward and drop the positive tail
    let zl = fixed_floor(z, w);
    let z2l = (&zl * &zl) >> w;
    let mut pw = zl;
    let mut lo = Int::zero();
    let mut j: u64 = 0;
    while !pw.is_zero() {
        lo += &pw / BigInt::from(2 * j + 1);
        pw = (&pw * &z2l) >> w;
        j += 1;
    }
    // upper bound: round upward, then bound the tail by twice the next power
    let zh = fixed_ceil(z, w);
    let z2h = shr_ceil(&(&zh * &zh), w);
    let mut pw = zh;
    let mut hi = Int::zero();
    let mut j: u64 = 0;
    let small = BigInt::from(4);
    while pw > small {
        let k = BigInt::from(2 * j + 1);
        hi += (&pw + &k - BigInt::one()) / &k;
        pw = shr_ceil(&(&pw * &z2h), w);
        j += 1;
    }
    hi += &pw * 2u32 + 1u32;
    let s = two_pow(w);
    Interval { lo: Rat::new(lo, s.clone()), hi: Rat::new(hi, s) }
}

fn ln2_cache() -> &'static Mutex<HashMap<u32, Interval>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Interval>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Enclosure of log 2, width below `2^-bits`.
pub fn ln2(bits: u32) -> Interval {
    if let Some(v) = ln2_cache().lock().unwrap().get(&bits) {
        return v.clone();
    }
    let a = atanh_small(&Rat::new(BigInt::one(), BigInt::from(3)), bits + 8);
    let v = a.scale(&Rat::from_integer(BigInt::from(2))).round(bits + 4);
    ln2_cache().lock().unwrap().insert(bits, v.clone());
    v
}

/// Enclosure of the natural logarithm of a positive rational.
pub fn ln_rat(q: &Rat, bits: u32) -> Interval {
    assert!(q.is_positive(), "logarithm of a non-positive rational");
    if q.is_one() {
        return Interval::zero();
    }
    // q = 2^k * m with 1 <= m < 2
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let mut k = nb - db;
    let mut m = if k >= 0 {
        q / Rat::from_integer(two_pow(k as u32))
    } else {
        q * Rat::from_integer(two_pow((-k) as u32))
    };
    let two = Rat::from_integer(BigInt::from(2));
    while m >= two {
        m /= &two;
        k += 1;
    }
    while m < Rat::one() {
        m *= &two;
        k -= 1;
    }
    let wbits = bits + 16 + (64 - (k.unsigned_abs().max(1)).leading_zeros());
    // Round m to working precision keeping an enclosure of atanh((m-1)/(m+1)).
    let m_lo = round_down(&m, wbits);
    let m_hi = round_up(&m, wbits);
    let z = |mm: &Rat| (mm - Rat::one()) / (mm + Rat::one());
    let a_lo = atanh_small(&round_down(&z(&m_lo), wbits), wbits).lo;
    let a_hi = atanh_small(&round_up(&z(&m_hi), wbits), wbits).hi;
    let log_m = Interval { lo: a_lo, hi: a_hi }.scale(&two);
    let kpart = ln2(wbits).scale(&Rat::from_integer(BigInt::from(k)));
    log_m.add(&kpart).round(bits + 4)
}

fn ln_small_cache() -> &'static Mutex<HashMap<(u64, u32), Interval>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Interval>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Enclosure of `log n`; values for word-sized `n` are cached, since the
/// height and place code asks for the same primes over and over.
pub fn ln_int(n: &Int, bits: u32) -> Interval {
    let Some(small) = n.to_u64() else {
        return ln_rat(&Rat::from_integer(n.clone()), bits);
    };
    if let Some(v) = ln_small_cache().lock().unwrap().get(&(small, bits)) {
        return v.clone();
    }
    let v = ln_rat(&Rat::from_integer(n.clone()), bits);
    ln_small_cache().lock().unwrap().insert((small, bits), v.clone());
    v
}

/// Enclosure of `exp(q)` for a rational `q`.
pub fn exp_rat(q: &Rat, bits: u32) -> Interval {
    if q.is_zero() {
        return Interval::from_int(1);
    }
    if q.is_negative() {
        return exp_rat(&-q, bits + 4).recip().round(bits + 4);
    }
    // reduce to y = q / 2^r <= 1/2
    let mut r: u32 = 0;
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    let mut y = q.clone();
    while y > half {
        y /= Rat::from_integer(BigInt::from(2));
        r += 1;
    }
    let wbits = bits + 24 + 2 * r;
    let s = two_pow(wbits);
    let (yl, yh) = (fixed_floor(&y, wbits), fixed_ceil(&y, wbits));
    let mut t_lo = s.clone();
    let mut t_hi = s.clone();
    let mut sum_lo = Int::zero();
    let mut sum_hi = Int::zero();
    let mut k: u64 = 1;
    let small = BigInt::from(4);
    while t_hi > small {
        sum_lo += &t_lo;
        sum_hi += &t_hi;
        let kk = BigInt::from(k);
        t_lo = ((&t_lo * &yl) >> wbits) / &kk;
        t_hi = (shr_ceil(&(&t_hi * &yh), wbits) + &kk - BigInt::one()) / &kk;
        k += 1;
    }
    // remaining tail <= 2 * next term since y <= 1/2
    let sum_hi = sum_hi + &t_hi * 2u32 + 1u32;
    let (sum_lo, tail) = (Rat::new(sum_lo, s.clone()), Rat::new(sum_hi, s));
    let mut iv = Interval { lo: sum_lo, hi: tail };
    for _ in 0..r {
        iv = iv.sqr().round(wbits);
    }
    iv.round(bits + 4)
}
