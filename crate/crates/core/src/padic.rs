//! Finite-precision arithmetic in Q_p.
//!
//! A nonzero value is `p^val * unit` with `unit` a p-adic unit known modulo
//! `p^prec` (relative precision). Zero carries its absolute precision in
//! `val`; the exact zero uses a sentinel. Magnitudes are always compared as
//! exponents of `p` through [`ValuationExponent`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, format_rational, mod_inverse, parse_rational, pow_int, rat, Int, Rat};
use crate::error::{Error, Result};

/// A rational exponent of `p`, or `+inf` (the exponent of zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ValuationExponent {
    Finite(Rat),
    Infinity,
}

impl ValuationExponent {
    pub fn from_int(n: i64) -> Self {
        ValuationExponent::Finite(rat(n, 1))
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ValuationExponent::Finite(q) => Some(q),
            ValuationExponent::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ValuationExponent::Infinity)
    }

    /// Multiplication by a nonnegative rational; `0 * inf = 0`.
    pub fn scale(&self, k: &Rat) -> Self {
        assert!(!k.is_negative(), "scaling a valuation exponent by a negative factor");
        match self {
            ValuationExponent::Finite(q) => ValuationExponent::Finite(q * k),
            ValuationExponent::Infinity if k.is_zero() => ValuationExponent::Finite(Rat::zero()),
            ValuationExponent::Infinity => ValuationExponent::Infinity,
        }
    }

    pub fn add_rat(&self, q: &Rat) -> Self {
        match self {
            ValuationExponent::Finite(a) => ValuationExponent::Finite(a + q),
            ValuationExponent::Infinity => ValuationExponent::Infinity,
        }
    }

    pub fn to_record(&self) -> String {
        match self {
            ValuationExponent::Finite(q) => format_rational(q),
            ValuationExponent::Infinity => "inf".to_string(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        if s.trim() == "inf" {
            Ok(ValuationExponent::Infinity)
        } else {
            parse_rational(s).map(ValuationExponent::Finite)
        }
    }
}

impl fmt::Display for ValuationExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValuationExponent::Finite(q) if q.is_integer() => write!(f, "{}", q.numer()),
            ValuationExponent::Finite(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            ValuationExponent::Infinity => write!(f, "+inf"),
        }
    }
}

impl PartialOrd for ValuationExponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ValuationExponent {
    fn cmp(&self, other: &Self) -> Ordering {
        use ValuationExponent::*;
        match (self, other) {
            (Infinity, Infinity) => Ordering::Equal,
            (Infinity, Finite(_)) => Ordering::Greater,
            (Finite(_), Infinity) => Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for ValuationExponent {
    type Output = ValuationExponent;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ValuationExponent::Finite(a), ValuationExponent::Finite(b)) => ValuationExponent::Finite(a + b),
            _ => ValuationExponent::Infinity,
        }
    }
}

impl<'a> Add<&'a ValuationExponent> for &'a ValuationExponent {
    type Output = ValuationExponent;
    fn add(self, rhs: Self) -> ValuationExponent {
        self.clone() + rhs.clone()
    }
}

/// The exponent `1/(p-1)` with `r_p = p^(-1/(p-1))`.
pub fn r_p_exponent(p: u64) -> ValuationExponent {
    assert!(p >= 2, "p must be at least 2");
    ValuationExponent::Finite(rat(1, p as i64 - 1))
}

const EXACT_ZERO: i64 = i64::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicNumber {
    p: u64,
    /// Valuation for nonzero values, absolute precision for zero.
    val: i64,
    unit: Int,
    /// Relative precision in digits; zero for zero.
    prec: u32,
}

impl PadicNumber {
    fn modulus(p: u64, digits: u32) -> Int {
        pow_int(&BigInt::from(p), digits as u64)
    }

    pub fn exact_zero(p: u64) -> Self {
        PadicNumber { p, val: EXACT_ZERO, unit: Int::zero(), prec: 0 }
    }

    /// Zero known modulo `p^abs_prec`.
    pub fn zero_mod(p: u64, abs_prec: i64) -> Self {
        PadicNumber { p, val: abs_prec, unit: Int::zero(), prec: 0 }
    }

    /// Normalizes `p^shift * n` known modulo `p^abs_prec`.
    fn from_scaled_int(p: u64, shift: i64, n: Int, abs_prec: i64) -> Self {
        if abs_prec == EXACT_ZERO && n.is_zero() {
            return Self::exact_zero(p);
        }
        if n.is_zero() {
            return Self::zero_mod(p, abs_prec);
        }
        let v = arith::vp_int(&n, p) as i64;
        let val = shift + v;
        if val >= abs_prec {
            return Self::zero_mod(p, abs_prec);
        }
        let prec = (abs_prec - val) as u32;
        let m = Self::modulus(p, prec);
        let unit = (n / pow_int(&BigInt::from(p), v as u64)).mod_floor(&m);
        PadicNumber { p, val, unit, prec }
    }

    /// Image of a rational, known modulo `p^abs_prec`.
    pub fn from_rational(q: &Rat, p: u64, abs_prec: i64) -> Self {
        if q.is_zero() {
            return Self::exact_zero(p);
        }
        let v = arith::vp_rat(q, p).unwrap();
        if v >= abs_prec {
            return Self::zero_mod(p, abs_prec);
        }
        let prec = (abs_prec - v) as u32;
        let pb = BigInt::from(p);
        let shifted = if v >= 0 {
            q / Rat::from_integer(pow_int(&pb, v as u64))
        } else {
            q * Rat::from_integer(pow_int(&pb, (-v) as u64))
        };
        let m = Self::modulus(p, prec);
        let den_inv = mod_inverse(shifted.denom(), &m).expect("denominator is a unit");
        let unit = (shifted.numer() * den_inv).mod_floor(&m);
        PadicNumber { p, val: v, unit, prec }
    }

    /// Image of a rational with `rel` significant digits (exact zero stays exact).
    pub fn from_rational_rel(q: &Rat, p: u64, rel: u32) -> Self {
        match arith::vp_rat(q, p) {
            None => Self::exact_zero(p),
            Some(v) => Self::from_rational(q, p, v + rel as i64),
        }
    }

    pub fn from_int(n: i64, p: u64, abs_prec: i64) -> Self {
        Self::from_rational(&rat(n, 1), p, abs_prec)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.unit.is_zero() && self.val == EXACT_ZERO
    }

    /// Exact valuation; `+inf` for zero (at whatever precision it is known).
    pub fn valuation(&self) -> ValuationExponent {
        if self.is_zero() {
            ValuationExponent::Infinity
        } else {
            ValuationExponent::from_int(self.val)
        }
    }

    /// Certified lower bound on the true valuation: exact for nonzero values,
    /// the absolute precision for a zero that is only known modulo `p^k`.
    pub fn valuation_lower_bound(&self) -> ValuationExponent {
        if self.is_exact_zero() {
            ValuationExponent::Infinity
        } else {
            ValuationExponent::from_int(self.val)
        }
    }

    /// Absolute precision: the value is known modulo `p^abs_precision`.
    pub fn abs_precision(&self) -> i64 {
        if self.is_zero() {
            self.val
        } else {
            self.val + self.prec as i64
        }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn unit(&self) -> &Int {
        &self.unit
    }

    /// Base-p digits of the unit part, least significant first.
    pub fn digits(&self) -> Vec<u64> {
        let pb = BigInt::from(self.p);
        let mut n = self.unit.clone();
        let mut out = Vec::with_capacity(self.prec as usize);
        for _ in 0..self.prec {
            let (q, r) = n.div_mod_floor(&pb);
            out.push(r.to_u64().unwrap());
            n = q;
        }
        out
    }

    /// A rational representative `p^val * unit` (exact for exact values).
    pub fn to_rational(&self) -> Rat {
        if self.is_zero() {
            return Rat::zero();
        }
        let u = Rat::from_integer(self.unit.clone());
        u * arith::pow_rat(&rat(self.p as i64, 1), self.val)
    }

    fn check_prime(&self, o: &PadicNumber) {
        assert_eq!(self.p, o.p, "mixing different primes");
    }

    pub fn add(&self, o: &PadicNumber) -> PadicNumber {
        self.check_prime(o);
        let abs = self.abs_precision().min(o.abs_precision());
        if self.is_zero() && o.is_zero() {
            return if abs == EXACT_ZERO { Self::exact_zero(self.p) } else { Self::zero_mod(self.p, abs) };
        }
        if self.is_zero() {
            return o.reduce_abs(abs);
        }
        if o.is_zero() {
            return self.reduce_abs(abs);
        }
        let m = self.val.min(o.val);
        let pb = BigInt::from(self.p);
        let a = &self.unit * pow_int(&pb, (self.val - m) as u64);
        let b = &o.unit * pow_int(&pb, (o.val - m) as u64);
        Self::from_scaled_int(self.p, m, a + b, abs)
    }

    fn reduce_abs(&self, abs: i64) -> PadicNumber {
        if self.is_zero() {
            return if abs == EXACT_ZERO { Self::exact_zero(self.p) } else { Self::zero_mod(self.p, abs.min(self.val)) };
        }
        Self::from_scaled_int(self.p, self.val, self.unit.clone(), abs.min(self.abs_precision()))
    }

    pub fn neg(&self) -> PadicNumber {
        if self.is_zero() {
            return self.clone();
        }
        let m = Self::modulus(self.p, self.prec);
        PadicNumber { p: self.p, val: self.val, unit: (-&self.unit).mod_floor(&m), prec: self.prec }
    }

    pub fn sub(&self, o: &PadicNumber) -> PadicNumber {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &PadicNumber) -> PadicNumber {
        self.check_prime(o);
        if self.is_exact_zero() || o.is_exact_zero() {
            return Self::exact_zero(self.p);
        }
        if self.is_zero() || o.is_zero() {
            // (0 mod p^a) * y is 0 mod p^(a + v(y)); both zero gives a + b.
            let abs = match (self.is_zero(), o.is_zero()) {
                (true, true) => self.val.saturating_add(o.val),
                (true, false) => self.val.saturating_add(o.val),
                (false, true) => o.val.saturating_add(self.val),
                _ => unreachable!(),
            };
            return Self::zero_mod(self.p, abs);
        }
        let prec = self.prec.min(o.prec);
        let m = Self::modulus(self.p, prec);
        PadicNumber { p: self.p, val: self.val + o.val, unit: (&self.unit * &o.unit).mod_floor(&m), prec }
    }

    pub fn inv(&self) -> Result<PadicNumber> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let m = Self::modulus(self.p, self.prec);
        let u = mod_inverse(&self.unit, &m).expect("unit part is invertible");
        Ok(PadicNumber { p: self.p, val: -self.val, unit: u, prec: self.prec })
    }

    pub fn div(&self, o: &PadicNumber) -> Result<PadicNumber> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: u64) -> PadicNumber {
        if e == 0 {
            return Self::from_int(1, self.p, i64::from(self.prec.max(1)));
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplication by an exact rational.
    pub fn mul_rational(&self, q: &Rat) -> PadicNumber {
        if q.is_zero() {
            return Self::exact_zero(self.p);
        }
        if self.is_exact_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return Self::zero_mod(self.p, self.val + arith::vp_rat(q, self.p).unwrap());
        }
        self.mul(&Self::from_rational_rel(q, self.p, self.prec))
    }

    pub fn to_record(&self) -> PadicRecord {
        PadicRecord {
            p: self.p,
            valuation: if self.is_zero() { "inf".into() } else { format_rational(&rat(self.val, 1)) },
            digits: self.digits(),
            precision: if self.is_exact_zero() {
                0
            } else if self.is_zero() {
                self.val.max(0) as u32
            } else {
                self.prec
            },
        }
    }

    pub fn from_record(r: &PadicRecord) -> Result<PadicNumber> {
        if r.p < 2 {
            return Err(Error::Parse("p must be at least 2".into()));
        }
        if r.valuation.trim() == "inf" {
            return Ok(if r.precision == 0 { Self::exact_zero(r.p) } else { Self::zero_mod(r.p, r.precision as i64) });
        }
        let v = parse_rational(&r.valuation)?;
        if !v.is_integer() {
            return Err(Error::Parse("valuation of a Q_p element must be an integer".into()));
        }
        if r.digits.len() != r.precision as usize {
            return Err(Error::Parse("digit count must equal precision".into()));
        }
        if r.digits.first().copied().unwrap_or(0) == 0 {
            return Err(Error::Parse("leading unit digit must be nonzero".into()));
        }
        let pb = BigInt::from(r.p);
        let mut unit = Int::zero();
        for d in r.digits.iter().rev() {
            if *d >= r.p {
                return Err(Error::Parse(format!("digit {d} out of range")));
            }
            unit = unit * &pb + BigInt::from(*d);
        }
        Ok(PadicNumber { p: r.p, val: v.to_integer().to_i64().unwrap(), unit, prec: r.precision })
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact_zero() {
            return write!(f, "0");
        }
        if self.is_zero() {
            return write!(f, "O({}^{})", self.p, self.val);
        }
        write!(f, "{}^{} * {} + O({}^{})", self.p, self.val, self.unit, self.p, self.abs_precision())
    }
}

/// Serialized form `{p, valuation, digits, precision}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicRecord {
    pub p: u64,
    pub valuation: String,
    pub digits: Vec<u64>,
    pub precision: u32,
}

pub fn valuation(x: &PadicNumber) -> ValuationExponent {
    x.valuation()
}

/// floor(log_p k) for k >= 1.
fn floor_log(k: u64, p: u64) -> u64 {
    let mut e = 0;
    let mut pk = p;
    while pk <= k {
        e += 1;
        pk = match pk.checked_mul(p) {
            Some(v) => v,
            None => break,
        };
    }
    e
}

/// p-adic logarithm on `v(x - 1) > 0`, certified to the input's absolute precision.
pub fn log_p(x: &PadicNumber) -> Result<PadicNumber> {
    let p = x.prime();
    let one = PadicNumber::from_int(1, p, x.abs_precision().max(1));
    let y = x.sub(&one);
    let w = match y.valuation_lower_bound() {
        ValuationExponent::Infinity => return Ok(PadicNumber::exact_zero(p)),
        ValuationExponent::Finite(q) => q.to_integer().to_i64().unwrap(),
    };
    if w <= 0 {
        return Err(Error::Domain(format!("log_p needs v(x-1) > 0, got {w}")));
    }
    let abs = x.abs_precision();
    // A perturbation of valuation >= abs only moves log by the same amount when
    // abs exceeds 1/(p-1).
    if p == 2 && abs < 2 {
        return Err(Error::InsufficientPrecision("log_2 needs x known modulo 4".into()));
    }
    if y.is_zero() {
        return Ok(PadicNumber::zero_mod(p, abs));
    }
    let pb = BigInt::from(p);
    let target = abs as u64;
    let m = pow_int(&pb, target);
    let yv = y.to_rational().to_integer();
    let mut sum = Int::zero();
    let mut pw = Int::one();
    let mut k: u64 = 1;
    loop {
        // tail bound v(y^k / k) >= k w - floor(log_p k), nondecreasing in k
        if k as i64 * w - floor_log(k, p) as i64 >= abs {
            break;
        }
        pw = &pw * &yv;
        let vk = arith::vp_int(&BigInt::from(k), p);
        let kp = BigInt::from(k) / pow_int(&pb, vk);
        let num = &pw / pow_int(&pb, vk);
        let inv = mod_inverse(&kp, &m).unwrap();
        let term = (num * inv).mod_floor(&m);
        if k % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
        k += 1;
    }
    Ok(PadicNumber::from_scaled_int(p, 0, sum.mod_floor(&m), abs))
}

/// p-adic exponential on `v(z) > 1/(p-1)`, certified to the input's absolute precision.
pub fn exp_p(z: &PadicNumber) -> Result<PadicNumber> {
    let p = z.prime();
    let abs = z.abs_precision();
    let w = match z.valuation_lower_bound() {
        ValuationExponent::Infinity => return Ok(PadicNumber::from_int(1, p, 1 << 20)),
        ValuationExponent::Finite(q) => q.to_integer().to_i64().unwrap(),
    };
    if Rat::from_integer(BigInt::from(w)) * rat(p as i64 - 1, 1) <= rat(1, 1) {
        return Err(Error::Domain(format!("exp_p needs v(z) > 1/(p-1), got {w}")));
    }
    if z.is_zero() {
        return Ok(PadicNumber::from_int(1, p, abs));
    }
    let pb = BigInt::from(p);
    let m = pow_int(&pb, abs as u64);
    let zv = z.to_rational().to_integer();
    let mut sum = Int::one();
    let mut pw = Int::one();
    let mut fact_unit = Int::one();
    let mut vfact: u64 = 0;
    let mut k: u64 = 1;
    loop {
        // v(z^k / k!) >= k w - (k-1)/(p-1), increasing in k
        let lower = Rat::from_integer(BigInt::from(k as i64 * w)) - rat(k as i64 - 1, p as i64 - 1);
        if lower >= Rat::from_integer(BigInt::from(abs)) {
            break;
        }
        pw = &pw * &zv;
        let vk = arith::vp_int(&BigInt::from(k), p);
        vfact += vk;
        fact_unit = (fact_unit * (BigInt::from(k) / pow_int(&pb, vk))).mod_floor(&m);
        let num = &pw / pow_int(&pb, vfact);
        let inv = mod_inverse(&fact_unit, &m).unwrap();
        sum += num * inv;
        k += 1;
    }
    Ok(PadicNumber::from_scaled_int(p, 0, sum.mod_floor(&m), abs))
}

/// Evaluates an integer polynomial (low degree first) at an integer modulo `m`.
fn eval_mod(f: &[Int], x: &Int, m: &Int) -> Int {
    let mut acc = Int::zero();
    for c in f.iter().rev() {
        acc = (acc * x + c).mod_floor(m);
    }
    acc
}

fn derivative(f: &[Int]) -> Vec<Int> {
    f.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

/// Newton lifting of a simple root of `f` modulo `p` to `precision` digits.
pub fn hensel_lift(f: &[Int], p: u64, root_mod_p: &Int, precision: u32) -> Result<PadicNumber> {
    let pb = BigInt::from(p);
    let a = root_mod_p.mod_floor(&pb);
    if !eval_mod(f, &a, &pb).is_zero() {
        return Err(Error::Domain("residue is not a root of f modulo p".into()));
    }
    let df = derivative(f);
    if eval_mod(&df, &a, &pb).is_zero() {
        return Err(Error::NotSimpleRoot);
    }
    let mut x = a;
    let mut k: u32 = 1;
    while k < precision {
        k = (2 * k).min(precision);
        let m = pow_int(&pb, k as u64);
        let fx = eval_mod(f, &x, &m);
        let dfx = eval_mod(&df, &x, &m);
        let inv = mod_inverse(&dfx, &m).unwrap();
        x = (&x - fx * inv).mod_floor(&m);
    }
    Ok(PadicNumber::from_scaled_int(p, 0, x, precision as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations_of_rationals() {
        assert_eq!(PadicNumber::from_int(12, 2, 20).valuation(), ValuationExponent::from_int(2));
        assert_eq!(PadicNumber::exact_zero(5).valuation(), ValuationExponent::Infinity);
        assert_eq!(PadicNumber::from_rational(&rat(3, 4), 2, 20).valuation(), ValuationExponent::from_int(-2));
    }

    #[test]
    fn r_p_values() {
        assert_eq!(r_p_exponent(2), ValuationExponent::Finite(rat(1, 1)));
        assert_eq!(r_p_exponent(3), ValuationExponent::Finite(rat(1, 2)));
        assert_eq!(r_p_exponent(5), ValuationExponent::Finite(rat(1, 4)));
    }

    #[test]
    fn digits_and_roundtrip() {
        let x = PadicNumber::from_rational(&rat(-1, 1), 3, 5);
        assert_eq!(x.digits(), vec![2, 2, 2, 2, 2]);
        let r = x.to_record();
        assert_eq!(PadicNumber::from_record(&r).unwrap(), x);
        let j = serde_json::to_string(&r).unwrap();
        assert!(j.contains("\"valuation\":\"0/1\""));
    }

    #[test]
    fn arithmetic_tracks_precision() {
        let a = PadicNumber::from_int(5, 5, 10);
        let b = PadicNumber::from_int(5, 5, 4);
        let d = a.sub(&b);
        assert!(d.is_zero() && !d.is_exact_zero());
        assert_eq!(d.abs_precision(), 4);
        let c = a.mul(&PadicNumber::from_rational(&rat(1, 25), 5, 3));
        assert_eq!(c.valuation(), ValuationExponent::from_int(-1));
        assert_eq!(c.precision(), 5);
    }

    #[test]
    fn log_examples() {
        let one = PadicNumber::from_int(1, 3, 20);
        assert!(log_p(&one).unwrap().is_zero());
        let m1 = PadicNumber::from_int(-1, 2, 30);
        assert!(log_p(&m1).unwrap().is_zero());
        let x = PadicNumber::from_int(4, 3, 30);
        let l = log_p(&x).unwrap();
        assert_eq!(l.valuation(), ValuationExponent::from_int(1));
        assert_eq!(exp_p(&l).unwrap(), x);
        assert!(matches!(log_p(&PadicNumber::from_int(2, 3, 10)), Err(Error::Domain(_))));
    }

    #[test]
    fn exp_examples() {
        let z = PadicNumber::from_int(9, 3, 25);
        let e = exp_p(&z).unwrap();
        let one = PadicNumber::from_int(1, 3, 25);
        assert_eq!(e.sub(&one).valuation(), ValuationExponent::from_int(2));
        assert!(matches!(exp_p(&PadicNumber::from_int(2, 3, 10)), Err(Error::Domain(_))));
        assert!(matches!(exp_p(&PadicNumber::from_int(2, 2, 10)), Err(Error::Domain(_))));
    }

    #[test]
    fn hensel_examples() {
        let f = vec![BigInt::from(-2), BigInt::zero(), BigInt::one()];
        let r = hensel_lift(&f, 7, &BigInt::from(3), 30).unwrap();
        let sq = r.mul(&r).sub(&PadicNumber::from_int(2, 7, 30));
        assert!(sq.valuation_lower_bound() >= ValuationExponent::from_int(30));
        let g = vec![BigInt::from(-5), BigInt::one()];
        let r = hensel_lift(&g, 3, &BigInt::from(2), 10).unwrap();
        assert_eq!(r.to_rational(), rat(5, 1));
        assert_eq!(hensel_lift(&f, 2, &BigInt::zero(), 10), Err(Error::NotSimpleRoot));
    }
}
