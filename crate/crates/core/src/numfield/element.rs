use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::embed::CInterval;
use super::{Field, ROOT_BITS};
use crate::arith::{format_rational, lcm_all, Int, Rat};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::lattice::{rat_det, rat_solve};

/// Element of a number field as rational coordinates on `1, theta, ..., theta^(d-1)`.
#[derive(Clone)]
pub struct AlgebraicNumber {
    field: Field,
    coords: Vec<Rat>,
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, o: &Self) -> bool {
        self.field.same_as(&o.field) && self.coords == o.coords
    }
}

impl Eq for AlgebraicNumber {}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(format_rational).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl AlgebraicNumber {
    pub fn new(field: &Field, coords: Vec<Rat>) -> Self {
        let coords = field.reduce_coords(coords);
        AlgebraicNumber { field: field.clone(), coords }
    }

    pub fn from_rat(field: &Field, q: Rat) -> Self {
        Self::new(field, vec![q])
    }

    pub fn from_int(field: &Field, n: i64) -> Self {
        Self::from_rat(field, Rat::from_integer(BigInt::from(n)))
    }

    pub fn from_ints(field: &Field, cs: &[Int]) -> Self {
        Self::new(field, cs.iter().map(|c| Rat::from_integer(c.clone())).collect())
    }

    pub fn from_i64s(field: &Field, cs: &[i64]) -> Self {
        Self::new(field, cs.iter().map(|&c| Rat::from_integer(BigInt::from(c))).collect())
    }

    pub fn zero(field: &Field) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: &Field) -> Self {
        Self::from_int(field, 1)
    }

    /// The generator `theta` (for `K = Q`, the root of the linear polynomial).
    pub fn theta(field: &Field) -> Self {
        Self::new(field, vec![Rat::zero(), Rat::one()])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// The value as a rational if it lies in `Q`.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let c = self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect();
        AlgebraicNumber { field: self.field.clone(), coords: c }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let c = self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect();
        AlgebraicNumber { field: self.field.clone(), coords: c }
    }

    pub fn neg(&self) -> Self {
        AlgebraicNumber { field: self.field.clone(), coords: self.coords.iter().map(|a| -a).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        AlgebraicNumber { field: self.field.clone(), coords: self.field.mul_coords(&self.coords, &o.coords) }
    }

    pub fn scale(&self, q: &Rat) -> Self {
        AlgebraicNumber { field: self.field.clone(), coords: self.coords.iter().map(|a| a * q).collect() }
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one(&self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Matrix of multiplication by `self`; column `k` holds `self * theta^k`.
    pub fn mult_matrix(&self) -> Vec<Vec<Rat>> {
        let d = self.field.degree();
        let mut cols = Vec::with_capacity(d);
        let mut cur = self.coords.clone();
        for _ in 0..d {
            cols.push(cur.clone());
            let mut shifted = vec![Rat::zero()];
            shifted.extend(cur);
            cur = self.field.reduce_coords(shifted);
        }
        (0..d).map(|r| (0..d).map(|c| cols[c][r].clone()).collect()).collect()
    }

    pub fn norm(&self) -> Rat {
        rat_det(self.mult_matrix())
    }

    pub fn trace(&self) -> Rat {
        let m = self.mult_matrix();
        (0..m.len()).fold(Rat::zero(), |acc, i| acc + &m[i][i])
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let d = self.field.degree();
        let mut e0 = vec![Rat::zero(); d];
        e0[0] = Rat::one();
        let c = rat_solve(self.mult_matrix(), e0).ok_or(Error::ZeroElement)?;
        Ok(AlgebraicNumber { field: self.field.clone(), coords: c })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// Least positive integer `delta` with `delta * self` integral (`O_K = Z[theta]`).
    pub fn denominator(&self) -> Int {
        let dens: Vec<Int> = self.coords.iter().map(|c| c.denom().clone()).collect();
        lcm_all(dens.iter())
    }

    pub fn is_integral(&self) -> bool {
        self.denominator().is_one()
    }

    /// `(y, delta)` with `self = y / delta`, `y` integral coordinates.
    pub fn integral_parts(&self) -> (Vec<Int>, Int) {
        let den = self.denominator();
        let y = self.coords.iter().map(|c| (c * Rat::from_integer(den.clone())).to_integer()).collect();
        (y, den)
    }

    /// Image under the `i`-th archimedean embedding as a complex enclosure.
    pub fn embed(&self, i: usize) -> CInterval {
        self.embed_at(i, ROOT_BITS + 32)
    }

    /// The same enclosure computed with `bits` fractional bits.
    pub fn embed_at(&self, i: usize, bits: u32) -> CInterval {
        let root = self.field.root_at(i, bits);
        let mut acc = CInterval::from_rat(&Rat::zero());
        for c in self.coords.iter().rev() {
            acc = acc.mul(&root).add(&CInterval::from_rat(c)).round(bits);
        }
        acc
    }

    /// Enclosure of `|tau_i(x)|^2` with relative width below `2^-bits`, at the
    /// cheapest working precision that reaches it (full precision at worst).
    pub fn abs_sq_relative(&self, i: usize, bits: u32) -> Interval {
        let full = ROOT_BITS + 32;
        let mut w = (bits + 32).min(full);
        loop {
            let s = self.embed_at(i, w).abs_sq();
            let tight = s.lo.is_positive() && s.width() * Rat::from_integer(BigInt::one() << bits) < s.lo;
            if tight || w >= full {
                return s;
            }
            w = (2 * w).min(full);
        }
    }

    /// Floating-point image under the `i`-th archimedean embedding.
    pub fn embed_f64(&self, i: usize) -> (f64, f64) {
        let (zr, zi) = self.field.roots()[i].approx();
        let mut acc = (0.0f64, 0.0f64);
        for c in self.coords.iter().rev() {
            let cf = num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN);
            acc = (acc.0 * zr - acc.1 * zi + cf, acc.0 * zi + acc.1 * zr);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::numfield::NumberField;

    #[test]
    fn arithmetic_in_quadratic_field() {
        let k = NumberField::quadratic(2).unwrap();
        let s = AlgebraicNumber::theta(&k);
        assert_eq!(s.mul(&s), AlgebraicNumber::from_int(&k, 2));
        let u = AlgebraicNumber::from_i64s(&k, &[1, 1]);
        assert_eq!(u.norm(), rat(-1, 1));
        assert_eq!(u.trace(), rat(2, 1));
        assert_eq!(u.mul(&u.inv().unwrap()), AlgebraicNumber::one(&k));
        let x = AlgebraicNumber::new(&k, vec![rat(1, 3), rat(1, 3)]);
        assert_eq!(x.denominator(), BigInt::from(3));
        assert!(AlgebraicNumber::zero(&k).inv().is_err());
    }

    #[test]
    fn embeddings_match_floats() {
        let k = NumberField::cyclotomic5();
        let z = AlgebraicNumber::theta(&k);
        let e = z.embed(0);
        let f = z.embed_f64(0);
        assert!((e.re.midpoint_f64() - f.0).abs() < 1e-12);
        assert!((e.abs_sq().midpoint_f64() - 1.0).abs() < 1e-12);
    }
}
