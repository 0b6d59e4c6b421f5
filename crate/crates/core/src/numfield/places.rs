use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{support_primes, AlgebraicNumber, NumberField};
use crate::arith::{is_prime_u64, vp_int, Int, Rat};
use crate::error::{Error, Result};
use crate::interval::{ln_int, ln_rat, Interval, DEFAULT_BITS};
use crate::upoly::{degree, factor_mod_p, hensel_lift_factors, pow_mod, resultant, ZPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PlaceKind {
    Real,
    Complex,
    Finite,
}

/// A place of the field. Finite places correspond to prime ideals
/// `(p, g(theta))` for the irreducible factors `g` of the defining polynomial mod `p`.
#[derive(Clone, Debug)]
pub struct Place {
    pub kind: PlaceKind,
    /// Index into the field's root enclosures (archimedean places).
    pub root_index: usize,
    pub p: u64,
    /// Irreducible factor of the defining polynomial modulo `p`.
    pub residue_factor: ZPoly,
    pub e: u32,
    pub f: u32,
    coprime_factors: Arc<Vec<ZPoly>>,
    factor_index: usize,
    local_factor: ZPoly,
    local_prec: u32,
}

const LOCAL_PREC: u32 = 64;

impl Place {
    /// `[K_v : Q_v]`.
    pub fn local_degree(&self) -> u32 {
        match self.kind {
            PlaceKind::Real => 1,
            PlaceKind::Complex => 2,
            PlaceKind::Finite => self.e * self.f,
        }
    }

    pub fn is_archimedean(&self) -> bool {
        self.kind != PlaceKind::Finite
    }

    pub fn label(&self) -> String {
        match self.kind {
            PlaceKind::Real => format!("real{}", self.root_index),
            PlaceKind::Complex => format!("complex{}", self.root_index),
            PlaceKind::Finite => {
                let g: Vec<String> = self.residue_factor.iter().map(|c| c.to_string()).collect();
                format!("{}:[{}]", self.p, g.join(","))
            }
        }
    }

    /// Monic factor of the defining polynomial over `Z/p^k` belonging to this place.
    fn local_factor_at(&self, m: &[Int], k: u32) -> ZPoly {
        if k <= self.local_prec {
            return self.local_factor.clone();
        }
        hensel_lift_factors(m, &self.coprime_factors, &BigInt::from(self.p), k)[self.factor_index].clone()
    }
}

impl NumberField {
    pub fn archimedean_places(&self) -> Vec<Place> {
        self.roots()
            .iter()
            .enumerate()
            .map(|(i, r)| Place {
                kind: if r.real { PlaceKind::Real } else { PlaceKind::Complex },
                root_index: i,
                p: 0,
                residue_factor: Vec::new(),
                e: 1,
                f: 1,
                coprime_factors: Arc::new(Vec::new()),
                factor_index: 0,
                local_factor: Vec::new(),
                local_prec: 0,
            })
            .collect()
    }

    /// All places above the rational prime `p`.
    pub fn places_above(&self, p: u64) -> Result<Vec<Place>> {
        if !is_prime_u64(p) {
            return Err(Error::Precondition(format!("{p} is not prime")));
        }
        if let Some(v) = self.cached_places(p) {
            return Ok(v);
        }
        let pb = BigInt::from(p);
        let fac = factor_mod_p(self.min_poly(), &pb);
        let coprime: Arc<Vec<ZPoly>> = Arc::new(fac.iter().map(|(g, e)| pow_mod(g, *e, &pb)).collect());
        let lifted = hensel_lift_factors(self.min_poly(), &coprime, &pb, LOCAL_PREC);
        let places: Vec<Place> = fac
            .iter()
            .enumerate()
            .map(|(i, (g, e))| Place {
                kind: PlaceKind::Finite,
                root_index: 0,
                p,
                residue_factor: g.clone(),
                e: *e,
                f: degree(g).unwrap() as u32,
                coprime_factors: coprime.clone(),
                factor_index: i,
                local_factor: lifted[i].clone(),
                local_prec: LOCAL_PREC,
            })
            .collect();
        self.cache_places(p, places.clone());
        Ok(places)
    }
}

/// Normalized valuation `v_P(x)` (uniformizer has valuation 1); `None` for zero.
pub fn place_valuation(x: &AlgebraicNumber, v: &Place) -> Result<Option<i64>> {
    if v.is_archimedean() {
        return Err(Error::Precondition("valuation requested at an archimedean place".into()));
    }
    if x.is_zero() {
        return Ok(None);
    }
    let (y, den) = x.integral_parts();
    let m = x.field().min_poly();
    let mut k = LOCAL_PREC;
    let vy = loop {
        let g = v.local_factor_at(m, k);
        let r = resultant(&g, &y);
        if !r.is_zero() {
            let vr = vp_int(&r, v.p);
            if vr < k as u64 {
                break vr;
            }
        }
        k *= 2;
        if k > 1 << 14 {
            return Err(Error::InsufficientPrecision("local valuation exceeds lifting precision".into()));
        }
    };
    debug_assert_eq!(vy % v.f as u64, 0);
    let vy = (vy / v.f as u64) as i64;
    Ok(Some(vy - v.e as i64 * vp_int(&den, v.p) as i64))
}

/// `log |x|_v` with `|x|_v = |tau_v(x)|^{[K_v:R]}` at archimedean places and
/// `|x|_v = p^{-f v_P(x)}` at finite ones.
pub fn normalized_log_abs(x: &AlgebraicNumber, v: &Place) -> Result<Interval> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    match v.kind {
        PlaceKind::Finite => {
            let vp = place_valuation(x, v)?.unwrap();
            let q = Rat::from_integer(BigInt::from(-(v.f as i64) * vp));
            Ok(ln_int(&BigInt::from(v.p), DEFAULT_BITS).scale(&q))
        }
        _ => {
            if let Some(q) = x.as_rational() {
                let l = ln_rat(&q.abs(), DEFAULT_BITS);
                return Ok(l.scale(&Rat::from_integer(BigInt::from(v.local_degree()))));
            }
            let s = x.abs_sq_relative(v.root_index, DEFAULT_BITS + 16);
            if !s.is_positive() {
                return Err(Error::InsufficientPrecision("embedding too close to zero".into()));
            }
            let half_dv = Rat::new(BigInt::from(v.local_degree()), BigInt::from(2));
            Ok(s.ln(DEFAULT_BITS).scale(&half_dv))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductFormulaVerdict {
    /// Enclosure of the sum of `log |x|_v` over all places.
    #[serde(skip)]
    pub sum: Interval,
    /// Decided by exact rational arithmetic (the field is `Q`).
    pub exact: bool,
    pub pass: bool,
    pub places: usize,
}

/// Width below which an enclosure of the log-sum counts as zero (`10^-30`).
pub fn product_formula_tolerance() -> Rat {
    Rat::new(BigInt::one(), num_traits::pow(BigInt::from(10), 30))
}

/// Sum of `log |x|_v` over every place where `|x|_v != 1`, plus all archimedean places.
pub fn product_formula_check(x: &AlgebraicNumber) -> Result<ProductFormulaVerdict> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let field = x.field();
    let mut sum = Interval::zero();
    let mut count = 0;
    let mut exact_product = Rat::one();
    for v in field.archimedean_places() {
        sum = sum.add(&normalized_log_abs(x, &v)?);
        count += 1;
        if let Some(q) = x.as_rational() {
            exact_product *= q.abs();
        }
    }
    for p in support_primes(x) {
        for v in field.places_above(p)? {
            let l = normalized_log_abs(x, &v)?;
            sum = sum.add(&l);
            count += 1;
            if field.is_rational_field() {
                let vp = place_valuation(x, &v)?.unwrap();
                let pp = Rat::from_integer(BigInt::from(p));
                exact_product *= crate::arith::pow_rat(&pp, -vp);
            }
        }
    }
    if field.is_rational_field() {
        let pass = exact_product.is_one();
        return Ok(ProductFormulaVerdict { sum, exact: true, pass, places: count });
    }
    let pass = sum.contains_zero() && sum.width() < product_formula_tolerance();
    Ok(ProductFormulaVerdict { sum, exact: false, pass, places: count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn places_above_two_in_q_sqrt2() {
        let k = NumberField::quadratic(2).unwrap();
        let ps = k.places_above(2).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!((ps[0].e, ps[0].f), (2, 1));
        let s = AlgebraicNumber::theta(&k);
        assert_eq!(place_valuation(&s, &ps[0]).unwrap(), Some(1));
        let l = normalized_log_abs(&s, &ps[0]).unwrap();
        assert!(l.add(&ln_int(&BigInt::from(2), DEFAULT_BITS)).width() < rat(1, 1 << 30));
        let split = k.places_above(7).unwrap();
        assert_eq!(split.len(), 2);
        assert_eq!(split.iter().map(|v| v.local_degree()).sum::<u32>(), 2);
        // 3 + sqrt2 has norm 7: valuation 1 at exactly one place above 7
        let x = AlgebraicNumber::from_i64s(&k, &[3, 1]);
        let vals: Vec<i64> = split.iter().map(|v| place_valuation(&x, v).unwrap().unwrap()).collect();
        assert_eq!(vals.iter().sum::<i64>(), 1);
    }

    #[test]
    fn product_formula_examples() {
        let q = NumberField::rationals();
        let x = AlgebraicNumber::from_rat(&q, rat(3, 4));
        let v = product_formula_check(&x).unwrap();
        assert!(v.exact && v.pass);
        let k = NumberField::quadratic(2).unwrap();
        let u = AlgebraicNumber::from_i64s(&k, &[1, 1]);
        assert!(product_formula_check(&u).unwrap().pass);
        assert!(matches!(product_formula_check(&AlgebraicNumber::zero(&k)), Err(Error::ZeroElement)));
    }
}
