use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::{normalized_log_abs, AlgebraicNumber, Place};
use crate::arith::{lcm_all, pow_int, Int, Rat};
use crate::error::{Error, Result};
use crate::interval::{ln_int, ln_rat, Interval, DEFAULT_BITS};
use crate::lattice::lattice_index;

/// Comparisons between enclosures are accepted when the violation is below
/// `2^-EQ_TOL_BITS`, so that exact equalities survive outward rounding.
pub const EQ_TOL_BITS: u32 = 150;

pub fn eq_tol() -> Rat {
    Rat::new(BigInt::one(), BigInt::one() << EQ_TOL_BITS)
}

/// `a <= b` up to the pinned tolerance.
pub fn le_tol(a: &Interval, b: &Interval) -> bool {
    b.sub(a).lo >= -eq_tol()
}

/// Height interval as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeightRecord {
    pub lower: String,
    pub upper: String,
}

impl From<&Interval> for HeightRecord {
    fn from(i: &Interval) -> Self {
        let (lower, upper) = i.to_decimal_pair(30);
        HeightRecord { lower, upper }
    }
}

/// Rational `q` with `log q = sum over finite places of max_i log |x_i|_v`.
///
/// With `x_i = y_i / delta`, this equals `delta^d / N(y_1, ..., y_r)` where the
/// norm of the ideal is the index of `sum y_i Z[theta]` in `Z[theta]`.
pub fn finite_max_log(xs: &[AlgebraicNumber]) -> Result<Rat> {
    let field = xs.first().ok_or(Error::ZeroElement)?.field().clone();
    if xs.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroElement);
    }
    let d = field.degree();
    let dens: Vec<Int> = xs.iter().map(|x| x.denominator()).collect();
    let delta = lcm_all(dens.iter());
    let dq = Rat::from_integer(delta.clone());
    let mut gens: Vec<Vec<Int>> = Vec::new();
    for x in xs {
        if x.is_zero() {
            continue;
        }
        let mut cur = x.scale(&dq);
        let theta = AlgebraicNumber::theta(&field);
        for _ in 0..d {
            gens.push(cur.coords().iter().map(|c| c.to_integer()).collect());
            cur = cur.mul(&theta);
        }
    }
    let norm = lattice_index(&gens, d);
    Ok(Rat::new(pow_int(&delta, d as u64), norm))
}

/// The four heights of a vector, as sums over all places (no `1/d` factor).
#[derive(Clone, Debug)]
pub struct VectorHeights {
    /// `sum_v log max_i |x_i|_v`.
    pub h_max: Interval,
    /// As `h_max`, with the `L^2` norm at archimedean places.
    pub h_l2: Interval,
    /// `h_max` of `(1, x)`.
    pub h_plus: Interval,
    /// `h_l2` of `(1, x)`.
    pub h_l2_plus: Interval,
}

fn arch_parts(xs: &[AlgebraicNumber], with_one: bool) -> Result<(Interval, Interval)> {
    let field = xs[0].field().clone();
    let mut max_sum = Interval::zero();
    let mut l2_sum = Interval::zero();
    for v in field.archimedean_places() {
        let mut mx = if with_one { Interval::from_int(1) } else { Interval::zero() };
        let mut l2 = mx.clone();
        for x in xs {
            if x.is_zero() {
                continue;
            }
            let s = match x.as_rational() {
                Some(q) => Interval::point(&q * &q),
                None => x.abs_sq_relative(v.root_index, DEFAULT_BITS + 16),
            };
            mx = mx.max(&s);
            l2 = l2.add(&s);
        }
        if !mx.is_positive() {
            return Err(Error::InsufficientPrecision("archimedean size too close to zero".into()));
        }
        let half_dv = Rat::new(BigInt::from(v.local_degree()), BigInt::from(2));
        max_sum = max_sum.add(&mx.ln(DEFAULT_BITS).scale(&half_dv));
        l2_sum = l2_sum.add(&l2.ln(DEFAULT_BITS).scale(&half_dv));
    }
    Ok((max_sum, l2_sum))
}

pub fn heights_vector(xs: &[AlgebraicNumber]) -> Result<VectorHeights> {
    let field = xs.first().ok_or(Error::ZeroElement)?.field().clone();
    let mut with_one = vec![AlgebraicNumber::one(&field)];
    with_one.extend(xs.iter().cloned());
    let fin_plus = ln_rat(&finite_max_log(&with_one)?, DEFAULT_BITS);
    let (max_plus, l2_plus) = arch_parts(xs, true)?;
    let h_plus = fin_plus.add(&max_plus);
    let h_l2_plus = fin_plus.add(&l2_plus);
    let (h_max, h_l2) = if xs.iter().all(|x| x.is_zero()) {
        (Interval::zero(), Interval::zero())
    } else {
        let fin = ln_rat(&finite_max_log(xs)?, DEFAULT_BITS);
        let (mx, l2) = arch_parts(xs, false)?;
        (fin.add(&mx), fin.add(&l2))
    };
    Ok(VectorHeights { h_max, h_l2, h_plus, h_l2_plus })
}

/// Heights of a polynomial, i.e. of its coefficient vector.
pub fn poly_height(coeffs: &[AlgebraicNumber]) -> Result<VectorHeights> {
    heights_vector(coeffs)
}

/// Absolute logarithmic Weil height of `(1 : x)`.
pub fn height(x: &AlgebraicNumber) -> Result<Interval> {
    let d = x.field().degree();
    let h = heights_vector(std::slice::from_ref(x))?.h_plus;
    Ok(h.scale(&Rat::new(BigInt::one(), BigInt::from(d))))
}

#[derive(Clone, Debug)]
pub struct LiouvilleVerdict {
    pub log_abs: Interval,
    pub height: Interval,
    /// `-h(x) / [K:Q]`.
    pub bound_as_written: Interval,
    /// `-[K:Q] h(x)`, the bound that holds for every field.
    pub bound_standard: Interval,
    pub holds_as_written: bool,
    pub holds_standard: bool,
}

/// Checks `log |x|_v >= -h(x)/[K:Q]` and the standard `log |x|_v >= -[K:Q] h(x)`.
pub fn liouville_check(x: &AlgebraicNumber, v: &Place) -> Result<LiouvilleVerdict> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let d = Rat::from_integer(BigInt::from(x.field().degree()));
    let log_abs = normalized_log_abs(x, v)?;
    let h = height(x)?;
    let bound_as_written = h.scale(&(-d.recip()));
    let bound_standard = h.scale(&(-d));
    Ok(LiouvilleVerdict {
        holds_as_written: le_tol(&bound_as_written, &log_abs),
        holds_standard: le_tol(&bound_standard, &log_abs),
        log_abs,
        height: h,
        bound_as_written,
        bound_standard,
    })
}

pub fn denominator(x: &AlgebraicNumber) -> Int {
    x.denominator()
}

#[derive(Clone, Debug)]
pub struct DenominatorVerdict {
    pub delta: Int,
    pub log_delta: Interval,
    pub height: Interval,
    /// `log delta <= h(x) / [K:Q]`.
    pub holds_as_written: bool,
    /// `log delta <= [K:Q] h(x)`.
    pub holds_standard: bool,
}

pub fn denominator_check(x: &AlgebraicNumber) -> Result<DenominatorVerdict> {
    let d = Rat::from_integer(BigInt::from(x.field().degree()));
    let delta = x.denominator();
    let log_delta = if delta.is_one() { Interval::zero() } else { ln_int(&delta, DEFAULT_BITS) };
    let h = height(x)?;
    Ok(DenominatorVerdict {
        holds_as_written: le_tol(&log_delta, &h.scale(&d.recip())),
        holds_standard: le_tol(&log_delta, &h.scale(&d)),
        delta,
        log_delta,
        height: h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::numfield::NumberField;

    fn close(a: &Interval, b: &Interval) -> bool {
        le_tol(a, b) && le_tol(b, a)
    }

    #[test]
    fn weil_heights() {
        let q = NumberField::rationals();
        let h = height(&AlgebraicNumber::from_rat(&q, rat(3, 2))).unwrap();
        assert!(close(&h, &ln_int(&BigInt::from(3), DEFAULT_BITS)));
        assert!(close(&height(&AlgebraicNumber::zero(&q)).unwrap(), &Interval::zero()));
        let k = NumberField::quadratic(2).unwrap();
        let h = height(&AlgebraicNumber::theta(&k)).unwrap();
        let half_ln2 = ln_int(&BigInt::from(2), DEFAULT_BITS).scale(&rat(1, 2));
        assert!(close(&h, &half_ln2));
    }

    #[test]
    fn vector_heights_over_q() {
        let q = NumberField::rationals();
        let v = |xs: &[i64]| xs.iter().map(|&x| AlgebraicNumber::from_int(&q, x)).collect::<Vec<_>>();
        let h = heights_vector(&v(&[1, 1])).unwrap();
        assert!(close(&h.h_max, &Interval::zero()));
        assert!(close(&h.h_l2, &ln_int(&BigInt::from(2), DEFAULT_BITS).scale(&rat(1, 2))));
        let h = heights_vector(&v(&[3, 4])).unwrap();
        assert!(close(&h.h_max, &ln_int(&BigInt::from(4), DEFAULT_BITS)));
        assert!(close(&h.h_l2, &ln_int(&BigInt::from(5), DEFAULT_BITS)));
        // content is removed projectively: (2, 4) ~ (1, 2)
        let h = heights_vector(&v(&[2, 4])).unwrap();
        assert!(close(&h.h_max, &ln_int(&BigInt::from(2), DEFAULT_BITS)));
        assert!(close(&h.h_plus, &ln_int(&BigInt::from(4), DEFAULT_BITS)));
    }

    #[test]
    fn liouville_and_denominator_over_q() {
        let q = NumberField::rationals();
        let half = AlgebraicNumber::from_rat(&q, rat(1, 2));
        let inf = &q.archimedean_places()[0];
        assert!(liouville_check(&half, inf).unwrap().holds_as_written);
        let two = &q.places_above(2).unwrap()[0];
        assert!(liouville_check(&half, two).unwrap().holds_as_written);
        let v = denominator_check(&AlgebraicNumber::from_rat(&q, rat(3, 2))).unwrap();
        assert_eq!(v.delta, BigInt::from(2));
        assert!(v.holds_as_written);
    }

    #[test]
    fn stated_normalization_fails_beyond_degree_one() {
        // 1/2 in Q(sqrt2): log|1/2| = -log 2 at a real place, while h(1/2)/2 = log(2)/2
        let k = NumberField::quadratic(2).unwrap();
        let half = AlgebraicNumber::from_rat(&k, rat(1, 2));
        let real = &k.archimedean_places()[0];
        let v = liouville_check(&half, real).unwrap();
        assert!(!v.holds_as_written);
        assert!(v.holds_standard);
        // 1/sqrt2 has denominator 2 but height log(2)/2
        let inv_sqrt2 = AlgebraicNumber::theta(&k).inv().unwrap();
        let dv = denominator_check(&inv_sqrt2).unwrap();
        assert_eq!(dv.delta, BigInt::from(2));
        assert!(!dv.holds_as_written);
        assert!(dv.holds_standard);
    }
}
