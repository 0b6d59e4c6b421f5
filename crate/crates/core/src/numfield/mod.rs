//! Monogenic number fields `K = Q(theta)` with `O_K = Z[theta]`: exact element
//! arithmetic, archimedean and finite places, heights, Liouville and
//! denominator checks, and a small-solution solver for linear systems.

pub mod embed;
mod element;
mod heights;
mod places;
mod siegel;

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{factor, small_primes, to_u64, Int, Rat};
use crate::error::{Error, Result};
use crate::upoly::{self, degree, discriminant, factor_mod_p, gcd_mod, mul_mod, pow_mod, ZPoly};

pub use element::AlgebraicNumber;
pub use embed::{CInterval, RootEnclosure};
pub use heights::{
    denominator, denominator_check, eq_tol, finite_max_log, height, heights_vector, le_tol, liouville_check, poly_height,
    DenominatorVerdict, HeightRecord, LiouvilleVerdict, VectorHeights, EQ_TOL_BITS,
};
pub use places::{normalized_log_abs, place_valuation, product_formula_tolerance, product_formula_check, Place, PlaceKind, ProductFormulaVerdict};
pub use siegel::{siegel_bound, siegel_solve, siegel_solve_best, SiegelSolution};

/// Bits of precision kept for the root enclosures of the defining polynomial.
pub const ROOT_BITS: u32 = 512;

#[derive(Debug)]
pub struct NumberField {
    min_poly: ZPoly,
    discriminant: Int,
    roots: Vec<RootEnclosure>,
    r1: usize,
    r2: usize,
    places: Mutex<BTreeMap<u64, Vec<Place>>>,
    /// Root enclosures rounded to a working precision, keyed by `(root, bits)`.
    rounded_roots: Mutex<BTreeMap<(usize, u32), CInterval>>,
}

pub type Field = Arc<NumberField>;

/// Sets of degrees of monic factors, as a bitmask over `0..=d`.
fn factor_degree_sums(f: &[Int], p: &Int) -> u128 {
    let mut mask: u128 = 1;
    for (g, e) in factor_mod_p(f, p) {
        let dg = degree(&g).unwrap();
        for _ in 0..e {
            mask |= mask << dg;
        }
    }
    mask
}

/// Dedekind's criterion: is `Z[theta]` maximal at `p`?
fn dedekind_maximal(m: &[Int], p: &Int) -> bool {
    let fac = factor_mod_p(m, p);
    if fac.iter().all(|(_, e)| *e == 1) {
        return true;
    }
    let g = fac.iter().fold(vec![Int::one()], |acc, (gi, _)| mul_mod(&acc, gi, p));
    let h = fac.iter().fold(vec![Int::one()], |acc, (gi, e)| mul_mod(&acc, &pow_mod(gi, e - 1, p), p));
    let diff = upoly::sub(&upoly::mul(&g, &h), m);
    let f: ZPoly = diff.iter().map(|c| c.div_floor(p)).collect();
    let c = gcd_mod(&gcd_mod(&f, &g, p), &h, p);
    degree(&c) == Some(0)
}

impl NumberField {
    /// Builds `Q[x]/(m)` for a monic irreducible integer polynomial, checking
    /// that `Z[theta]` is the full ring of integers.
    pub fn new(min_poly: Vec<Int>) -> Result<Field> {
        let m = upoly::trim(min_poly);
        let d = degree(&m).ok_or_else(|| Error::UnsupportedField("zero polynomial".into()))?;
        if d == 0 || !m[d].is_one() {
            return Err(Error::UnsupportedField("defining polynomial must be monic of positive degree".into()));
        }
        if d > 12 {
            return Err(Error::UnsupportedField("degree above 12".into()));
        }
        let disc = discriminant(&m);
        if disc.is_zero() {
            return Err(Error::UnsupportedField("defining polynomial is not squarefree".into()));
        }
        if d > 1 {
            let full: u128 = 1 | (1u128 << d);
            let mut mask: u128 = (1u128 << (d + 1)) - 1;
            for p in small_primes(400) {
                let pb = BigInt::from(p);
                if (&disc % &pb).is_zero() {
                    continue;
                }
                mask &= factor_degree_sums(&m, &pb);
                if mask == full {
                    break;
                }
            }
            if mask != full {
                return Err(Error::UnsupportedField("irreducibility could not be certified".into()));
            }
            for (p, e) in factor(&disc) {
                if e >= 2 && !dedekind_maximal(&m, &p) {
                    return Err(Error::UnsupportedField(format!("Z[theta] is not maximal at {p}")));
                }
            }
        }
        let roots = embed::isolate_roots(&m, ROOT_BITS)?;
        let r1 = roots.iter().filter(|r| r.real).count();
        let r2 = roots.len() - r1;
        Ok(Arc::new(NumberField { min_poly: m, discriminant: disc, roots, r1, r2, places: Mutex::new(BTreeMap::new()), rounded_roots: Mutex::new(BTreeMap::new()) }))
    }

    pub fn from_i64(cs: &[i64]) -> Result<Field> {
        Self::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn rationals() -> Field {
        Self::from_i64(&[0, 1]).expect("Q")
    }

    /// `Q(sqrt(D))` for squarefree `D != 0, 1`, generated by an integral basis element.
    pub fn quadratic(dd: i64) -> Result<Field> {
        if dd.rem_euclid(4) == 1 {
            Self::from_i64(&[-(dd - 1) / 4, -1, 1])
        } else {
            Self::from_i64(&[-dd, 0, 1])
        }
    }

    pub fn gaussian() -> Field {
        Self::from_i64(&[1, 0, 1]).expect("Q(i)")
    }

    pub fn cyclotomic3() -> Field {
        Self::from_i64(&[1, 1, 1]).expect("Q(zeta3)")
    }

    pub fn cyclotomic5() -> Field {
        Self::from_i64(&[1, 1, 1, 1, 1]).expect("Q(zeta5)")
    }

    /// Preset lookup: `Q`, `Q(i)`, `Q(zeta3)`, `Q(zeta5)`, `Q(sqrtD)`.
    pub fn preset(name: &str) -> Result<Field> {
        let s: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        match s.as_str() {
            "Q" => Ok(Self::rationals()),
            "Q(i)" => Ok(Self::gaussian()),
            "Q(zeta3)" => Ok(Self::cyclotomic3()),
            "Q(zeta5)" => Ok(Self::cyclotomic5()),
            _ => {
                let inner = s
                    .strip_prefix("Q(sqrt")
                    .and_then(|r| r.strip_suffix(')'))
                    .map(|r| r.trim_start_matches('(').trim_end_matches(')'))
                    .ok_or_else(|| Error::Parse(format!("unknown field preset {name}")))?;
                let dd: i64 = inner.parse().map_err(|_| Error::Parse(format!("bad radicand in {name}")))?;
                Self::quadratic(dd)
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn min_poly(&self) -> &[Int] {
        &self.min_poly
    }

    pub fn discriminant(&self) -> &Int {
        &self.discriminant
    }

    pub fn r1(&self) -> usize {
        self.r1
    }

    pub fn r2(&self) -> usize {
        self.r2
    }

    /// Root enclosures: real roots first, then one per conjugate pair.
    pub fn roots(&self) -> &[RootEnclosure] {
        &self.roots
    }

    pub fn is_rational_field(&self) -> bool {
        self.degree() == 1
    }

    pub fn same_as(&self, other: &NumberField) -> bool {
        self.min_poly == other.min_poly
    }

    /// Product of coordinate vectors, reduced modulo the defining polynomial.
    pub fn mul_coords(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let d = self.degree();
        let mut prod = vec![Rat::zero(); 2 * d];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        self.reduce_coords(prod)
    }

    pub fn reduce_coords(&self, mut c: Vec<Rat>) -> Vec<Rat> {
        let d = self.degree();
        for k in (d..c.len()).rev() {
            if c[k].is_zero() {
                continue;
            }
            let lead = c[k].clone();
            for i in 0..d {
                c[k - d + i] -= &lead * Rat::from_integer(self.min_poly[i].clone());
            }
            c[k] = Rat::zero();
        }
        c.truncate(d);
        c.resize(d, Rat::zero());
        c
    }

    /// Human-readable defining polynomial in `t`.
    pub fn poly_string(&self) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.min_poly.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mon = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            let coef = if k > 0 && c.abs().is_one() {
                if c.is_negative() { "-".to_string() } else { String::new() }
            } else {
                c.to_string()
            };
            parts.push(format!("{coef}{mon}"));
        }
        parts.join(" + ").replace("+ -", "- ")
    }

    pub(crate) fn cached_places(&self, p: u64) -> Option<Vec<Place>> {
        self.places.lock().unwrap().get(&p).cloned()
    }

    pub(crate) fn cache_places(&self, p: u64, v: Vec<Place>) {
        self.places.lock().unwrap().insert(p, v);
    }

    /// Enclosure of the `i`-th root with `bits` fractional bits.
    pub fn root_at(&self, i: usize, bits: u32) -> CInterval {
        let mut cache = self.rounded_roots.lock().unwrap();
        cache.entry((i, bits)).or_insert_with(|| self.roots[i].as_cinterval().round(bits)).clone()
    }
}

/// The primes below which every place of `x` with nonzero valuation lies.
pub fn support_primes(x: &AlgebraicNumber) -> Vec<u64> {
    let (y, den) = x.integral_parts();
    let n = AlgebraicNumber::from_ints(x.field(), &y).norm();
    let mut ps: Vec<u64> = Vec::new();
    for q in [n.numer().abs(), den] {
        if q.is_zero() || q.is_one() {
            continue;
        }
        for (p, _) in factor(&q) {
            ps.push(to_u64(&p).expect("prime factor exceeds 64 bits"));
        }
    }
    ps.sort_unstable();
    ps.dedup();
    ps
}
