//! Orders of vanishing along a subspace, the semistability index, and the
//! semistability test for hyperplanes in the Lie algebra of a torus.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::{lcm_all, Int, Rat};
use crate::error::{Error, Result};
use crate::lattice::integer_kernel;
use crate::mpoly::MPoly;
use crate::numfield::AlgebraicNumber;

/// The hyperplane `W = ker l` with `l(z) = sum beta_i z_i`, and the extended
/// operators `Delta_i = beta_i d_0 + d_i` on `K x Lie G`.
#[derive(Clone, Debug)]
pub struct Hyperplane {
    beta: Vec<AlgebraicNumber>,
}

impl Hyperplane {
    pub fn new(beta: Vec<AlgebraicNumber>) -> Result<Hyperplane> {
        if beta.is_empty() || beta.iter().all(|b| b.is_zero()) {
            return Err(Error::Precondition("beta must have a nonzero entry".into()));
        }
        if beta.iter().any(|b| !b.is_integral()) {
            return Err(Error::Precondition("beta must be integral; clear denominators first".into()));
        }
        Ok(Hyperplane { beta })
    }

    pub fn beta(&self) -> &[AlgebraicNumber] {
        &self.beta
    }

    pub fn n(&self) -> usize {
        self.beta.len()
    }

    /// `l(z)`.
    pub fn form(&self, z: &[AlgebraicNumber]) -> AlgebraicNumber {
        let field = self.beta[0].field();
        self.beta.iter().zip(z).fold(AlgebraicNumber::zero(field), |acc, (b, x)| acc.add(&b.mul(x)))
    }

    /// Direction of `Delta_i` in coordinates `(z_0, z_1, ..., z_n)`: `(beta_i, e_i)`.
    pub fn directions(&self) -> Vec<Vec<AlgebraicNumber>> {
        let field = self.beta[0].field();
        (0..self.n())
            .map(|i| {
                let mut v = vec![AlgebraicNumber::zero(field); self.n() + 1];
                v[0] = self.beta[i].clone();
                v[i + 1] = AlgebraicNumber::one(field);
                v
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VanishingOrder {
    Exact(u32),
    /// No nonzero derivative below the cap.
    AtLeast(u32),
}

impl VanishingOrder {
    pub fn at_least(&self, k: u32) -> bool {
        match *self {
            VanishingOrder::Exact(o) => o >= k,
            VanishingOrder::AtLeast(c) => c >= k,
        }
    }
}

/// Least `|t|` with `(Delta_1^{t_1} ... Delta_d^{t_d} F)(z) != 0`, where `F` is
/// given by its Taylor expansion at `z`, correct below total degree
/// `valid_below`. `(Delta^t F)(z)` is `t!` times the coefficient of `tau^t` in
/// `F(sum_k tau_k Delta_k)`, so the order is the lowest degree present there.
pub fn ord_along(f: &MPoly, valid_below: u32, basis: &[Vec<AlgebraicNumber>], cap: u32) -> Result<VanishingOrder> {
    if cap > valid_below {
        return Err(Error::InsufficientPrecision(format!(
            "expansion is known below degree {valid_below}, cap is {cap}"
        )));
    }
    let m = f.nvars();
    if basis.iter().any(|v| v.len() != m) {
        return Err(Error::Precondition("basis vectors must match the number of variables".into()));
    }
    let field = f.field();
    let d = basis.len();
    let subs: Vec<MPoly> = (0..m)
        .map(|v| {
            let mut s = MPoly::zero(field, d);
            for (k, b) in basis.iter().enumerate() {
                s = s.add(&MPoly::var(field, d, k).scale(&b[v]));
            }
            s
        })
        .collect();
    let g = f.truncate(cap).compose(&subs, Some(cap));
    Ok(match g.order() {
        Some(k) => VanishingOrder::Exact(k),
        None => VanishingOrder::AtLeast(cap),
    })
}

/// `dim V / dim G`, or 1 when `dim G = 0`.
pub fn tau_index(dim_v: usize, dim_g: usize) -> Rat {
    if dim_g == 0 {
        Rat::from_integer(BigInt::from(1))
    } else {
        Rat::new(BigInt::from(dim_v), BigInt::from(dim_g))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SemistabilityVerdict {
    pub semistable: bool,
    /// Primitive integer relation `sum q_i beta_i = 0`, first nonzero entry positive.
    pub witness: Option<Vec<String>>,
    #[serde(skip)]
    pub witness_int: Option<Vec<Int>>,
    /// `tau(G, W) = (n-1)/n`.
    pub tau: String,
}

/// For `G = G_m^n` and `W = ker l`: connected subgroups are subtori whose Lie
/// algebras are the rational subspaces, so `(G, W)` is semistable iff `W`
/// holds no nonzero rational vector, i.e. the `beta_i` satisfy no rational
/// linear relation.
pub fn is_semistable_gm(beta: &[AlgebraicNumber]) -> Result<SemistabilityVerdict> {
    if beta.is_empty() || beta.iter().all(|b| b.is_zero()) {
        return Err(Error::Precondition("beta must have a nonzero entry".into()));
    }
    let n = beta.len();
    let d = beta[0].field().degree();
    let dens: Vec<Int> = beta.iter().map(|b| b.denominator()).collect();
    let den = lcm_all(dens.iter());
    let dq = Rat::from_integer(den);
    // row r, column i: r-th coordinate of den * beta_i
    let a: Vec<Vec<Int>> =
        (0..d).map(|r| beta.iter().map(|b| (&b.coords()[r] * &dq).to_integer()).collect()).collect();
    let kernel = integer_kernel(&a, n);
    let tau = crate::arith::format_rational(&tau_index(n - 1, n));
    let Some(first) = kernel.into_iter().next() else {
        return Ok(SemistabilityVerdict { semistable: true, witness: None, witness_int: None, tau });
    };
    let g = first.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    let mut w: Vec<Int> = first.iter().map(|x| x / &g).collect();
    if w.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        w = w.iter().map(|x| -x).collect();
    }
    Ok(SemistabilityVerdict {
        semistable: false,
        witness: Some(w.iter().map(|x| x.to_string()).collect()),
        witness_int: Some(w),
        tau,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::numfield::NumberField;

    #[test]
    fn orders_along_subspaces() {
        let q = NumberField::rationals();
        let one = AlgebraicNumber::one(&q);
        let zero = AlgebraicNumber::zero(&q);
        let z1 = MPoly::var(&q, 2, 0);
        let std = vec![vec![one.clone(), zero.clone()], vec![zero.clone(), one.clone()]];
        assert_eq!(ord_along(&z1.mul(&z1), 10, &std, 5).unwrap(), VanishingOrder::Exact(2));
        assert_eq!(ord_along(&MPoly::zero(&q, 2), 10, &std, 5).unwrap(), VanishingOrder::AtLeast(5));
        // (z1 - 2 z2)^3 vanishes identically along (2, 1)
        let lin = z1.sub(&MPoly::var(&q, 2, 1).scale_rat(&rat(2, 1)));
        let cube = lin.mul(&lin).mul(&lin);
        let along = vec![vec![AlgebraicNumber::from_int(&q, 2), one.clone()]];
        assert_eq!(ord_along(&cube, 10, &along, 6).unwrap(), VanishingOrder::AtLeast(6));
        assert_eq!(ord_along(&cube, 10, &std[..1], 6).unwrap(), VanishingOrder::Exact(3));
        assert!(matches!(ord_along(&cube, 3, &std, 6), Err(Error::InsufficientPrecision(_))));
    }

    #[test]
    fn tau_values() {
        assert_eq!(tau_index(1, 2), rat(1, 2));
        assert_eq!(tau_index(0, 0), rat(1, 1));
        assert_eq!(tau_index(4, 5), rat(4, 5));
    }

    #[test]
    fn semistability_examples() {
        let k = NumberField::quadratic(2).unwrap();
        let b = [AlgebraicNumber::one(&k), AlgebraicNumber::theta(&k)];
        assert!(is_semistable_gm(&b).unwrap().semistable);
        let q = NumberField::rationals();
        let v = is_semistable_gm(&[AlgebraicNumber::from_int(&q, 2), AlgebraicNumber::from_int(&q, 1)]).unwrap();
        assert!(!v.semistable);
        assert_eq!(v.witness_int.unwrap(), vec![BigInt::from(1), BigInt::from(-2)]);
        assert!(is_semistable_gm(&[AlgebraicNumber::one(&q)]).unwrap().semistable);
    }
}
