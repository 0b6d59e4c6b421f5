//! Sparse multivariate polynomials over a number field, also used as
//! power series truncated in total degree.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;

use crate::arith::{lcm_all, Int, Rat};
use crate::numfield::{AlgebraicNumber, Field};

pub type Monomial = Vec<u32>;

#[derive(Clone)]
pub struct MPoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Monomial, AlgebraicNumber>,
}

impl PartialEq for MPoly {
    fn eq(&self, o: &Self) -> bool {
        self.nvars == o.nvars && self.terms == o.terms
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{c}*{m:?}")).collect();
        write!(f, "MPoly({})", parts.join(" + "))
    }
}

pub fn total(m: &[u32]) -> u32 {
    m.iter().sum()
}

impl MPoly {
    pub fn zero(field: &Field, nvars: usize) -> Self {
        MPoly { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(c: AlgebraicNumber, nvars: usize) -> Self {
        let mut p = Self::zero(c.field(), nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(field: &Field, nvars: usize) -> Self {
        Self::constant(AlgebraicNumber::one(field), nvars)
    }

    pub fn var(field: &Field, nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Self::monomial(field, m, AlgebraicNumber::one(field))
    }

    pub fn monomial(field: &Field, m: Monomial, c: AlgebraicNumber) -> Self {
        let mut p = Self::zero(field, m.len());
        p.add_term(m, c);
        p
    }

    /// Polynomial from `(exponents, rational coefficient)` pairs.
    pub fn from_rat_terms(field: &Field, nvars: usize, terms: &[(Monomial, Rat)]) -> Self {
        let mut p = Self::zero(field, nvars);
        for (m, c) in terms {
            assert_eq!(m.len(), nvars);
            p.add_term(m.clone(), AlgebraicNumber::from_rat(field, c.clone()));
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: AlgebraicNumber) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                *e = e.add(&c);
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, AlgebraicNumber> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| total(m)).max()
    }

    /// Lowest total degree of a nonzero term.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|m| total(m)).min()
    }

    pub fn coefficient(&self, m: &[u32]) -> AlgebraicNumber {
        self.terms.get(m).cloned().unwrap_or_else(|| AlgebraicNumber::zero(&self.field))
    }

    pub fn constant_term(&self) -> AlgebraicNumber {
        self.coefficient(&vec![0; self.nvars])
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect();
        MPoly { field: self.field.clone(), nvars: self.nvars, terms }
    }

    pub fn scale(&self, c: &AlgebraicNumber) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field, self.nvars);
        }
        let terms = self.terms.iter().map(|(m, x)| (m.clone(), x.mul(c))).collect();
        MPoly { field: self.field.clone(), nvars: self.nvars, terms }
    }

    pub fn scale_rat(&self, q: &Rat) -> Self {
        if q.is_zero() {
            return Self::zero(&self.field, self.nvars);
        }
        let terms = self.terms.iter().map(|(m, x)| (m.clone(), x.scale(q))).collect();
        MPoly { field: self.field.clone(), nvars: self.nvars, terms }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.mul_trunc(o, None)
    }

    /// Product keeping only terms of total degree below `order`.
    pub fn mul_trunc(&self, o: &Self, order: Option<u32>) -> Self {
        let mut r = Self::zero(&self.field, self.nvars);
        for (ma, ca) in &self.terms {
            let da = total(ma);
            if order.is_some_and(|k| da >= k) {
                continue;
            }
            for (mb, cb) in &o.terms {
                if order.is_some_and(|k| da + total(mb) >= k) {
                    continue;
                }
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                r.add_term(m, ca.mul(cb));
            }
        }
        r
    }

    pub fn pow_trunc(&self, e: u32, order: Option<u32>) -> Self {
        let mut acc = Self::one(&self.field, self.nvars).truncate_opt(order);
        for _ in 0..e {
            acc = acc.mul_trunc(self, order);
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut r = Self::zero(&self.field, self.nvars);
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[i] -= 1;
            r.add_term(m2, c.scale(&Rat::from_integer(Int::from(m[i]))));
        }
        r
    }

    /// Terms of total degree below `order`.
    pub fn truncate(&self, order: u32) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| total(m) < order).map(|(m, c)| (m.clone(), c.clone())).collect();
        MPoly { field: self.field.clone(), nvars: self.nvars, terms }
    }

    fn truncate_opt(self, order: Option<u32>) -> Self {
        match order {
            Some(k) => self.truncate(k),
            None => self,
        }
    }

    pub fn homogeneous_part(&self, k: u32) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| total(m) == k).map(|(m, c)| (m.clone(), c.clone())).collect();
        MPoly { field: self.field.clone(), nvars: self.nvars, terms }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| total(m));
        match degs.next() {
            None => true,
            Some(d0) => degs.all(|d| d == d0),
        }
    }

    pub fn eval(&self, point: &[AlgebraicNumber]) -> AlgebraicNumber {
        assert_eq!(point.len(), self.nvars);
        let mut cache: HashMap<(usize, u32), AlgebraicNumber> = HashMap::new();
        let mut acc = AlgebraicNumber::zero(&self.field);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = cache.entry((i, e)).or_insert_with(|| point[i].pow(e as u64)).clone();
                t = t.mul(&pw);
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Substitutes `subs[i]` for variable `i`, truncating below `order` if given.
    pub fn compose(&self, subs: &[MPoly], order: Option<u32>) -> MPoly {
        assert_eq!(subs.len(), self.nvars);
        let nv = subs.first().map_or(0, |s| s.nvars);
        let mut cache: HashMap<(usize, u32), MPoly> = HashMap::new();
        let mut acc = MPoly::zero(&self.field, nv);
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(c.clone(), nv);
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = cache.entry((i, e)).or_insert_with(|| subs[i].pow_trunc(e, order)).clone();
                t = t.mul_trunc(&pw, order);
                if t.is_zero() {
                    break;
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Re-indexes variables: variable `i` becomes variable `map[i]` of a ring with `nvars` variables.
    pub fn embed_vars(&self, nvars: usize, map: &[usize]) -> MPoly {
        let mut r = MPoly::zero(&self.field, nvars);
        for (m, c) in &self.terms {
            let mut m2 = vec![0; nvars];
            for (i, &e) in m.iter().enumerate() {
                m2[map[i]] += e;
            }
            r.add_term(m2, c.clone());
        }
        r
    }

    pub fn coeff_vector(&self) -> Vec<AlgebraicNumber> {
        self.terms.values().cloned().collect()
    }

    /// Least positive integer clearing all coefficient denominators.
    pub fn denominator(&self) -> Int {
        let dens: Vec<Int> = self.terms.values().map(|c| c.denominator()).collect();
        lcm_all(dens.iter())
    }

    pub fn map_coeffs(&self, f: impl Fn(&AlgebraicNumber) -> AlgebraicNumber) -> MPoly {
        let mut r = MPoly::zero(&self.field, self.nvars);
        for (m, c) in &self.terms {
            r.add_term(m.clone(), f(c));
        }
        r
    }
}

/// All exponent vectors in `nvars` variables of total degree exactly `deg`.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    if nvars == 0 {
        return if deg == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=deg).rev() {
        for mut rest in monomials_of_degree(nvars - 1, deg - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All exponent vectors with every entry below `bound`.
pub fn box_monomials(nvars: usize, bound: u32) -> Vec<Monomial> {
    let mut out = vec![Vec::new()];
    for _ in 0..nvars {
        let mut next = Vec::new();
        for m in &out {
            for e in 0..bound {
                let mut m2 = m.clone();
                m2.push(e);
                next.push(m2);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::numfield::NumberField;

    #[test]
    fn ring_operations() {
        let q = NumberField::rationals();
        let x = MPoly::var(&q, 2, 0);
        let y = MPoly::var(&q, 2, 1);
        let s = x.add(&y);
        let sq = s.mul(&s);
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.coefficient(&[1, 1]), AlgebraicNumber::from_int(&q, 2));
        assert_eq!(sq.derivative(0), s.scale_rat(&rat(2, 1)));
        assert_eq!(s.pow_trunc(3, Some(2)), MPoly::zero(&q, 2));
        let pt = [AlgebraicNumber::from_int(&q, 2), AlgebraicNumber::from_int(&q, 3)];
        assert_eq!(sq.eval(&pt), AlgebraicNumber::from_int(&q, 25));
        // (x + y)^2 with x -> y, y -> 1
        let c = sq.compose(&[y.clone(), MPoly::one(&q, 2)], None);
        assert_eq!(c.eval(&pt), AlgebraicNumber::from_int(&q, 16));
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(box_monomials(2, 3).len(), 9);
    }
}
