//! Small integral solutions of linear systems over `O_K`: restriction of
//! scalars to `Z`, an exact kernel basis, LLL, then enumeration of short
//! kernel vectors until the height bound is met.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::heights::le_tol;
use super::{heights_vector, AlgebraicNumber, Field};
use crate::arith::{Int, Rat};
use crate::error::{Error, Result};
use crate::interval::{ln_int, Interval, DEFAULT_BITS};
use crate::lattice::{combine, enumerate_short, integer_kernel, lll};

#[derive(Clone, Debug)]
pub struct SiegelSolution {
    pub x: Vec<AlgebraicNumber>,
    /// `h^+(x)`, summed over places.
    pub h_plus: Interval,
    /// `(1/2) log |disc K| + M/(N-M) max_i h_{L2}(l_i)`.
    pub bound: Interval,
    pub within_bound: bool,
    /// Every kernel vector that could meet the bound was examined.
    pub exhaustive: bool,
}

/// The height bound for a system of `M` forms in `N` unknowns.
pub fn siegel_bound(forms: &[Vec<AlgebraicNumber>], n: usize) -> Result<Interval> {
    let field = field_of(forms)?;
    let m = forms.len();
    let disc = field.discriminant().magnitude().clone();
    let half_log_disc = if disc == num_bigint::BigUint::from(1u32) {
        Interval::zero()
    } else {
        ln_int(&BigInt::from(disc), DEFAULT_BITS).scale(&Rat::new(1.into(), 2.into()))
    };
    let mut max_h: Option<Interval> = None;
    for f in forms {
        if f.iter().all(|c| c.is_zero()) {
            continue;
        }
        let h = heights_vector(f)?.h_l2;
        max_h = Some(match max_h {
            None => h,
            Some(prev) => prev.max(&h),
        });
    }
    let ratio = Rat::new(BigInt::from(m), BigInt::from(n - m));
    Ok(half_log_disc.add(&max_h.unwrap_or_else(Interval::zero).scale(&ratio)))
}

fn field_of(forms: &[Vec<AlgebraicNumber>]) -> Result<Field> {
    forms
        .first()
        .and_then(|f| f.first())
        .map(|c| c.field().clone())
        .ok_or_else(|| Error::Precondition("empty linear system".into()))
}

/// Kernel vectors in coefficient form, with float data for the search.
struct Search {
    field: Field,
    n: usize,
    basis: Vec<Vec<Int>>,
    /// `emb[a][j][s]`: image of the `j`-th unknown of basis vector `a` at archimedean place `s`.
    emb: Vec<Vec<Vec<(f64, f64)>>>,
    local_deg: Vec<f64>,
}

impl Search {
    fn element(&self, c: &[Int], j: usize) -> AlgebraicNumber {
        let d = self.field.degree();
        AlgebraicNumber::from_ints(&self.field, &c[j * d..(j + 1) * d])
    }

    fn to_vector(&self, c: &[Int]) -> Vec<AlgebraicNumber> {
        (0..self.n).map(|j| self.element(c, j)).collect()
    }

    /// Float estimate of `h^+` for the combination `y` of basis vectors.
    fn h_plus_estimate(&self, y: &[i64]) -> f64 {
        let places = self.local_deg.len();
        let mut total = 0.0;
        for s in 0..places {
            let mut mx = 1.0f64;
            for j in 0..self.n {
                let (mut re, mut im) = (0.0, 0.0);
                for (a, &ya) in y.iter().enumerate() {
                    if ya != 0 {
                        re += ya as f64 * self.emb[a][j][s].0;
                        im += ya as f64 * self.emb[a][j][s].1;
                    }
                }
                mx = mx.max((re * re + im * im).sqrt());
            }
            total += self.local_deg[s] * mx.ln();
        }
        total
    }

    /// T2 Gram matrix of the basis: sum over unknowns and all complex embeddings.
    fn gram(&self) -> Vec<Vec<f64>> {
        let k = self.basis.len();
        let mut g = vec![vec![0.0; k]; k];
        for a in 0..k {
            for b in 0..k {
                let mut s = 0.0;
                for j in 0..self.n {
                    for (t, w) in self.local_deg.iter().enumerate() {
                        let (x, y) = (self.emb[a][j][t], self.emb[b][j][t]);
                        s += w * (x.0 * y.0 + x.1 * y.1);
                    }
                }
                g[a][b] = s;
            }
        }
        g
    }
}

/// Searches for the solution of least `h^+`; stops early once one meets the
/// bound. `node_budget` caps the enumeration.
pub fn siegel_solve_best(forms: &[Vec<AlgebraicNumber>], n: usize, node_budget: usize) -> Result<SiegelSolution> {
    let field = field_of(forms)?;
    let m = forms.len();
    if n <= m {
        return Err(Error::Precondition(format!("need more unknowns than forms (N = {n}, M = {m})")));
    }
    for f in forms {
        if f.len() != n {
            return Err(Error::Precondition("form length differs from the number of unknowns".into()));
        }
        if f.iter().any(|c| !c.is_integral()) {
            return Err(Error::Precondition("form coefficients must be integral".into()));
        }
    }
    let d = field.degree();
    let theta = AlgebraicNumber::theta(&field);
    // row (i, r), column (j, k): r-th coordinate of l_ij theta^k
    let mut a = vec![vec![Int::zero(); n * d]; m * d];
    for (i, f) in forms.iter().enumerate() {
        for (j, c) in f.iter().enumerate() {
            let mut cur = c.clone();
            for k in 0..d {
                for r in 0..d {
                    a[i * d + r][j * d + k] = cur.coords()[r].to_integer();
                }
                cur = cur.mul(&theta);
            }
        }
    }
    let kernel = integer_kernel(&a, n * d);
    let basis = lll(&kernel)?;
    let places = field.archimedean_places();
    let local_deg: Vec<f64> = places.iter().map(|v| v.local_degree() as f64).collect();
    let mut search = Search { field: field.clone(), n, basis, emb: Vec::new(), local_deg };
    search.emb = search
        .basis
        .iter()
        .map(|c| {
            (0..n)
                .map(|j| {
                    let x = search.element(c, j);
                    places.iter().map(|v| x.embed_f64(v.root_index)).collect()
                })
                .collect()
        })
        .collect();

    let bound = siegel_bound(forms, n)?;
    let bound_f = bound.hi.to_f64().unwrap_or(f64::INFINITY);
    let certify = |c: &[Int]| -> Result<(Vec<AlgebraicNumber>, Interval, bool)> {
        let x = search.to_vector(c);
        let h = heights_vector(&x)?.h_plus;
        let ok = le_tol(&h, &bound);
        Ok((x, h, ok))
    };

    // reduced basis vectors first
    let k = search.basis.len();
    let mut best: Option<(f64, Vec<i64>)> = None;
    for i in 0..k {
        let mut y = vec![0i64; k];
        y[i] = 1;
        let e = search.h_plus_estimate(&y);
        if best.as_ref().is_none_or(|(b, _)| e < *b) {
            best = Some((e, y));
        }
    }
    let (be, by) = best.clone().unwrap();
    if be <= bound_f + 1e-9 {
        let (x, h, ok) = certify(&combine(&search.basis, &by))?;
        if ok {
            return Ok(SiegelSolution { x, h_plus: h, bound, within_bound: true, exhaustive: false });
        }
    }

    // enumeration with growing radius up to the radius forced by the bound:
    // h^+(x) <= B gives |sigma(x_j)|^2 <= e^{2B} at every embedding
    let gram = search.gram();
    let r_max = (n * d) as f64 * (2.0 * bound_f).exp() * (1.0 + 1e-6) + 1e-6;
    let mut radius = (0..k).map(|i| gram[i][i]).fold(f64::INFINITY, f64::min).min(r_max);
    let mut exhaustive = false;
    let mut found: Option<(Vec<AlgebraicNumber>, Interval)> = None;
    let mut budget_left = node_budget;
    loop {
        let mut err: Option<Error> = None;
        let mut visit = |y: &[i64]| -> bool {
            let e = search.h_plus_estimate(y);
            if best.as_ref().is_none_or(|(b, _)| e < *b) {
                best = Some((e, y.to_vec()));
            }
            if e <= bound_f + 1e-9 {
                match certify(&combine(&search.basis, y)) {
                    Ok((x, h, true)) => {
                        found = Some((x, h));
                        return true;
                    }
                    Ok(_) => {}
                    Err(e) => {
                        err = Some(e);
                        return true;
                    }
                }
            }
            false
        };
        let complete = enumerate_short(&gram, radius, budget_left, &mut visit);
        if let Some(e) = err {
            return Err(e);
        }
        if let Some((x, h)) = found.take() {
            return Ok(SiegelSolution { x, h_plus: h, bound, within_bound: true, exhaustive: false });
        }
        if !complete {
            break;
        }
        if radius >= r_max {
            exhaustive = true;
            break;
        }
        budget_left = budget_left.saturating_sub(budget_left / 4);
        radius = (radius * 4.0).min(r_max);
    }
    let (_, by) = best.unwrap();
    let (x, h, ok) = certify(&combine(&search.basis, &by))?;
    Ok(SiegelSolution { x, h_plus: h, bound, within_bound: ok, exhaustive })
}

/// A nonzero integral solution meeting the height bound.
pub fn siegel_solve(forms: &[Vec<AlgebraicNumber>], n: usize) -> Result<SiegelSolution> {
    let s = siegel_solve_best(forms, n, 4_000_000)?;
    if !s.within_bound {
        let why = if s.exhaustive { "exhaustive search" } else { "search budget exhausted" };
        return Err(Error::NoSolutionFound(why.into()));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::NumberField;

    fn form(field: &Field, cs: &[i64]) -> Vec<AlgebraicNumber> {
        cs.iter().map(|&c| AlgebraicNumber::from_int(field, c)).collect()
    }

    #[test]
    fn single_forms_over_q() {
        let q = NumberField::rationals();
        let s = siegel_solve(&[form(&q, &[1, 1])], 2).unwrap();
        assert!(s.within_bound);
        assert_eq!(s.x[0].add(&s.x[1]), AlgebraicNumber::zero(&q));
        assert!(le_tol(&s.h_plus, &Interval::zero()));
        let s = siegel_solve(&[form(&q, &[1, 2, 3])], 3).unwrap();
        let lhs = s.x[0].add(&s.x[1].scale(&Rat::from_integer(2.into()))).add(&s.x[2].scale(&Rat::from_integer(3.into())));
        assert!(lhs.is_zero());
        assert!(le_tol(&s.h_plus, &Interval::zero()));
        assert!(matches!(siegel_solve(&[form(&q, &[1, 1])], 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn quadratic_field_system() {
        let k = NumberField::quadratic(2).unwrap();
        let s2 = AlgebraicNumber::theta(&k);
        let one = AlgebraicNumber::one(&k);
        let forms = vec![vec![one.clone(), s2.clone(), AlgebraicNumber::from_int(&k, 3)]];
        let s = siegel_solve(&forms, 3).unwrap();
        let val = forms[0].iter().zip(&s.x).fold(AlgebraicNumber::zero(&k), |acc, (c, x)| acc.add(&c.mul(x)));
        assert!(val.is_zero());
        assert!(s.x.iter().any(|x| !x.is_zero()));
    }
}
