//! The normalized exponential series of a model, solved degree by degree from
//! `d_j f_i = P_{i,L(j)}(f_1, ..., f_N)`, and the derivative recursion
//! `D_j(P) = sum_i (dP/dT_i) P_{i,L(j)}` with its degree, height and
//! denominator bookkeeping.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::GroupModel;
use crate::arith::{format_rational, pow_int, vp_rat, Rat};
use crate::error::{Error, Result};
use crate::interval::{ln_int, Interval, DEFAULT_BITS};
use crate::mpoly::{monomials_of_degree, total, MPoly};
use crate::numfield::{heights_vector, AlgebraicNumber, HeightRecord};
use crate::padic::ValuationExponent;

#[derive(Clone, Debug)]
pub struct ExpSeries {
    model_name: String,
    n: usize,
    order: u32,
    f: Vec<MPoly>,
}

impl ExpSeries {
    pub fn model_name(&self) -> &str {
        &self.model_name
    }

    /// Largest total degree kept.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `f_{i+1}` as a polynomial in `z_1..z_n` of total degree at most `order`.
    pub fn component(&self, i: usize) -> &MPoly {
        &self.f[i]
    }

    pub fn components(&self) -> &[MPoly] {
        &self.f
    }

    pub fn coefficient(&self, i: usize, alpha: &[u32]) -> AlgebraicNumber {
        self.f[i].coefficient(alpha)
    }
}

/// Solves for `f` with `f(0) = 0` through total degree `order`. Every
/// coefficient is determined once for each `j` with `alpha_j > 0`; the values
/// must agree.
pub fn exp_series(model: &GroupModel, order: u32) -> Result<ExpSeries> {
    if order == 0 {
        return Err(Error::Precondition("series order must be at least 1".into()));
    }
    let field = model.field();
    let (n, big_n) = (model.n(), model.big_n());
    let mut f = vec![MPoly::zero(field, n); big_n];
    for k in 1..=order {
        let mut new_terms = Vec::with_capacity(big_n);
        for i in 0..big_n {
            let rhs: Vec<MPoly> = (0..n).map(|j| model.deriv_poly(i, j).compose(&f, Some(k))).collect();
            let mut terms = Vec::new();
            for alpha in monomials_of_degree(n, k) {
                let mut value: Option<AlgebraicNumber> = None;
                for j in 0..n {
                    if alpha[j] == 0 {
                        continue;
                    }
                    let mut beta = alpha.clone();
                    beta[j] -= 1;
                    let c = rhs[j].coefficient(&beta).scale(&Rat::new(BigInt::one(), BigInt::from(alpha[j])));
                    match &value {
                        None => value = Some(c),
                        Some(v) if *v == c => {}
                        Some(_) => {
                            return Err(Error::InconsistentSystem(format!(
                                "coordinate {} at exponent {:?} disagrees between directions",
                                i + 1,
                                alpha
                            )))
                        }
                    }
                }
                if let Some(v) = value {
                    terms.push((alpha, v));
                }
            }
            new_terms.push(terms);
        }
        for (fi, terms) in f.iter_mut().zip(new_terms) {
            for (m, c) in terms {
                fi.add_term(m, c);
            }
        }
    }
    Ok(ExpSeries { model_name: model.name().to_string(), n, order, f })
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegrabilityVerdict {
    pub order: u32,
    /// `d_j f_i = P_{i,L(j)}(f)` below degree `order`.
    pub pde_ok: bool,
    /// `d_k (P_{i,L(j)}(f)) = d_j (P_{i,L(k)}(f))` below degree `order - 1`.
    pub mixed_ok: bool,
    pub pass: bool,
}

pub fn integrability_check(model: &GroupModel, series: &ExpSeries) -> IntegrabilityVerdict {
    let m = series.order;
    let (n, big_n) = (model.n(), model.big_n());
    let mut pde_ok = true;
    let mut mixed_ok = true;
    for i in 0..big_n {
        let rhs: Vec<MPoly> = (0..n).map(|j| model.deriv_poly(i, j).compose(&series.f, Some(m))).collect();
        for j in 0..n {
            if series.f[i].derivative(j).truncate(m) != rhs[j] {
                pde_ok = false;
            }
            for k in j + 1..n {
                if rhs[j].derivative(k).truncate(m - 1) != rhs[k].derivative(j).truncate(m - 1) {
                    mixed_ok = false;
                }
            }
        }
    }
    IntegrabilityVerdict { order: m, pde_ok, mixed_ok, pass: pde_ok && mixed_ok }
}

/// `f_i(z + w) E_0(f(z), f(w)) = E_i(f(z), f(w))` below total degree `order`,
/// in the `2n` variables `z, w`.
pub fn addition_compatibility_check(model: &GroupModel, series: &ExpSeries) -> bool {
    let field = model.field();
    let (n, big_n) = (model.n(), model.big_n());
    let m = series.order;
    let nv = 2 * n;
    let shifted: Vec<MPoly> = (0..n).map(|i| MPoly::var(field, nv, i).add(&MPoly::var(field, nv, n + i))).collect();
    let zmap: Vec<usize> = (0..n).collect();
    let wmap: Vec<usize> = (n..2 * n).collect();
    let mut args = Vec::with_capacity(2 * (big_n + 1));
    args.push(MPoly::one(field, nv));
    args.extend(series.f.iter().map(|f| f.embed_vars(nv, &zmap)));
    args.push(MPoly::one(field, nv));
    args.extend(series.f.iter().map(|f| f.embed_vars(nv, &wmap)));
    let e: Vec<MPoly> = model.addition().iter().map(|ek| ek.compose(&args, Some(m))).collect();
    (0..big_n).all(|i| {
        let lhs = series.f[i].compose(&shifted, Some(m)).mul_trunc(&e[0], Some(m));
        lhs == e[i + 1]
    })
}

/// `D_1^{t_1} ... D_n^{t_n} P`.
pub fn derivative_polynomial(model: &GroupModel, p: &MPoly, t: &[u32]) -> MPoly {
    assert_eq!(t.len(), model.n());
    let mut cur = p.clone();
    for (j, &tj) in t.iter().enumerate() {
        for _ in 0..tj {
            let mut next = MPoly::zero(model.field(), model.big_n());
            for i in 0..model.big_n() {
                let pij = model.deriv_poly(i, j);
                if pij.is_zero() {
                    continue;
                }
                let di = cur.derivative(i);
                if !di.is_zero() {
                    next = next.add(&di.mul(pij));
                }
            }
            cur = next;
        }
    }
    cur
}

/// `d^t (P(f_1, ..., f_N))` by direct differentiation of the composed series,
/// kept through total degree `order - |t|`.
pub fn series_derivative(series: &ExpSeries, p: &MPoly, t: &[u32]) -> MPoly {
    let m = series.order;
    let tt: u32 = t.iter().sum();
    let mut g = p.compose(&series.f, Some(m + 1));
    for (j, &tj) in t.iter().enumerate() {
        for _ in 0..tj {
            g = g.derivative(j);
        }
    }
    g.truncate((m + 1).saturating_sub(tt))
}

/// Compares `P_t(f)` with the direct series derivative.
pub fn dual_route_check(model: &GroupModel, series: &ExpSeries, p: &MPoly, t: &[u32]) -> bool {
    let tt: u32 = t.iter().sum();
    let keep = (series.order + 1).saturating_sub(tt);
    let pt = derivative_polynomial(model, p, t);
    pt.compose(&series.f, Some(keep)) == series_derivative(series, p, t)
}

fn h_plus_abs(p: &MPoly) -> Result<Interval> {
    if p.is_zero() {
        return Ok(Interval::zero());
    }
    let d = Rat::from_integer(BigInt::from(p.field().degree()));
    Ok(heights_vector(&p.coeff_vector())?.h_plus.scale(&d.recip()))
}

/// Tracked bound `h(P) + T (c_height + log delta_L + log(N r) + log(D + T c_deg))`
/// for the absolute affine height of `P_t`, where `r` is the largest number of
/// terms of a `P_{i,L(j)}`: each `D_j` multiplies coefficients by at most
/// `(current degree) * N r` at archimedean places and by `1/delta_L` at finite ones.
pub fn derivative_height_bound(model: &GroupModel, h_p: &Interval, deg: u32, order: u32) -> Interval {
    if order == 0 {
        return h_p.clone();
    }
    let r = (0..model.big_n())
        .flat_map(|i| (0..model.n()).map(move |j| (i, j)))
        .map(|(i, j)| model.deriv_poly(i, j).len())
        .max()
        .unwrap_or(1)
        .max(1);
    let mut step = model.c_height().clone();
    if !model.delta_l().is_one() {
        step = step.add(&ln_int(model.delta_l(), DEFAULT_BITS));
    }
    let nr = BigInt::from(model.big_n() * r);
    if nr > BigInt::one() {
        step = step.add(&ln_int(&nr, DEFAULT_BITS));
    }
    let growth = BigInt::from((deg + order * model.c_deg()).max(1));
    if growth > BigInt::one() {
        step = step.add(&ln_int(&growth, DEFAULT_BITS));
    }
    h_p.add(&step.scale(&Rat::from_integer(BigInt::from(order))))
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivativeAudit {
    pub degree: Option<u32>,
    pub degree_bound: u32,
    pub degree_ok: bool,
    pub height: HeightRecord,
    pub height_bound: HeightRecord,
    pub height_ok: bool,
}

/// Degree and height of `P_t` against the tracked bounds.
pub fn derivative_polynomial_audit(model: &GroupModel, p: &MPoly, t: &[u32]) -> Result<(MPoly, DerivativeAudit)> {
    let tt: u32 = t.iter().sum();
    let deg = p.total_degree().unwrap_or(0);
    let pt = derivative_polynomial(model, p, t);
    let degree = pt.total_degree();
    let degree_bound = (deg + tt * model.c_deg()).saturating_sub(tt);
    let h = h_plus_abs(&pt)?;
    let hb = derivative_height_bound(model, &h_plus_abs(p)?, deg, tt);
    let audit = DerivativeAudit {
        degree,
        degree_bound,
        degree_ok: degree.is_none_or(|g| g <= degree_bound),
        height_ok: crate::numfield::le_tol(&h, &hb),
        height: HeightRecord::from(&h),
        height_bound: HeightRecord::from(&hb),
    };
    Ok((pt, audit))
}

#[derive(Clone, Debug, Serialize)]
pub struct DenominatorPowerVerdict {
    pub order: u32,
    /// Least `k` with `delta_L^k P_t` integral, if `k <= |t|`.
    pub needed_power: Option<u32>,
    pub pass: bool,
}

/// Checks that `delta_L^{|t|} P_t` has integral coefficients.
pub fn denominator_power_check(model: &GroupModel, p: &MPoly, t: &[u32]) -> Result<DenominatorPowerVerdict> {
    if p.terms().values().any(|c| !c.is_integral()) {
        return Err(Error::Precondition("polynomial must have integral coefficients".into()));
    }
    let tt: u32 = t.iter().sum();
    let pt = derivative_polynomial(model, p, t);
    let mut needed = None;
    for k in 0..=tt {
        let scale = Rat::from_integer(pow_int(model.delta_l(), k as u64));
        if pt.terms().values().all(|c| c.scale(&scale).is_integral()) {
            needed = Some(k);
            break;
        }
    }
    Ok(DenominatorPowerVerdict { order: tt, needed_power: needed, pass: needed.is_some() })
}

#[derive(Clone, Debug, Serialize)]
pub struct SupNormPoint {
    pub x: Vec<String>,
    /// `min_i v(x_i)`.
    pub v_min: String,
    /// Per component: valuation of `f_i(x)`, exact when the tail cannot reach it.
    pub valuations: Vec<String>,
    pub exact: Vec<bool>,
    /// Lower bound for the valuation of every term past the truncation.
    pub tail_exponent: String,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SupNormVerdict {
    pub p: u64,
    pub e_l: u64,
    pub points: Vec<SupNormPoint>,
    pub pass: bool,
}

fn val_rat(q: &Rat, p: u64) -> ValuationExponent {
    match vp_rat(q, p) {
        None => ValuationExponent::Infinity,
        Some(v) => ValuationExponent::from_int(v),
    }
}

/// Certifies `|f_i(x)|_p < 1` for rational points with `v(x_i) > e_L + 1/(p-1)`.
///
/// Every coefficient of degree `T` must satisfy
/// `v >= -T e_L - (T-1)/(p-1)`; this is checked on the truncation and is what
/// bounds the tail, where each term then has valuation at least
/// `T (v_min - e_L - 1/(p-1)) + 1/(p-1) > 0`.
pub fn sup_norm_check(model: &GroupModel, series: &ExpSeries, p: u64, points: &[Vec<Rat>]) -> Result<SupNormVerdict> {
    let e_l = model.e_l(p);
    let el = Rat::from_integer(BigInt::from(e_l));
    let rp = Rat::new(BigInt::one(), BigInt::from(p - 1));
    let threshold = &el + &rp;
    // coefficient bound on the truncation
    for f in &series.f {
        for (m, c) in f.terms() {
            let q = c.as_rational().ok_or_else(|| Error::Precondition("series coefficients must be rational".into()))?;
            let t = Rat::from_integer(BigInt::from(total(m)));
            let bound = -(&t * &el) - (&t - Rat::one()) * &rp;
            if let Some(v) = vp_rat(&q, p) {
                if Rat::from_integer(BigInt::from(v)) < bound {
                    return Err(Error::UncertifiedTail(format!(
                        "coefficient at {m:?} violates the valuation bound, so the tail is not controlled"
                    )));
                }
            }
        }
    }
    let mut out = Vec::with_capacity(points.len());
    let mut pass = true;
    for x in points {
        if x.len() != series.n {
            return Err(Error::Precondition("sample point has the wrong dimension".into()));
        }
        let mut v_min = ValuationExponent::Infinity;
        for xi in x {
            let v = val_rat(xi, p);
            if let ValuationExponent::Finite(q) = &v {
                if *q <= threshold {
                    return Err(Error::Precondition(format!(
                        "v(x) = {} is not above e_L + 1/(p-1) = {}",
                        format_rational(q),
                        format_rational(&threshold)
                    )));
                }
            }
            v_min = v_min.min(v);
        }
        let field = model.field();
        let pt: Vec<AlgebraicNumber> = x.iter().map(|q| AlgebraicNumber::from_rat(field, q.clone())).collect();
        // first omitted degree is order + 1
        let tail = match &v_min {
            ValuationExponent::Infinity => ValuationExponent::Infinity,
            ValuationExponent::Finite(vm) => {
                let k = Rat::from_integer(BigInt::from(series.order + 1));
                ValuationExponent::Finite(k * (vm - &threshold) + &rp)
            }
        };
        let mut valuations = Vec::new();
        let mut exact = Vec::new();
        let mut certified = true;
        for f in &series.f {
            let val = f.eval(&pt).as_rational().expect("rational point and coefficients");
            let v = val_rat(&val, p);
            let is_exact = v < tail;
            let lower = v.clone().min(tail.clone());
            if lower <= ValuationExponent::from_int(0) {
                certified = false;
            }
            valuations.push(if is_exact { v.to_record() } else { format!(">={}", lower.to_record()) });
            exact.push(is_exact);
        }
        pass &= certified;
        out.push(SupNormPoint {
            x: x.iter().map(format_rational).collect(),
            v_min: v_min.to_record(),
            valuations,
            exact,
            tail_exponent: tail.to_record(),
            certified,
        });
    }
    Ok(SupNormVerdict { p, e_l, points: out, pass })
}
