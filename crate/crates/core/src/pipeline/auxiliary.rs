//! The extended space, translation polynomials and the auxiliary polynomial.
//!
//! Values `(Delta^t Psi)(s u_bar)` are computed by two independent routes:
//! route A expands `Psi_s(y, x) = P(y, E(gamma^s, (1, f(x))))` as a power
//! series (addition formula plus the exponential series), route B evaluates
//! the derivative polynomials `D^i M(1, T)` at the directly computed torus
//! point `gamma^s`. The linear system comes from route A; every audit of it
//! uses route B.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::record::{Inequality, IntervalRecord};
use super::{AuditConstants, ProofInstance, ToyParameters};
use crate::arith::{binomial, factorial, format_rational, lcm_all, pow_int, Int, Rat};
use crate::error::{Error, Result};
use crate::groups::{derivative_polynomial, exp_series, ExpSeries};
use crate::interval::{ln_int, Interval, DEFAULT_BITS};
use crate::mpoly::{box_monomials, total, MPoly, Monomial};
use crate::numfield::{heights_vector, height, le_tol, siegel_solve_best, AlgebraicNumber};
use crate::padic::PadicNumber;

/// `Delta_i = beta_i d_0 + d_i`, `u_bar = (0, u)`, `w = (l(u), u)`.
#[derive(Clone, Debug, Serialize)]
pub struct ExtendedSpace {
    /// Coordinates of each `Delta_i` in `K x Lie G`.
    pub directions: Vec<Vec<String>>,
    #[serde(skip)]
    pub u_bar: Vec<PadicNumber>,
    #[serde(skip)]
    pub w: Vec<PadicNumber>,
    pub v_l_u: String,
    /// `w - u_bar = (l(u), 0, ..., 0)`.
    pub difference_identity: bool,
    /// `w = sum u_i Delta_i`, so `w` lies in `W^`.
    pub w_in_span: bool,
    /// `l(u) = 0` at working precision, where `w = u_bar`.
    pub degenerate: bool,
}

pub fn build_extended(inst: &ProofInstance) -> ExtendedSpace {
    let p = inst.p;
    let emb = &inst.embedding;
    let dirs = inst.hyperplane.directions();
    let mut u_bar = vec![PadicNumber::exact_zero(p)];
    u_bar.extend(inst.u.iter().cloned());
    let mut w = vec![inst.l_u.clone()];
    w.extend(inst.u.iter().cloned());
    let diff: Vec<PadicNumber> = w.iter().zip(&u_bar).map(|(a, b)| a.sub(b)).collect();
    let difference_identity = diff[0].sub(&inst.l_u).is_zero() && diff[1..].iter().all(|x| x.is_zero());
    let mut span = vec![PadicNumber::exact_zero(p); inst.n() + 1];
    for (ui, d) in inst.u.iter().zip(&dirs) {
        for (acc, c) in span.iter_mut().zip(d) {
            *acc = acc.add(&ui.mul(&emb.embed(c)));
        }
    }
    let w_in_span = span.iter().zip(&w).all(|(a, b)| a.sub(b).is_zero());
    ExtendedSpace {
        directions: dirs.iter().map(|d| d.iter().map(element_string).collect()).collect(),
        v_l_u: inst.v_l_u().to_record(),
        degenerate: inst.l_u.is_zero(),
        u_bar,
        w,
        difference_identity,
        w_in_span,
    }
}

pub(crate) fn element_string(x: &AlgebraicNumber) -> String {
    match x.as_rational() {
        Some(q) => format_rational(&q),
        None => format!("[{}]", x.coords().iter().map(format_rational).collect::<Vec<_>>().join(", ")),
    }
}

/// `Q_{j,s}(T) = M_j(E_0(gamma^s, (1, T)), ..., E_N(gamma^s, (1, T)))`.
#[derive(Clone, Debug, Serialize)]
pub struct TranslationPolynomial {
    pub s: u64,
    pub monomial: Vec<u32>,
    #[serde(skip)]
    pub q: MPoly,
    pub degree: Option<u32>,
    /// `D b_E`.
    pub degree_bound: u32,
    /// Common denominator of the coefficients.
    pub den: String,
    /// `h(Q) <= sum_k j_k (h(E_k) + b_E h(gamma^s) + 2 log #E_k)`.
    pub height: Inequality,
    /// `h(gamma_i^s) = s h(gamma_i)` for every coordinate, and `s h <= s^2 h`.
    pub power_heights: bool,
}

/// Projective absolute height of a coefficient vector.
fn proj_height(coeffs: &[AlgebraicNumber]) -> Result<Interval> {
    if coeffs.iter().all(|c| c.is_zero()) {
        return Ok(Interval::zero());
    }
    let d = Rat::from_integer(BigInt::from(coeffs[0].field().degree()));
    Ok(heights_vector(coeffs)?.h_max.scale(&d.recip()))
}

fn ln_count(k: usize) -> Interval {
    if k <= 1 {
        Interval::zero()
    } else {
        ln_int(&BigInt::from(k), DEFAULT_BITS)
    }
}

/// `E_k(X, (1, T))` with `X` fixed, as polynomials in `T_1..T_N`.
fn translated_addition(inst: &ProofInstance, x: &[AlgebraicNumber], subs_t: &[MPoly], order: Option<u32>) -> Vec<MPoly> {
    let model = &inst.model;
    let field = model.field();
    let nv = subs_t.first().map_or(0, |s| s.nvars());
    let mut subs: Vec<MPoly> = x.iter().map(|c| MPoly::constant(c.clone(), nv)).collect();
    subs.push(MPoly::one(field, nv));
    subs.extend(subs_t.iter().cloned());
    model.addition().iter().map(|e| e.compose(&subs, order)).collect()
}

pub fn translation_polynomials(inst: &ProofInstance, s: u64, j: &[u32]) -> Result<TranslationPolynomial> {
    let model = &inst.model;
    let big_n = model.big_n();
    if j.len() != big_n + 1 {
        return Err(Error::Precondition(format!("monomial needs {} exponents", big_n + 1)));
    }
    let field = model.field();
    let gs = model.multiple(&inst.gamma_point, s)?;
    let t_vars: Vec<MPoly> = (0..big_n).map(|i| MPoly::var(field, big_n, i)).collect();
    let e = translated_addition(inst, &gs, &t_vars, None);
    if e[0].constant_term().is_zero() {
        return Err(Error::AdditionFormulaUndefined);
    }
    let mut q = MPoly::one(field, big_n);
    for (k, &jk) in j.iter().enumerate() {
        for _ in 0..jk {
            q = q.mul(&e[k]);
        }
    }
    let den = lcm_all(q.terms().values().map(|c| c.denominator()).collect::<Vec<_>>().iter());
    let h_gs = proj_height(&gs)?;
    let b_e = Rat::from_integer(BigInt::from(model.addition_degree()));
    let mut bound = Interval::zero();
    for (k, &jk) in j.iter().enumerate() {
        if jk == 0 {
            continue;
        }
        let ek = &model.addition()[k];
        let step = proj_height(&ek.coeff_vector())?.add(&h_gs.scale(&b_e)).add(&ln_count(ek.len()).scale(&Rat::from_integer(2.into())));
        bound = bound.add(&step.scale(&Rat::from_integer(BigInt::from(jk))));
    }
    let hq = proj_height(&q.coeff_vector())?;
    let mut power_heights = true;
    let sq = Rat::from_integer(BigInt::from(s));
    for g in &inst.gamma {
        let hs = height(&g.pow(s))?;
        let h1 = height(g)?;
        let lin = h1.scale(&sq);
        power_heights &= le_tol(&hs, &lin) && le_tol(&lin, &hs) && le_tol(&lin, &h1.scale(&(&sq * &sq)));
    }
    Ok(TranslationPolynomial {
        s,
        monomial: j.to_vec(),
        degree: q.total_degree(),
        degree_bound: total(j) * model.addition_degree(),
        den: den.to_string(),
        height: Inequality::le(&hq, &bound),
        power_heights,
        q,
    })
}

/// Shared state for one instance and one set of sizes: the exponential series
/// to a fixed order and caches of derivative polynomials.
pub struct Workspace {
    pub inst: ProofInstance,
    pub params: ToyParameters,
    pub monos: Vec<Monomial>,
    series: ExpSeries,
    /// Expansions keep total degree below `order`.
    order: u32,
    deriv: RefCell<HashMap<(Monomial, Vec<u32>), MPoly>>,
    points: RefCell<BTreeMap<u64, Vec<AlgebraicNumber>>>,
}

impl Workspace {
    /// Expansions are kept below total degree `order`.
    pub fn new(inst: &ProofInstance, params: &ToyParameters, order: u32) -> Result<Workspace> {
        let series = exp_series(&inst.model, order.max(2))?;
        Ok(Workspace {
            inst: inst.clone(),
            params: params.clone(),
            monos: inst.model.standard_monomials(params.d),
            series,
            order: order.max(1),
            deriv: RefCell::new(HashMap::new()),
            points: RefCell::new(BTreeMap::new()),
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    fn n(&self) -> usize {
        self.inst.n()
    }

    /// `E_k(gamma^s, (1, f(x)))` through the group law, as series in `x`.
    pub fn e_series(&self, s: u64) -> Result<Vec<MPoly>> {
        let gs = self.inst.model.multiple(&self.inst.gamma_point, s)?;
        let e = translated_addition(&self.inst, &gs, self.series.components(), Some(self.order));
        if e[0].constant_term().is_zero() {
            return Err(Error::AdditionFormulaUndefined);
        }
        Ok(e)
    }

    /// `l(x) = sum beta_i x_i` in `n` variables.
    fn linear_form(&self) -> MPoly {
        let field = self.inst.field();
        let mut l = MPoly::zero(field, self.n());
        for (i, b) in self.inst.hyperplane.beta().iter().enumerate() {
            l = l.add(&MPoly::var(field, self.n(), i).scale(b));
        }
        l
    }

    /// `Psi(y, s u + x)` as a series in `(y, x_1, ..., x_n)`: route A.
    pub fn psi_local(&self, p: &MPoly, s: u64) -> Result<MPoly> {
        let field = self.inst.field();
        let n = self.n();
        let e = self.e_series(s)?;
        let map: Vec<usize> = (1..=n).collect();
        let mut subs = vec![MPoly::var(field, n + 1, 0)];
        subs.extend(e.iter().map(|ek| ek.embed_vars(n + 1, &map)));
        let phi = p.compose(&subs, Some(self.order));
        let e0 = &e[0];
        if e0.len() == 1 && e0.constant_term().is_one() {
            return Ok(phi);
        }
        let deg = p.terms().keys().map(|m| total(&m[1..])).max().unwrap_or(0);
        let inv = series_inverse(e0, self.order)?.embed_vars(n + 1, &map);
        Ok(phi.mul_trunc(&inv.pow_trunc(deg, Some(self.order)), Some(self.order)))
    }

    /// `Psi(l(tau), s u + tau)`, whose `tau^t` coefficient times `t!` is
    /// `(Delta^t Psi)(s u_bar)`.
    pub fn psi_along(&self, p: &MPoly, s: u64) -> Result<MPoly> {
        let field = self.inst.field();
        let n = self.n();
        let mut subs = vec![self.linear_form()];
        subs.extend((0..n).map(|i| MPoly::var(field, n, i)));
        Ok(self.psi_local(p, s)?.compose(&subs, Some(self.order)))
    }

    /// Route A value of `(Delta^t Psi)(s u_bar)`.
    pub fn route_a_value(&self, p: &MPoly, s: u64, t: &[u32]) -> Result<AlgebraicNumber> {
        if total(t) >= self.order {
            return Err(Error::InsufficientPrecision(format!("|t| = {} needs a longer expansion", total(t))));
        }
        let g = self.psi_along(p, s)?;
        Ok(g.coefficient(t).scale(&Rat::from_integer(multi_factorial(t))))
    }

    /// Affine coordinates of `gamma^s` from the torus coordinates directly.
    fn direct_affine(&self, s: u64) -> Result<Vec<AlgebraicNumber>> {
        if let Some(v) = self.points.borrow().get(&s) {
            return Ok(v.clone());
        }
        let g: Vec<AlgebraicNumber> = self.inst.gamma.iter().map(|x| x.pow(s)).collect();
        let pt = self.inst.model.torus_point(&g)?;
        let v = pt[1..].to_vec();
        self.points.borrow_mut().insert(s, v.clone());
        Ok(v)
    }

    /// `D^i M(1, T)` for a monomial `M` in `X_0..X_N`.
    fn derivative_of(&self, mono: &[u32], i: &[u32]) -> MPoly {
        let key = (mono.to_vec(), i.to_vec());
        if let Some(q) = self.deriv.borrow().get(&key) {
            return q.clone();
        }
        let model = &self.inst.model;
        let q = match i.iter().rposition(|&x| x > 0) {
            None => {
                let field = model.field();
                let big_n = model.big_n();
                let mut m = MPoly::one(field, big_n);
                for (k, &e) in mono.iter().enumerate().skip(1) {
                    for _ in 0..e {
                        m = m.mul(&MPoly::var(field, big_n, k - 1));
                    }
                }
                m
            }
            Some(j) => {
                let mut prev = i.to_vec();
                prev[j] -= 1;
                let base = self.derivative_of(mono, &prev);
                let mut unit = vec![0u32; i.len()];
                unit[j] = 1;
                derivative_polynomial(model, &base, &unit)
            }
        };
        self.deriv.borrow_mut().insert(key, q.clone());
        q
    }

    /// Coefficients in `y0` of `(Delta^t Psi)(y0, s u)`: route B.
    pub fn route_b_poly(&self, p: &MPoly, s: u64, t: &[u32]) -> Result<Vec<AlgebraicNumber>> {
        let field = self.inst.field();
        let xi = self.direct_affine(s)?;
        let beta = self.inst.hyperplane.beta();
        let tt = total(t);
        let max_a = p.terms().keys().map(|m| m[0]).max().unwrap_or(0) as usize;
        let mut out = vec![AlgebraicNumber::zero(field); max_a + 1];
        for i in dominated(t) {
            let k = tt - total(&i);
            let mut coef = AlgebraicNumber::one(field);
            for j in 0..t.len() {
                let c = binomial(t[j] as u64, i[j] as u64);
                coef = coef.mul(&beta[j].pow((t[j] - i[j]) as u64)).scale(&Rat::from_integer(c));
            }
            if coef.is_zero() {
                continue;
            }
            for (mono, c) in p.terms() {
                let a = mono[0];
                if a < k {
                    continue;
                }
                let dval = self.derivative_of(&mono[1..], &i).eval(&xi);
                if dval.is_zero() {
                    continue;
                }
                let falling = falling_factorial(a as u64, k as u64);
                let term = c.mul(&coef).mul(&dval).scale(&Rat::from_integer(falling));
                let slot = (a - k) as usize;
                out[slot] = out[slot].add(&term);
            }
        }
        Ok(out)
    }
}

/// Route B value of `(Delta^t Psi)(s u_bar)`.
pub fn route_b_value(ws: &Workspace, p: &MPoly, s: u64, t: &[u32]) -> Result<AlgebraicNumber> {
    Ok(ws.route_b_poly(p, s, t)?.swap_remove(0))
}

/// `1/e` as a series below total degree `order`; needs `e(0) != 0`.
pub(crate) fn series_inverse(e: &MPoly, order: u32) -> Result<MPoly> {
    let c0 = e.constant_term();
    let inv0 = c0.inv().map_err(|_| Error::AdditionFormulaUndefined)?;
    let field = e.field();
    let nv = e.nvars();
    // 1/e = inv0 sum_k (1 - inv0 e)^k
    let r = MPoly::one(field, nv).sub(&e.scale(&inv0));
    let mut acc = MPoly::one(field, nv);
    let mut pw = MPoly::one(field, nv);
    for _ in 1..order {
        pw = pw.mul_trunc(&r, Some(order));
        if pw.is_zero() {
            break;
        }
        acc = acc.add(&pw);
    }
    Ok(acc.scale(&inv0))
}

pub(crate) fn multi_factorial(t: &[u32]) -> Int {
    t.iter().fold(Int::one(), |acc, &x| acc * factorial(x as u64))
}

fn falling_factorial(a: u64, k: u64) -> Int {
    (0..k).fold(Int::one(), |acc, j| acc * BigInt::from(a - j))
}

/// All `i` with `0 <= i <= t` componentwise.
fn dominated(t: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &tj in t {
        let mut next = Vec::new();
        for v in &out {
            for e in 0..=tj {
                let mut w = v.clone();
                w.push(e);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// A vanishing condition `(s, t)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ConditionId {
    pub s: u64,
    pub t: Vec<u32>,
}

/// Conditions `(Delta^t Psi)(s u_bar) = 0` for `0 <= s < S0`, `t` in `[0, 2T)^n`
/// that fail under route B, in order.
pub fn condition_failures(ws: &Workspace, p: &MPoly) -> Result<Vec<ConditionId>> {
    let mut out = Vec::new();
    for s in 0..ws.params.s0 as u64 {
        for t in box_monomials(ws.inst.n(), 2 * ws.params.t) {
            if !route_b_value(ws, p, s, &t)?.is_zero() {
                out.push(ConditionId { s, t });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct AuxiliaryPolynomial {
    /// `P` in `Y, X_0, ..., X_N`.
    #[serde(skip)]
    pub p: MPoly,
    pub terms: usize,
    pub unknowns: usize,
    pub conditions: usize,
    /// `D0 D^n >= c2 S0 T^n`.
    pub feasibility: Inequality,
    /// `den_s` for each `s < S0`.
    pub den: Vec<String>,
    /// `den_s delta_L^(2nT) a_ij^st` is integral for every entry.
    pub integral_system: bool,
    pub siegel_h_plus: IntervalRecord,
    pub siegel_bound: IntervalRecord,
    pub siegel_within_bound: bool,
    pub siegel_exhaustive: bool,
    /// Route B failures of the vanishing conditions.
    pub failures: Vec<ConditionId>,
    pub vanishing: bool,
    /// `h(P) <= c3 (T (c_height + log delta_L + log(D + T c_deg)) + D0 b + D S0^2 h)`.
    pub height: Inequality,
    pub nonzero: bool,
    /// Homogeneous of degree `D` in `X` with `deg_Y <= D0`.
    pub shape: bool,
    pub translations: Vec<TranslationPolynomial>,
    pub pass: bool,
}

/// `(Delta^t B)(s u_bar)` for each basis function `B = Y^a M` with `M`
/// standard: one row per condition, scaled by `den_s delta_L^(2nT)`.
fn system_rows(ws: &Workspace, den: &[Int]) -> Result<(Vec<Vec<AlgebraicNumber>>, bool)> {
    let inst = &ws.inst;
    let field = inst.field();
    let n = inst.n();
    let big_t = ws.params.t;
    let dl = pow_int(inst.model.delta_l(), 2 * n as u64 * big_t as u64);
    let l = ws.linear_form();
    let mut lpow = vec![MPoly::one(field, n)];
    for _ in 0..ws.params.d0 {
        let next = lpow.last().unwrap().mul_trunc(&l, Some(ws.order));
        lpow.push(next);
    }
    let boxes = box_monomials(n, 2 * big_t);
    let mut rows = Vec::new();
    let mut integral = true;
    for s in 0..ws.params.s0 as u64 {
        let e = ws.e_series(s)?;
        let scale = Rat::from_integer(&den[s as usize] * &dl);
        let g: Vec<MPoly> = ws
            .monos
            .iter()
            .map(|m| {
                let mut acc = MPoly::one(field, n);
                for (k, &mk) in m.iter().enumerate() {
                    for _ in 0..mk {
                        acc = acc.mul_trunc(&e[k], Some(ws.order));
                    }
                }
                acc
            })
            .collect();
        let basis: Vec<MPoly> =
            lpow.iter().flat_map(|la| g.iter().map(move |gm| la.mul_trunc(gm, Some(ws.order)))).collect();
        for t in &boxes {
            let tf = Rat::from_integer(multi_factorial(t));
            let row: Vec<AlgebraicNumber> = basis.iter().map(|b| b.coefficient(t).scale(&(&tf * &scale))).collect();
            integral &= row.iter().all(|x| x.is_integral());
            rows.push(row);
        }
    }
    Ok((rows, integral))
}

pub fn construct_auxiliary(
    inst: &ProofInstance,
    params: &ToyParameters,
    consts: &AuditConstants,
) -> Result<AuxiliaryPolynomial> {
    let n = inst.n();
    let (s0, big_t, d, d0) = (params.s0, params.t, params.d, params.d0);
    if s0 == 0 || big_t == 0 || d == 0 {
        return Err(Error::BadParameters("S0, T and D must be positive".into()));
    }
    let lhs = BigInt::from(d0) * pow_int(&BigInt::from(d), n as u64);
    let rhs = BigInt::from(s0) * pow_int(&BigInt::from(big_t), n as u64);
    let feasibility = Inequality::ge(
        &crate::padic::ValuationExponent::Finite(Rat::from_integer(lhs.clone())),
        &crate::padic::ValuationExponent::Finite(&consts.c2 * Rat::from_integer(rhs)),
    );
    if !feasibility.holds {
        return Err(Error::InfeasibleParameters(format!("D0 D^n = {lhs} is below c2 S0 T^n")));
    }
    let order = n as u32 * (2 * big_t - 1) + 1;
    let ws = Workspace::new(inst, params, order)?;
    let unknowns = (d0 as usize + 1) * ws.monos.len();
    let conditions = s0 as usize * (2 * big_t as usize).pow(n as u32);
    if unknowns <= conditions {
        return Err(Error::InfeasibleParameters(format!(
            "{unknowns} unknowns do not exceed {conditions} conditions"
        )));
    }

    let mut translations = Vec::new();
    let mut den = Vec::new();
    for s in 0..s0 as u64 {
        let mut ds = Vec::new();
        for m in &ws.monos {
            let tp = translation_polynomials(inst, s, m)?;
            ds.push(tp.q.denominator());
            translations.push(tp);
        }
        den.push(lcm_all(ds.iter()));
    }
    let (rows, integral_system) = system_rows(&ws, &den)?;
    let sol = siegel_solve_best(&rows, unknowns, consts.siegel_budget)?;

    let field = inst.field();
    let big_n = inst.model.big_n();
    let mut p = MPoly::zero(field, big_n + 2);
    let mut idx = 0;
    for a in 0..=d0 {
        for m in &ws.monos {
            let mut mono = vec![a];
            mono.extend(m.iter().cloned());
            p.add_term(mono, sol.x[idx].clone());
            idx += 1;
        }
    }
    let failures = condition_failures(&ws, &p)?;
    let shape = p.terms().keys().all(|m| m[0] <= d0 && total(&m[1..]) == d);

    let hp = proj_height(&p.coeff_vector())?;
    let bound = auxiliary_height_bound(inst, params)?.scale(&consts.c3);
    let height = Inequality::le(&hp, &bound);
    let vanishing = failures.is_empty();
    let nonzero = !p.is_zero();
    let pass = vanishing && height.holds && nonzero && shape && integral_system && sol.within_bound;
    Ok(AuxiliaryPolynomial {
        terms: p.len(),
        p,
        unknowns,
        conditions,
        feasibility,
        den: den.iter().map(|x| x.to_string()).collect(),
        integral_system,
        siegel_h_plus: IntervalRecord::from(&sol.h_plus),
        siegel_bound: IntervalRecord::from(&sol.bound),
        siegel_within_bound: sol.within_bound,
        siegel_exhaustive: sol.exhaustive,
        failures,
        vanishing,
        height,
        nonzero,
        shape,
        translations,
        pass,
    })
}

/// `T (c_height + log delta_L + log(D + T c_deg)) + D0 b + D S0^2 h`.
pub(crate) fn auxiliary_height_bound(inst: &ProofInstance, params: &ToyParameters) -> Result<Interval> {
    let model = &inst.model;
    let mut step = model.c_height().clone();
    if !model.delta_l().is_one() {
        step = step.add(&ln_int(model.delta_l(), DEFAULT_BITS));
    }
    step = step.add(&ln_count((params.d + params.t * model.c_deg()) as usize));
    let tq = Rat::from_integer(BigInt::from(params.t));
    let d0 = Rat::from_integer(BigInt::from(params.d0));
    let ds2 = Rat::from_integer(BigInt::from(params.d * params.s0 * params.s0));
    Ok(step.scale(&tq).add(&inst.b.scale(&d0)).add(&inst.h.scale(&ds2)))
}
