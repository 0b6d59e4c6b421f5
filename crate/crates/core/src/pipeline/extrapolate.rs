//! Extrapolation: from vanishing at `s u_bar` for `s < S0` to small values
//! at `s u_bar` for every `s`, through the restricted functions
//! `f(z) = (Delta^t Psi)(z w)` and the p-adic Schwarz lemma.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::auxiliary::{multi_factorial, ConditionId, Workspace};
use super::record::{Inequality, IntervalRecord};
use super::{grid_delta_exponent, AuditConstants, PadicEmbedding, ProofInstance};
use crate::arith::{binomial, format_rational, rat, Rat};
use crate::error::{Error, Result};
use crate::interval::{ln_int, Interval, DEFAULT_BITS};
use crate::mpoly::{box_monomials, monomials_of_degree, total, MPoly};
use crate::numfield::AlgebraicNumber;
use crate::padic::{r_p_exponent, PadicNumber, ValuationExponent};
use crate::series::{gauss_norm, schwarz_bound, PadicSeries, TailCertificate};

/// Truncation lengths tried for the restricted functions.
const TRUNCATIONS: [u32; 4] = [8, 16, 32, 64];

fn fin(q: Rat) -> ValuationExponent {
    ValuationExponent::Finite(q)
}

/// Image of `q(point)` with the coefficients embedded.
pub(crate) fn eval_padic(q: &MPoly, emb: &PadicEmbedding, point: &[PadicNumber]) -> PadicNumber {
    let mut acc = PadicNumber::exact_zero(emb.prime());
    for (m, c) in q.terms() {
        let mut term = emb.embed(c);
        for (x, &e) in point.iter().zip(m) {
            if e > 0 {
                term = term.mul(&x.pow(e as u64));
            }
        }
        acc = acc.add(&term);
    }
    acc
}

/// Decides `v(x) >= bound`, or reports that the precision cannot tell.
pub(crate) fn certify_ge(x: &PadicNumber, bound: &ValuationExponent) -> Result<bool> {
    if x.is_exact_zero() || x.valuation_lower_bound() >= *bound {
        return Ok(true);
    }
    if x.is_zero() {
        return Err(Error::InsufficientPrecision(format!(
            "value known only modulo p^{}, bound {}",
            x.abs_precision(),
            bound.to_record()
        )));
    }
    Ok(false)
}

/// `|Q(x0, x) - Q(0, x)|_p <= max_i |x0|_p^i` for `Q` with p-integral
/// coefficients and `|x|_p <= 1`.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaECheck {
    pub integral_coefficients: bool,
    pub integral_point: bool,
    pub difference: Inequality,
    pub pass: bool,
}

/// `q` has variable 0 for `x0` and the remaining ones for `x`.
pub fn lemma_e_check(q: &MPoly, emb: &PadicEmbedding, x0: &PadicNumber, x: &[PadicNumber]) -> Result<LemmaECheck> {
    if q.nvars() != x.len() + 1 {
        return Err(Error::Precondition(format!("polynomial has {} variables, point has {}", q.nvars(), x.len() + 1)));
    }
    let mut integral_coefficients = true;
    for c in q.terms().values() {
        integral_coefficients &= emb.valuation(c)? >= ValuationExponent::from_int(0);
    }
    let zero = ValuationExponent::from_int(0);
    let integral_point = x0.valuation_lower_bound() >= zero && x.iter().all(|xi| xi.valuation_lower_bound() >= zero);
    let deg = q.terms().keys().map(|m| m[0]).max().unwrap_or(0);
    let v0 = x0.valuation_lower_bound();
    let bound = (1..=deg).map(|i| v0.scale(&Rat::from_integer(BigInt::from(i)))).min().unwrap_or(ValuationExponent::Infinity);
    let (diff_v, holds) = if deg == 0 || x0.is_exact_zero() {
        (ValuationExponent::Infinity, true)
    } else {
        let mut full = vec![x0.clone()];
        full.extend(x.iter().cloned());
        let mut at_zero = vec![PadicNumber::exact_zero(emb.prime())];
        at_zero.extend(x.iter().cloned());
        let diff = eval_padic(q, emb, &full).sub(&eval_padic(q, emb, &at_zero));
        (diff.valuation_lower_bound(), certify_ge(&diff, &bound)?)
    };
    let mut difference = Inequality::ge(&diff_v, &bound);
    difference.holds = holds;
    Ok(LemmaECheck { pass: holds && integral_coefficients && integral_point, integral_coefficients, integral_point, difference })
}

/// `v - 1/(p-1) >= 1/(2 d^2)` for a value `v > 1/(p-1)`.
pub fn lemma_value_check(v: &Rat, p: u64, d: u32) -> Inequality {
    let lhs = v - rat(1, p as i64 - 1);
    Inequality::ge(&fin(lhs), &fin(rat(1, 2 * (d * d) as i64)))
}

/// The check at the least element of `(1/d_v) Z` above `1/(p-1)`, for every
/// local degree `d_v <= d`: the whole value group is covered since the
/// margin only grows with `v`.
pub fn lemma_value_grid(p: u64, d: u32) -> Vec<(u32, Rat, Inequality)> {
    let threshold = rat(1, p as i64 - 1);
    (1..=d)
        .map(|dv| {
            let dvq = Rat::from_integer(BigInt::from(dv));
            let a = (&threshold * &dvq).floor() + Rat::one();
            let v = a / dvq;
            let check = lemma_value_check(&v, p, d);
            (dv, v, check)
        })
        .collect()
}

/// `(eps S0 - e_L) T + min{0, v(l(u)) - ((2n-1) e_L + eps S0 + 1/(p-1)) T - S0 T log_p S0}`:
/// a lower bound for `v((Delta^t Psi)(s w))` when `|t| < T`.
pub fn prop_sch_exponent(n: usize, d: u32, e_l: u64, p: u64, s0: u32, t: u32, v_l_u: &Rat) -> Interval {
    let eps = rat(1, 3 * (d * d) as i64);
    let s0q = Rat::from_integer(BigInt::from(s0));
    let tq = Rat::from_integer(BigInt::from(t));
    let el = Rat::from_integer(BigInt::from(e_l));
    let lead = (&eps * &s0q - &el) * &tq;
    let lin = v_l_u - (Rat::from_integer(BigInt::from(2 * n as i64 - 1)) * &el + &eps * &s0q + rat(1, p as i64 - 1)) * &tq;
    let log_term = if s0 <= 1 {
        Interval::zero()
    } else {
        ln_int(&BigInt::from(s0), DEFAULT_BITS)
            .mul(&ln_int(&BigInt::from(p), DEFAULT_BITS).recip())
            .scale(&(&s0q * &tq))
    };
    let second = Interval::point(lin).sub(&log_term);
    Interval::point(lead.clone()).add(&second.min(&Interval::zero()))
}

/// The restricted function `f(z) = (Delta^t Psi)(z w)` for one `t`.
#[derive(Clone, Debug, Serialize)]
pub struct RestrictedFunctionReport {
    pub t: Vec<u32>,
    /// Stored coefficients `c_0..c_K`.
    pub terms: u32,
    /// `v(c_k) >= alpha k + beta` past the truncation.
    pub tail_alpha: String,
    pub tail_beta: String,
    /// The stored coefficients obey the certificate as well.
    pub tail_consistent: bool,
    /// Truncated series at `z = s` agrees with the polynomial route.
    pub series_matches: bool,
    /// Lower bound of `v(f^(tau)(s))` over `tau < T`, `s < S0`.
    pub mu: String,
    /// `mu >= v(l(u)) - 2nT e_L`.
    pub mu_bound: Inequality,
    /// `|f|_R <= |delta_L^-1|^T` with `R = p^eps`.
    pub norm_r: Inequality,
    /// `|f|_1` against the Schwarz bound (absent for `S0 < 2`).
    pub schwarz: Option<Inequality>,
    /// `v(f(s)) >=` the closed-form exponent for `s < S`.
    pub closed_form: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtrapolationReport {
    pub epsilon: String,
    pub e_l: u64,
    pub v_l_u: String,
    /// `v(l(u)) - 2nT e_L`.
    pub dis_exponent: String,
    pub dis_checks: usize,
    pub dis_failures: Vec<ConditionId>,
    pub lemma_e_checks: usize,
    pub lemma_e_pass: bool,
    /// `v(u_i / delta_L) - 1/(p-1) >= 1/(2d^2)` for each nonzero `u_i`.
    pub value_lemma: Vec<Inequality>,
    /// `v(u_i / delta_L) - eps > 1/(p-1)`: `f` is analytic on the disk of radius `p^eps`.
    pub analytic_on_r: bool,
    pub restricted: Vec<RestrictedFunctionReport>,
    pub prop_sch_exponent: IntervalRecord,
    /// `c4 ((S0 + 1/(p-1) + e_L) T log p + S0 T log S0) / log p`.
    pub threshold: IntervalRecord,
    pub threshold_met: bool,
    /// When the threshold is met: `v((Delta^t Psi)(s u_bar)) >= (eps S0 - e_L) T`
    /// for `|t| < T`, `s < S`.
    pub upper_bound: Option<bool>,
    pub pass: bool,
}

/// Route-B polynomials in `y0` for every `s < count` and `t` in `[0, 2T)^n`.
type PolyTable = BTreeMap<(u64, Vec<u32>), Vec<AlgebraicNumber>>;

fn poly_table(ws: &Workspace, p: &MPoly, count: u64) -> Result<PolyTable> {
    let mut table = BTreeMap::new();
    for s in 0..count {
        for t in box_monomials(ws.inst.n(), 2 * ws.params.t) {
            let g = ws.route_b_poly(p, s, &t)?;
            table.insert((s, t), g);
        }
    }
    Ok(table)
}

fn eval_y(g: &[AlgebraicNumber], emb: &PadicEmbedding, y: &PadicNumber) -> PadicNumber {
    let mut acc = PadicNumber::exact_zero(emb.prime());
    for c in g.iter().rev() {
        acc = acc.mul(y).add(&emb.embed(c));
    }
    acc
}

fn u_power(u: &[PadicNumber], r: &[u32], emb: &PadicEmbedding) -> PadicNumber {
    let mut acc = PadicNumber::from_int(1, emb.prime(), emb.precision() as i64);
    for (ui, &e) in u.iter().zip(r) {
        if e > 0 {
            acc = acc.mul(&ui.pow(e as u64));
        }
    }
    acc
}

fn multinomial(r: &[u32]) -> BigInt {
    let mut left = total(r) as u64;
    let mut acc = BigInt::one();
    for &e in r {
        acc *= binomial(left, e as u64);
        left -= e as u64;
    }
    acc
}

/// `f^(tau)(s) = sum_{|r| = tau} (tau; r) u^r (Delta^(t+r) Psi)(s w)`.
fn derivative_at(table: &PolyTable, inst: &ProofInstance, s: u64, t: &[u32], tau: u32) -> PadicNumber {
    let emb = &inst.embedding;
    let y = inst.l_u.mul_rational(&Rat::from_integer(BigInt::from(s)));
    let mut acc = PadicNumber::exact_zero(inst.p);
    for r in monomials_of_degree(inst.n(), tau) {
        let tr: Vec<u32> = t.iter().zip(&r).map(|(a, b)| a + b).collect();
        let g = &table[&(s, tr)];
        let val = eval_y(g, emb, &y).mul(&u_power(&inst.u, &r, emb)).mul_rational(&Rat::from_integer(multinomial(&r)));
        acc = acc.add(&val);
    }
    acc
}

struct Restricted {
    series: PadicSeries,
    terms: u32,
    cert: TailCertificate,
    tail_consistent: bool,
}

/// `c_k = sum_{|r| = k} u^r (t+r)!/r! A_{t+r}` with `A_q` the Taylor
/// coefficients of `Psi(l(tau), tau)` at the origin.
fn restricted_series(inst: &ProofInstance, ws_params: &super::ToyParameters, p_aux: &MPoly, t: &[u32], k_max: u32) -> Result<Restricted> {
    let order = total(t) + k_max + 1;
    let ws = Workspace::new(inst, ws_params, order)?;
    let a = ws.psi_along(p_aux, 0)?;
    let p = inst.p;
    let emb = &inst.embedding;
    let mut coeffs = Vec::new();
    for k in 0..=k_max {
        let mut ck = PadicNumber::exact_zero(p);
        for r in monomials_of_degree(inst.n(), k) {
            let tr: Vec<u32> = t.iter().zip(&r).map(|(x, y)| x + y).collect();
            let aq = a.coefficient(&tr);
            if aq.is_zero() {
                continue;
            }
            let w = Rat::new(multi_factorial(&tr), multi_factorial(&r));
            ck = ck.add(&emb.embed(&aq.scale(&w)).mul(&u_power(&inst.u, &r, emb)));
        }
        coeffs.push(ck);
    }
    let el = Rat::from_integer(BigInt::from(inst.e_l()));
    let rp = r_p_exponent(p).finite().cloned().unwrap_or_default();
    let v_u = inst.v_u().finite().cloned().unwrap_or_else(|| Rat::from_integer(BigInt::from(emb.precision())));
    let alpha = &v_u - &el - &rp;
    let beta = -Rat::from_integer(BigInt::from(total(t))) * &el + &rp;
    let tail_consistent = coeffs.iter().enumerate().skip(1).all(|(k, c)| {
        c.valuation_lower_bound() >= fin(&alpha * Rat::from_integer(BigInt::from(k)) + &beta)
    });
    let cert = TailCertificate { alpha, beta };
    Ok(Restricted {
        series: PadicSeries::new(p, coeffs, Some(cert.clone())),
        terms: k_max + 1,
        cert,
        tail_consistent,
    })
}

fn restricted_report(
    inst: &ProofInstance,
    ws: &Workspace,
    p_aux: &MPoly,
    table: &PolyTable,
    t: &[u32],
    sch: &Interval,
) -> Result<RestrictedFunctionReport> {
    let params = &ws.params;
    let n = inst.n() as u64;
    let big_t = params.t as u64;
    let el = Rat::from_integer(BigInt::from(inst.e_l()));
    let eps = rat(1, 3 * (inst.degree() * inst.degree()) as i64);
    let v_l_u = inst.v_l_u();
    let dis = v_l_u.add_rat(&(-Rat::from_integer(BigInt::from(2 * n * big_t)) * &el));

    // mu over tau < T, s < S0 via the polynomial route
    let mut mu = ValuationExponent::Infinity;
    for s in 0..params.s0 as u64 {
        for tau in 0..params.t {
            let v = derivative_at(table, inst, s, t, tau).valuation_lower_bound();
            mu = mu.min(v);
        }
    }
    let mu_bound = Inequality::ge(&mu, &dis);

    let mut last_err = None;
    for &k in &TRUNCATIONS {
        let r = restricted_series(inst, params, p_aux, t, k)?;
        let norm_r = match gauss_norm(&r.series, &(-eps.clone())) {
            Ok(w) => w,
            Err(e @ Error::UncertifiedTail(_)) => {
                last_err = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        let norm_1 = match gauss_norm(&r.series, &Rat::zero()) {
            Ok(w) => w,
            Err(e @ Error::UncertifiedTail(_)) => {
                last_err = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        // truncated series at z = s against the exact polynomial route
        let tail_at = fin(&r.cert.alpha * Rat::from_integer(BigInt::from(r.terms)) + &r.cert.beta);
        let mut series_matches = true;
        for s in 0..params.s as u64 {
            let z = PadicNumber::from_int(s as i64, inst.p, inst.embedding.precision() as i64);
            let mut acc = PadicNumber::exact_zero(inst.p);
            for c in r.series.coeffs().iter().rev() {
                acc = acc.mul(&z).add(c);
            }
            let exact = derivative_at(table, inst, s, t, 0);
            let gap = acc.sub(&exact).valuation_lower_bound();
            let floor = tail_at.clone().min(ValuationExponent::from_int(acc.abs_precision().min(exact.abs_precision())));
            series_matches &= gap >= floor;
        }
        let norm_r_check = Inequality::ge(&norm_r, &fin(-Rat::from_integer(BigInt::from(big_t)) * &el));
        let schwarz = if params.s0 >= 2 {
            let delta = grid_delta_exponent(params.s0, inst.p);
            let b = schwarz_bound(&Rat::zero(), &(-eps.clone()), big_t, params.s0 as u64, &delta, &mu, &norm_r, inst.p)?;
            Some(Inequality::ge(&norm_1, &b))
        } else {
            None
        };
        // the closed form is an interval; its lower end is the certified claim
        let need = fin(sch.lo.clone());
        let mut closed_form = true;
        for s in 0..params.s as u64 {
            closed_form &= certify_ge(&derivative_at(table, inst, s, t, 0), &need)?;
        }
        let pass = r.tail_consistent
            && series_matches
            && mu_bound.holds
            && norm_r_check.holds
            && schwarz.as_ref().is_none_or(|c| c.holds)
            && closed_form;
        return Ok(RestrictedFunctionReport {
            t: t.to_vec(),
            terms: r.terms,
            tail_alpha: format_rational(&r.cert.alpha),
            tail_beta: format_rational(&r.cert.beta),
            tail_consistent: r.tail_consistent,
            series_matches,
            mu: mu.to_record(),
            mu_bound,
            norm_r: norm_r_check,
            schwarz,
            closed_form,
            pass,
        });
    }
    Err(Error::InsufficientPrecision(format!(
        "restricted function for t = {t:?} not certified up to {} terms: {}",
        TRUNCATIONS[TRUNCATIONS.len() - 1] + 1,
        last_err.map(|e| e.to_string()).unwrap_or_default()
    )))
}

pub fn extrapolate(inst: &ProofInstance, ws: &Workspace, p_aux: &MPoly, consts: &AuditConstants) -> Result<ExtrapolationReport> {
    let params = &ws.params;
    let n = inst.n();
    let d = inst.degree() as u32;
    let p = inst.p;
    let el = Rat::from_integer(BigInt::from(inst.e_l()));
    let big_t = params.t;
    let eps = rat(1, 3 * (d * d) as i64);
    let v_l_u = inst.v_l_u();
    let v_l_u_rat = match &v_l_u {
        ValuationExponent::Finite(q) => q.clone(),
        ValuationExponent::Infinity => return Err(Error::LinearFormZero),
    };
    if inst.l_u.is_zero() {
        return Err(Error::InsufficientPrecision("l(u) vanishes at working precision".into()));
    }
    let dis = v_l_u.add_rat(&(-Rat::from_integer(BigInt::from(2 * n as u64 * big_t as u64)) * &el));
    let count = params.s.max(params.s0) as u64;
    let table = poly_table(ws, p_aux, count)?;
    let emb = &inst.embedding;

    // Perturbation bound at the shifted points, and the value estimate behind it.
    let mut dis_failures = Vec::new();
    let mut lemma_e_checks = 0;
    let mut lemma_e_pass = true;
    let dl = AlgebraicNumber::from_rat(inst.field(), Rat::from_integer(inst.model.delta_l().clone()));
    for ((s, t), g) in &table {
        if *s == 0 {
            continue;
        }
        let x0 = inst.l_u.mul_rational(&Rat::from_integer(BigInt::from(*s)));
        let diff = eval_y(g, emb, &x0).sub(&emb.embed(&g[0]));
        if !certify_ge(&diff, &dis)? {
            dis_failures.push(ConditionId { s: *s, t: t.clone() });
        }
        let scale = dl.pow(total(t) as u64);
        let mut q = MPoly::zero(inst.field(), 1);
        for (a, c) in g.iter().enumerate() {
            if !c.is_zero() {
                q.add_term(vec![a as u32], c.mul(&scale));
            }
        }
        let check = lemma_e_check(&q, emb, &x0, &[])?;
        lemma_e_checks += 1;
        lemma_e_pass &= check.pass;
    }

    // analyticity on the disk of radius p^eps
    let rp = r_p_exponent(p).finite().cloned().unwrap_or_default();
    let mut value_lemma = Vec::new();
    let mut analytic_on_r = true;
    for ui in &inst.u {
        if ui.is_exact_zero() {
            continue;
        }
        let v = match ui.valuation_lower_bound() {
            ValuationExponent::Finite(q) => q - &el,
            ValuationExponent::Infinity => continue,
        };
        analytic_on_r &= &v - &eps > rp;
        value_lemma.push(lemma_value_check(&v, p, d));
    }

    let sch = prop_sch_exponent(n, d, inst.e_l(), p, params.s0, big_t, &v_l_u_rat);
    let mut restricted = Vec::new();
    for t in box_monomials(n, big_t).into_iter().filter(|t| total(t) < big_t) {
        restricted.push(restricted_report(inst, ws, p_aux, &table, &t, &sch)?);
    }

    let ln_p = ln_int(&BigInt::from(p), DEFAULT_BITS);
    let s0q = Rat::from_integer(BigInt::from(params.s0));
    let tq = Rat::from_integer(BigInt::from(big_t));
    let mut thr = ln_p.scale(&((&s0q + &rp + &el) * &tq));
    if params.s0 > 1 {
        thr = thr.add(&ln_int(&BigInt::from(params.s0), DEFAULT_BITS).scale(&(&s0q * &tq)));
    }
    let threshold = thr.mul(&ln_p.recip()).scale(&consts.c4);
    let threshold_met = threshold.certainly_le(&Interval::point(v_l_u_rat.clone()));
    let upper_bound = if threshold_met {
        let need = fin((&eps * &s0q - &el) * &tq);
        let mut ok = true;
        for s in 0..params.s as u64 {
            for t in box_monomials(n, big_t).into_iter().filter(|t| total(t) < big_t) {
                let g = &table[&(s, t)];
                ok &= emb.valuation(&g[0])? >= need;
            }
        }
        Some(ok)
    } else {
        None
    };

    let pass = dis_failures.is_empty()
        && lemma_e_pass
        && value_lemma.iter().all(|c| c.holds)
        && analytic_on_r
        && restricted.iter().all(|r| r.pass)
        && upper_bound.unwrap_or(true);
    Ok(ExtrapolationReport {
        epsilon: format_rational(&eps),
        e_l: inst.e_l(),
        v_l_u: v_l_u.to_record(),
        dis_exponent: dis.to_record(),
        dis_checks: table.len(),
        dis_failures,
        lemma_e_checks,
        lemma_e_pass,
        value_lemma,
        analytic_on_r,
        restricted,
        prop_sch_exponent: IntervalRecord::from(&sch),
        threshold: IntervalRecord::from(&threshold),
        threshold_met,
        upper_bound,
        pass,
    })
}
