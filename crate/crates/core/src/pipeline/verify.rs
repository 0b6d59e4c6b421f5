//! Liouville lower bound, vanishing-order audit, the numerical verifier for
//! tori and the end-to-end report.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::auxiliary::{auxiliary_height_bound, build_extended, element_string, route_b_value, Workspace};
use super::extrapolate::{extrapolate, ExtrapolationReport};
use super::record::{Inequality, IntervalRecord};
use super::{
    choose_parameters, construct_auxiliary, theorem_exponent, AuditConstants, AuxiliaryPolynomial, ExtendedSpace,
    NuReduction, Parameters, ProofInstance, RealExpr, ToyParameters,
};
use crate::arith::{binomial, format_rational, pow_int, Rat};
use crate::error::{Error, Result};
use crate::groups::{ord_along, VanishingOrder};
use crate::interval::{ln_int, Interval, DEFAULT_BITS};
use crate::mpoly::{monomials_of_degree, total, MPoly};
use crate::numfield::{height, liouville_check, AlgebraicNumber};
use crate::padic::{PadicNumber, ValuationExponent};

#[derive(Clone, Debug, Serialize)]
pub struct LiouvilleReport {
    pub s: u64,
    pub t: Vec<u32>,
    pub value: String,
    /// Series route and derivative-polynomial route give the same element.
    pub routes_agree: bool,
    pub height: IntervalRecord,
    pub valuation: String,
    pub log_abs: IntervalRecord,
    pub liouville_as_written: bool,
    pub liouville_standard: bool,
    /// `log|value|_p > -c5 (T'(c_height + log delta_L + log(D + T' c_deg)) + D0 b + D S^2 h)`.
    pub lower_bound: Inequality,
    pub pass: bool,
}

/// Valuation exponent as an exact rational, refusing infinity.
fn finite(v: ValuationExponent) -> Result<Rat> {
    match v {
        ValuationExponent::Finite(q) => Ok(q),
        ValuationExponent::Infinity => Err(Error::ZeroValue),
    }
}

pub fn liouville_lower(
    inst: &ProofInstance,
    params: &ToyParameters,
    consts: &AuditConstants,
    p: &MPoly,
    s: u64,
    t: &[u32],
) -> Result<LiouvilleReport> {
    let ws = Workspace::new(inst, params, total(t) + 1)?;
    let by_series = ws.route_a_value(p, s, t)?;
    let by_poly = route_b_value(&ws, p, s, t)?;
    if by_poly.is_zero() && by_series.is_zero() {
        return Err(Error::ZeroValue);
    }
    let routes_agree = by_series == by_poly;
    let x = by_poly;
    let v = finite(inst.embedding.valuation(&x)?)?;
    let verdict = liouville_check(&x, inst.embedding.place())?;
    let ln_p = ln_int(&BigInt::from(inst.p), DEFAULT_BITS);
    let log_abs = ln_p.scale(&-v.clone());

    let order_params = ToyParameters { t: total(t), s0: params.s, ..params.clone() };
    let bound = auxiliary_height_bound(inst, &order_params)?.scale(&consts.c5).neg();
    let lower_bound = Inequality::gt_certain(&log_abs, &bound);
    Ok(LiouvilleReport {
        s,
        t: t.to_vec(),
        value: element_string(&x),
        routes_agree,
        height: IntervalRecord::from(&height(&x)?),
        valuation: format_rational(&v),
        log_abs: IntervalRecord::from(&log_abs),
        liouville_as_written: verdict.holds_as_written,
        liouville_standard: verdict.holds_standard,
        pass: routes_agree && verdict.holds_standard && lower_bound.holds,
        lower_bound,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport {
    pub cap: u32,
    /// Order of `Psi` along `W` at `s u_bar` for each `s < S`.
    pub orders: Vec<String>,
    /// Every order is at least `T`.
    pub order_hypothesis: bool,
    /// The orders at `s < S0` reach the cap, as the construction forces.
    pub forced: bool,
    /// `c6 D0 D^n >= binom(T+n, n) S`.
    pub subgroup_inequality: Inequality,
    pub pass: bool,
}

fn order_string(o: &VanishingOrder) -> String {
    match o {
        VanishingOrder::Exact(k) => k.to_string(),
        VanishingOrder::AtLeast(k) => format!(">={k}"),
    }
}

pub(crate) fn orders_along(ws: &Workspace, p: &MPoly, count: u64, cap: u32) -> Result<Vec<VanishingOrder>> {
    let basis = ws.inst.hyperplane.directions();
    (0..count)
        .map(|s| {
            let f = ws.psi_local(p, s)?;
            ord_along(&f, ws.order(), &basis, cap)
        })
        .collect()
}

pub fn vanishing_order_audit(
    inst: &ProofInstance,
    params: &ToyParameters,
    consts: &AuditConstants,
    p: &MPoly,
) -> Result<VanishingReport> {
    let cap = params.t;
    let ws = Workspace::new(inst, params, cap + 1)?;
    let orders = orders_along(&ws, p, params.s as u64, cap)?;
    let order_hypothesis = orders.iter().all(|o| o.at_least(cap));
    let forced = orders.iter().take(params.s0 as usize).all(|o| o.at_least(cap));
    let n = inst.n() as u64;
    let lhs = binomial(params.t as u64 + n, n) * BigInt::from(params.s);
    let rhs = &consts.c6 * Rat::from_integer(BigInt::from(params.d0) * pow_int(&BigInt::from(params.d), n));
    let subgroup_inequality =
        Inequality::ge(&ValuationExponent::Finite(rhs), &ValuationExponent::Finite(Rat::from_integer(lhs)));
    Ok(VanishingReport {
        cap,
        orders: orders.iter().map(order_string).collect(),
        order_hypothesis,
        pass: forced,
        forced,
        subgroup_inequality,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    /// `l(u) = 0` exactly, which the theorem allows.
    LinearFormZero,
}

/// One way of computing `v(l(u))`.
#[derive(Clone, Debug, Serialize)]
pub struct FormPath {
    pub v_l_u: String,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub p: u64,
    pub n: usize,
    pub nu: u32,
    pub omega: IntervalRecord,
    pub big_b: String,
    pub big_h: String,
    /// `v(l(u))`, with `beta` as given.
    pub v_l_u: String,
    /// `c0 omega^(n+3) b h^n (log b + log h [+ 2 nu log p])^(n+3)`.
    pub exponent: IntervalRecord,
    /// `-exponent log p`.
    pub bound: IntervalRecord,
    pub log_abs_l_u: Option<IntervalRecord>,
    /// `log|l(u)|_p > bound`.
    pub comparison: Option<Inequality>,
    pub direct: FormPath,
    /// `l'(u)` with denominators cleared: `|l(u)|_p = |den|_p^-1 |l'(u)|_p >= |l'(u)|_p`.
    pub cleared: FormPath,
    /// `v(l'(u)) = v(l(u)) + v(den)` and both paths give the same outcome.
    pub paths_agree: bool,
    pub consistent: bool,
    pub outcome: Outcome,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.outcome != Outcome::Fail && self.paths_agree
    }
}

/// `prod gamma_i^(beta'_i) = 1` for integral `beta'`: then `l(u) = 0`.
fn certified_zero(inst: &ProofInstance) -> Result<bool> {
    let field = inst.field();
    let mut prod = AlgebraicNumber::one(field);
    for (b, g) in inst.hyperplane.beta().iter().zip(&inst.gamma) {
        let Some(q) = b.as_rational() else { return Ok(false) };
        let e = q.to_integer();
        let k = crate::arith::to_u64(&e.magnitude().clone().into())
            .ok_or_else(|| Error::BadParameters("exponent too large".into()))?;
        let f = if e < BigInt::zero() { g.inv()?.pow(k) } else { g.pow(k) };
        prod = prod.mul(&f);
    }
    Ok(prod.is_one())
}

/// Compares `v` with the exponent; an ambiguous comparison needs more precision.
fn compare(v: &Rat, exponent: &Interval) -> Result<Outcome> {
    let vi = Interval::point(v.clone());
    if vi.certainly_lt(exponent) {
        Ok(Outcome::Pass)
    } else if exponent.certainly_le(&vi) {
        Ok(Outcome::Fail)
    } else {
        Err(Error::InsufficientPrecision(format!("v(l(u)) = {} meets the exponent enclosure", format_rational(v))))
    }
}

pub fn verify_gm(inst: &ProofInstance, c0: &Rat) -> Result<VerifyReport> {
    let n = inst.n();
    let p = inst.p;
    let omega = inst.model.omega_l(p);
    let nu = if inst.nu.nu > 0 { Some(inst.nu.nu) } else { None };
    let exponent = theorem_exponent(&omega, n, &inst.b, &inst.h, p, c0, nu)?;
    let ln_p = ln_int(&BigInt::from(p), DEFAULT_BITS);
    let bound = exponent.mul(&ln_p).neg();
    let emb = &inst.embedding;
    let direct_l = inst
        .beta
        .iter()
        .zip(&inst.u)
        .fold(PadicNumber::exact_zero(p), |acc, (b, x)| acc.add(&emb.embed(b).mul(x)));
    let mut report = VerifyReport {
        p,
        n,
        nu: inst.nu.nu,
        omega: IntervalRecord::from(&omega),
        big_b: inst.big_b.to_string(),
        big_h: inst.big_h.to_string(),
        v_l_u: "inf".into(),
        exponent: IntervalRecord::from(&exponent),
        bound: IntervalRecord::from(&bound),
        log_abs_l_u: None,
        comparison: None,
        direct: FormPath { v_l_u: "inf".into(), outcome: Outcome::LinearFormZero },
        cleared: FormPath { v_l_u: "inf".into(), outcome: Outcome::LinearFormZero },
        paths_agree: true,
        consistent: inst.consistent,
        outcome: Outcome::LinearFormZero,
    };
    if certified_zero(inst)? {
        return Ok(report);
    }
    if inst.l_u.is_zero() || direct_l.is_zero() {
        return Err(Error::InsufficientPrecision(format!(
            "l(u) vanishes modulo p^{} but is not certified zero",
            inst.l_u.abs_precision()
        )));
    }
    let v_direct = finite(direct_l.valuation())?;
    let v_cleared = finite(inst.l_u.valuation())?;
    let den_v = Rat::from_integer(BigInt::from(crate::arith::vp_int(&inst.beta_den, p)));
    let direct = compare(&v_direct, &exponent)?;
    let cleared = compare(&v_cleared, &exponent)?;
    let log_abs = ln_p.scale(&-v_direct.clone());
    let comparison = Inequality::gt_certain(&log_abs, &bound);
    report.v_l_u = format_rational(&v_direct);
    report.log_abs_l_u = Some(IntervalRecord::from(&log_abs));
    report.comparison = Some(comparison);
    report.paths_agree = v_cleared == &v_direct + &den_v && direct == cleared;
    report.direct = FormPath { v_l_u: format_rational(&v_direct), outcome: direct };
    report.cleared = FormPath { v_l_u: format_rational(&v_cleared), outcome: cleared };
    report.outcome = direct;
    Ok(report)
}

/// Build information carried in every report; no clock readings, so that
/// reports are reproducible byte for byte.
#[derive(Clone, Debug, Serialize)]
pub struct RunMetadata {
    pub version: String,
    pub precision: u32,
    pub place: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub metadata: RunMetadata,
    pub nu: NuReduction,
    pub consistent: bool,
    pub extended: ExtendedSpace,
    /// Formula-scale parameters for this instance.
    pub formula_parameters: Option<Parameters>,
    pub formula_parameters_error: Option<String>,
    pub toy_parameters: ToyParameters,
    pub auxiliary: AuxiliaryPolynomial,
    pub extrapolation: Option<ExtrapolationReport>,
    pub extrapolation_skipped: Option<String>,
    pub vanishing: VanishingReport,
    pub liouville: Vec<LiouvilleReport>,
    pub verify: VerifyReport,
    pub pass: bool,
}

/// First `t` by degree, then lexicographically, with `(Delta^t Psi)(s u_bar) != 0`.
fn first_nonvanishing(ws: &Workspace, p: &MPoly, s: u64, max_degree: u32) -> Result<Option<Vec<u32>>> {
    for k in 0..=max_degree {
        for t in monomials_of_degree(ws.inst.n(), k) {
            if !route_b_value(ws, p, s, &t)?.is_zero() {
                return Ok(Some(t));
            }
        }
    }
    Ok(None)
}

pub fn run_pipeline(inst: &ProofInstance, params: &ToyParameters, consts: &AuditConstants) -> Result<PipelineReport> {
    let n = inst.n();
    let extended = build_extended(inst);
    let omega = inst.model.omega_l(inst.p);
    let (formula_parameters, formula_parameters_error) =
        match choose_parameters(
            &consts.c,
            &RealExpr::Enclosure(omega),
            n,
            &RealExpr::Log(Rat::from_integer(inst.big_b.clone())),
            &RealExpr::Log(Rat::from_integer(inst.big_h.clone())),
            &consts.c2,
        ) {
            Ok(pr) => (Some(pr), None),
            Err(e) => (None, Some(e.to_string())),
        };
    let auxiliary = construct_auxiliary(inst, params, consts)?;
    let p = auxiliary.p.clone();
    let ws = Workspace::new(inst, params, n as u32 * (2 * params.t - 1) + 1)?;
    let (extrapolation, extrapolation_skipped) = if extended.degenerate {
        (None, Some("l(u) vanishes at working precision".to_string()))
    } else {
        (Some(extrapolate(inst, &ws, &p, consts)?), None)
    };
    let vanishing = vanishing_order_audit(inst, params, consts, &p)?;

    // Liouville at every translate whose exact order is below the cap, and
    // at the origin with the first nonvanishing derivative.
    let mut liouville = Vec::new();
    let cap_ws = Workspace::new(inst, params, params.t + 1)?;
    let orders = orders_along(&cap_ws, &p, params.s as u64, params.t)?;
    for (s, o) in orders.iter().enumerate() {
        if let VanishingOrder::Exact(k) = o {
            if let Some(t) = first_nonvanishing(&ws, &p, s as u64, *k)? {
                liouville.push(liouville_lower(inst, params, consts, &p, s as u64, &t)?);
            }
        }
    }
    if let Some(t) = first_nonvanishing(&ws, &p, 0, 2 * n as u32 * params.t + 2)? {
        liouville.push(liouville_lower(inst, params, consts, &p, 0, &t)?);
    }
    let verify = verify_gm(inst, &consts.c0)?;
    let pass = auxiliary.pass
        && extended.difference_identity
        && extended.w_in_span
        && extrapolation.as_ref().is_none_or(|e| e.pass)
        && vanishing.pass
        && liouville.iter().all(|l| l.pass)
        && verify.passed();
    Ok(PipelineReport {
        metadata: RunMetadata {
            version: env!("CARGO_PKG_VERSION").to_string(),
            precision: inst.embedding.precision(),
            place: inst.embedding.place().label(),
        },
        nu: inst.nu.clone(),
        consistent: inst.consistent,
        extended,
        formula_parameters,
        formula_parameters_error,
        toy_parameters: params.clone(),
        auxiliary,
        extrapolation,
        extrapolation_skipped,
        vanishing,
        liouville,
        verify,
        pass,
    })
}
