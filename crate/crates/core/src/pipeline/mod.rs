//! The proof engine at desk scale: reduction of `u` into the small disk,
//! parameter selection, the auxiliary polynomial, extrapolation, the
//! Liouville lower bound, vanishing-order audits, the final bound and a
//! verifier for tori.
//!
//! Every constant the argument leaves unquantified is a configuration input
//! ([`AuditConstants`]); exact identities and valuation inequalities are
//! audited without constants.

mod auxiliary;
mod extrapolate;
mod instance;
mod record;
mod verify;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{floor_rat, format_rational, parse_rational, pow_int, pow_rat, rat, Int, Rat};
use crate::error::{Error, Result};
use crate::interval::{exp_rat, ln_int, ln_rat, Interval, DEFAULT_BITS};
use crate::padic::{PadicNumber, ValuationExponent};

pub use auxiliary::{
    build_extended, condition_failures, construct_auxiliary, route_b_value, translation_polynomials,
    AuxiliaryPolynomial, ExtendedSpace, TranslationPolynomial, Workspace,
};
pub use extrapolate::{
    extrapolate, lemma_e_check, lemma_value_check, lemma_value_grid, prop_sch_exponent, ExtrapolationReport,
    LemmaECheck, RestrictedFunctionReport,
};
pub use instance::{ElementSpec, InstanceFile, PadicEmbedding, ParamsSection, ProofInstance};
pub use record::{Inequality, IntervalRecord};
pub use verify::{
    liouville_lower, run_pipeline, vanishing_order_audit, verify_gm, LiouvilleReport, PipelineReport, Outcome, VanishingReport,
    VerifyReport,
};

/// Sizes of a desk-scale run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToyParameters {
    pub s0: u32,
    pub t: u32,
    pub d: u32,
    pub d0: u32,
    /// Number of translates in the vanishing-order audit.
    pub s: u32,
}

impl ToyParameters {
    pub fn new(s0: u32, t: u32, d: u32, d0: u32) -> Self {
        ToyParameters { s0, t, d, d0, s: s0 + 1 }
    }
}

/// The configurable constants. Shipped defaults: `c = 3`, `c0 = c1 = 1`,
/// `c2 = 1`, `c3 = c5 = 10`, `c4 = c6 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditConstants {
    pub c: Rat,
    pub c0: Rat,
    pub c2: Rat,
    pub c3: Rat,
    pub c4: Rat,
    pub c5: Rat,
    /// Constant in `binom(T+n, n) S <= c6 D0 D^n`.
    pub c6: Rat,
    /// Node budget of the short-vector search in the Siegel step.
    pub siegel_budget: usize,
}

impl Default for AuditConstants {
    fn default() -> Self {
        AuditConstants {
            c: rat(3, 1),
            c0: rat(1, 1),
            c2: rat(1, 1),
            c3: rat(10, 1),
            c4: rat(1, 1),
            c5: rat(10, 1),
            c6: rat(1, 1),
            siegel_budget: 20_000,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NuReduction {
    pub nu: u32,
    #[serde(skip)]
    pub u_prime: Vec<PadicNumber>,
    /// `p^(2 nu)`, the factor in `h(gamma^(p^nu)) <= p^(2 nu) h(gamma)`.
    pub h_bound_factor: String,
    pub v_u: String,
    pub v_u_prime: String,
    /// `v(u') > 1/(p-1)`.
    pub inside: bool,
}

/// `max{0, floor(1/(p-1) - v) + 1}`.
pub fn nu_exponent(v_u: &Rat, p: u64) -> u32 {
    let x = floor_rat(&(rat(1, p as i64 - 1) - v_u)) + BigInt::one();
    if x.is_positive() {
        crate::arith::to_u64(&x).expect("nu fits in u64") as u32
    } else {
        0
    }
}

/// Multiplies `u` by `p^nu` so that `v(p^nu u) > 1/(p-1)`. The valuation of
/// `u` is the minimum over its coordinates; the zero vector needs no shift.
pub fn nu_reduction(u: &[PadicNumber], p: u64) -> NuReduction {
    let v_u = u.iter().map(|x| x.valuation_lower_bound()).min().unwrap_or(ValuationExponent::Infinity);
    let nu = match &v_u {
        ValuationExponent::Finite(v) => nu_exponent(v, p),
        ValuationExponent::Infinity => 0,
    };
    let pn = Rat::from_integer(pow_int(&BigInt::from(p), nu as u64));
    let u_prime: Vec<PadicNumber> = u.iter().map(|x| x.mul_rational(&pn)).collect();
    let v_u_prime = v_u.add_rat(&Rat::from_integer(BigInt::from(nu)));
    let inside = v_u_prime > ValuationExponent::Finite(rat(1, p as i64 - 1));
    NuReduction {
        nu,
        u_prime,
        h_bound_factor: pow_int(&BigInt::from(p), 2 * nu as u64).to_string(),
        v_u: v_u.to_record(),
        v_u_prime: v_u_prime.to_record(),
        inside,
    }
}

/// A positive real given exactly: a rational, `exp(q)` or `log(q)`, or a
/// fixed enclosure.
#[derive(Clone, Debug, PartialEq)]
pub enum RealExpr {
    Rational(Rat),
    Exp(Rat),
    Log(Rat),
    Enclosure(Interval),
}

impl RealExpr {
    /// Accepts `num/den`, finite decimals, `e`, `exp(q)` and `log(q)`.
    pub fn parse(s: &str) -> Result<RealExpr> {
        let s = s.trim();
        if s == "e" {
            return Ok(RealExpr::Exp(rat(1, 1)));
        }
        if let Some(inner) = s.strip_prefix("exp(").and_then(|r| r.strip_suffix(')')) {
            return Ok(RealExpr::Exp(parse_exact(inner)?));
        }
        if let Some(inner) = s.strip_prefix("log(").and_then(|r| r.strip_suffix(')')) {
            let q = parse_exact(inner)?;
            if !q.is_positive() {
                return Err(Error::Parse(format!("log of a non-positive number: {s}")));
            }
            return Ok(RealExpr::Log(q));
        }
        Ok(RealExpr::Rational(parse_exact(s)?))
    }

    pub fn enclose(&self, bits: u32) -> Interval {
        match self {
            RealExpr::Rational(q) => Interval::point(q.clone()),
            RealExpr::Exp(q) => exp_rat(q, bits),
            RealExpr::Log(q) => ln_rat(q, bits),
            RealExpr::Enclosure(i) => i.clone(),
        }
    }

    /// Enclosure of the natural logarithm; `log(exp(q)) = q` exactly.
    pub fn ln_enclose(&self, bits: u32) -> Result<Interval> {
        match self {
            RealExpr::Exp(q) => Ok(Interval::point(q.clone())),
            RealExpr::Rational(q) if q.is_positive() => Ok(ln_rat(q, bits)),
            _ => {
                let x = self.enclose(bits);
                if !x.is_positive() {
                    return Err(Error::BadParameters("logarithm of a non-positive quantity".into()));
                }
                Ok(x.ln(bits))
            }
        }
    }

    pub fn to_record(&self) -> String {
        match self {
            RealExpr::Rational(q) => format_rational(q),
            RealExpr::Exp(q) => format!("exp({})", format_rational(q)),
            RealExpr::Log(q) => format!("log({})", format_rational(q)),
            RealExpr::Enclosure(i) => {
                let (lo, hi) = i.to_decimal_pair(30);
                format!("[{lo}, {hi}]")
            }
        }
    }
}

/// `num/den`, an integer, or a finite decimal, read exactly.
pub fn parse_exact(s: &str) -> Result<Rat> {
    let s = s.trim();
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal {s}")));
        }
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        let ip = if ip.is_empty() { "0" } else { ip };
        let digits: Int = format!("{ip}{fp}").parse().map_err(|_| Error::Parse(format!("bad decimal {s}")))?;
        let q = Rat::new(digits, pow_int(&BigInt::from(10), fp.len() as u64));
        return Ok(if neg { -q } else { q });
    }
    parse_rational(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Parameters {
    pub c: String,
    pub n: usize,
    pub s0: String,
    pub d0: String,
    pub s: String,
    pub d: String,
    pub t: String,
    /// `D0 D^n / (S0 T^n)`, compared with `c2`.
    pub feasibility_ratio: String,
    #[serde(skip)]
    pub values: ParameterValues,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ParameterValues {
    pub s0: Int,
    pub d0: Int,
    pub s: Int,
    pub d: Int,
    pub t: Int,
}

const FLOOR_BITS: [u32; 5] = [DEFAULT_BITS, 384, 768, 1536, 3072];

fn certain_floor(x: &Interval) -> Option<Int> {
    let lo = floor_rat(&x.lo);
    (lo == floor_rat(&x.hi)).then_some(lo)
}

/// Floors of `q * x` where `x` is refined with the working precision.
fn floor_refined(what: &str, f: impl Fn(u32) -> Result<Interval>) -> Result<Int> {
    for bits in FLOOR_BITS {
        if let Some(v) = certain_floor(&f(bits)?) {
            return Ok(v);
        }
    }
    Err(Error::InsufficientPrecision(format!("floor of {what} is not decided at {} bits", FLOOR_BITS[4])))
}

/// The five integers of the parameter choice:
/// `S0 = [c omega (log b + log h)]`, `D0 = [c^(5n+1) S0^(n+1) h^n]`,
/// `S = [c^2 S0]`, `D = [c^(5n+1) S0^n b h^(n-1)]`, `T = [c^(5n+6) S0^(n+1) b h^n]`.
pub fn choose_parameters(
    c: &Rat,
    omega: &RealExpr,
    n: usize,
    b: &RealExpr,
    h: &RealExpr,
    c2: &Rat,
) -> Result<Parameters> {
    if !c.is_positive() || n == 0 {
        return Err(Error::BadParameters("need c > 0 and n >= 1".into()));
    }
    let nn = n as i64;
    let s0 = floor_refined("S0", |bits| {
        let l = b.ln_enclose(bits)?.add(&h.ln_enclose(bits)?);
        Ok(omega.enclose(bits).mul(&l).scale(c))
    })?;
    if s0 < BigInt::from(2) {
        return Err(Error::InfeasibleParameters(format!("S0 = {s0} is below 2; increase c")));
    }
    let s0q = Rat::from_integer(s0.clone());
    let c5n1 = pow_rat(c, 5 * nn + 1);
    let d0 = floor_refined("D0", |bits| {
        let k = &c5n1 * pow_rat(&s0q, nn + 1);
        Ok(h.enclose(bits).pow(n as u32).scale(&k))
    })?;
    let s = floor_rat(&(c * c * &s0q));
    let d = floor_refined("D", |bits| {
        let k = &c5n1 * pow_rat(&s0q, nn);
        Ok(b.enclose(bits).mul(&h.enclose(bits).pow(n as u32 - 1)).scale(&k))
    })?;
    let t = floor_refined("T", |bits| {
        let k = pow_rat(c, 5 * nn + 6) * pow_rat(&s0q, nn + 1);
        Ok(b.enclose(bits).mul(&h.enclose(bits).pow(n as u32)).scale(&k))
    })?;
    let lhs = &d0 * pow_int(&d, n as u64);
    let rhs_int = &s0 * pow_int(&t, n as u64);
    if rhs_int.is_zero() {
        return Err(Error::InfeasibleParameters("T = 0".into()));
    }
    let ratio = Rat::new(lhs.clone(), rhs_int.clone());
    if Rat::from_integer(lhs) < c2 * Rat::from_integer(rhs_int) {
        return Err(Error::InfeasibleParameters(format!(
            "D0 D^n / (S0 T^n) = {} is below c2 = {}",
            format_rational(&ratio),
            format_rational(c2)
        )));
    }
    Ok(Parameters {
        c: format_rational(c),
        n,
        s0: s0.to_string(),
        d0: d0.to_string(),
        s: s.to_string(),
        d: d.to_string(),
        t: t.to_string(),
        feasibility_ratio: format_rational(&ratio),
        values: ParameterValues { s0, d0, s, d, t },
    })
}

/// `c0 omega^(n+3) b h^n (log b + log h + 2 nu log p)^(n+3)`: the bound on
/// `v(l(u))`, i.e. the final bound divided by `-log p`.
pub fn theorem_exponent(
    omega: &Interval,
    n: usize,
    b: &Interval,
    h: &Interval,
    p: u64,
    c0: &Rat,
    nu: Option<u32>,
) -> Result<Interval> {
    let ln3 = ln_int(&BigInt::from(3), DEFAULT_BITS);
    // Rejected only when certainly below, so rounded inputs such as 1.0986 pass.
    if b.certainly_lt(&ln3) || h.certainly_lt(&ln3) {
        return Err(Error::BadParameters("b and h must be at least log 3".into()));
    }
    if !c0.is_positive() || !omega.is_positive() || p < 2 {
        return Err(Error::BadParameters("need c0 > 0, omega > 0 and p >= 2".into()));
    }
    let e = n as u32 + 3;
    let mut l = b.ln(DEFAULT_BITS).add(&h.ln(DEFAULT_BITS));
    if let Some(nu) = nu {
        if nu > 0 {
            l = l.add(&ln_int(&BigInt::from(p), DEFAULT_BITS).scale(&rat(2 * nu as i64, 1)));
        }
    }
    Ok(omega.pow(e).mul(b).mul(&h.pow(n as u32)).mul(&l.pow(e)).scale(c0))
}

/// `-c0 omega^(n+3) b h^n (log b + log h)^(n+3) log p`, or with
/// `log b + log h + 2 nu log p` when `nu` is given.
pub fn theorem_bound(
    omega: &Interval,
    n: usize,
    b: &Interval,
    h: &Interval,
    p: u64,
    c0: &Rat,
    nu: Option<u32>,
) -> Result<Interval> {
    let x = theorem_exponent(omega, n, b, h, p, c0, nu)?;
    Ok(x.mul(&ln_int(&BigInt::from(p), DEFAULT_BITS)).neg())
}

/// `v_p` of the least `|s - s'|_p` over distinct `s, s'` in `0..count`.
pub fn grid_delta_exponent(count: u32, p: u64) -> Rat {
    (1..count.max(1) as u64)
        .map(|k| crate::arith::vp_int(&BigInt::from(k), p))
        .max()
        .map_or(Rat::zero(), |v| Rat::from_integer(BigInt::from(v)))
}
