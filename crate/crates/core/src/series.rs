//! Truncated one-variable power series over Q_p.
//!
//! Radii are always `p^(-q)` with `q` rational, so Gauss norms, Newton
//! polygon slopes and all lemma inequalities are exact comparisons of
//! rational exponents.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, format_rational, parse_rational, rat, Rat};
use crate::error::{Error, Result};
use crate::padic::{r_p_exponent, PadicNumber, PadicRecord, ValuationExponent};

/// Affine lower bound `v(a_n) >= alpha * n + beta` for every index past the truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailCertificate {
    pub alpha: Rat,
    pub beta: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicSeries {
    p: u64,
    coeffs: Vec<PadicNumber>,
    tail: Option<TailCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// Lower hull vertices `(n, v(a_n))`.
    pub vertices: Vec<(u64, Rat)>,
    /// Segment slopes with their horizontal lengths, slopes increasing.
    pub slopes: Vec<(Rat, u64)>,
    /// Multiplicity of the zero at the origin (leading zero coefficients).
    pub zeros_at_origin: u64,
    /// False when a tail certificate could still add segments past the last vertex.
    pub complete: bool,
}

/// Outcome of a valuation-space inequality `lhs >= rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentCheck {
    pub lhs: ValuationExponent,
    pub rhs: ValuationExponent,
    pub holds: bool,
}

impl ExponentCheck {
    pub fn ge(lhs: ValuationExponent, rhs: ValuationExponent) -> Self {
        let holds = lhs >= rhs;
        ExponentCheck { lhs, rhs, holds }
    }
}

impl PadicSeries {
    pub fn new(p: u64, coeffs: Vec<PadicNumber>, tail: Option<TailCertificate>) -> Self {
        assert!(coeffs.iter().all(|c| c.prime() == p), "coefficient over a different prime");
        PadicSeries { p, coeffs, tail }
    }

    /// A polynomial with rational coefficients, each kept to `rel` significant digits.
    pub fn from_rationals(p: u64, coeffs: &[Rat], rel: u32) -> Self {
        let cs = coeffs.iter().map(|q| PadicNumber::from_rational_rel(q, p, rel)).collect();
        PadicSeries { p, coeffs: cs, tail: None }
    }

    pub fn with_tail(mut self, tail: TailCertificate) -> Self {
        self.tail = Some(tail);
        self
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[PadicNumber] {
        &self.coeffs
    }

    pub fn tail(&self) -> Option<&TailCertificate> {
        self.tail.as_ref()
    }

    pub fn is_polynomial(&self) -> bool {
        self.tail.is_none()
    }

    /// Minimum absolute precision over the stored coefficients.
    pub fn min_precision(&self) -> i64 {
        self.coeffs.iter().map(|c| c.abs_precision()).min().unwrap_or(i64::MAX)
    }

    /// Gauss norm exponent with the first and last indices attaining it.
    fn gauss_with_indices(&self, q: &Rat) -> Result<(ValuationExponent, Option<(u64, u64)>)> {
        let mut best: Option<(Rat, u64, u64)> = None;
        let mut uncertain_floor: Option<Rat> = None;
        for (n, c) in self.coeffs.iter().enumerate() {
            let shift = q * Rat::from_integer((n as i64).into());
            if c.is_exact_zero() {
                continue;
            }
            if c.is_zero() {
                let lb = Rat::from_integer(c.abs_precision().into()) + &shift;
                uncertain_floor = Some(match uncertain_floor {
                    Some(u) if u <= lb => u,
                    _ => lb,
                });
                continue;
            }
            let w = c.valuation().finite().unwrap() + &shift;
            best = match best {
                None => Some((w, n as u64, n as u64)),
                Some((b, f, _)) if w == b => Some((b, f, n as u64)),
                Some((b, f, l)) if w > b => Some((b, f, l)),
                Some(_) => Some((w, n as u64, n as u64)),
            };
        }
        if let (Some(u), Some((b, _, _))) = (&uncertain_floor, &best) {
            if u <= b {
                return Err(Error::InsufficientPrecision(
                    "a coefficient known only as zero modulo p^k could attain the norm".into(),
                ));
            }
        }
        if best.is_none() && uncertain_floor.is_some() {
            return Err(Error::InsufficientPrecision("all coefficients vanish at working precision".into()));
        }
        if let Some(t) = &self.tail {
            let slope = &t.alpha + q;
            if !slope.is_positive() {
                return Err(Error::UncertifiedTail(format!(
                    "tail slope alpha + q = {} is not positive",
                    format_rational(&slope)
                )));
            }
            let first = Rat::from_integer((self.coeffs.len() as i64).into());
            let tail_min = &slope * first + &t.beta;
            match &best {
                None => return Err(Error::UncertifiedTail("no certified coefficient below the tail".into())),
                Some((b, _, _)) if &tail_min <= b => {
                    return Err(Error::UncertifiedTail(format!(
                        "tail lower bound {} does not exceed the truncated norm {}",
                        format_rational(&tail_min),
                        format_rational(b)
                    )))
                }
                _ => {}
            }
        }
        Ok(match best {
            None => (ValuationExponent::Infinity, None),
            Some((b, f, l)) => (ValuationExponent::Finite(b), Some((f, l))),
        })
    }

    /// Lowest index of a coefficient that is not exactly zero.
    fn order_at_origin(&self) -> Option<u64> {
        self.coeffs.iter().position(|c| !c.is_exact_zero()).map(|i| i as u64)
    }
}

/// `w` with `|f|_{p^-q} = p^-w`, i.e. `min_n v(a_n) + n q`.
pub fn gauss_norm(f: &PadicSeries, q: &Rat) -> Result<ValuationExponent> {
    f.gauss_with_indices(q).map(|(w, _)| w)
}

pub fn newton_polygon(f: &PadicSeries) -> Result<NewtonPolygon> {
    let start = f.order_at_origin().ok_or(Error::ZeroSeries)?;
    let mut pts: Vec<(u64, Rat)> = Vec::new();
    for (n, c) in f.coeffs.iter().enumerate() {
        if c.is_zero() {
            if !c.is_exact_zero() {
                return Err(Error::InsufficientPrecision(format!("coefficient {n} vanishes at working precision")));
            }
            continue;
        }
        pts.push((n as u64, c.valuation().finite().unwrap().clone()));
    }
    if pts.is_empty() {
        return Err(Error::ZeroSeries);
    }
    // lower convex hull by a monotone chain
    let mut hull: Vec<(u64, Rat)> = Vec::new();
    for pt in pts {
        while hull.len() >= 2 {
            let (x1, y1) = &hull[hull.len() - 2];
            let (x2, y2) = &hull[hull.len() - 1];
            // drop the middle point if it lies on or above the segment from x1 to pt
            let lhs = (y2 - y1) * Rat::from_integer(((pt.0 - x1) as i64).into());
            let rhs = (&pt.1 - y1) * Rat::from_integer(((x2 - x1) as i64).into());
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut slopes = Vec::new();
    for w in hull.windows(2) {
        let len = w[1].0 - w[0].0;
        let s = (&w[1].1 - &w[0].1) / Rat::from_integer((len as i64).into());
        slopes.push((s, len));
    }
    let mut complete = true;
    if let Some(t) = &f.tail {
        // segments stay hull segments of the full series only while the tail
        // lies strictly above their supporting lines
        let len = Rat::from_integer((f.coeffs.len() as i64).into());
        let mut keep = 0;
        for (i, (s, _)) in slopes.iter().enumerate() {
            let (xe, ye) = &hull[i + 1];
            let margin_slope = &t.alpha - s;
            let ok = margin_slope.is_positive()
                && (&margin_slope * &len + &t.beta - ye + s * Rat::from_integer((*xe as i64).into())).is_positive();
            if ok {
                keep = i + 1;
            } else {
                break;
            }
        }
        slopes.truncate(keep);
        hull.truncate(keep + 1);
        complete = false;
    }
    Ok(NewtonPolygon { vertices: hull, slopes, zeros_at_origin: start, complete })
}

/// Zeros in C_p with valuation `>= q` (closed disk) or `> q` (open disk), with multiplicity.
pub fn count_zeros(f: &PadicSeries, q: &Rat, closed: bool) -> Result<u64> {
    match f.gauss_with_indices(q)? {
        (_, None) => Err(Error::ZeroSeries),
        (_, Some((first, last))) => Ok(if closed { last } else { first }),
    }
}

/// `|f|_s <= (s/t)^k |f|_t` with `k` the closed-disk count at `s`; `s = p^-s_exp`.
pub fn check_growth_lemma(f: &PadicSeries, s_exp: &Rat, t_exp: &Rat) -> Result<ExponentCheck> {
    if s_exp < t_exp {
        return Err(Error::BadParameters("growth lemma needs s <= t".into()));
    }
    let k = count_zeros(f, s_exp, true)?;
    let ws = gauss_norm(f, s_exp)?;
    let wt = gauss_norm(f, t_exp)?;
    let rhs = wt.add_rat(&(Rat::from_integer((k as i64).into()) * (s_exp - t_exp)));
    Ok(ExponentCheck::ge(ws, rhs))
}

/// `|f|_t <= (t/s)^m |f|_s` with `m` the open-disk count at `t`.
pub fn check_reverse_lemma(f: &PadicSeries, s_exp: &Rat, t_exp: &Rat) -> Result<ExponentCheck> {
    if s_exp < t_exp {
        return Err(Error::BadParameters("reverse lemma needs s <= t".into()));
    }
    let m = count_zeros(f, t_exp, false)?;
    let ws = gauss_norm(f, s_exp)?;
    let wt = gauss_norm(f, t_exp)?;
    // -wt <= m (s_exp - t_exp) - ws  <=>  wt >= ws - m (s_exp - t_exp)
    let rhs = ws.add_rat(&-(Rat::from_integer((m as i64).into()) * (s_exp - t_exp)));
    Ok(ExponentCheck::ge(wt, rhs))
}

/// Exponent of `max{(s/t)^{kl}|f|_t, mu (s/delta)^{kl-1} r_p^{-(k-1)}}`.
#[allow(clippy::too_many_arguments)]
pub fn schwarz_bound(
    s_exp: &Rat,
    t_exp: &Rat,
    k: u64,
    l: u64,
    delta_exp: &Rat,
    mu_exp: &ValuationExponent,
    norm_t_exp: &ValuationExponent,
    p: u64,
) -> Result<ValuationExponent> {
    if t_exp > s_exp {
        return Err(Error::BadParameters("need t >= s".into()));
    }
    if l < 2 {
        return Err(Error::BadParameters("need at least two interpolation points".into()));
    }
    if k < 1 {
        return Err(Error::BadParameters("need k >= 1".into()));
    }
    if delta_exp.is_negative() {
        return Err(Error::BadParameters("need |delta|_p <= 1".into()));
    }
    if p < 2 {
        return Err(Error::BadParameters("need p >= 2".into()));
    }
    let kl = Rat::from_integer(((k * l) as i64).into());
    let first = norm_t_exp.add_rat(&(&kl * (s_exp - t_exp)));
    let rp = r_p_exponent(p);
    let second = mu_exp.add_rat(
        &((&kl - rat(1, 1)) * (s_exp - delta_exp) - rp.finite().unwrap() * Rat::from_integer(((k - 1) as i64).into())),
    );
    Ok(first.min(second))
}

/// Coefficients of the `n`-th derivative, with exact integer factors `n!/(n-j)!`-style.
pub fn derivative_rationals(coeffs: &[Rat], order: usize) -> Vec<Rat> {
    if order >= coeffs.len() {
        return Vec::new();
    }
    (order..coeffs.len())
        .map(|i| {
            let mut f = arith::int(1);
            for j in 0..order {
                f *= arith::int((i - j) as i64);
            }
            &coeffs[i] * Rat::from_integer(f)
        })
        .collect()
}

pub fn eval_rationals(coeffs: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Serialized form `{p, coeffs, tail: {alpha, beta}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub p: u64,
    pub coeffs: Vec<PadicRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tail: Option<TailRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailRecord {
    pub alpha: String,
    pub beta: String,
}

impl PadicSeries {
    pub fn to_record(&self) -> SeriesRecord {
        SeriesRecord {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| c.to_record()).collect(),
            tail: self.tail.as_ref().map(|t| TailRecord { alpha: format_rational(&t.alpha), beta: format_rational(&t.beta) }),
        }
    }

    pub fn from_record(r: &SeriesRecord) -> Result<Self> {
        let coeffs = r.coeffs.iter().map(PadicNumber::from_record).collect::<Result<Vec<_>>>()?;
        if coeffs.iter().any(|c| c.prime() != r.p) {
            return Err(Error::Parse("coefficient prime differs from series prime".into()));
        }
        let tail = match &r.tail {
            None => None,
            Some(t) => Some(TailCertificate { alpha: parse_rational(&t.alpha)?, beta: parse_rational(&t.beta)? }),
        };
        Ok(PadicSeries { p: r.p, coeffs, tail })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u64, cs: &[i64]) -> PadicSeries {
        let qs: Vec<Rat> = cs.iter().map(|&c| rat(c, 1)).collect();
        PadicSeries::from_rationals(p, &qs, 30)
    }

    #[test]
    fn gauss_norm_examples() {
        let f = poly(3, &[1, 3, 9]);
        assert_eq!(gauss_norm(&f, &rat(0, 1)).unwrap(), ValuationExponent::from_int(0));
        // z - a with v(a) >= q has norm r
        let g = poly(5, &[-25, 1]);
        assert_eq!(gauss_norm(&g, &rat(1, 1)).unwrap(), ValuationExponent::from_int(1));
        let z = poly(5, &[0]);
        assert_eq!(gauss_norm(&z, &rat(1, 1)).unwrap(), ValuationExponent::Infinity);
    }

    #[test]
    fn polygon_examples() {
        let f = poly(5, &[-5, 0, 1]);
        let np = newton_polygon(&f).unwrap();
        assert_eq!(np.slopes, vec![(rat(-1, 2), 2)]);
        // (z - 3)(z - 9) = z^2 - 12 z + 27
        let g = poly(3, &[27, -12, 1]);
        let np = newton_polygon(&g).unwrap();
        assert_eq!(np.slopes, vec![(rat(-2, 1), 1), (rat(-1, 1), 1)]);
        assert!(newton_polygon(&poly(3, &[1])).unwrap().slopes.is_empty());
        assert_eq!(newton_polygon(&poly(3, &[0])), Err(Error::ZeroSeries));
    }

    #[test]
    fn zero_count_examples() {
        let f = poly(5, &[-5, 0, 1]);
        assert_eq!(count_zeros(&f, &rat(0, 1), true).unwrap(), 2);
        assert_eq!(count_zeros(&f, &rat(1, 1), true).unwrap(), 0);
        assert_eq!(count_zeros(&poly(7, &[0, -1, 1]), &rat(0, 1), true).unwrap(), 2);
        assert_eq!(count_zeros(&poly(3, &[1, 1]), &rat(1, 1), true).unwrap(), 0);
    }

    #[test]
    fn lemma_examples() {
        let f = poly(3, &[0, 1]);
        let c = check_growth_lemma(&f, &rat(1, 1), &rat(0, 1)).unwrap();
        assert!(c.holds && c.lhs == c.rhs);
        let one = poly(3, &[1]);
        assert!(check_growth_lemma(&one, &rat(1, 1), &rat(0, 1)).unwrap().holds);
        assert!(check_reverse_lemma(&f, &rat(1, 1), &rat(0, 1)).unwrap().holds);
        assert!(check_reverse_lemma(&one, &rat(1, 1), &rat(0, 1)).unwrap().holds);
    }

    #[test]
    fn schwarz_formula() {
        let w = |n: i64| ValuationExponent::from_int(n);
        let b = schwarz_bound(&rat(0, 1), &rat(0, 1), 1, 2, &rat(0, 1), &w(5), &w(3), 3).unwrap();
        assert_eq!(b, w(3));
        let b = schwarz_bound(&rat(1, 1), &rat(0, 1), 2, 2, &rat(0, 1), &w(0), &w(10), 3).unwrap();
        // first 4 + 10, second 0 + 3 - 1/2
        assert_eq!(b, ValuationExponent::Finite(rat(5, 2)));
        assert!(schwarz_bound(&rat(0, 1), &rat(1, 1), 1, 2, &rat(0, 1), &w(0), &w(0), 3).is_err());
        assert!(schwarz_bound(&rat(0, 1), &rat(0, 1), 1, 1, &rat(0, 1), &w(0), &w(0), 3).is_err());
    }

    #[test]
    fn tail_certificate_gates_queries() {
        let f = poly(3, &[1, 3]).with_tail(TailCertificate { alpha: rat(1, 1), beta: rat(0, 1) });
        assert_eq!(gauss_norm(&f, &rat(0, 1)).unwrap(), ValuationExponent::from_int(0));
        assert!(matches!(gauss_norm(&f, &rat(-1, 1)), Err(Error::UncertifiedTail(_))));
        let rec = f.to_record();
        assert_eq!(PadicSeries::from_record(&rec).unwrap(), f);
    }
}
