use serde::Serialize;

use crate::arith::format_rational;
use crate::interval::Interval;
use crate::numfield::le_tol;
use crate::padic::ValuationExponent;

/// Interval as decimal strings, rounded outward.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalRecord {
    pub lower: String,
    pub upper: String,
}

impl From<&Interval> for IntervalRecord {
    fn from(i: &Interval) -> Self {
        let (lower, upper) = i.to_decimal_pair(30);
        IntervalRecord { lower, upper }
    }
}

/// A recorded inequality `lhs relation rhs` with its margin (`lhs - rhs`
/// for `>=`, `rhs - lhs` for `<=`; the lower end for intervals).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inequality {
    pub lhs: String,
    pub relation: String,
    pub rhs: String,
    pub margin: String,
    pub holds: bool,
}

impl Inequality {
    /// Exact `lhs >= rhs` between valuation exponents.
    pub fn ge(lhs: &ValuationExponent, rhs: &ValuationExponent) -> Self {
        let margin = match (lhs, rhs) {
            (ValuationExponent::Finite(a), ValuationExponent::Finite(b)) => format_rational(&(a - b)),
            (ValuationExponent::Infinity, ValuationExponent::Finite(_)) => "inf".into(),
            (ValuationExponent::Finite(_), ValuationExponent::Infinity) => "-inf".into(),
            _ => "undefined".into(),
        };
        Inequality { lhs: lhs.to_record(), relation: ">=".into(), rhs: rhs.to_record(), margin, holds: lhs >= rhs }
    }

    /// `lhs <= rhs` between enclosures, up to the pinned tolerance.
    pub fn le(lhs: &Interval, rhs: &Interval) -> Self {
        let m = rhs.sub(lhs);
        Inequality {
            lhs: interval_string(lhs),
            relation: "<=".into(),
            rhs: interval_string(rhs),
            margin: m.to_decimal_pair(30).0,
            holds: le_tol(lhs, rhs),
        }
    }

    /// Strict `lhs > rhs` between enclosures, decided only when certain.
    pub fn gt_certain(lhs: &Interval, rhs: &Interval) -> Self {
        let m = lhs.sub(rhs);
        Inequality {
            lhs: interval_string(lhs),
            relation: ">".into(),
            rhs: interval_string(rhs),
            margin: m.to_decimal_pair(30).0,
            holds: rhs.certainly_lt(lhs),
        }
    }
}

pub(crate) fn interval_string(i: &Interval) -> String {
    let (lo, hi) = i.to_decimal_pair(30);
    format!("[{lo}, {hi}]")
}
