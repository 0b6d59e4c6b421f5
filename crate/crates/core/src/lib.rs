//! Exact machinery for lower bounds of linear forms in p-adic logarithms on
//! commutative algebraic groups, at desk scale.
//!
//! - [`padic`]: finite-precision Q_p arithmetic, `log_p`, `exp_p`, Hensel lifting.
//! - [`series`]: truncated p-adic power series, Gauss norms, Newton polygons,
//!   zero counting and Schwarz-lemma bound calculators.
//! - [`numfield`]: monogenic number fields, places, heights, Liouville and
//!   denominator checks, a Siegel-lemma solver.
//! - [`groups`]: group models (tori), exponential series, derivative
//!   polynomials, vanishing orders, semistability.
//! - [`pipeline`]: parameter selection, auxiliary polynomial, extrapolation,
//!   lower bound, final bound evaluator and the torus verifier.

pub mod arith;
pub mod error;
pub mod groups;
pub mod interval;
pub mod lattice;
pub mod mpoly;
pub mod numfield;
pub mod padic;
pub mod pipeline;
pub mod series;
pub mod upoly;

pub use error::{Error, Result};
