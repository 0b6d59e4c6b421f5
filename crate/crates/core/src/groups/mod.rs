//! Group models with a projective embedding, addition formulas and the
//! polynomials expressing invariant derivatives of the affine coordinates.
//!
//! The shipped models are powers of the multiplicative group. Each factor is
//! charted by `g -> (1 : g - 1)` and the factors are combined by the Segre
//! embedding, so coordinate `X_S` (indexed by a bitmask `S` of factors) is
//! `prod_{i in S} (g_i - 1)` and `X_0 = X_{empty} = 1`.

mod exp;
mod vanishing;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{format_rational, vp_int, Int, Rat};
use crate::error::{Error, Result};
use crate::interval::{ln_int, Interval, DEFAULT_BITS};
use crate::mpoly::{monomials_of_degree, MPoly, Monomial};
use crate::numfield::{heights_vector, AlgebraicNumber, Field, HeightRecord};

pub use exp::{
    addition_compatibility_check, denominator_power_check, derivative_height_bound, derivative_polynomial,
    derivative_polynomial_audit, dual_route_check, exp_series, integrability_check, series_derivative,
    sup_norm_check, DenominatorPowerVerdict, DerivativeAudit, ExpSeries, IntegrabilityVerdict, SupNormPoint,
    SupNormVerdict,
};
pub use vanishing::{
    is_semistable_gm, ord_along, tau_index, Hyperplane, SemistabilityVerdict, VanishingOrder,
};

#[derive(Clone, Debug)]
pub struct GroupModel {
    name: String,
    n: usize,
    big_n: usize,
    field: Field,
    /// `deriv_polys[i][j]` is `P_{i+1, L(j+1)}`, a polynomial in `N` variables.
    deriv_polys: Vec<Vec<MPoly>>,
    /// `E_0..E_N` in the `2(N+1)` variables `X_0..X_N, Y_0..Y_N`.
    addition: Vec<MPoly>,
    addition_degree: u32,
    delta_l: Int,
    c_deg: u32,
    c_height: Interval,
    /// Built by the Segre construction on a torus.
    segre: bool,
}

impl GroupModel {
    /// A model from raw data. Checks shapes and homogeneity only; the
    /// differential system is checked when the exponential series is solved.
    pub fn from_parts(
        name: &str,
        field: &Field,
        n: usize,
        deriv_polys: Vec<Vec<MPoly>>,
        addition: Vec<MPoly>,
        delta_l: Int,
    ) -> Result<GroupModel> {
        let big_n = deriv_polys.len();
        if n == 0 || big_n == 0 {
            return Err(Error::Precondition("empty model".into()));
        }
        if deriv_polys.iter().any(|row| row.len() != n || row.iter().any(|p| p.nvars() != big_n)) {
            return Err(Error::Precondition("derivative data has the wrong shape".into()));
        }
        if addition.len() != big_n + 1 || addition.iter().any(|e| e.nvars() != 2 * (big_n + 1)) {
            return Err(Error::Precondition("addition formula has the wrong shape".into()));
        }
        if delta_l <= Int::zero() {
            return Err(Error::Precondition("delta_L must be positive".into()));
        }
        let mut addition_degree = None;
        for e in &addition {
            for m in e.terms().keys() {
                let dx: u32 = m[..=big_n].iter().sum();
                let dy: u32 = m[big_n + 1..].iter().sum();
                if dx != dy || addition_degree.is_some_and(|b| b != dx) {
                    return Err(Error::Precondition("addition formula is not bihomogeneous".into()));
                }
                addition_degree = Some(dx);
            }
        }
        let c_deg = deriv_polys.iter().flatten().filter_map(|p| p.total_degree()).max().unwrap_or(0);
        let mut c_height = Interval::zero();
        let d = Rat::from_integer(BigInt::from(field.degree()));
        for p in deriv_polys.iter().flatten() {
            if p.is_zero() {
                continue;
            }
            let h = heights_vector(&p.coeff_vector())?.h_max.scale(&d.recip());
            c_height = c_height.max(&h);
        }
        Ok(GroupModel {
            name: name.to_string(),
            n,
            big_n,
            field: field.clone(),
            deriv_polys,
            addition,
            addition_degree: addition_degree.unwrap_or(0),
            delta_l,
            c_deg,
            c_height,
            segre: false,
        })
    }

    /// `G_m^n` over `field` in the Segre model with `L(j) = g_j d/dg_j`.
    pub fn gm_power(n: usize, field: &Field) -> Result<GroupModel> {
        Self::gm_power_scaled(n, field, 1)
    }

    /// As [`GroupModel::gm_power`] with every `L(j)` divided by `delta`, so the
    /// denominator of the basis is `delta`.
    pub fn gm_power_scaled(n: usize, field: &Field, delta: u32) -> Result<GroupModel> {
        if n == 0 || n > 6 {
            return Err(Error::Precondition("torus dimension must be between 1 and 6".into()));
        }
        if delta == 0 {
            return Err(Error::Precondition("scaling denominator must be positive".into()));
        }
        let big_n = (1usize << n) - 1;
        let inv = AlgebraicNumber::from_rat(field, Rat::new(BigInt::one(), BigInt::from(delta)));
        let mut deriv = vec![vec![MPoly::zero(field, big_n); n]; big_n];
        for (s, row) in deriv.iter_mut().enumerate().map(|(k, r)| (k + 1, r)) {
            for (j, slot) in row.iter_mut().enumerate() {
                if s & (1 << j) == 0 {
                    continue;
                }
                // g_j d/dg_j of prod_{i in S}(g_i - 1) is (xi_j + 1) xi_{S - j} = xi_S + xi_{S - j}
                let rest = s & !(1 << j);
                let mut p = MPoly::var(field, big_n, s - 1);
                p = if rest == 0 { p.add(&MPoly::one(field, big_n)) } else { p.add(&MPoly::var(field, big_n, rest - 1)) };
                *slot = p.scale(&inv);
            }
        }
        // (g h - 1) = (g - 1)(h - 1) + (g - 1) + (h - 1) per factor, expanded over S
        let nv = 2 * (big_n + 1);
        let mut addition = Vec::with_capacity(big_n + 1);
        for s in 0..=big_n {
            let mut e = MPoly::zero(field, nv);
            for a in 0..=big_n {
                if a & !s != 0 {
                    continue;
                }
                for b in 0..=big_n {
                    if b & !s != 0 || a | b != s {
                        continue;
                    }
                    let mut m = vec![0u32; nv];
                    m[a] += 1;
                    m[big_n + 1 + b] += 1;
                    e.add_term(m, AlgebraicNumber::one(field));
                }
            }
            addition.push(e);
        }
        let name = match (n, delta) {
            (1, 1) => "gm".to_string(),
            (2, 1) => "gm^2".to_string(),
            (_, 1) => format!("gm^n:{n}"),
            (1, _) => format!("gm/{delta}"),
            (2, _) => format!("gm^2/{delta}"),
            _ => format!("gm^n:{n}/{delta}"),
        };
        let mut model = Self::from_parts(&name, field, n, deriv, addition, BigInt::from(delta))?;
        model.segre = true;
        Ok(model)
    }

    /// Presets `gm`, `gm^2`, `gm^n:k`, each optionally followed by `/delta`.
    pub fn preset(name: &str, field: &Field) -> Result<GroupModel> {
        let (base, delta) = match name.split_once('/') {
            Some((b, d)) => (b, d.parse::<u32>().map_err(|_| Error::Parse(format!("bad scaling in {name}")))?),
            None => (name, 1),
        };
        let n = match base {
            "gm" => 1,
            "gm^2" => 2,
            _ => base
                .strip_prefix("gm^n:")
                .and_then(|k| k.parse::<usize>().ok())
                .ok_or_else(|| Error::Parse(format!("unknown group preset {name}")))?,
        };
        Self::gm_power_scaled(n, field, delta)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Ambient projective dimension `N`.
    pub fn big_n(&self) -> usize {
        self.big_n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn deriv_poly(&self, i: usize, j: usize) -> &MPoly {
        &self.deriv_polys[i][j]
    }

    pub fn addition(&self) -> &[MPoly] {
        &self.addition
    }

    /// Bidegree `b_E` of the addition formula.
    pub fn addition_degree(&self) -> u32 {
        self.addition_degree
    }

    pub fn delta_l(&self) -> &Int {
        &self.delta_l
    }

    pub fn c_deg(&self) -> u32 {
        self.c_deg
    }

    /// Largest absolute height of a coefficient vector of the `P_{i,L(j)}`.
    pub fn c_height(&self) -> &Interval {
        &self.c_height
    }

    pub fn is_torus(&self) -> bool {
        self.segre
    }

    /// `v_p(delta_L)`.
    pub fn e_l(&self, p: u64) -> u64 {
        vp_int(&self.delta_l, p)
    }

    /// `max{1, e_L} (c_height + log delta_L + log c_deg)`, with `log 0 = 0`.
    pub fn omega_l_formula(&self, p: u64) -> Interval {
        let mut s = self.c_height.clone();
        if !self.delta_l.is_one() {
            s = s.add(&ln_int(&self.delta_l, DEFAULT_BITS));
        }
        if self.c_deg > 1 {
            s = s.add(&ln_int(&BigInt::from(self.c_deg), DEFAULT_BITS));
        }
        s.scale(&Rat::from_integer(BigInt::from(self.e_l(p).max(1))))
    }

    /// The formula value clamped below by 1, which keeps it positive.
    pub fn omega_l(&self, p: u64) -> Interval {
        self.omega_l_formula(p).max(&Interval::from_int(1))
    }

    pub fn identity(&self) -> Vec<AlgebraicNumber> {
        let mut pt = vec![AlgebraicNumber::zero(&self.field); self.big_n + 1];
        pt[0] = AlgebraicNumber::one(&self.field);
        pt
    }

    /// Projective coordinates of the torus point `(g_1, ..., g_n)`.
    pub fn torus_point(&self, g: &[AlgebraicNumber]) -> Result<Vec<AlgebraicNumber>> {
        if !self.segre {
            return Err(Error::Precondition("torus coordinates need a torus model".into()));
        }
        if g.len() != self.n {
            return Err(Error::Precondition("wrong number of torus coordinates".into()));
        }
        if g.iter().any(|x| x.is_zero()) {
            return Err(Error::Precondition("torus coordinates must be nonzero".into()));
        }
        let one = AlgebraicNumber::one(&self.field);
        Ok((0..=self.big_n)
            .map(|s| {
                (0..self.n).filter(|j| s & (1 << j) != 0).fold(one.clone(), |acc, j| acc.mul(&g[j].sub(&one)))
            })
            .collect())
    }

    /// Torus coordinates of a point with `X_0 != 0`.
    pub fn torus_coords(&self, pt: &[AlgebraicNumber]) -> Result<Vec<AlgebraicNumber>> {
        if !self.segre {
            return Err(Error::Precondition("torus coordinates need a torus model".into()));
        }
        let x0 = &pt[0];
        let one = AlgebraicNumber::one(&self.field);
        (0..self.n).map(|j| Ok(pt[1 << j].div(x0)?.add(&one))).collect()
    }

    /// Group law through the addition formula, normalized to `X_0 = 1`.
    pub fn add_points(&self, a: &[AlgebraicNumber], b: &[AlgebraicNumber]) -> Result<Vec<AlgebraicNumber>> {
        let mut args = a.to_vec();
        args.extend(b.iter().cloned());
        let vals: Vec<AlgebraicNumber> = self.addition.iter().map(|e| e.eval(&args)).collect();
        normalize_point(vals)
    }

    /// `s`-fold sum of a point (the identity for `s = 0`).
    pub fn multiple(&self, pt: &[AlgebraicNumber], s: u64) -> Result<Vec<AlgebraicNumber>> {
        let base = normalize_point(pt.to_vec())?;
        let mut acc = self.identity();
        for _ in 0..s {
            acc = self.add_points(&acc, &base)?;
        }
        Ok(acc)
    }

    /// Degree-`D` monomials in `X_0..X_N` spanning all degree-`D` functions on
    /// the group. For the Segre model these are the chains `S_1 >= ... >= S_D`,
    /// one per exponent vector in `[0, D]^n`; otherwise all monomials.
    pub fn standard_monomials(&self, deg: u32) -> Vec<Monomial> {
        if !self.segre {
            return monomials_of_degree(self.big_n + 1, deg);
        }
        let mut out = Vec::new();
        for m in crate::mpoly::box_monomials(self.n, deg + 1) {
            let mut mono = vec![0u32; self.big_n + 1];
            for k in 1..=deg {
                let s: usize = (0..self.n).filter(|&i| m[i] >= k).map(|i| 1 << i).sum();
                mono[s] += 1;
            }
            out.push(mono);
        }
        out
    }

    pub fn manifest(&self) -> ModelManifest {
        let rec = |p: &MPoly| -> Vec<TermRecord> {
            p.terms()
                .iter()
                .map(|(m, c)| TermRecord { exponents: m.clone(), coeff: c.coords().iter().map(format_rational).collect() })
                .collect()
        };
        ModelManifest {
            name: self.name.clone(),
            n: self.n,
            big_n: self.big_n,
            field: self.field.poly_string(),
            deriv_polys: self.deriv_polys.iter().map(|row| row.iter().map(rec).collect()).collect(),
            addition: self.addition.iter().map(rec).collect(),
            addition_degree: self.addition_degree,
            delta_l: self.delta_l.to_string(),
            c_deg: self.c_deg,
            c_height: HeightRecord::from(&self.c_height),
        }
    }
}

fn normalize_point(vals: Vec<AlgebraicNumber>) -> Result<Vec<AlgebraicNumber>> {
    if vals[0].is_zero() {
        return Err(Error::AdditionFormulaUndefined);
    }
    let inv = vals[0].inv()?;
    Ok(vals.iter().map(|x| x.mul(&inv)).collect())
}

/// One term of a polynomial: exponents and coefficient coordinates in the power basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermRecord {
    pub exponents: Vec<u32>,
    pub coeff: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelManifest {
    pub name: String,
    pub n: usize,
    pub big_n: usize,
    pub field: String,
    pub deriv_polys: Vec<Vec<Vec<TermRecord>>>,
    pub addition: Vec<Vec<TermRecord>>,
    pub addition_degree: u32,
    pub delta_l: String,
    pub c_deg: u32,
    pub c_height: HeightRecord,
}
