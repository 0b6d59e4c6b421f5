use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{nu_reduction, parse_exact, AuditConstants, NuReduction, ToyParameters};
use crate::arith::{ceil_rat, lcm_all, pow_int, rat, Int, Rat};
use crate::error::{Error, Result};
use crate::groups::{GroupModel, Hyperplane};
use crate::interval::{ln_int, Interval, DEFAULT_BITS};
use crate::numfield::{heights_vector, height, le_tol, place_valuation, AlgebraicNumber, Field, NumberField, Place};
use crate::padic::{exp_p, hensel_lift, log_p, PadicNumber, ValuationExponent};

/// Images in `Q_p` through a finite place of residue degree 1 and
/// ramification index 1: `theta` goes to a Hensel lift of a simple root of
/// the defining polynomial modulo `p`.
#[derive(Clone, Debug)]
pub struct PadicEmbedding {
    p: u64,
    precision: u32,
    theta_powers: Vec<PadicNumber>,
    place: Place,
}

impl PadicEmbedding {
    pub fn new(field: &Field, p: u64, precision: u32, place_index: usize) -> Result<PadicEmbedding> {
        let split: Vec<Place> = field.places_above(p)?.into_iter().filter(|v| v.e == 1 && v.f == 1).collect();
        let place = split.get(place_index).cloned().ok_or_else(|| {
            Error::UnsupportedField(format!(
                "no unramified place of residue degree 1 with index {place_index} above {p} ({} available)",
                split.len()
            ))
        })?;
        // residue factor x + c0, root -c0
        let root = -&place.residue_factor[0];
        let theta = hensel_lift(field.min_poly(), p, &root, precision).map_err(|e| match e {
            Error::NotSimpleRoot => Error::UnsupportedField("residue root is not simple".into()),
            other => other,
        })?;
        let mut theta_powers = vec![PadicNumber::from_int(1, p, precision as i64)];
        for _ in 1..field.degree() {
            let next = theta_powers.last().unwrap().mul(&theta);
            theta_powers.push(next);
        }
        Ok(PadicEmbedding { p, precision, theta_powers, place })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn place(&self) -> &Place {
        &self.place
    }

    pub fn embed(&self, x: &AlgebraicNumber) -> PadicNumber {
        if x.is_zero() {
            return PadicNumber::exact_zero(self.p);
        }
        let mut acc = PadicNumber::exact_zero(self.p);
        for (c, t) in x.coords().iter().zip(&self.theta_powers) {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&t.mul(&PadicNumber::from_rational(c, self.p, self.precision as i64)));
        }
        acc
    }

    /// Exact valuation at the place (equal to `v_p` of the image).
    pub fn valuation(&self, x: &AlgebraicNumber) -> Result<ValuationExponent> {
        Ok(match place_valuation(x, &self.place)? {
            None => ValuationExponent::Infinity,
            Some(v) => ValuationExponent::from_int(v),
        })
    }
}

/// An instance of the problem for a torus model: `beta` (denominators
/// cleared into `O_K`), the torus point `gamma = Exp(u)` and `u` itself in
/// `Q_p^n`.
#[derive(Clone, Debug)]
pub struct ProofInstance {
    pub model: GroupModel,
    /// `beta` as given.
    pub beta: Vec<AlgebraicNumber>,
    /// Least common multiple of the denominators of `beta`.
    pub beta_den: Int,
    /// The form with `beta_den * beta`.
    pub hyperplane: Hyperplane,
    /// Torus coordinates of `Exp(u)` (after the `nu` shift).
    pub gamma: Vec<AlgebraicNumber>,
    /// Projective coordinates of `gamma` with `X_0 = 1`.
    pub gamma_point: Vec<AlgebraicNumber>,
    pub p: u64,
    pub embedding: PadicEmbedding,
    /// `u_i = delta_L log_p(gamma_i)`.
    pub u: Vec<PadicNumber>,
    /// `l(u)` for the cleared form.
    pub l_u: PadicNumber,
    pub nu: NuReduction,
    pub big_b: Int,
    pub big_h: Int,
    pub b: Interval,
    pub h: Interval,
    /// `exp_p(u_i / delta_L)` equals the image of `gamma_i` at working precision.
    pub consistent: bool,
}

/// Least integer `B >= 3` with `x <= log B` up to the pinned tolerance.
fn ceil_exp_at_least_3(x: &Interval) -> Int {
    let e = x.exp(DEFAULT_BITS);
    let k = ceil_rat(&e.lo).max(BigInt::from(3));
    if le_tol(x, &ln_int(&k, DEFAULT_BITS)) {
        k
    } else {
        k + 1
    }
}

impl ProofInstance {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        model: GroupModel,
        beta: Vec<AlgebraicNumber>,
        gamma: Vec<AlgebraicNumber>,
        p: u64,
        precision: u32,
        place_index: usize,
        big_b: Option<Int>,
        big_h: Option<Int>,
    ) -> Result<ProofInstance> {
        if !model.is_torus() {
            return Err(Error::Precondition("instances need a torus model".into()));
        }
        let n = model.n();
        if beta.len() != n || gamma.len() != n {
            return Err(Error::Precondition(format!("beta and gamma need {n} entries")));
        }
        let field = model.field().clone();
        if beta.iter().chain(&gamma).any(|x| !x.field().same_as(&field)) {
            return Err(Error::Precondition("beta and gamma must lie in the model's field".into()));
        }
        if precision < 8 {
            return Err(Error::BadParameters("precision must be at least 8 digits".into()));
        }
        let beta_den = lcm_all(beta.iter().map(|b| b.denominator()).collect::<Vec<_>>().iter());
        let dq = Rat::from_integer(beta_den.clone());
        let hyperplane = Hyperplane::new(beta.iter().map(|b| b.scale(&dq)).collect())?;
        let embedding = PadicEmbedding::new(&field, p, precision, place_index)?;
        let one = AlgebraicNumber::one(&field);
        let rp = rat(1, p as i64 - 1);
        let delta_l = Rat::from_integer(model.delta_l().clone());
        let mut gamma = gamma;
        let mut u = Vec::with_capacity(n);
        for g in &gamma {
            if g.is_zero() {
                return Err(Error::Precondition("torus coordinates must be nonzero".into()));
            }
            let vg = embedding.valuation(&g.sub(&one))?;
            if vg <= ValuationExponent::Finite(rp.clone()) {
                return Err(Error::Precondition(format!(
                    "v(gamma_i - 1) = {} must exceed 1/(p-1): gamma_i is not Exp of a point in the disk",
                    vg.to_record()
                )));
            }
            u.push(log_p(&embedding.embed(g))?.mul_rational(&delta_l));
        }
        let nu = nu_reduction(&u, p);
        if nu.nu > 0 {
            let k = pow_int(&BigInt::from(p), nu.nu as u64);
            let k = crate::arith::to_u64(&k).ok_or_else(|| Error::BadParameters("nu too large".into()))?;
            gamma = gamma.iter().map(|g| g.pow(k)).collect();
            u = nu.u_prime.clone();
        }
        let e_l = Rat::from_integer(BigInt::from(model.e_l(p)));
        for x in &u {
            if x.valuation_lower_bound() <= ValuationExponent::Finite(&e_l + &rp) {
                return Err(Error::Precondition("u lies outside the certified convergence disk".into()));
            }
        }
        let mut consistent = true;
        for (x, g) in u.iter().zip(&gamma) {
            let e = exp_p(&x.mul_rational(&delta_l.recip()))?;
            consistent &= e.sub(&embedding.embed(g)).is_zero();
        }
        let gamma_point = model.torus_point(&gamma)?;
        let l_u = hyperplane
            .beta()
            .iter()
            .zip(&u)
            .fold(PadicNumber::exact_zero(p), |acc, (b, x)| acc.add(&embedding.embed(b).mul(x)));

        let mut h_beta = Interval::zero();
        for b in hyperplane.beta() {
            h_beta = h_beta.max(&height(b)?);
        }
        let d = Rat::from_integer(BigInt::from(field.degree()));
        let h_gamma = heights_vector(&gamma_point)?.h_max.scale(&d.recip());
        let big_b = match big_b {
            Some(bb) => {
                check_height_bound("B", &bb, &h_beta)?;
                bb
            }
            None => ceil_exp_at_least_3(&h_beta),
        };
        let big_h = match big_h {
            Some(hh) => {
                check_height_bound("H", &hh, &h_gamma)?;
                hh
            }
            None => ceil_exp_at_least_3(&h_gamma),
        };
        let b = ln_int(&big_b, DEFAULT_BITS);
        let h = ln_int(&big_h, DEFAULT_BITS);
        Ok(ProofInstance {
            model,
            beta,
            beta_den,
            hyperplane,
            gamma,
            gamma_point,
            p,
            embedding,
            u,
            l_u,
            nu,
            big_b,
            big_h,
            b,
            h,
            consistent,
        })
    }

    pub fn field(&self) -> &Field {
        self.model.field()
    }

    pub fn n(&self) -> usize {
        self.model.n()
    }

    pub fn degree(&self) -> usize {
        self.field().degree()
    }

    pub fn e_l(&self) -> u64 {
        self.model.e_l(self.p)
    }

    pub fn v_u(&self) -> ValuationExponent {
        self.u.iter().map(|x| x.valuation_lower_bound()).min().unwrap_or(ValuationExponent::Infinity)
    }

    pub fn v_l_u(&self) -> ValuationExponent {
        self.l_u.valuation_lower_bound()
    }
}

fn check_height_bound(name: &str, value: &Int, h: &Interval) -> Result<()> {
    if value < &BigInt::from(3) {
        return Err(Error::BadParameters(format!("{name} must be at least 3")));
    }
    if !le_tol(h, &ln_int(value, DEFAULT_BITS)) {
        return Err(Error::BadParameters(format!("{name} = {value} is below the height it must bound")));
    }
    Ok(())
}

/// An integer or a rational written `num/den`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Str(String),
}

impl Scalar {
    pub fn to_rat(&self) -> Result<Rat> {
        match self {
            Scalar::Int(n) => Ok(rat(*n, 1)),
            Scalar::Str(s) => parse_exact(s),
        }
    }

    fn to_int(&self) -> Result<Int> {
        let q = self.to_rat()?;
        if !q.is_integer() {
            return Err(Error::Parse(format!("expected an integer, got {q}")));
        }
        Ok(q.to_integer())
    }
}

/// A field element: a rational, or its coordinates in the power basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementSpec {
    Scalar(Scalar),
    Coords(Vec<Scalar>),
}

impl ElementSpec {
    pub fn to_element(&self, field: &Field) -> Result<AlgebraicNumber> {
        match self {
            ElementSpec::Scalar(s) => Ok(AlgebraicNumber::from_rat(field, s.to_rat()?)),
            ElementSpec::Coords(cs) => {
                if cs.len() > field.degree() {
                    return Err(Error::Parse(format!("{} coordinates for a field of degree {}", cs.len(), field.degree())));
                }
                let mut v: Vec<Rat> = cs.iter().map(|c| c.to_rat()).collect::<Result<_>>()?;
                v.resize(field.degree(), Rat::zero());
                Ok(AlgebraicNumber::new(field, v))
            }
        }
    }
}

/// Desk-scale sizes and constants; every entry is optional.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub s0: Option<u32>,
    pub t: Option<u32>,
    pub d: Option<u32>,
    pub d0: Option<u32>,
    pub s: Option<u32>,
    pub c: Option<Scalar>,
    pub c0: Option<Scalar>,
    pub c2: Option<Scalar>,
    pub c3: Option<Scalar>,
    pub c4: Option<Scalar>,
    pub c5: Option<Scalar>,
    pub c6: Option<Scalar>,
    pub siegel_budget: Option<usize>,
}

fn default_precision() -> u32 {
    40
}

/// The instance file. TOML keys: `model` (group preset), `field` (field
/// preset, default `Q`) or `min_poly` (integer coefficients, constant term
/// first), `beta`, `gamma` (elements as rationals or coordinate arrays),
/// `p`, `precision` (p-adic digits), optional `place`, `B`, `H` and a
/// `[params]` table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub model: String,
    #[serde(default)]
    pub field: Option<String>,
    #[serde(default)]
    pub min_poly: Option<Vec<Scalar>>,
    pub beta: Vec<ElementSpec>,
    pub gamma: Vec<ElementSpec>,
    pub p: u64,
    #[serde(default = "default_precision")]
    pub precision: u32,
    #[serde(default)]
    pub place: usize,
    #[serde(rename = "B", default)]
    pub big_b: Option<Scalar>,
    #[serde(rename = "H", default)]
    pub big_h: Option<Scalar>,
    #[serde(default)]
    pub params: ParamsSection,
}

impl InstanceFile {
    pub fn from_toml_str(s: &str) -> Result<InstanceFile> {
        toml::from_str(s).map_err(|e| Error::Parse(e.message().to_string()))
    }

    pub fn field(&self) -> Result<Field> {
        match (&self.field, &self.min_poly) {
            (Some(_), Some(_)) => Err(Error::Parse("give either field or min_poly, not both".into())),
            (_, Some(m)) => NumberField::new(m.iter().map(|c| c.to_int()).collect::<Result<_>>()?),
            (Some(name), None) => NumberField::preset(name),
            (None, None) => Ok(NumberField::rationals()),
        }
    }

    /// Builds the instance; `precision` overrides the file's digit count.
    pub fn build(&self, precision: Option<u32>) -> Result<ProofInstance> {
        let field = self.field()?;
        let model = GroupModel::preset(&self.model, &field)?;
        let beta = self.beta.iter().map(|b| b.to_element(&field)).collect::<Result<Vec<_>>>()?;
        let gamma = self.gamma.iter().map(|g| g.to_element(&field)).collect::<Result<Vec<_>>>()?;
        let big_b = self.big_b.as_ref().map(|s| s.to_int()).transpose()?;
        let big_h = self.big_h.as_ref().map(|s| s.to_int()).transpose()?;
        ProofInstance::new(model, beta, gamma, self.p, precision.unwrap_or(self.precision), self.place, big_b, big_h)
    }

    /// Sizes default to `S0 = 2, T = 1, D = 2, D0 = 2, S = S0 + 1`.
    pub fn toy_parameters(&self) -> ToyParameters {
        let p = &self.params;
        let s0 = p.s0.unwrap_or(2);
        ToyParameters {
            s0,
            t: p.t.unwrap_or(1),
            d: p.d.unwrap_or(2),
            d0: p.d0.unwrap_or(2),
            s: p.s.unwrap_or(s0 + 1),
        }
    }

    pub fn constants(&self) -> Result<AuditConstants> {
        let mut k = AuditConstants::default();
        let p = &self.params;
        let set = |slot: &mut Rat, v: &Option<Scalar>| -> Result<()> {
            if let Some(s) = v {
                let q = s.to_rat()?;
                if !q.is_positive() {
                    return Err(Error::BadParameters("constants must be positive".into()));
                }
                *slot = q;
            }
            Ok(())
        };
        set(&mut k.c, &p.c)?;
        set(&mut k.c0, &p.c0)?;
        set(&mut k.c2, &p.c2)?;
        set(&mut k.c3, &p.c3)?;
        set(&mut k.c4, &p.c4)?;
        set(&mut k.c5, &p.c5)?;
        set(&mut k.c6, &p.c6)?;
        if let Some(b) = p.siegel_budget {
            k.siegel_budget = b;
        }
        Ok(k)
    }
}
