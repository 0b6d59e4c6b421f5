use std::path::Path;

use linform::arith::{format_rational, parse_rational, pow_int, rat, Int, Rat};
use linform::groups::{
    addition_compatibility_check, exp_series as solve_exp_series, integrability_check, is_semistable_gm, GroupModel,
    TermRecord,
};
use linform::interval::{ln_int, Interval, DEFAULT_BITS};
use linform::numfield::{
    height, heights_vector, le_tol, product_formula_check, siegel_solve_best, AlgebraicNumber, Field, HeightRecord,
    NumberField,
};
use linform::padic::ValuationExponent;
use linform::pipeline::{
    choose_parameters, run_pipeline, theorem_bound, theorem_exponent, verify_gm as verify_instance, AuditConstants,
    ElementSpec, InstanceFile, IntervalRecord, RealExpr,
};
use linform::series::schwarz_bound;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::{CliError, FieldArgs, Outcome};

type CliResult = Result<Outcome, CliError>;

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn build_field(args: &FieldArgs) -> Result<Field, CliError> {
    match &args.min_poly {
        Some(cs) => Ok(NumberField::new(cs.iter().map(|&c| Int::from(c)).collect())?),
        None => Ok(NumberField::preset(&args.field)?),
    }
}

/// `num/den` for a rational, or comma-separated power-basis coordinates.
fn parse_element(field: &Field, s: &str) -> Result<AlgebraicNumber, CliError> {
    let coords: Vec<Rat> = s.split(',').map(parse_rational).collect::<linform::Result<_>>()?;
    if coords.len() > field.degree() {
        return Err(CliError::Input(format!("{s:?} has more coordinates than the field degree {}", field.degree())));
    }
    let mut coords = coords;
    coords.resize(field.degree(), rat(0, 1));
    Ok(AlgebraicNumber::new(field, coords))
}

fn element_record(x: &AlgebraicNumber) -> Value {
    match x.as_rational() {
        Some(q) => json!(format_rational(&q)),
        None => json!(x.coords().iter().map(format_rational).collect::<Vec<_>>()),
    }
}

fn random_element(field: &Field, rng: &mut ChaCha8Rng, nonzero: bool) -> AlgebraicNumber {
    loop {
        let coords: Vec<Rat> =
            (0..field.degree()).map(|_| rat(rng.gen_range(-30..=30), rng.gen_range(1..=12))).collect();
        let x = AlgebraicNumber::new(field, coords);
        if !nonzero || !x.is_zero() {
            return x;
        }
    }
}

fn elements(field: &Field, xs: &[String], random: Option<usize>, seed: u64) -> Result<Vec<AlgebraicNumber>, CliError> {
    match random {
        Some(_) if !xs.is_empty() => Err(CliError::Input("give either --x values or --random, not both".into())),
        Some(0) => Err(CliError::Input("--random needs a positive count".into())),
        Some(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..k).map(|_| random_element(field, &mut rng, true)).collect())
        }
        None if xs.is_empty() => Err(CliError::Input("no elements given".into())),
        None => xs.iter().map(|s| parse_element(field, s)).collect(),
    }
}

/// A positive real. Decimals are read as rounded to their last digit, so
/// `1.0986` stands for the interval `[1.09855, 1.09865]`.
fn parse_real(s: &str) -> Result<RealExpr, CliError> {
    let t = s.trim();
    if let Some((_, frac)) = t.split_once('.') {
        if !t.contains('(') {
            let x = linform::pipeline::parse_exact(t)?;
            let half = Rat::new(Int::from(1), Int::from(2) * pow_int(&Int::from(10), frac.len() as u64));
            return Ok(RealExpr::Enclosure(Interval::new(&x - &half, &x + &half)));
        }
    }
    Ok(RealExpr::parse(t)?)
}

pub fn heights(args: &FieldArgs, xs: &[String], random: Option<usize>, seed: u64) -> CliResult {
    let field = build_field(args)?;
    let xs = elements(&field, xs, random, seed)?;
    let v = heights_vector(&xs)?;
    // h_max <= h_L2 <= h_max + (d/2) log r for r entries
    let spread = ln_int(&Int::from(xs.len() as u64), DEFAULT_BITS).scale(&rat(field.degree() as i64, 2));
    let lower_ok = le_tol(&v.h_max, &v.h_l2);
    let upper_ok = le_tol(&v.h_l2, &v.h_max.add(&spread));
    let entries: Vec<Value> = xs
        .iter()
        .map(|x| Ok(json!({ "element": element_record(x), "height": HeightRecord::from(&height(x)?) })))
        .collect::<linform::Result<_>>()?;
    let pass = lower_ok && upper_ok;
    let report = json!({
        "field": field.poly_string(),
        "entries": entries,
        "vector": {
            "h_max": HeightRecord::from(&v.h_max),
            "h_l2": HeightRecord::from(&v.h_l2),
            "h_plus": HeightRecord::from(&v.h_plus),
            "h_l2_plus": HeightRecord::from(&v.h_l2_plus),
        },
        "chain": { "max_le_l2": lower_ok, "l2_le_max_plus_spread": upper_ok },
    });
    Ok(Outcome { report, pass, summary: format!("{} entries", xs.len()) })
}

pub fn product_formula(args: &FieldArgs, xs: &[String], random: Option<usize>, seed: u64) -> CliResult {
    let field = build_field(args)?;
    let xs = elements(&field, xs, random, seed)?;
    let mut rows = Vec::with_capacity(xs.len());
    let mut failures = 0;
    for x in &xs {
        let v = product_formula_check(x)?;
        failures += usize::from(!v.pass);
        rows.push(json!({
            "element": element_record(x),
            "sum": IntervalRecord::from(&v.sum),
            "verdict": to_value(&v),
        }));
    }
    let report = json!({ "field": field.poly_string(), "checks": rows, "failures": failures });
    Ok(Outcome { report, pass: failures == 0, summary: format!("{failures} of {} fail", xs.len()) })
}

#[allow(clippy::too_many_arguments)]
pub fn schwarz(s: &str, t: &str, k: u64, l: u64, delta: &str, mu: &str, normt: &str, p: u64) -> CliResult {
    let s_exp = parse_rational(s)?;
    let t_exp = parse_rational(t)?;
    let delta_exp = parse_rational(delta)?;
    let mu_exp = ValuationExponent::parse(mu)?;
    let norm_exp = ValuationExponent::parse(normt)?;
    let e = schwarz_bound(&s_exp, &t_exp, k, l, &delta_exp, &mu_exp, &norm_exp, p)?;
    let report = json!({
        "inputs": {
            "s": format_rational(&s_exp), "t": format_rational(&t_exp), "k": k, "l": l,
            "delta": format_rational(&delta_exp), "mu": mu_exp.to_record(), "normt": norm_exp.to_record(), "p": p,
        },
        "exponent": e.to_record(),
    });
    Ok(Outcome { report, pass: true, summary: format!("v(f)_s >= {}", e.to_record()) })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    #[serde(default)]
    field: Option<String>,
    #[serde(default)]
    min_poly: Option<Vec<i64>>,
    forms: Vec<Vec<ElementSpec>>,
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_system(path: &Path) -> Result<(Field, Vec<Vec<AlgebraicNumber>>), CliError> {
    let file: SystemFile = toml::from_str(&read_text(path)?).map_err(|e| CliError::Input(e.message().to_string()))?;
    let args = match (file.field, file.min_poly) {
        (Some(_), Some(_)) => return Err(CliError::Input("give either field or min_poly, not both".into())),
        (f, m) => FieldArgs { field: f.unwrap_or_else(|| "Q".into()), min_poly: m },
    };
    let field = build_field(&args)?;
    let forms = file
        .forms
        .iter()
        .map(|row| row.iter().map(|e| e.to_element(&field)).collect::<linform::Result<Vec<_>>>())
        .collect::<linform::Result<Vec<_>>>()?;
    Ok((field, forms))
}

pub fn siegel(file: Option<&Path>, m: usize, n: usize, budget: Option<usize>, seed: u64) -> CliResult {
    let (field, forms) = match file {
        Some(path) => load_system(path)?,
        None => {
            if m == 0 || m >= n {
                return Err(CliError::Input("need 0 < m < n".into()));
            }
            let field = NumberField::rationals();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let forms = (0..m)
                .map(|_| (0..n).map(|_| AlgebraicNumber::from_int(&field, rng.gen_range(-9..=9))).collect())
                .collect();
            (field, forms)
        }
    };
    let unknowns = forms.first().map_or(0, Vec::len);
    if forms.is_empty() || forms.iter().any(|r| r.len() != unknowns) || forms.len() >= unknowns {
        return Err(CliError::Input("need M rows of equal length N with M < N".into()));
    }
    let budget = budget.unwrap_or(AuditConstants::default().siegel_budget);
    let sol = siegel_solve_best(&forms, unknowns, budget)?;
    let residual_zero = forms.iter().all(|row| {
        row.iter().zip(&sol.x).fold(AlgebraicNumber::zero(&field), |acc, (a, x)| acc.add(&a.mul(x))).is_zero()
    });
    let nonzero = sol.x.iter().any(|x| !x.is_zero());
    let pass = residual_zero && nonzero && sol.within_bound;
    let report = json!({
        "field": field.poly_string(),
        "forms": forms.iter().map(|r| r.iter().map(element_record).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "witness": sol.x.iter().map(element_record).collect::<Vec<_>>(),
        "residual_zero": residual_zero,
        "nonzero": nonzero,
        "h_plus": HeightRecord::from(&sol.h_plus),
        "bound": HeightRecord::from(&sol.bound),
        "within_bound": sol.within_bound,
        "exhaustive": sol.exhaustive,
    });
    Ok(Outcome { report, pass, summary: format!("{} x {} system", forms.len(), unknowns) })
}

pub fn exp_series(args: &FieldArgs, model: &str, order: u32) -> CliResult {
    let field = build_field(args)?;
    let model = GroupModel::preset(model, &field)?;
    let series = solve_exp_series(&model, order)?;
    let components: Vec<Vec<TermRecord>> = series
        .components()
        .iter()
        .map(|f| {
            f.terms()
                .iter()
                .map(|(m, c)| TermRecord { exponents: m.clone(), coeff: c.coords().iter().map(format_rational).collect() })
                .collect()
        })
        .collect();
    let integrability = integrability_check(&model, &series);
    let addition = addition_compatibility_check(&model, &series);
    let pass = integrability.pass && addition;
    let report = json!({
        "model": model.name(),
        "field": field.poly_string(),
        "order": order,
        "components": components,
        "integrability": to_value(&integrability),
        "addition_compatible": addition,
    });
    Ok(Outcome { report, pass, summary: format!("{} through degree {order}", model.name()) })
}

pub fn semistable(args: &FieldArgs, beta: &[String]) -> CliResult {
    let field = build_field(args)?;
    let beta: Vec<AlgebraicNumber> = beta.iter().map(|s| parse_element(&field, s)).collect::<Result<_, _>>()?;
    let v = is_semistable_gm(&beta)?;
    let summary = if v.semistable { "semistable".to_string() } else { "not semistable".to_string() };
    let report = json!({
        "field": field.poly_string(),
        "beta": beta.iter().map(element_record).collect::<Vec<_>>(),
        "verdict": to_value(&v),
    });
    Ok(Outcome { report, pass: true, summary })
}

pub fn params(c: &str, omega: &str, n: usize, b: &str, h: &str, c2: &str) -> CliResult {
    let c = parse_rational(c)?;
    let c2 = parse_rational(c2)?;
    let (omega, b, h) = (parse_real(omega)?, parse_real(b)?, parse_real(h)?);
    let p = choose_parameters(&c, &omega, n, &b, &h, &c2)?;
    let summary = format!("S0 = {}, D0 = {}, S = {}, D = {}, T = {}", p.s0, p.d0, p.s, p.d, p.t);
    let report = json!({
        "inputs": { "omega": omega.to_record(), "b": b.to_record(), "h": h.to_record() },
        "parameters": to_value(&p),
    });
    Ok(Outcome { report, pass: true, summary })
}

pub fn bound(omega: &str, n: usize, b: &str, h: &str, p: u64, c0: &str, nu: Option<u32>) -> CliResult {
    let c0 = parse_rational(c0)?;
    let (omega_e, b_e, h_e) = (parse_real(omega)?, parse_real(b)?, parse_real(h)?);
    let (om, bi, hi) = (omega_e.enclose(DEFAULT_BITS), b_e.enclose(DEFAULT_BITS), h_e.enclose(DEFAULT_BITS));
    let exponent = theorem_exponent(&om, n, &bi, &hi, p, &c0, nu)?;
    let value = theorem_bound(&om, n, &bi, &hi, p, &c0, nu)?;
    let report = json!({
        "inputs": {
            "omega": omega_e.to_record(), "n": n, "b": b_e.to_record(), "h": h_e.to_record(),
            "p": p, "c0": format_rational(&c0), "nu": nu,
        },
        "valuation_exponent": IntervalRecord::from(&exponent),
        "log_abs_bound": IntervalRecord::from(&value),
    });
    let summary = format!("log|l(u)|_p >= {}", value.to_decimal_pair(12).0);
    Ok(Outcome { report, pass: true, summary })
}

fn load_instance(path: &Path) -> Result<InstanceFile, CliError> {
    Ok(InstanceFile::from_toml_str(&read_text(path)?)?)
}

pub fn verify_gm(path: &Path, precision: Option<u32>) -> CliResult {
    let file = load_instance(path)?;
    let inst = file.build(precision)?;
    let consts = file.constants()?;
    let r = verify_instance(&inst, &consts.c0)?;
    let pass = r.passed();
    let summary = format!("v(l(u)) = {}, outcome {:?}", r.v_l_u, r.outcome);
    Ok(Outcome { report: to_value(&r), pass, summary })
}

pub fn pipeline(path: &Path, precision: Option<u32>) -> CliResult {
    let file = load_instance(path)?;
    let inst = file.build(precision)?;
    let consts = file.constants()?;
    let r = run_pipeline(&inst, &file.toy_parameters(), &consts)?;
    let pass = r.pass;
    Ok(Outcome { report: to_value(&r), pass, summary: format!("instance {}", path.display()) })
}
