//! The acceptance suite: eleven criteria, each printed as one pass/fail line.
//!
//! A criterion listed in `KNOWN_FAILURES` is expected to fail and is still
//! run and printed in full; the test asserts that every other criterion
//! passes and that each known failure still fails, so a fix is noticed.

use std::io::Write;
use std::time::{Duration, Instant};

use linform::arith::{factorial, rat, vp_rat, Int, Rat};
use linform::groups::{
    addition_compatibility_check, derivative_polynomial_audit, dual_route_check, exp_series, integrability_check,
    sup_norm_check, GroupModel,
};
use linform::interval::{ln_int, ln_rat, Interval, DEFAULT_BITS};
use linform::mpoly::MPoly;
use linform::numfield::{
    denominator_check, height, heights_vector, le_tol, liouville_check, product_formula_check,
    product_formula_tolerance, siegel_solve, support_primes, AlgebraicNumber, Field, NumberField, Place,
};
use linform::padic::{PadicNumber, ValuationExponent};
use linform::pipeline::{
    choose_parameters, construct_auxiliary, extrapolate, grid_delta_exponent, lemma_value_grid, nu_exponent,
    nu_reduction, route_b_value, theorem_bound, verify_gm, AuditConstants, ProofInstance, RealExpr, ToyParameters,
    Workspace,
};
use linform::series::{
    check_growth_lemma, check_reverse_lemma, count_zeros, derivative_rationals, eval_rationals, gauss_norm,
    schwarz_bound, PadicSeries,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria expected to fail; see the criterion's detail line for why.
const KNOWN_FAILURES: &[u32] = &[3];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_rat(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rat {
    rat(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

fn random_nonzero_rat(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rat {
    loop {
        let q = random_rat(rng, num, den);
        if q != rat(0, 1) {
            return q;
        }
    }
}

fn random_element(field: &Field, rng: &mut ChaCha8Rng, num: i64, den: i64) -> AlgebraicNumber {
    loop {
        let cs = (0..field.degree()).map(|_| random_rat(rng, num, den)).collect();
        let x = AlgebraicNumber::new(field, cs);
        if !x.is_zero() {
            return x;
        }
    }
}

/// A unit at `p`: a nonzero rational with numerator and denominator prime to `p`.
fn random_unit(rng: &mut ChaCha8Rng, p: u64) -> Rat {
    let pick = |rng: &mut ChaCha8Rng| loop {
        let k: i64 = rng.gen_range(1..=20);
        if k % p as i64 != 0 {
            return k;
        }
    };
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    rat(sign * pick(rng), pick(rng))
}

fn p_power(p: u64, e: i64) -> Rat {
    if e >= 0 {
        Rat::from_integer(Int::from(p).pow(e as u32))
    } else {
        Rat::new(Int::from(1), Int::from(p).pow((-e) as u32))
    }
}

fn val(q: &Rat, p: u64) -> ValuationExponent {
    match vp_rat(q, p) {
        None => ValuationExponent::Infinity,
        Some(v) => ValuationExponent::from_int(v),
    }
}

/// Coefficients of `c * prod (z - a_i)`, constant term first.
fn expand(c: &Rat, roots: &[Rat]) -> Vec<Rat> {
    let mut f = vec![c.clone()];
    for a in roots {
        let mut g = vec![rat(0, 1); f.len() + 1];
        for (i, fi) in f.iter().enumerate() {
            g[i + 1] += fi;
            g[i] -= fi * a;
        }
        f = g;
    }
    f
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![rat(0, 1); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn q_field() -> Field {
    NumberField::rationals()
}

fn relevant_places(x: &AlgebraicNumber) -> Vec<Place> {
    let mut places = x.field().archimedean_places();
    for p in support_primes(x) {
        places.extend(x.field().places_above(p).unwrap());
    }
    places
}

fn instance(model: &str, beta: &[i64], gamma: &[i64], p: u64) -> ProofInstance {
    let q = q_field();
    let m = GroupModel::preset(model, &q).unwrap();
    let b = beta.iter().map(|&x| AlgebraicNumber::from_int(&q, x)).collect();
    let g = gamma.iter().map(|&x| AlgebraicNumber::from_int(&q, x)).collect();
    ProofInstance::new(m, b, g, p, 40, 0, None, None).unwrap()
}

fn product_formula() -> Verdict {
    let start = Instant::now();
    let mut r = rng(101);
    let q = q_field();
    let mut bad_q = 0;
    for _ in 0..1000 {
        let x = AlgebraicNumber::from_rat(&q, random_nonzero_rat(&mut r, 10_000, 10_000));
        let v = product_formula_check(&x).unwrap();
        bad_q += usize::from(!(v.exact && v.pass));
    }
    let k = NumberField::quadratic(2).unwrap();
    let tol = product_formula_tolerance();
    let mut bad_k = 0;
    for _ in 0..1000 {
        let x = random_element(&k, &mut r, 60, 30);
        let v = product_formula_check(&x).unwrap();
        bad_k += usize::from(!(v.pass && v.sum.contains_zero() && v.sum.width() < tol));
    }
    let t = start.elapsed();
    verdict(
        bad_q == 0 && bad_k == 0 && t < Duration::from_secs(10),
        format!("Q exact failures {bad_q}/1000, Q(sqrt2) interval failures {bad_k}/1000, {t:.2?} (limit 10s)"),
    )
}

fn height_laws() -> Verdict {
    let mut r = rng(102);
    let fields = [q_field(), NumberField::quadratic(2).unwrap(), NumberField::gaussian()];
    let (mut chain, mut mult, mut sum) = (0, 0, 0);
    for trial in 0..1000 {
        let k = &fields[trial % 3];
        let len = 2 + (trial / 3) % 6;
        let xs: Vec<AlgebraicNumber> = (0..len).map(|_| random_element(k, &mut r, 40, 12)).collect();
        let hv = heights_vector(&xs).unwrap();
        let spread = ln_int(&Int::from(len as u64), DEFAULT_BITS).scale(&rat(k.degree() as i64, 2));
        if !(le_tol(&hv.h_max, &hv.h_l2) && le_tol(&hv.h_l2, &hv.h_max.add(&spread))) {
            chain += 1;
        }
        let hs: Vec<Interval> = xs.iter().map(|x| height(x).unwrap()).collect();
        if !le_tol(&height(&xs[0].mul(&xs[1])).unwrap(), &hs[0].add(&hs[1])) {
            mult += 1;
        }
        let total = xs.iter().skip(1).fold(xs[0].clone(), |a, x| a.add(x));
        let rhs = hs.iter().fold(ln_int(&Int::from(len as u64), DEFAULT_BITS), |a, h| a.add(h));
        if !le_tol(&height(&total).unwrap(), &rhs) {
            sum += 1;
        }
    }
    verdict(
        chain + mult + sum == 0,
        format!("violations over 1000 vectors: chain {chain}, product {mult}, sum {sum}"),
    )
}

fn liouville_and_denominator() -> Verdict {
    let mut r = rng(103);
    let fields = [
        ("Q", q_field()),
        ("Q(sqrt2)", NumberField::quadratic(2).unwrap()),
        ("Q(i)", NumberField::gaussian()),
        ("Q(zeta3)", NumberField::cyclotomic3()),
    ];
    let mut parts = Vec::new();
    let mut total_written = 0;
    for (name, k) in &fields {
        let (mut lw, mut ls, mut dw, mut ds, mut checks) = (0, 0, 0, 0, 0);
        for _ in 0..500 {
            let x = random_element(k, &mut r, 30, 12);
            for v in relevant_places(&x) {
                let c = liouville_check(&x, &v).unwrap();
                checks += 1;
                lw += usize::from(!c.holds_as_written);
                ls += usize::from(!c.holds_standard);
            }
            let d = denominator_check(&x).unwrap();
            dw += usize::from(!d.holds_as_written);
            ds += usize::from(!d.holds_standard);
        }
        total_written += lw + dw + ls + ds;
        parts.push(format!("{name}: {lw}/{checks} place checks and {dw}/500 denominators fail as stated ({ls}, {ds} with [K:Q] h)"));
    }
    verdict(total_written == 0, parts.join("; "))
}

fn schwarz_machinery() -> Verdict {
    let start = Instant::now();
    let mut r = rng(104);
    let grid: Vec<Rat> = [-2, -1, 0, 1, 2, 3, 4, 6, 8].iter().map(|&k| rat(k, 2)).collect();
    let (mut counts, mut growth, mut reverse, mut schwarz, mut checks) = (0, 0, 0, 0, 0);
    for p in [2u64, 3, 5, 7] {
        for _ in 0..1000 {
            // planted zeros with known valuations
            let m = r.gen_range(1..=6);
            let roots: Vec<Rat> = (0..m)
                .map(|_| if r.gen_range(0..8) == 0 { rat(0, 1) } else { p_power(p, r.gen_range(-1..=3)) * random_unit(&mut r, p) })
                .collect();
            let c = p_power(p, r.gen_range(-2..=2)) * random_unit(&mut r, p);
            let f = PadicSeries::from_rationals(p, &expand(&c, &roots), 40);
            let vals: Vec<ValuationExponent> = roots.iter().map(|a| val(a, p)).collect();
            for q in &grid {
                let qv = ValuationExponent::Finite(q.clone());
                let closed = vals.iter().filter(|v| **v >= qv).count() as u64;
                let open = vals.iter().filter(|v| **v > qv).count() as u64;
                counts += usize::from(count_zeros(&f, q, true).unwrap() != closed);
                counts += usize::from(count_zeros(&f, q, false).unwrap() != open);
            }
            let i = r.gen_range(0..grid.len());
            let j = r.gen_range(0..=i);
            let (s_exp, t_exp) = (&grid[i], &grid[j]);
            growth += usize::from(!check_growth_lemma(&f, s_exp, t_exp).unwrap().holds);
            reverse += usize::from(!check_reverse_lemma(&f, s_exp, t_exp).unwrap().holds);

            // interpolation points c * i, i < l, with planted multiplicities
            let l = r.gen_range(2..=4u64);
            let k = r.gen_range(1..=3u64);
            let a = r.gen_range(0..=1i64);
            let step = p_power(p, a);
            let pts: Vec<Rat> = (0..l).map(|i| &step * rat(i as i64, 1)).collect();
            let mut planted = Vec::new();
            for g in &pts {
                for _ in 0..r.gen_range(0..=k) {
                    planted.push(g.clone());
                }
            }
            let cofactor: Vec<Rat> = (0..r.gen_range(1..=3)).map(|_| random_rat(&mut r, 30, 9)).collect();
            let coeffs = poly_mul(&expand(&rat(1, 1), &planted), &cofactor);
            if coeffs.iter().all(|c| *c == rat(0, 1)) {
                continue;
            }
            let g = PadicSeries::from_rationals(p, &coeffs, 40);
            let mut mu = ValuationExponent::Infinity;
            for tau in 0..k as usize {
                let d = derivative_rationals(&coeffs, tau);
                for x in &pts {
                    mu = mu.min(val(&eval_rationals(&d, x), p));
                }
            }
            let s_exp = rat(a, 1);
            let delta_exp = &s_exp + grid_delta_exponent(l as u32, p);
            let t_exp = &s_exp - rat(r.gen_range(0..=2), 1);
            let norm_t = gauss_norm(&g, &t_exp).unwrap();
            let bound = schwarz_bound(&s_exp, &t_exp, k, l, &delta_exp, &mu, &norm_t, p).unwrap();
            schwarz += usize::from(gauss_norm(&g, &s_exp).unwrap() < bound);
            checks += 1;
        }
    }
    let t = start.elapsed();
    verdict(
        counts + growth + reverse + schwarz == 0 && t < Duration::from_secs(60),
        format!(
            "4000 polynomials: zero-count mismatches {counts}, growth {growth}, reverse {reverse}, \
             Schwarz {schwarz}/{checks}, {t:.2?} (limit 60s)"
        ),
    )
}

fn exponential_series() -> Verdict {
    let q = q_field();
    let gm = GroupModel::preset("gm", &q).unwrap();
    let s20 = exp_series(&gm, 20).unwrap();
    let coeff_ok = (1..=20u32).all(|k| {
        s20.coefficient(0, &[k]) == AlgebraicNumber::from_rat(&q, Rat::new(Int::from(1), factorial(k as u64)))
    });
    let gm2 = GroupModel::preset("gm^2", &q).unwrap();
    let mut consistency = Vec::new();
    for g in [&gm, &gm2] {
        let s = exp_series(g, 12).unwrap();
        consistency.push(integrability_check(g, &s).pass && addition_compatibility_check(g, &s));
    }
    let s2 = exp_series(&gm2, 12).unwrap();
    let mut r = rng(105);
    let mut certified = 0;
    let mut points = 0;
    for (i, p) in [3u64, 5, 7].iter().enumerate() {
        let count = if i == 0 { 34 } else { 33 };
        let pts: Vec<Vec<Rat>> = (0..count)
            .map(|_| (0..2).map(|_| p_power(*p, r.gen_range(1..=3)) * random_unit(&mut r, *p)).collect())
            .collect();
        let v = sup_norm_check(&gm2, &s2, *p, &pts).unwrap();
        points += v.points.len();
        certified += v.points.iter().filter(|pt| pt.certified).count() * usize::from(v.pass);
    }
    let pass = coeff_ok && consistency.iter().all(|&b| b) && certified == 100 && points == 100;
    verdict(
        pass,
        format!(
            "1/k! through 20: {coeff_ok}; integrability and addition to order 12 (gm, gm^2): {consistency:?}; \
             |f_i(x)|_p < 1 certified at {certified}/{points} points"
        ),
    )
}

fn derivative_routes() -> Verdict {
    let q = q_field();
    let models: Vec<GroupModel> = ["gm", "gm^2", "gm/2"].iter().map(|m| GroupModel::preset(m, &q).unwrap()).collect();
    let series: Vec<_> = models.iter().map(|g| exp_series(g, 8).unwrap()).collect();
    let mut r = rng(106);
    let (mut route, mut degree) = (0, 0);
    for trial in 0..200 {
        let (g, s) = (&models[trial % 3], &series[trial % 3]);
        let nv = g.big_n();
        let d = r.gen_range(1..=4u32);
        let mut p = MPoly::zero(&q, nv);
        for _ in 0..r.gen_range(1..=5) {
            let mut mono = vec![0u32; nv];
            for _ in 0..r.gen_range(0..=d) {
                mono[r.gen_range(0..nv)] += 1;
            }
            p.add_term(mono, AlgebraicNumber::from_int(&q, r.gen_range(-9..=9)));
        }
        let big_t = r.gen_range(0..=5u32);
        let mut t = vec![0u32; g.n()];
        for _ in 0..big_t {
            t[r.gen_range(0..g.n())] += 1;
        }
        route += usize::from(!dual_route_check(g, s, &p, &t));
        let (_, audit) = derivative_polynomial_audit(g, &p, &t).unwrap();
        degree += usize::from(!audit.degree_ok);
    }
    verdict(route + degree == 0, format!("200 cases: route mismatches {route}, degree-bound violations {degree}"))
}

fn siegel_solver() -> Verdict {
    let start = Instant::now();
    let fields = [q_field(), NumberField::gaussian(), NumberField::quadratic(2).unwrap()];
    let mut r = rng(107);
    let (mut bad, mut errors) = (0, 0);
    for trial in 0..100 {
        let k = &fields[if trial < 60 { 0 } else { 1 + trial % 2 }];
        let n = r.gen_range(2..=8usize);
        let m = r.gen_range(1..n);
        let forms: Vec<Vec<AlgebraicNumber>> = (0..m)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let cs = (0..k.degree()).map(|_| rat(r.gen_range(-5..=5), 1)).collect();
                        AlgebraicNumber::new(k, cs)
                    })
                    .collect()
            })
            .collect();
        match siegel_solve(&forms, n) {
            Ok(sol) => {
                let residual = forms.iter().all(|row| {
                    row.iter().zip(&sol.x).fold(AlgebraicNumber::zero(k), |a, (c, x)| a.add(&c.mul(x))).is_zero()
                });
                let nonzero = sol.x.iter().any(|x| !x.is_zero());
                let integral = sol.x.iter().all(|x| x.is_integral());
                bad += usize::from(!(residual && nonzero && integral && sol.within_bound));
            }
            Err(_) => errors += 1,
        }
    }
    let t = start.elapsed();
    verdict(
        bad + errors == 0 && t < Duration::from_secs(120),
        format!("100 systems: bad witnesses {bad}, no solution {errors}, {t:.2?} (limit 120s)"),
    )
}

struct Toy {
    model: &'static str,
    beta: &'static [i64],
    gamma: &'static [i64],
    p: u64,
    params: ToyParameters,
}

fn toy_cases() -> Vec<Toy> {
    vec![
        Toy { model: "gm", beta: &[1], gamma: &[6], p: 5, params: ToyParameters::new(2, 2, 3, 4) },
        Toy { model: "gm", beta: &[1], gamma: &[8], p: 7, params: ToyParameters::new(2, 1, 2, 2) },
        Toy { model: "gm^2", beta: &[1, -1], gamma: &[6, 11], p: 5, params: ToyParameters::new(2, 1, 2, 2) },
        Toy { model: "gm^2", beta: &[1, -1], gamma: &[6, 11], p: 5, params: ToyParameters::new(2, 2, 3, 4) },
        Toy { model: "gm^2", beta: &[2, 3], gamma: &[4, 7], p: 3, params: ToyParameters::new(1, 2, 3, 4) },
    ]
}

fn all_t(n: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (0..bound).map(move |k| [v.clone(), vec![k]].concat())).collect();
    }
    out
}

fn auxiliary_toy() -> Verdict {
    let consts = AuditConstants::default();
    let (mut cases, mut bad, mut conditions, mut nonzero_values) = (0, 0, 0, 0);
    for toy in toy_cases() {
        let inst = instance(toy.model, toy.beta, toy.gamma, toy.p);
        let aux = construct_auxiliary(&inst, &toy.params, &consts).unwrap();
        cases += 1;
        if !(aux.pass && aux.vanishing && aux.nonzero && aux.shape && aux.height.holds) {
            bad += 1;
        }
        // independent re-evaluation by both routes
        let n = inst.n();
        let order = n as u32 * (2 * toy.params.t - 1) + 1;
        let ws = Workspace::new(&inst, &toy.params, order).unwrap();
        for s in 0..toy.params.s0 as u64 {
            for t in all_t(n, 2 * toy.params.t) {
                conditions += 1;
                let a = ws.route_a_value(&aux.p, s, &t).unwrap();
                let b = route_b_value(&ws, &aux.p, s, &t).unwrap();
                nonzero_values += usize::from(!a.is_zero() || !b.is_zero());
            }
        }
    }
    verdict(
        bad == 0 && nonzero_values == 0,
        format!("{cases} toy instances: audit failures {bad}, conditions re-evaluated {conditions}, nonzero {nonzero_values}"),
    )
}

fn extrapolation_audits() -> Verdict {
    let consts = AuditConstants::default();
    let (mut instances, mut lemma_fail, mut dis_checks) = (0, 0, 0);
    for toy in toy_cases() {
        let inst = instance(toy.model, toy.beta, toy.gamma, toy.p);
        let aux = construct_auxiliary(&inst, &toy.params, &consts).unwrap();
        let order = inst.n() as u32 * (2 * toy.params.t - 1) + 1;
        let ws = Workspace::new(&inst, &toy.params, order).unwrap();
        let rep = extrapolate(&inst, &ws, &aux.p, &consts).unwrap();
        instances += 1;
        dis_checks += rep.dis_checks;
        lemma_fail += usize::from(!rep.dis_failures.is_empty() || !rep.lemma_e_pass);
    }
    let mut nu_bad = 0;
    let mut nu_cases = 0;
    for p in [2u64, 3, 5, 7] {
        let r_p = rat(1, p as i64 - 1);
        for k in -18..=18 {
            let v = rat(k, 6);
            let nu = nu_exponent(&v, p);
            let moved = &v + rat(nu as i64, 1);
            let minimal = nu == 0 || &moved - rat(1, 1) <= r_p;
            nu_bad += usize::from(!(moved > r_p && minimal));
            nu_cases += 1;
        }
        for e in -2..=3 {
            let u = PadicNumber::from_rational(&p_power(p, e), p, 30);
            let red = nu_reduction(&[u], p);
            nu_bad += usize::from(!red.inside);
            nu_cases += 1;
        }
    }
    let mut value_bad = 0;
    let mut value_cases = 0;
    for p in [2u64, 3, 5, 7] {
        for d in 1..=4 {
            for (_, _, ineq) in lemma_value_grid(p, d) {
                value_cases += 1;
                value_bad += usize::from(!ineq.holds);
            }
        }
    }
    verdict(
        lemma_fail + nu_bad + value_bad == 0,
        format!(
            "{instances} toy instances ({dis_checks} dis checks) failing {lemma_fail}; nu grid {nu_bad}/{nu_cases}; \
             value-lemma grid {value_bad}/{value_cases}"
        ),
    )
}

fn real(s: &str) -> RealExpr {
    RealExpr::parse(s).unwrap()
}

fn abs_bound(omega: &Interval, n: usize, b: &Interval, h: &Interval, p: u64, c0: &Rat, nu: Option<u32>) -> Interval {
    theorem_bound(omega, n, b, h, p, c0, nu).unwrap().neg()
}

fn formula_fidelity() -> Verdict {
    // (c, omega, n, b, h, c2) -> S0, D0, S, D, T, from an independent 60-digit evaluation
    let fixed: [(&str, &str, usize, &str, &str, &str, [u64; 5]); 10] = [
        ("1", "1", 1, "3", "3", "1", [2, 12, 2, 6, 36]),
        ("2", "1", 1, "exp(1)", "exp(1)", "1", [4, 2783, 16, 695, 242124]),
        ("3", "1", 1, "10", "50", "1", [18, 11809800, 162, 131220, 28697814000]),
        ("3/2", "3/2", 1, "log(20)", "7", "1", [6, 2870, 13, 204, 65299]),
        ("1", "2", 2, "3", "50", "1", [10, 2500000, 10, 15000, 7500000]),
        ("2", "1", 2, "exp(2)", "5", "1", [7, 17561600, 28, 3707532, 4152436722]),
        ("1", "log(7)", 2, "4", "9", "1", [6, 17496, 6, 1296, 69984]),
        ("1", "1", 3, "30", "30", "1", [6, 34992000, 6, 5832000, 1049760000]),
        ("5/4", "1", 1, "100", "exp(3)", "1", [9, 6206, 14, 3433, 1893994]),
        ("1", "5/2", 3, "exp(1/2)", "11", "1/2", [7, 3195731, 7, 68426, 5268869]),
    ];
    let mut mismatches = Vec::new();
    for (i, (c, omega, n, b, h, c2, want)) in fixed.iter().enumerate() {
        let got = choose_parameters(
            &linform::arith::parse_rational(c).unwrap(),
            &real(omega),
            *n,
            &real(b),
            &real(h),
            &linform::arith::parse_rational(c2).unwrap(),
        );
        let ok = match got {
            Ok(p) => {
                let v = &p.values;
                [&v.s0, &v.d0, &v.s, &v.d, &v.t].iter().zip(want).all(|(g, w)| **g == Int::from(*w))
            }
            Err(_) => false,
        };
        if !ok {
            mismatches.push(i);
        }
    }

    // |bound| nondecreasing along each argument
    let ln3 = ln_int(&Int::from(3), DEFAULT_BITS);
    let bh: Vec<Interval> = std::iter::once(ln3)
        .chain(["3/2", "2", "3", "5", "10"].iter().map(|s| Interval::point(linform::arith::parse_rational(s).unwrap())))
        .collect();
    let omegas: Vec<Interval> =
        ["1", "3/2", "2", "5"].iter().map(|s| Interval::point(linform::arith::parse_rational(s).unwrap())).collect();
    let primes = [2u64, 3, 5, 7, 11];
    let c0s = [rat(1, 2), rat(1, 1), rat(2, 1)];
    let nus = [None, Some(1), Some(2), Some(3)];
    let mut steps = 0;
    let mut drops = 0;
    let mut check = |a: Interval, b: Interval| {
        steps += 1;
        drops += usize::from(!le_tol(&a, &b));
    };
    for n in 1..=3usize {
        for om in &omegas {
            for b in &bh {
                for h in &bh {
                    let at = |om: &Interval, b: &Interval, h: &Interval, p: u64, c0: &Rat, nu: Option<u32>| {
                        abs_bound(om, n, b, h, p, c0, nu)
                    };
                    let one = rat(1, 1);
                    for w in primes.windows(2) {
                        check(at(om, b, h, w[0], &one, None), at(om, b, h, w[1], &one, None));
                    }
                    for w in nus.windows(2) {
                        check(at(om, b, h, 3, &one, w[0]), at(om, b, h, 3, &one, w[1]));
                    }
                    for w in c0s.windows(2) {
                        check(at(om, b, h, 5, &w[0], None), at(om, b, h, 5, &w[1], None));
                    }
                }
                for w in bh.windows(2) {
                    check(abs_bound(om, n, &w[0], b, 5, &rat(1, 1), None), abs_bound(om, n, &w[1], b, 5, &rat(1, 1), None));
                    check(abs_bound(om, n, b, &w[0], 5, &rat(1, 1), None), abs_bound(om, n, b, &w[1], 5, &rat(1, 1), None));
                }
            }
            let _ = om;
        }
        for w in omegas.windows(2) {
            for b in &bh {
                check(abs_bound(&w[0], n, b, b, 7, &rat(1, 1), None), abs_bound(&w[1], n, b, b, 7, &rat(1, 1), None));
            }
        }
    }
    verdict(
        mismatches.is_empty() && drops == 0,
        format!("fixed inputs mismatching: {mismatches:?}; monotonicity drops {drops}/{steps}"),
    )
}

fn end_to_end() -> Verdict {
    let start = Instant::now();
    let mut r = rng(111);
    let c0 = rat(1, 1);
    let (mut pass, mut zero, mut fail, mut errors, mut misclassified) = (0, 0, 0, 0, 0);
    let mut calibration = Vec::new();
    for i in 0..20 {
        let p = [3u64, 5, 7][i % 3];
        let coordinate = |r: &mut ChaCha8Rng| 1 + p as i64 * r.gen_range(1..=(49 / p as i64));
        let (beta, gamma, planted_zero) = if i >= 18 {
            // certified zeros: gamma_2 = gamma_1^2 with beta = (2, -1), or equal coordinates
            let g = coordinate(&mut r);
            if g * g <= 50 {
                (vec![2, -1], vec![g, g * g], true)
            } else {
                (vec![1, -1], vec![g, g], true)
            }
        } else {
            let mut beta = vec![0, 0];
            while beta == [0, 0] {
                beta = vec![r.gen_range(-5..=5), r.gen_range(-5..=5)];
            }
            let gamma = vec![coordinate(&mut r), coordinate(&mut r)];
            let zero = gamma[0] == gamma[1] && beta[0] == -beta[1];
            (beta, gamma, zero)
        };
        let inst = instance("gm^2", &beta, &gamma, p);
        match verify_gm(&inst, &c0) {
            Ok(rep) => {
                let is_zero = rep.outcome == linform::pipeline::Outcome::LinearFormZero;
                misclassified += usize::from(is_zero != planted_zero);
                if is_zero {
                    zero += 1;
                } else if rep.passed() {
                    pass += 1;
                } else {
                    fail += 1;
                    calibration.push(format!("p={p} beta={beta:?} gamma={gamma:?}"));
                }
            }
            Err(_) => errors += 1,
        }
    }
    let t = start.elapsed();
    let mut detail = format!(
        "20 instances: pass {pass}, linear-form-zero {zero}, fail {fail}, errors {errors}, misclassified {misclassified}, \
         {t:.2?} (limit 60s)"
    );
    if !calibration.is_empty() {
        detail.push_str(&format!("; violations: {}", calibration.join(", ")));
    }
    verdict(fail + errors + misclassified == 0 && zero >= 2 && t < Duration::from_secs(60), detail)
}

#[test]
fn acceptance_criteria() {
    let criteria: [(u32, &str, fn() -> Verdict); 11] = [
        (1, "product formula", product_formula),
        (2, "height laws", height_laws),
        (3, "Liouville and denominator bounds", liouville_and_denominator),
        (4, "p-adic Schwarz machinery", schwarz_machinery),
        (5, "exponential series", exponential_series),
        (6, "derivative polynomial routes", derivative_routes),
        (7, "Siegel solver", siegel_solver),
        (8, "toy auxiliary polynomial", auxiliary_toy),
        (9, "extrapolation audits", extrapolation_audits),
        (10, "parameter formulas and bound monotonicity", formula_fidelity),
        (11, "end-to-end torus verification", end_to_end),
    ];
    let mut out = std::io::stdout().lock();
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let started = Instant::now();
        let v = run();
        let took = started.elapsed();
        let known = KNOWN_FAILURES.contains(&id);
        let tag = match (v.pass, known) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
            (true, true) => "PASS (listed as known failure)",
        };
        // written past the test harness capture so each line shows in the log
        writeln!(out, "criterion {id:>2} [{name}]: {tag}: {} [{took:.2?}]", v.detail).unwrap();
        if v.pass == known {
            unexpected.push(id);
        }
    }
    assert!(unexpected.is_empty(), "criteria with unexpected outcomes: {unexpected:?}");
}

#[test]
fn standard_liouville_normalization_holds_everywhere() {
    // the companion of criterion 3 with [K:Q] h in place of h / [K:Q]
    let mut r = rng(203);
    for k in [NumberField::quadratic(2).unwrap(), NumberField::gaussian(), NumberField::cyclotomic3()] {
        for _ in 0..100 {
            let x = random_element(&k, &mut r, 30, 12);
            for v in relevant_places(&x) {
                assert!(liouville_check(&x, &v).unwrap().holds_standard);
            }
            assert!(denominator_check(&x).unwrap().holds_standard);
        }
    }
}

#[test]
fn log_enclosures_are_tight() {
    let l = ln_rat(&rat(50, 1), DEFAULT_BITS);
    assert!(l.width() < rat(1, 1 << 40));
}
