//! Randomized invariants across the library, one proptest per law.

use linform::arith::{factorial, format_rational, int, rat, vp_factorial, vp_int, Int, Rat};
use linform::groups::{exp_series, is_semistable_gm, GroupModel};
use linform::interval::{ln_rat, Interval, DEFAULT_BITS};
use linform::numfield::{height, le_tol, product_formula_check, AlgebraicNumber, Field, NumberField};
use linform::padic::{exp_p, log_p, valuation, PadicNumber, ValuationExponent};
use linform::pipeline::{choose_parameters, nu_exponent, theorem_bound, RealExpr};
use linform::series::{count_zeros, gauss_norm, PadicSeries};
use proptest::prelude::*;

const PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

fn q(n: i64, d: i64) -> Rat {
    rat(n, d)
}

fn p_power(p: u64, e: i32) -> Rat {
    if e >= 0 {
        Rat::from_integer(Int::from(p).pow(e as u32))
    } else {
        Rat::new(int(1), Int::from(p).pow((-e) as u32))
    }
}

fn nonzero() -> impl Strategy<Value = i64> {
    prop_oneof![-500i64..=-1, 1i64..=500]
}

fn field(idx: usize) -> Field {
    match idx {
        0 => NumberField::rationals(),
        1 => NumberField::quadratic(2).unwrap(),
        2 => NumberField::gaussian(),
        _ => NumberField::cyclotomic3(),
    }
}

fn element(k: &Field, nums: &[i64], den: i64) -> AlgebraicNumber {
    let cs = (0..k.degree()).map(|i| q(nums[i], den)).collect();
    AlgebraicNumber::new(k, cs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn valuation_is_additive_and_ultrametric(
        pi in 0usize..5, a in nonzero(), b in 1i64..300, c in nonzero(), d in 1i64..300,
        ea in -3i32..4, ec in -3i32..4,
    ) {
        let p = PRIMES[pi];
        let x = q(a, b) * p_power(p, ea);
        let y = q(c, d) * p_power(p, ec);
        let px = PadicNumber::from_rational(&x, p, 40);
        let py = PadicNumber::from_rational(&y, p, 40);
        let (vx, vy) = (valuation(&px), valuation(&py));
        prop_assert_eq!(valuation(&px.mul(&py)), &vx + &vy);
        let sum = &x + &y;
        if sum != q(0, 1) {
            let vs = valuation(&PadicNumber::from_rational(&sum, p, 40));
            prop_assert!(vs >= vx.clone().min(vy.clone()));
            if vx != vy {
                prop_assert_eq!(vs, vx.min(vy));
            }
        }
    }

    #[test]
    fn valuation_exponent_order_and_infinity(a in -50i64..50, b in 1i64..20, c in -50i64..50) {
        let x = ValuationExponent::Finite(q(a, b));
        let y = ValuationExponent::Finite(q(c, 1));
        let inf = ValuationExponent::Infinity;
        prop_assert!(x < inf && y < inf);
        prop_assert_eq!(&x + &inf, ValuationExponent::Infinity);
        prop_assert_eq!(&inf + &y, ValuationExponent::Infinity);
        prop_assert_eq!(x <= y, q(a, b) <= q(c, 1));
        prop_assert_eq!(&x + &y, ValuationExponent::Finite(q(a, b) + q(c, 1)));
    }

    #[test]
    fn log_inverts_exp_inside_the_convergence_disk(
        pi in 0usize..4, a in nonzero(), b in 1i64..200, e in 0i32..4,
    ) {
        let p = PRIMES[pi];
        let floor = if p == 2 { 2 } else { 1 };
        let unit = q(a, b);
        let unit = unit.clone() * p_power(p, -(linform::arith::vp_rat(&unit, p).unwrap() as i32));
        let z = PadicNumber::from_rational(&(unit * p_power(p, floor + e)), p, 40);
        let back = log_p(&exp_p(&z).unwrap()).unwrap();
        prop_assert!(back.sub(&z).is_zero(), "{} vs {}", format_rational(&back.to_rational()), format_rational(&z.to_rational()));
    }

    #[test]
    fn factorial_valuation_follows_legendre(n in 0u64..10_000, pi in 0usize..5) {
        let p = PRIMES[pi];
        let mut legendre = 0;
        let mut pk = p;
        while pk <= n {
            legendre += n / pk;
            pk *= p;
        }
        prop_assert_eq!(vp_factorial(n, p), legendre);
        // v(1/n!) >= -(n-1)/(p-1)
        if n >= 1 {
            prop_assert!(q(-(legendre as i64), 1) >= q(-(n as i64 - 1), p as i64 - 1));
        }
    }

    #[test]
    fn gauss_norm_is_attained(
        pi in 0usize..4, nums in prop::collection::vec(-40i64..40, 1..8), qn in -6i64..9, qd in 1i64..4,
    ) {
        prop_assume!(nums.iter().any(|&c| c != 0));
        let p = PRIMES[pi];
        let coeffs: Vec<Rat> = nums.iter().map(|&c| q(c, 1)).collect();
        let f = PadicSeries::from_rationals(p, &coeffs, 30);
        let r = q(qn, qd);
        let w = gauss_norm(&f, &r).unwrap();
        let attained = coeffs.iter().enumerate().filter(|(_, c)| **c != q(0, 1)).any(|(n, c)| {
            let v = linform::arith::vp_rat(c, p).unwrap();
            ValuationExponent::Finite(q(v, 1) + &r * q(n as i64, 1)) == w
        });
        prop_assert!(attained);
    }

    #[test]
    fn closed_disk_holds_at_least_the_open_disk(
        pi in 0usize..4, nums in prop::collection::vec(-40i64..40, 2..8), qn in -4i64..6, qd in 1i64..4,
    ) {
        prop_assume!(nums.iter().any(|&c| c != 0));
        let p = PRIMES[pi];
        let coeffs: Vec<Rat> = nums.iter().map(|&c| q(c, 1)).collect();
        let f = PadicSeries::from_rationals(p, &coeffs, 30);
        let r = q(qn, qd);
        let open = count_zeros(&f, &r, false).unwrap();
        let closed = count_zeros(&f, &r, true).unwrap();
        prop_assert!(open <= closed && closed < nums.len() as u64);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_arithmetic_is_closed(fi in 0usize..4, a in prop::collection::vec(-30i64..30, 2), b in prop::collection::vec(-30i64..30, 2), d in 1i64..9) {
        let k = field(fi);
        let x = element(&k, &a, d);
        let y = element(&k, &b, 1);
        prop_assert_eq!(x.is_zero(), x.coords().iter().all(|c| *c == q(0, 1)));
        prop_assume!(!y.is_zero());
        prop_assert_eq!(x.mul(&y).mul(&y.inv().unwrap()), x.clone());
        prop_assert_eq!(x.add(&y).add(&y.neg()), x);
    }

    #[test]
    fn local_degrees_sum_to_the_field_degree(fi in 0usize..4, pi in 0usize..5) {
        let k = field(fi);
        let d = k.degree() as u32;
        prop_assert_eq!(k.r1() + 2 * k.r2(), k.degree());
        let arch: u32 = k.archimedean_places().iter().map(|v| v.local_degree()).sum();
        prop_assert_eq!(arch, d);
        let fin: u32 = k.places_above(PRIMES[pi]).unwrap().iter().map(|v| v.local_degree()).sum();
        prop_assert_eq!(fin, d);
    }

    #[test]
    fn product_formula_holds(fi in 0usize..4, a in prop::collection::vec(-60i64..60, 2), d in 1i64..30) {
        let k = field(fi);
        let x = element(&k, &a, d);
        prop_assume!(!x.is_zero());
        prop_assert!(product_formula_check(&x).unwrap().pass);
    }

    #[test]
    fn height_of_a_power_scales(fi in 0usize..4, a in prop::collection::vec(-20i64..20, 2), d in 1i64..9, e in 1u64..5) {
        let k = field(fi);
        let x = element(&k, &a, d);
        prop_assume!(!x.is_zero());
        let h = height(&x).unwrap().scale(&q(e as i64, 1));
        let he = height(&x.pow(e)).unwrap();
        prop_assert!(le_tol(&he, &h) && le_tol(&h, &he));
        let hinv = height(&x.inv().unwrap()).unwrap();
        prop_assert!(le_tol(&hinv, &height(&x).unwrap()) && le_tol(&height(&x).unwrap(), &hinv));
    }

    #[test]
    fn intervals_enclose_their_values(n in 1i64..10_000, d in 1i64..10_000) {
        let l = ln_rat(&q(n, d), DEFAULT_BITS);
        prop_assert!(l.lo <= l.hi);
        let f = (n as f64 / d as f64).ln();
        prop_assert!(l.lo.clone() - q(1, 1 << 40) <= Rat::from_float(f).unwrap());
        prop_assert!(Rat::from_float(f).unwrap() <= l.hi.clone() + q(1, 1 << 40));
        let sq = l.mul(&l);
        prop_assert!(sq.lo <= sq.hi);
    }

    #[test]
    fn semistability_matches_a_relation_search(fi in 0usize..2, b in prop::collection::vec(prop::collection::vec(-4i64..=4, 2), 2..4)) {
        // coordinates up to 4 keep every primitive relation (2x2 minors) within the search box
        let k = field(fi);
        let beta: Vec<AlgebraicNumber> = b.iter().map(|c| element(&k, c, 1)).collect();
        prop_assume!(beta.iter().any(|x| !x.is_zero()));
        let verdict = is_semistable_gm(&beta).unwrap();
        // brute force: integer relations with entries up to 50
        let n = beta.len();
        let mut found = false;
        let mut w = vec![-50i64; n];
        'search: loop {
            if w.iter().any(|&c| c != 0) {
                // the beta have integer coordinates, so compare coordinate sums
                let zero = (0..k.degree()).all(|r| w.iter().zip(&b).map(|(c, x)| c * x[r]).sum::<i64>() == 0);
                if zero {
                    found = true;
                    break 'search;
                }
            }
            let mut i = 0;
            loop {
                if i == n {
                    break 'search;
                }
                w[i] += 1;
                if w[i] <= 50 {
                    break;
                }
                w[i] = -50;
                i += 1;
            }
        }
        prop_assert_eq!(verdict.semistable, !found);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn parameters_are_feasible_and_exact(
        cn in 2i64..8, cd in 1i64..3, n in 1usize..4, b in 3i64..200, h in 3i64..200,
    ) {
        let c = q(cn, cd);
        let omega = RealExpr::parse("1").unwrap();
        let bx = RealExpr::parse(&b.to_string()).unwrap();
        let hx = RealExpr::parse(&h.to_string()).unwrap();
        let Ok(params) = choose_parameters(&c, &omega, n, &bx, &hx, &q(1, 1)) else {
            return Ok(());
        };
        let v = &params.values;
        let lhs = &v.d0 * v.d.pow(n as u32);
        let rhs = &v.s0 * v.t.pow(n as u32);
        prop_assert!(lhs >= rhs);
        prop_assert_eq!(v.s.clone(), (&c * &c * Rat::from_integer(v.s0.clone())).floor().to_integer());
    }

    #[test]
    fn bound_grows_with_each_argument(n in 1usize..3, b in 2i64..40, h in 2i64..40, pi in 0usize..4, step in 1i64..5) {
        let p = PRIMES[pi];
        let one = Interval::point(q(1, 1));
        let bi = Interval::point(q(b, 1));
        let hi = Interval::point(q(h, 1));
        let bigger = |x: i64| Interval::point(q(x + step, 1));
        let at = |om: &Interval, bb: &Interval, hh: &Interval, pp: u64| theorem_bound(om, n, bb, hh, pp, &q(1, 1), None).unwrap().neg();
        let base = at(&one, &bi, &hi, p);
        prop_assert!(le_tol(&base, &at(&one, &bigger(b), &hi, p)));
        prop_assert!(le_tol(&base, &at(&one, &bi, &bigger(h), p)));
        prop_assert!(le_tol(&base, &at(&Interval::point(q(1 + step, 1)), &bi, &hi, p)));
        prop_assert!(le_tol(&base, &at(&one, &bi, &hi, PRIMES[pi + 1])));
    }

    #[test]
    fn nu_reduction_lands_inside(v in -3i64..=5, pi in 0usize..5) {
        let p = PRIMES[pi];
        let nu = nu_exponent(&q(v, 1), p) as i64;
        prop_assert!(q(v + nu, 1) > q(1, p as i64 - 1));
    }

    #[test]
    fn exponential_series_vanish_at_the_origin(mi in 0usize..3, order in 2u32..8) {
        let k = NumberField::rationals();
        let model = GroupModel::preset(["gm", "gm^2", "gm/2"][mi], &k).unwrap();
        let s = exp_series(&model, order).unwrap();
        let zero = vec![0u32; model.n()];
        for i in 0..s.components().len() {
            prop_assert!(s.coefficient(i, &zero).is_zero());
        }
    }
}

#[test]
fn factorial_and_vp_agree_directly() {
    for p in PRIMES {
        for n in [0u64, 1, 5, 24, 97, 250] {
            assert_eq!(vp_int(&factorial(n), p), vp_factorial(n, p));
        }
    }
}
