//! Univariate integer polynomials (coefficients low degree first): resultants,
//! factoring modulo a prime, and lifting coprime factorizations to `Z/p^k`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{mod_inverse, pow_int, Int};

pub type ZPoly = Vec<Int>;

pub fn trim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

/// Degree, with `None` for the zero polynomial.
pub fn degree(a: &[Int]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub fn from_i64(cs: &[i64]) -> ZPoly {
    trim(cs.iter().map(|&c| BigInt::from(c)).collect())
}

pub fn eval(a: &[Int], x: &Int) -> Int {
    a.iter().rev().fold(Int::zero(), |acc, c| acc * x + c)
}

pub fn derivative(a: &[Int]) -> ZPoly {
    trim(a.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
}

pub fn mul(a: &[Int], b: &[Int]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Int::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn sub(a: &[Int], b: &[Int]) -> ZPoly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default()).collect())
}

/// Remainder of `a` modulo a monic integer polynomial.
pub fn rem_monic(a: &[Int], m: &[Int]) -> ZPoly {
    let dm = degree(m).expect("modulus is zero");
    assert!(m[dm].is_one(), "modulus must be monic");
    let mut r = trim(a.to_vec());
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let c = r[dr].clone();
        for i in 0..=dm {
            r[dr - dm + i] -= &c * &m[i];
        }
        r = trim(r);
    }
    r
}

/// Determinant of a square integer matrix (fraction-free Bareiss elimination).
pub fn det(mut m: Vec<Vec<Int>>) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Resultant via the Sylvester determinant.
pub fn resultant(a: &[Int], b: &[Int]) -> Int {
    let (da, db) = match (degree(a), degree(b)) {
        (Some(x), Some(y)) => (x, y),
        _ => return Int::zero(),
    };
    if da == 0 && db == 0 {
        return Int::one();
    }
    let n = da + db;
    let mut s = vec![vec![Int::zero(); n]; n];
    for i in 0..db {
        for j in 0..=da {
            s[i][i + j] = a[da - j].clone();
        }
    }
    for i in 0..da {
        for j in 0..=db {
            s[db + i][i + j] = b[db - j].clone();
        }
    }
    det(s)
}

/// Discriminant of a monic polynomial: `(-1)^(d(d-1)/2) Res(m, m')`.
pub fn discriminant(m: &[Int]) -> Int {
    let d = degree(m).unwrap_or(0);
    if d <= 1 {
        return Int::one();
    }
    let r = resultant(m, &derivative(m));
    if (d * (d - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

// ---- arithmetic modulo an integer ----

pub fn reduce(a: &[Int], m: &Int) -> ZPoly {
    trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

pub fn mul_mod(a: &[Int], b: &[Int], m: &Int) -> ZPoly {
    reduce(&mul(a, b), m)
}

/// Division with remainder modulo a prime `p` (leading coefficient of `b` invertible).
pub fn divrem_mod(a: &[Int], b: &[Int], p: &Int) -> (ZPoly, ZPoly) {
    let b = reduce(b, p);
    let db = degree(&b).expect("division by zero polynomial");
    let inv = mod_inverse(&b[db], p).expect("leading coefficient not invertible");
    let mut r = reduce(a, p);
    let mut q = vec![Int::zero(); r.len().max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = (&r[dr] * &inv).mod_floor(p);
        q[dr - db] = c.clone();
        for i in 0..=db {
            r[dr - db + i] = (&r[dr - db + i] - &c * &b[i]).mod_floor(p);
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rem_mod(a: &[Int], b: &[Int], p: &Int) -> ZPoly {
    divrem_mod(a, b, p).1
}

pub fn monic_mod(a: &[Int], p: &Int) -> ZPoly {
    let a = reduce(a, p);
    match degree(&a) {
        None => a,
        Some(d) => {
            let inv = mod_inverse(&a[d], p).unwrap();
            reduce(&a.iter().map(|c| c * &inv).collect::<Vec<_>>(), p)
        }
    }
}

pub fn gcd_mod(a: &[Int], b: &[Int], p: &Int) -> ZPoly {
    let mut x = reduce(a, p);
    let mut y = reduce(b, p);
    while degree(&y).is_some() {
        let r = rem_mod(&x, &y, p);
        x = y;
        y = r;
    }
    monic_mod(&x, p)
}

/// `(g, s, t)` with `s a + t b = g` modulo a prime, `g` monic.
pub fn xgcd_mod(a: &[Int], b: &[Int], p: &Int) -> (ZPoly, ZPoly, ZPoly) {
    let (mut r0, mut r1) = (reduce(a, p), reduce(b, p));
    let (mut s0, mut s1) = (vec![Int::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![Int::one()]);
    while degree(&r1).is_some() {
        let (q, r) = divrem_mod(&r0, &r1, p);
        let s2 = reduce(&sub(&s0, &mul(&q, &s1)), p);
        let t2 = reduce(&sub(&t0, &mul(&q, &t1)), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    let d = degree(&r0).unwrap_or(0);
    let inv = mod_inverse(&r0[d], p).unwrap();
    let sc = |v: &[Int]| reduce(&v.iter().map(|c| c * &inv).collect::<Vec<_>>(), p);
    (sc(&r0), sc(&s0), sc(&t0))
}

pub fn powmod_mod(base: &[Int], mut e: Int, modulus: &[Int], p: &Int) -> ZPoly {
    let mut result = vec![Int::one()];
    let mut b = rem_mod(base, modulus, p);
    let two = BigInt::from(2);
    while e.is_positive() {
        if (&e % &two).is_one() {
            result = rem_mod(&mul(&result, &b), modulus, p);
        }
        b = rem_mod(&mul(&b, &b), modulus, p);
        e /= &two;
    }
    result
}

fn is_one_poly(a: &[Int]) -> bool {
    degree(a) == Some(0) && a[0].is_one()
}

/// Splits a squarefree product of irreducibles of degree `k` (odd `p`).
fn equal_degree_split(g: &ZPoly, k: usize, p: &Int, rng: &mut ChaCha8Rng, out: &mut Vec<ZPoly>) {
    let dg = degree(g).unwrap();
    if dg == k {
        out.push(g.clone());
        return;
    }
    let exp = (pow_int(p, k as u64) - 1u32) / 2u32;
    loop {
        let a: ZPoly = trim((0..dg).map(|_| BigInt::from(rng.gen::<u64>()).mod_floor(p)).collect());
        if degree(&a).is_none_or(|d| d == 0) {
            continue;
        }
        let mut b = powmod_mod(&a, exp.clone(), g, p);
        if b.is_empty() {
            b.push(Int::zero());
        }
        b[0] -= 1u32;
        let d = gcd_mod(&b, g, p);
        let dd = degree(&d).unwrap_or(0);
        if dd > 0 && dd < dg {
            let (q, _) = divrem_mod(g, &d, p);
            equal_degree_split(&d, k, p, rng, out);
            equal_degree_split(&monic_mod(&q, p), k, p, rng, out);
            return;
        }
    }
}

/// All monic polynomials of degree `k` over F_p (only used for tiny `p`).
fn monic_of_degree(k: usize, p: u64) -> Vec<ZPoly> {
    let mut out = Vec::new();
    let total = p.pow(k as u32);
    for idx in 0..total {
        let mut v = Vec::with_capacity(k + 1);
        let mut x = idx;
        for _ in 0..k {
            v.push(BigInt::from(x % p));
            x /= p;
        }
        v.push(Int::one());
        out.push(v);
    }
    out
}

/// Monic irreducible factors of `f` modulo `p` with multiplicities, sorted.
pub fn factor_mod_p(f: &[Int], p: &Int) -> Vec<(ZPoly, u32)> {
    let mut rest = monic_mod(f, p);
    let mut irreducibles: Vec<ZPoly> = Vec::new();
    let x: ZPoly = vec![Int::zero(), Int::one()];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut h = x.clone();
    let mut k = 0usize;
    while degree(&rest).unwrap_or(0) > 0 {
        k += 1;
        h = powmod_mod(&h, p.clone(), &rest, p);
        let g = gcd_mod(&sub(&h, &x), &rest, p);
        if degree(&g).unwrap_or(0) > 0 {
            // g is the squarefree product of the degree-k irreducibles of `rest`
            let mut found = Vec::new();
            if p == &BigInt::from(2) {
                for cand in monic_of_degree(k, 2) {
                    if degree(&rem_mod(&g, &cand, p)).is_none() {
                        found.push(cand);
                    }
                }
            } else {
                equal_degree_split(&g, k, p, &mut rng, &mut found);
            }
            irreducibles.extend(found);
            loop {
                let c = gcd_mod(&rest, &g, p);
                if is_one_poly(&c) {
                    break;
                }
                rest = monic_mod(&divrem_mod(&rest, &c, p).0, p);
            }
            h = rem_mod(&h, &rest, p);
        }
        if k > degree(f).unwrap_or(0) {
            break;
        }
    }
    let mut out = Vec::new();
    let fm = monic_mod(f, p);
    for g in irreducibles {
        let mut e = 0;
        let mut cur = fm.clone();
        loop {
            let (q, r) = divrem_mod(&cur, &g, p);
            if degree(&r).is_some() {
                break;
            }
            e += 1;
            cur = q;
        }
        out.push((g, e));
    }
    out.sort();
    out
}

/// Lifts `f = g h (mod p)` with monic coprime `g, h` to `mod p^k`.
fn lift_pair(f: &[Int], g: &[Int], h: &[Int], p: &Int, k: u32) -> (ZPoly, ZPoly) {
    let (one, s, _t) = xgcd_mod(g, h, p);
    assert!(is_one_poly(&one), "factors are not coprime modulo p");
    let mut g = reduce(g, p);
    let mut h = reduce(h, p);
    let mut pj = p.clone();
    for _ in 1..k {
        let next = &pj * p;
        let diff = reduce(&sub(f, &mul(&g, &h)), &next);
        let e: ZPoly = trim(diff.iter().map(|c| (c / &pj).mod_floor(p)).collect());
        // b = (e s) rem h, a = (e - b g)/h, so that a h + b g = e (mod p)
        let b = rem_mod(&mul(&e, &s), &h, p);
        let (a, r) = divrem_mod(&sub(&e, &mul(&b, &g)), &h, p);
        debug_assert!(degree(&r).is_none());
        let bump = |x: &ZPoly, y: &ZPoly| {
            let n = x.len().max(y.len());
            reduce(
                &(0..n)
                    .map(|i| x.get(i).cloned().unwrap_or_default() + &pj * y.get(i).cloned().unwrap_or_default())
                    .collect::<Vec<_>>(),
                &next,
            )
        };
        g = bump(&g, &a);
        h = bump(&h, &b);
        pj = next;
    }
    (g, h)
}

/// Lifts a factorization of monic `f` into pairwise coprime monic factors modulo `p` to `mod p^k`.
pub fn hensel_lift_factors(f: &[Int], factors: &[ZPoly], p: &Int, k: u32) -> Vec<ZPoly> {
    let modulus = pow_int(p, k as u64);
    if factors.len() == 1 {
        return vec![reduce(f, &modulus)];
    }
    let first = factors[0].clone();
    let rest = factors[1..].iter().fold(vec![Int::one()], |acc, g| mul_mod(&acc, g, p));
    let (g, h) = lift_pair(f, &first, &rest, p, k);
    let mut out = vec![g];
    out.extend(hensel_lift_factors(&h, &factors[1..], p, k));
    out
}

/// Power of a polynomial modulo a prime.
pub fn pow_mod(a: &[Int], e: u32, p: &Int) -> ZPoly {
    (0..e).fold(vec![Int::one()], |acc, _| mul_mod(&acc, a, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resultant_and_discriminant() {
        assert_eq!(discriminant(&from_i64(&[-2, 0, 1])), BigInt::from(8));
        assert_eq!(discriminant(&from_i64(&[1, 1, 1])), BigInt::from(-3));
        // x^4 + x^3 + x^2 + x + 1 has discriminant 125
        assert_eq!(discriminant(&from_i64(&[1, 1, 1, 1, 1])), BigInt::from(125));
        // norm of 1 + sqrt2 is -1
        assert_eq!(resultant(&from_i64(&[-2, 0, 1]), &from_i64(&[1, 1])), BigInt::from(-1));
    }

    #[test]
    fn factoring_mod_p() {
        let p = BigInt::from(7);
        let f = factor_mod_p(&from_i64(&[-2, 0, 1]), &p);
        assert_eq!(f, vec![(from_i64(&[3, 1]), 1), (from_i64(&[4, 1]), 1)]);
        let f = factor_mod_p(&from_i64(&[-2, 0, 1]), &BigInt::from(2));
        assert_eq!(f, vec![(from_i64(&[0, 1]), 2)]);
        // cyclotomic 5 mod 11 splits completely, mod 19 into quadratics, mod 2 inert
        let c5 = from_i64(&[1, 1, 1, 1, 1]);
        assert_eq!(factor_mod_p(&c5, &BigInt::from(11)).len(), 4);
        let q = factor_mod_p(&c5, &BigInt::from(19));
        assert_eq!(q.len(), 2);
        assert!(q.iter().all(|(g, e)| degree(g) == Some(2) && *e == 1));
        assert_eq!(factor_mod_p(&c5, &BigInt::from(2)).len(), 1);
        assert_eq!(factor_mod_p(&c5, &BigInt::from(5)), vec![(from_i64(&[4, 1]), 4)]);
    }

    #[test]
    fn lifting_reproduces_f() {
        let p = BigInt::from(19);
        let c5 = from_i64(&[1, 1, 1, 1, 1]);
        let fac: Vec<ZPoly> = factor_mod_p(&c5, &p).into_iter().map(|(g, _)| g).collect();
        let lifted = hensel_lift_factors(&c5, &fac, &p, 12);
        let m = pow_int(&p, 12);
        let prod = lifted.iter().fold(vec![Int::one()], |acc, g| mul_mod(&acc, g, &m));
        assert_eq!(prod, reduce(&c5, &m));
    }
}
