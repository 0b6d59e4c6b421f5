//! Integer lattices: echelon forms, kernels, LLL reduction and short-vector
//! enumeration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{round_div, Int, Rat};
use crate::error::{Error, Result};

/// Row-reduces `rows` over the integers on the first `ncols` columns using
/// unimodular row operations; returns the number of pivot rows.
fn echelon_in_place(rows: &mut [Vec<Int>], ncols: usize) -> usize {
    let mut rank = 0;
    for c in 0..ncols {
        if rank == rows.len() {
            break;
        }
        loop {
            // smallest nonzero entry in column c at or below `rank`
            let piv = (rank..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()));
            let Some(piv) = piv else { break };
            rows.swap(rank, piv);
            let mut done = true;
            for i in rank + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[rank][c]);
                let (head, tail) = rows.split_at_mut(i);
                let pr = &head[rank];
                for (x, y) in tail[0].iter_mut().zip(pr.iter()) {
                    *x -= &q * y;
                }
                if !tail[0][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if (rank..rows.len()).any(|i| !rows[i][c].is_zero()) {
            rank += 1;
        }
    }
    rank
}

/// A basis of the integer kernel `{x in Z^n : A x = 0}` for an `m x n` matrix.
pub fn integer_kernel(a: &[Vec<Int>], n: usize) -> Vec<Vec<Int>> {
    let m = a.len();
    let mut rows: Vec<Vec<Int>> = (0..n)
        .map(|j| {
            let mut r: Vec<Int> = a.iter().map(|row| row[j].clone()).collect();
            r.extend((0..n).map(|k| if k == j { Int::from(1) } else { Int::zero() }));
            r
        })
        .collect();
    let rank = echelon_in_place(&mut rows, m);
    rows[rank..].iter().map(|r| r[m..].to_vec()).collect()
}

/// Index of the lattice spanned by `gens` in `Z^dim` (0 if not full rank).
pub fn lattice_index(gens: &[Vec<Int>], dim: usize) -> Int {
    let mut rows = gens.to_vec();
    let rank = echelon_in_place(&mut rows, dim);
    if rank < dim {
        return Int::zero();
    }
    (0..dim).fold(Int::from(1), |acc, i| acc * rows[i][i].abs())
}

fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).fold(Int::zero(), |acc, (x, y)| acc + x * y)
}

/// LLL reduction (delta = 3/4) of linearly independent integer vectors, in
/// exact integer arithmetic.
pub fn lll(basis: &[Vec<Int>]) -> Result<Vec<Vec<Int>>> {
    let n = basis.len();
    if n <= 1 {
        return Ok(basis.to_vec());
    }
    let mut b = basis.to_vec();
    // 1-based: d[0] = 1, d[i] Gram determinant of the first i vectors
    let mut d = vec![Int::zero(); n + 1];
    let mut lam = vec![vec![Int::zero(); n + 1]; n + 1];
    d[0] = Int::from(1);
    d[1] = dot(&b[0], &b[0]);
    if d[1].is_zero() {
        return Err(Error::Precondition("lattice basis is linearly dependent".into()));
    }
    let mut k = 2usize;
    let mut kmax = 1usize;

    fn red(k: usize, l: usize, b: &mut [Vec<Int>], d: &[Int], lam: &mut [Vec<Int>]) {
        let two_l = &lam[k][l] * 2u32;
        if two_l.abs() > d[l] {
            let q = round_div(&lam[k][l], &d[l]);
            let bl = b[l - 1].clone();
            for (x, y) in b[k - 1].iter_mut().zip(bl.iter()) {
                *x -= &q * y;
            }
            let t = &q * &d[l];
            lam[k][l] -= t;
            for i in 1..l {
                let t = &q * &lam[l][i];
                lam[k][i] -= t;
            }
        }
    }

    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&b[k - 1], &b[j - 1]);
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::Precondition("lattice basis is linearly dependent".into()));
                    }
                    d[k] = u;
                }
            }
        }
        loop {
            red(k, k - 1, &mut b, &d, &mut lam);
            let lhs = &d[k] * &d[k - 2] * 4u32;
            let rhs = &d[k - 1] * &d[k - 1] * 3u32 - &lam[k][k - 1] * &lam[k][k - 1] * 4u32;
            if lhs < rhs {
                b.swap(k - 1, k - 2);
                for j in 1..k - 1 {
                    let t = lam[k][j].clone();
                    lam[k][j] = lam[k - 1][j].clone();
                    lam[k - 1][j] = t;
                }
                let l = lam[k][k - 1].clone();
                let bb = (&d[k - 2] * &d[k] + &l * &l) / &d[k - 1];
                for i in k + 1..=kmax {
                    let t = lam[i][k].clone();
                    lam[i][k] = (&d[k] * &lam[i][k - 1] - &l * &t) / &d[k - 1];
                    lam[i][k - 1] = (&bb * &t + &l * &lam[i][k]) / &d[k];
                }
                d[k - 1] = bb;
                if k > 2 {
                    k -= 1;
                }
            } else {
                for l in (1..k - 1).rev() {
                    red(k, l, &mut b, &d, &mut lam);
                }
                k += 1;
                break;
            }
        }
    }
    Ok(b)
}

/// Fincke-Pohst enumeration: visits every nonzero integer coefficient vector
/// `y` (one of each `±y` pair) with `y^T G y <= radius`, where `G` is a
/// positive definite Gram matrix. The visitor returns `true` to stop early.
/// Returns `false` if the node budget ran out before the search completed.
pub fn enumerate_short(
    gram: &[Vec<f64>],
    radius: f64,
    node_budget: usize,
    visit: &mut dyn FnMut(&[i64]) -> bool,
) -> bool {
    let n = gram.len();
    let mut q = gram.to_vec();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let bound = radius * (1.0 + 1e-9) + 1e-12;
    let mut y = vec![0i64; n];
    let mut nodes = 0usize;
    let mut stopped = false;

    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        acc: f64,
        higher_zero: bool,
        q: &[Vec<f64>],
        bound: f64,
        y: &mut [i64],
        nodes: &mut usize,
        budget: usize,
        stopped: &mut bool,
        visit: &mut dyn FnMut(&[i64]) -> bool,
    ) -> bool {
        let n = y.len();
        let c: f64 = -(i + 1..n).map(|j| q[i][j] * y[j] as f64).sum::<f64>();
        let rem = bound - acc;
        if rem < 0.0 {
            return true;
        }
        let r = (rem / q[i][i]).sqrt();
        let mut lo = (c - r).ceil() as i64;
        let hi = (c + r).floor() as i64;
        if higher_zero {
            lo = lo.max(0);
        }
        for v in lo..=hi {
            *nodes += 1;
            if *nodes > budget {
                return false;
            }
            y[i] = v;
            let t = acc + q[i][i] * (v as f64 - c) * (v as f64 - c);
            if t > bound {
                continue;
            }
            let hz = higher_zero && v == 0;
            if i == 0 {
                if !hz && visit(y) {
                    *stopped = true;
                    y[i] = 0;
                    return true;
                }
            } else if !rec(i - 1, t, hz, q, bound, y, nodes, budget, stopped, visit) || *stopped {
                y[i] = 0;
                return *stopped;
            }
        }
        y[i] = 0;
        true
    }

    if n == 0 {
        return true;
    }
    rec(n - 1, 0.0, true, &q, bound, &mut y, &mut nodes, node_budget, &mut stopped, visit)
}

/// Integer combination `sum y_i b_i`.
pub fn combine(basis: &[Vec<Int>], y: &[i64]) -> Vec<Int> {
    let m = basis.first().map_or(0, |b| b.len());
    let mut out = vec![Int::zero(); m];
    for (bi, &yi) in basis.iter().zip(y) {
        if yi == 0 {
            continue;
        }
        let c = BigInt::from(yi);
        for (o, x) in out.iter_mut().zip(bi) {
            *o += &c * x;
        }
    }
    out
}

/// Euclidean Gram matrix of integer vectors as floats.
pub fn gram_f64(basis: &[Vec<Int>]) -> Vec<Vec<f64>> {
    basis
        .iter()
        .map(|a| basis.iter().map(|b| dot(a, b).to_f64().unwrap_or(f64::INFINITY)).collect())
        .collect()
}

/// Determinant of a square rational matrix by Gaussian elimination.
pub fn rat_det(mut a: Vec<Vec<Rat>>) -> Rat {
    let n = a.len();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rat::zero();
        };
        if piv != c {
            a.swap(piv, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

/// Solves the square system `a x = b` over the rationals, `None` if singular.
pub fn rat_solve(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = a.len();
    for c in 0..n {
        let piv = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(piv, c);
        b.swap(piv, c);
        let inv = a[c][c].recip();
        for j in c..n {
            a[c][j] *= &inv;
        }
        b[c] *= &inv;
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
            let t = &f * &b[c];
            b[i] -= t;
        }
    }
    Some(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn v(xs: &[i64]) -> Vec<Int> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn kernel_of_single_form() {
        let a = vec![v(&[1, 2, 3])];
        let k = integer_kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for x in &k {
            assert!(dot(&a[0], x).is_zero());
        }
        // the kernel basis spans the full kernel: index 1 after appending a complement
        let mut gens = k.clone();
        gens.push(v(&[1, 0, 0]));
        assert_eq!(lattice_index(&gens, 3), int(1));
    }

    #[test]
    fn lll_classic_example() {
        let b = vec![v(&[1, 1, 1]), v(&[-1, 0, 2]), v(&[3, 5, 6])];
        let r = lll(&b).unwrap();
        assert_eq!(lattice_index(&r, 3), lattice_index(&b, 3));
        let norms: Vec<Int> = r.iter().map(|x| dot(x, x)).collect();
        assert!(norms[0] <= int(3));
    }

    #[test]
    fn enumeration_counts_small_vectors() {
        let g = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let mut count = 0;
        assert!(enumerate_short(&g, 1.0, 10_000, &mut |_| {
            count += 1;
            false
        }));
        assert_eq!(count, 2);
        let mut count = 0;
        enumerate_short(&g, 2.0, 10_000, &mut |_| {
            count += 1;
            false
        });
        assert_eq!(count, 4);
    }
}
