//! Certified isolation of the complex roots of an integer polynomial.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{Int, Rat};
use crate::error::{Error, Result};
use crate::interval::{round_down, round_up, Interval};

/// Rectangle in the complex plane with interval sides.
#[derive(Clone, Debug)]
pub struct CInterval {
    pub re: Interval,
    pub im: Interval,
}

impl CInterval {
    pub fn from_rat(q: &Rat) -> Self {
        CInterval { re: Interval::point(q.clone()), im: Interval::zero() }
    }

    pub fn add(&self, o: &CInterval) -> CInterval {
        CInterval { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn mul(&self, o: &CInterval) -> CInterval {
        CInterval {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    /// Enclosure of `|z|^2`.
    pub fn abs_sq(&self) -> Interval {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn round(&self, bits: u32) -> CInterval {
        CInterval { re: self.re.round(bits), im: self.im.round(bits) }
    }
}

/// A disk `|z - center| <= radius` known to contain exactly one root.
#[derive(Clone, Debug)]
pub struct RootEnclosure {
    pub re: Rat,
    pub im: Rat,
    pub radius: Rat,
    /// The enclosed root is real (the center then lies on the real axis).
    pub real: bool,
}

impl RootEnclosure {
    pub fn as_cinterval(&self) -> CInterval {
        let r = &self.radius;
        let im = if self.real {
            Interval::zero()
        } else {
            Interval::new(&self.im - r, &self.im + r)
        };
        CInterval { re: Interval::new(&self.re - r, &self.re + r), im }
    }

    pub fn approx(&self) -> (f64, f64) {
        (self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
}

/// Upper bound for `sqrt(q)` with `bits` fractional bits.
pub fn sqrt_upper(q: &Rat, bits: u32) -> Rat {
    let scale = BigInt::one() << (2 * bits);
    let n = (q * Rat::from_integer(scale)).ceil().to_integer();
    let mut r = n.sqrt();
    if &r * &r < n {
        r += 1;
    }
    Rat::new(r, BigInt::one() << bits)
}

type C = (f64, f64);

fn cmul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cdiv(a: C, b: C) -> C {
    let den = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / den, (a.1 * b.0 - a.0 * b.1) / den)
}

/// Durand-Kerner approximations of all roots of a monic polynomial.
fn durand_kerner(m: &[f64]) -> Vec<C> {
    let d = m.len() - 1;
    let eval = |z: C| m.iter().rev().fold((0.0, 0.0), |acc, &c| {
        let t = cmul(acc, z);
        (t.0 + c, t.1)
    });
    let bound = 1.0 + m[..d].iter().fold(0.0f64, |a, c| a.max(c.abs()));
    let mut z: Vec<C> = (0..d)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
            (0.5 * bound * ang.cos(), 0.5 * bound * ang.sin())
        })
        .collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..d {
            let mut den = (1.0, 0.0);
            for j in 0..d {
                if i != j {
                    den = cmul(den, (z[i].0 - z[j].0, z[i].1 - z[j].1));
                }
            }
            let step = cdiv(eval(z[i]), den);
            z[i] = (z[i].0 - step.0, z[i].1 - step.1);
            delta = delta.max(step.0.abs() + step.1.abs());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

// exact complex rational helpers
type Q = (Rat, Rat);

fn qmul(a: &Q, b: &Q) -> Q {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn qeval(m: &[Int], z: &Q) -> (Q, Q) {
    // value and derivative by Horner
    let mut v: Q = (Rat::zero(), Rat::zero());
    let mut dv: Q = (Rat::zero(), Rat::zero());
    for c in m.iter().rev() {
        dv = qmul(&dv, z);
        dv = (&dv.0 + &v.0, &dv.1 + &v.1);
        v = qmul(&v, z);
        v.0 += Rat::from_integer(c.clone());
    }
    (v, dv)
}

fn qabs_sq(a: &Q) -> Rat {
    &a.0 * &a.0 + &a.1 * &a.1
}

fn from_f64(x: f64, bits: u32) -> Rat {
    let r = Rat::from_float(x).unwrap_or_else(Rat::zero);
    round_down(&r, bits)
}

fn newton_refine(m: &[Int], z0: C, real: bool, bits: u32) -> Q {
    let mut z: Q = (from_f64(z0.0, 60), if real { Rat::zero() } else { from_f64(z0.1, 60) });
    let tol = Rat::new(BigInt::one(), BigInt::one() << bits);
    for _ in 0..200 {
        let (f, df) = qeval(m, &z);
        let den = qabs_sq(&df);
        if den.is_zero() {
            break;
        }
        // f/df = f * conj(df) / |df|^2
        let num = qmul(&f, &(df.0.clone(), -df.1.clone()));
        let step = (&num.0 / &den, &num.1 / &den);
        let wb = bits + 16;
        z = (round_down(&(&z.0 - &step.0), wb), if real { Rat::zero() } else { round_down(&(&z.1 - &step.1), wb) });
        if step.0.abs() + step.1.abs() < tol {
            break;
        }
    }
    z
}

/// Isolates all roots of a monic squarefree integer polynomial. Real roots
/// come first (by increasing real part), then one representative of each
/// complex-conjugate pair (positive imaginary part).
pub fn isolate_roots(m: &[Int], bits: u32) -> Result<Vec<RootEnclosure>> {
    let d = m.len() - 1;
    if d == 1 {
        let r = Rat::from_integer(-m[0].clone());
        return Ok(vec![RootEnclosure { re: r, im: Rat::zero(), radius: Rat::zero(), real: true }]);
    }
    let mf: Vec<f64> = m.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    let approx = durand_kerner(&mf);
    let scale = approx.iter().fold(1.0f64, |a, z| a.max(z.0.abs() + z.1.abs()));
    let mut reals: Vec<f64> = Vec::new();
    let mut uppers: Vec<C> = Vec::new();
    for z in &approx {
        if z.1.abs() < 1e-7 * scale {
            reals.push(z.0);
        } else if z.1 > 0.0 {
            uppers.push(*z);
        }
    }
    if reals.len() + 2 * uppers.len() != d {
        return Err(Error::InsufficientPrecision("root approximation did not separate conjugate pairs".into()));
    }
    reals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    uppers.sort_by(|a, b| (a.0, a.1).partial_cmp(&(b.0, b.1)).unwrap());

    let mut out = Vec::with_capacity(reals.len() + uppers.len());
    let dq = Rat::from_integer(BigInt::from(d));
    for (z0, real) in reals.iter().map(|&x| ((x, 0.0), true)).chain(uppers.iter().map(|&z| (z, false))) {
        let z = newton_refine(m, z0, real, bits);
        let (f, df) = qeval(m, &z);
        let fd = qabs_sq(&df);
        if fd.is_zero() {
            return Err(Error::InsufficientPrecision("derivative vanishes at a root approximation".into()));
        }
        let rho_sq = &dq * &dq * qabs_sq(&f) / fd;
        let radius = round_up(&sqrt_upper(&rho_sq, bits + 8), bits + 8);
        out.push(RootEnclosure { re: z.0, im: z.1, radius, real });
    }
    // disjointness of all d disks (complex ones together with their conjugates)
    let mut disks: Vec<(Rat, Rat, Rat)> = Vec::new();
    for r in &out {
        disks.push((r.re.clone(), r.im.clone(), r.radius.clone()));
        if !r.real {
            if r.im <= r.radius {
                return Err(Error::InsufficientPrecision("complex root disk meets the real axis".into()));
            }
            disks.push((r.re.clone(), -r.im.clone(), r.radius.clone()));
        }
    }
    for i in 0..disks.len() {
        for j in i + 1..disks.len() {
            let dx = &disks[i].0 - &disks[j].0;
            let dy = &disks[i].1 - &disks[j].1;
            let rr = &disks[i].2 + &disks[j].2;
            if &dx * &dx + &dy * &dy <= &rr * &rr {
                return Err(Error::InsufficientPrecision("root disks overlap".into()));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::upoly::from_i64;

    #[test]
    fn isolates_quadratic_and_cyclotomic_roots() {
        let r = isolate_roots(&from_i64(&[-2, 0, 1]), 200).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|x| x.real));
        assert!((r[1].approx().0 - 2f64.sqrt()).abs() < 1e-14);
        let c = isolate_roots(&from_i64(&[1, 1, 1, 1, 1]), 200).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|x| !x.real));
        assert!(c[0].radius < Rat::new(BigInt::one(), BigInt::one() << 150u32));
    }
}
