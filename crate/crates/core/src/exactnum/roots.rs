//! Certified isolation of the complex roots of a square-free rational polynomial.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::ball::ComplexBall;
use super::dyadic::{Dyadic, Round};
use super::ratpoly;
use crate::error::{Error, Result};

const MAX_PREC: u32 = 8192;

fn horner(p: &[BigRational], z: &ComplexBall, prec: u32) -> ComplexBall {
    let mut acc = ComplexBall::zero(prec);
    for c in p.iter().rev() {
        acc = acc.mul(z).add(&ComplexBall::from_rational(c, prec));
    }
    acc
}

/// Simultaneous (Aberth) iteration in double precision.
fn aberth(p: &[BigRational]) -> Vec<Complex64> {
    let n = p.len() - 1;
    let lead = p[n].to_f64().unwrap_or(1.0);
    let c: Vec<Complex64> = p.iter().map(|x| Complex64::new(x.to_f64().unwrap_or(0.0) / lead, 0.0)).collect();
    let dc: Vec<Complex64> = (1..=n).map(|i| c[i] * i as f64).collect();
    let eval = |cs: &[Complex64], z: Complex64| cs.iter().rev().fold(Complex64::zero(), |a, &k| a * z + k);
    let bound = 1.0 + c[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(bound * 0.5 + 0.1, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let pv = eval(&c, z[i]);
            let dv = eval(&dc, z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dv;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn newton_refine(p: &[BigRational], dp: &[BigRational], z0: &ComplexBall, prec: u32) -> ComplexBall {
    let wp = prec + 32;
    let mut z = z0.midpoint().with_precision(wp);
    for _ in 0..64 {
        let pv = horner(p, &z, wp);
        let dv = horner(dp, &z, wp);
        let step = match pv.div(&dv) {
            Some(s) => s,
            None => break,
        };
        z = z.sub(&step).midpoint();
        let size = step.abs_upper();
        if size.is_zero() || size.log2_abs() < -(prec as f64) - 8.0 {
            break;
        }
    }
    z
}

/// Radius `n |p(z)| / |p'(z)|` of a disk around `z` that contains a root.
fn certify(p: &[BigRational], dp: &[BigRational], z: &ComplexBall, prec: u32) -> Option<ComplexBall> {
    let n = (p.len() - 1) as i64;
    let pv = horner(p, z, prec + 32);
    let dv = horner(dp, z, prec + 32);
    let lo = dv.abs_lower();
    if lo.is_zero() {
        return None;
    }
    let num = (&pv.abs_upper() * &Dyadic::from_int(n)).to_rational();
    let rad = Dyadic::from_rational(&(num / lo.to_rational()), 62, Round::Ceil);
    Some(z.midpoint().with_radius(rad).with_precision(prec + 32))
}

/// Isolating disks for every root, ordered: real roots descending, then
/// conjugate pairs (positive imaginary part first) by decreasing real part.
pub fn isolate(minpoly: &[BigRational], prec: u32) -> Result<Vec<ComplexBall>> {
    let n = minpoly.len() - 1;
    if n == 1 {
        let root = -(&minpoly[0] / &minpoly[1]);
        return Ok(vec![ComplexBall::from_rational(&root, prec)]);
    }
    let dp = ratpoly::derivative(minpoly);
    let approx = aberth(minpoly);
    let mut p = prec.max(64);
    let mut mids: Vec<ComplexBall> = approx
        .iter()
        .map(|z| ComplexBall::exact(Dyadic::from_f64(z.re), Dyadic::from_f64(z.im), 64))
        .collect();
    while p <= MAX_PREC {
        mids = mids.iter().map(|z| newton_refine(minpoly, &dp, z, p)).collect();
        let disks: Option<Vec<ComplexBall>> = mids.iter().map(|z| certify(minpoly, &dp, z, p)).collect();
        if let Some(disks) = disks {
            let separated = (0..n).all(|i| (i + 1..n).all(|j| disks[i].disjoint(&disks[j])));
            if separated && disks.iter().all(|d| d.log2_radius() <= -(prec as f64)) {
                if let Some(ordered) = classify(disks) {
                    return Ok(ordered);
                }
            }
        }
        p *= 2;
    }
    Err(Error::PrecisionExhausted("roots of the minimal polynomial could not be separated".into()))
}

fn classify(disks: Vec<ComplexBall>) -> Option<Vec<ComplexBall>> {
    let n = disks.len();
    let mut real = Vec::new();
    let mut upper = Vec::new();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] {
            continue;
        }
        let c = disks[i].conj();
        let hits: Vec<usize> = (0..n).filter(|&j| c.overlaps(&disks[j])).collect();
        if hits.len() != 1 {
            return None;
        }
        let j = hits[0];
        used[i] = true;
        if j == i {
            let im = disks[i].im().abs();
            let ball = ComplexBall::exact(disks[i].re().clone(), Dyadic::zero(), disks[i].precision())
                .with_radius(disks[i].radius() + &im);
            real.push(ball);
        } else {
            used[j] = true;
            let top = if disks[i].im().is_negative() { disks[j].clone() } else { disks[i].clone() };
            upper.push(top);
        }
    }
    real.sort_by(|a, b| b.re().cmp(a.re()));
    upper.sort_by(|a, b| b.re().cmp(a.re()).then_with(|| a.im().cmp(b.im())));
    let mut out = real;
    for u in upper {
        let c = u.conj();
        out.push(u);
        out.push(c);
    }
    Some(out)
}

/// Re-certify a single root near `seed` to `prec` bits. The result always lies in `seed`.
pub fn refine(minpoly: &[BigRational], seed: &ComplexBall, prec: u32) -> ComplexBall {
    if minpoly.len() == 2 {
        let root = -(&minpoly[0] / &minpoly[1]);
        return ComplexBall::from_rational(&root, prec);
    }
    let dp = ratpoly::derivative(minpoly);
    let real = seed.is_real();
    let mut p = prec;
    while p <= MAX_PREC.max(prec * 2) {
        let z = newton_refine(minpoly, &dp, seed, p);
        let z = if real { ComplexBall::exact(z.re().clone(), Dyadic::zero(), z.precision()) } else { z };
        if let Some(d) = certify(minpoly, &dp, &z, p) {
            if seed.contains_ball(&d) && d.log2_radius() <= -(prec as f64) {
                return d;
            }
        }
        p *= 2;
    }
    seed.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn r(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from(BigInt::from(x))).collect()
    }

    #[test]
    fn sqrt_two_ordering() {
        let roots = isolate(&r(&[-2, 0, 1]), 80).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].is_real() && roots[1].is_real());
        assert!((roots[0].re().to_f64() - 2f64.sqrt()).abs() < 1e-15);
        assert!(roots[0].log2_radius() <= -80.0);
    }

    #[test]
    fn gaussian_roots_pair() {
        let roots = isolate(&r(&[1, 0, 1]), 64).unwrap();
        assert!(roots[0].contains_f64(0.0, 1.0, 0.0));
        assert!(roots[1].contains_f64(0.0, -1.0, 0.0));
    }

    #[test]
    fn cubic_mixed_roots_and_refinement() {
        // x^3 - 2: one real root, one pair
        let roots = isolate(&r(&[-2, 0, 0, 1]), 64).unwrap();
        assert!(roots[0].is_real());
        assert!(roots[1].im().signum() > 0);
        let fine = refine(&r(&[-2, 0, 0, 1]), &roots[0], 300);
        assert!(fine.log2_radius() <= -300.0);
        assert!(roots[0].contains_ball(&fine));
    }
}
