//! Dense univariate polynomials over Q, coefficients ascending.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type RatPoly = Vec<BigRational>;

pub fn trim(p: &mut RatPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn degree(p: &[BigRational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn derivative(p: &[BigRational]) -> RatPoly {
    let mut d: RatPoly = p.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from(BigInt::from(i))).collect();
    trim(&mut d);
    d
}

pub fn mul(a: &[BigRational], b: &[BigRational]) -> RatPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

pub fn sub(a: &[BigRational], b: &[BigRational]) -> RatPoly {
    let n = a.len().max(b.len());
    let mut out: RatPoly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; panics on a zero divisor.
pub fn divrem(a: &[BigRational], b: &[BigRational]) -> (RatPoly, RatPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    let mut r: RatPoly = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lead;
        for (j, bj) in b.iter().enumerate().take(db + 1) {
            r[dr - db + j] -= &c * bj;
        }
        q[dr - db] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn monic(p: &[BigRational]) -> RatPoly {
    match degree(p) {
        None => Vec::new(),
        Some(d) => {
            let l = p[d].clone();
            p[..=d].iter().map(|c| c / &l).collect()
        }
    }
}

/// Monic greatest common divisor.
pub fn gcd(a: &[BigRational], b: &[BigRational]) -> RatPoly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inverse_mod(a: &[BigRational], m: &[BigRational]) -> Option<RatPoly> {
    let mut r0: RatPoly = m.to_vec();
    let mut r1: RatPoly = divrem(a, m).1;
    let mut s0: RatPoly = Vec::new();
    let mut s1: RatPoly = vec![BigRational::one()];
    trim(&mut r0);
    if r1.is_empty() {
        return None;
    }
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if degree(&r0) != Some(0) {
        return None;
    }
    let c = r0[0].clone();
    let inv: RatPoly = s0.iter().map(|x| x / &c).collect();
    Some(divrem(&inv, m).1)
}

pub fn eval(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: &[i64]) -> RatPoly {
        v.iter().map(|&x| BigRational::from(BigInt::from(x))).collect()
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (x-1)(x+2) and (x-1)(x-3)
        let g = gcd(&r(&[-2, 1, 1]), &r(&[3, -4, 1]));
        assert_eq!(g, r(&[-1, 1]));
    }

    #[test]
    fn inverse_modulo_quadratic() {
        // (1 + x)^{-1} mod x^2 - 2 = (x - 1)
        let inv = inverse_mod(&r(&[1, 1]), &r(&[-2, 0, 1])).unwrap();
        assert_eq!(inv, r(&[-1, 1]));
        assert!(inverse_mod(&r(&[0, 1]), &r(&[0, 0, 1])).is_none());
    }

    #[test]
    fn division_identity() {
        let a = r(&[5, 0, 3, 1, 7]);
        let b = r(&[1, 2, 1]);
        let (q, rem) = divrem(&a, &b);
        let back = sub(&a, &mul(&q, &b));
        assert_eq!(back, rem);
        assert!(degree(&rem).is_none_or(|d| d < 2));
    }
}
