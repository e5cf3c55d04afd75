use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ball::ComplexBall;
use super::dyadic::{Dyadic, Round};
use super::{ratpoly, roots};
use crate::error::{Error, Result};

const STORED_PREC: u32 = 128;

struct FieldData {
    /// Monic minimal polynomial, ascending coefficients.
    minpoly: Vec<BigRational>,
    embeddings: Vec<ComplexBall>,
}

/// A simple number field `Q[θ]/(m(θ))`. Cloning is cheap.
#[derive(Clone)]
pub struct NumberField(Arc<FieldData>);

impl NumberField {
    /// Build from the ascending coefficients of a monic square-free polynomial.
    pub fn new(minpoly: Vec<BigRational>) -> Result<Self> {
        let mut m = minpoly;
        ratpoly::trim(&mut m);
        if m.len() < 2 {
            return Err(Error::Invalid("minimal polynomial must have degree at least 1".into()));
        }
        if !m.last().unwrap().is_one() {
            return Err(Error::Invalid("minimal polynomial must be monic".into()));
        }
        let g = ratpoly::gcd(&m, &ratpoly::derivative(&m));
        if g.len() > 1 {
            return Err(Error::Invalid("minimal polynomial is not square-free".into()));
        }
        let embeddings = roots::isolate(&m, STORED_PREC)?;
        Ok(NumberField(Arc::new(FieldData { minpoly: m, embeddings })))
    }

    pub fn rationals() -> Self {
        NumberField::new(vec![BigRational::zero(), BigRational::one()]).expect("Q is a field")
    }

    pub fn degree(&self) -> usize {
        self.0.minpoly.len() - 1
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn minpoly(&self) -> &[BigRational] {
        &self.0.minpoly
    }

    pub fn same(&self, other: &NumberField) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.minpoly == other.0.minpoly
    }

    /// Ball of radius at most `2^-prec` around the `j`-th root of the minimal polynomial.
    pub fn embedding(&self, j: usize, prec: u32) -> ComplexBall {
        let stored = &self.0.embeddings[j];
        if prec <= STORED_PREC - 8 {
            return stored.clone();
        }
        roots::refine(&self.0.minpoly, stored, prec)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.clone(), coords: vec![BigRational::zero(); self.degree()] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_rational(BigRational::one())
    }

    pub fn from_int(&self, v: i64) -> FieldElement {
        self.from_rational(BigRational::from(BigInt::from(v)))
    }

    pub fn from_bigint(&self, v: BigInt) -> FieldElement {
        self.from_rational(BigRational::from(v))
    }

    pub fn from_rational(&self, v: BigRational) -> FieldElement {
        let mut coords = vec![BigRational::zero(); self.degree()];
        coords[0] = v;
        FieldElement { field: self.clone(), coords }
    }

    /// The generator θ.
    pub fn generator(&self) -> FieldElement {
        if self.is_rational() {
            return self.from_rational(-self.0.minpoly[0].clone());
        }
        let mut coords = vec![BigRational::zero(); self.degree()];
        coords[1] = BigRational::one();
        FieldElement { field: self.clone(), coords }
    }

    pub fn element(&self, coords: Vec<BigRational>) -> Result<FieldElement> {
        if coords.len() > self.degree() {
            let (_, r) = ratpoly::divrem(&coords, &self.0.minpoly);
            return self.element(r);
        }
        let mut c = coords;
        c.resize(self.degree(), BigRational::zero());
        Ok(FieldElement { field: self.clone(), coords: c })
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for NumberField {}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({:?})", self.0.minpoly.iter().map(|c| c.to_string()).collect::<Vec<_>>())
    }
}

/// An element of a [`NumberField`] in power-basis coordinates.
#[derive(Clone)]
pub struct FieldElement {
    field: NumberField,
    coords: Vec<BigRational>,
}

impl FieldElement {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// The value when the element lies in Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// True when every coordinate is an integer.
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// Gcd of the (integer) coordinates' numerators.
    pub fn content(&self) -> BigInt {
        self.coords.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
    }

    pub fn scale(&self, k: &BigRational) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|c| c * k).collect() }
    }

    pub fn scale_int(&self, k: &BigInt) -> FieldElement {
        self.scale(&BigRational::from(k.clone()))
    }

    fn check(&self, other: &FieldElement) {
        assert!(self.field.same(&other.field), "elements of different number fields");
    }

    pub fn add(&self, o: &FieldElement) -> FieldElement {
        self.check(o);
        FieldElement { field: self.field.clone(), coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &FieldElement) -> FieldElement {
        self.check(o);
        FieldElement { field: self.field.clone(), coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|a| -a).collect() }
    }

    pub fn mul(&self, o: &FieldElement) -> FieldElement {
        self.check(o);
        let h = self.coords.len();
        if h == 1 {
            return FieldElement { field: self.field.clone(), coords: vec![&self.coords[0] * &o.coords[0]] };
        }
        let mut prod = vec![BigRational::zero(); 2 * h - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        // reduce with the monic minimal polynomial
        let m = self.field.minpoly();
        for k in (h..prod.len()).rev() {
            if prod[k].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut prod[k], BigRational::zero());
            for (j, mj) in m.iter().enumerate().take(h) {
                if !mj.is_zero() {
                    prod[k - h + j] -= &c * mj;
                }
            }
        }
        prod.truncate(h);
        FieldElement { field: self.field.clone(), coords: prod }
    }

    pub fn inv(&self) -> Option<FieldElement> {
        if self.is_zero() {
            return None;
        }
        if self.coords.len() == 1 {
            return Some(FieldElement { field: self.field.clone(), coords: vec![self.coords[0].recip()] });
        }
        let inv = ratpoly::inverse_mod(&self.coords, self.field.minpoly())?;
        self.field.element(inv).ok()
    }

    pub fn div(&self, o: &FieldElement) -> Option<FieldElement> {
        o.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, mut n: u64) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Ball containing `σ_j(self)`.
    pub fn embed(&self, j: usize, prec: u32) -> ComplexBall {
        if let Some(r) = self.as_rational() {
            return ComplexBall::from_rational(r, prec);
        }
        let guard = self.coords.iter().map(|c| c.numer().bits() as u32).max().unwrap_or(0) + 16;
        let theta = self.field.embedding(j, prec + guard);
        let wp = prec + guard;
        let mut acc = ComplexBall::zero(wp);
        for c in self.coords.iter().rev() {
            acc = acc.mul(&theta).add(&ComplexBall::from_rational(c, wp));
        }
        acc.with_precision(prec)
    }

    /// Certified upper bound `r` with `max|σ(x)| <= r <= max|σ(x)| (1 + 2^{1-prec})`.
    pub fn house(&self, prec: u32) -> Result<BigRational> {
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        if let Some(r) = self.as_rational() {
            return Ok(r.abs());
        }
        let h = self.field.degree();
        let mut wp = prec + 16;
        let slack = BigRational::one() + BigRational::new(BigInt::one(), BigInt::one() << (prec - 1).min(4096));
        while wp <= 64 * prec.max(64) {
            let balls: Vec<ComplexBall> = (0..h).map(|j| self.embed(j, wp)).collect();
            let upper = balls.iter().map(|b| b.abs_upper()).max().unwrap();
            let lower = balls.iter().map(|b| b.abs_lower()).max().unwrap();
            let up = upper.to_rational();
            if !lower.is_zero() && up <= lower.to_rational() * &slack {
                return Ok(up);
            }
            wp *= 2;
        }
        Err(Error::PrecisionExhausted("house could not be bounded to the requested accuracy".into()))
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same(&other.field) && self.coords == other.coords
    }
}

impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let parts: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("({c})θ"),
                _ => format!("({c})θ^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        FieldElement::add(self, o)
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        FieldElement::sub(self, o)
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        FieldElement::mul(self, o)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}

/// Largest coefficient modulus (integers) or house (field elements).
pub fn poly_height_int<'a>(coeffs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    coeffs.into_iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
}

pub fn poly_height_field<'a>(coeffs: impl IntoIterator<Item = &'a FieldElement>, prec: u32) -> Result<BigRational> {
    let mut best = BigRational::zero();
    for c in coeffs {
        let h = c.house(prec)?;
        if h > best {
            best = h;
        }
    }
    Ok(best)
}

/// Rational upper bound of a non-negative dyadic, for reporting.
pub fn dyadic_upper(d: &Dyadic) -> BigRational {
    d.round(64, Round::Ceil).to_rational()
}
