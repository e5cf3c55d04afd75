use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::exactnum::{ComplexBall, FieldElement, NumberField};

/// Dense univariate polynomial over a number field, coefficients ascending.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: NumberField,
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(field: &NumberField, coeffs: Vec<FieldElement>) -> Self {
        let mut p = Poly { field: field.clone(), coeffs };
        p.trim();
        p
    }

    pub fn zero(field: &NumberField) -> Self {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElement) -> Self {
        let f = c.field().clone();
        Poly::new(&f, vec![c])
    }

    pub fn one(field: &NumberField) -> Self {
        Poly::constant(field.one())
    }

    /// `c z^k`
    pub fn monomial(c: FieldElement, k: usize) -> Self {
        let f = c.field().clone();
        let mut coeffs = vec![f.zero(); k];
        coeffs.push(c);
        Poly::new(&f, coeffs)
    }

    pub fn z(field: &NumberField) -> Self {
        Poly::monomial(field.one(), 1)
    }

    pub fn from_rationals(field: &NumberField, coeffs: &[BigRational]) -> Self {
        Poly::new(field, coeffs.iter().map(|c| field.from_rational(c.clone())).collect())
    }

    pub fn from_ints(field: &NumberField, coeffs: &[i64]) -> Self {
        Poly::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> FieldElement {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, with `deg 0 = 0` for convenience in bounds.
    pub fn deg0(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(&self.field, (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(&self.field, (0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Poly::new(&self.field, out)
    }

    pub fn scale(&self, c: &FieldElement) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    pub fn scale_rational(&self, c: &BigRational) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|x| x.scale(c)).collect())
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one(&self.field);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            &self.field,
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.scale_int(&BigInt::from(i))).collect(),
        )
    }

    /// `p(z^q)`
    pub fn substitute_power(&self, q: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut out = vec![self.field.zero(); (self.coeffs.len() - 1) * q + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * q] = c.clone();
        }
        Poly::new(&self.field, out)
    }

    /// Composition `p(g(z))`.
    pub fn compose(&self, g: &Poly) -> Poly {
        let mut acc = Poly::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(c.clone()));
        }
        acc
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Ball evaluation of `σ_j(p)(z)`.
    pub fn eval_ball(&self, j: usize, z: &ComplexBall, prec: u32) -> ComplexBall {
        let mut acc = ComplexBall::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(&c.embed(j, prec));
        }
        acc
    }

    /// Euclidean division over K.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.coeffs[dd].inv().expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(&self.field), self.clone());
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let c = r[k].mul(&inv);
            for (j, dj) in d.coeffs.iter().enumerate() {
                if !dj.is_zero() {
                    r[k - dd + j] = r[k - dd + j].sub(&c.mul(dj));
                }
            }
            q[k - dd] = c;
        }
        r.truncate(dd);
        (Poly::new(&self.field, q), Poly::new(&self.field, r))
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.field);
        }
        let g = self.gcd(o);
        self.mul(&o.exact_div(&g).unwrap()).monic()
    }

    /// Scale so the lowest nonzero coefficient is 1.
    pub fn trailing_normalized(&self) -> Poly {
        match self.valuation() {
            None => self.clone(),
            Some(v) => self.scale(&self.coeffs[v].inv().unwrap()),
        }
    }

    /// Least common denominator of all coordinates.
    pub fn denominator(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator()))
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.coeffs
            .iter()
            .flat_map(|c| c.coords().iter())
            .map(|r| r.numer().bits().max(r.denom().bits()))
            .max()
            .unwrap_or(0)
    }

    pub fn truncate(&self, n: usize) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().take(n).cloned().collect())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})z"),
                _ => format!("({c})z^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclid_over_q() {
        let k = NumberField::rationals();
        let a = Poly::from_ints(&k, &[-2, 1, 1]);
        let b = Poly::from_ints(&k, &[3, -4, 1]);
        assert_eq!(a.gcd(&b), Poly::from_ints(&k, &[-1, 1]));
        assert_eq!(a.lcm(&b), Poly::from_ints(&k, &[6, -5, -2, 1]));
        let (q, r) = a.mul(&b).add(&Poly::from_ints(&k, &[1])).divrem(&b);
        assert_eq!(q, a);
        assert_eq!(r, Poly::from_ints(&k, &[1]));
    }

    #[test]
    fn substitution_and_derivative() {
        let k = NumberField::rationals();
        let p = Poly::from_ints(&k, &[1, 2, 3]);
        assert_eq!(p.substitute_power(2), Poly::from_ints(&k, &[1, 0, 2, 0, 3]));
        assert_eq!(p.derivative(), Poly::from_ints(&k, &[2, 6]));
        assert_eq!(p.eval(&k.from_int(2)), k.from_int(17));
        let trailing = Poly::from_ints(&k, &[0, 4, 2]).trailing_normalized();
        assert_eq!(trailing.coeff(1), k.one());
    }
}
