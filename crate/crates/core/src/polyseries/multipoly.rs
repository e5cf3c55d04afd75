use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::poly::Poly;
use crate::exactnum::FieldElement;

/// Ring operations needed by [`MultiPoly`] coefficients.
pub trait Coeff: Clone + PartialEq + fmt::Display {
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Coeff for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Coeff for FieldElement {
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        FieldElement::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        FieldElement::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        FieldElement::mul(self, o)
    }
    fn neg(&self) -> Self {
        FieldElement::neg(self)
    }
}

impl Coeff for Poly {
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Poly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Poly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Poly::mul(self, o)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    Lex,
    GrLex,
}

impl MonomialOrder {
    /// Compare exponent tuples; `Greater` means the first is the larger monomial.
    pub fn cmp(self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::GrLex => {
                let da: u32 = a.iter().sum();
                let db: u32 = b.iter().sum();
                da.cmp(&db).then_with(|| a.cmp(b))
            }
        }
    }
}

/// Sparse polynomial in `nvars` variables. Zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct MultiPoly<C: Coeff> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Coeff> MultiPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, C)>) -> Self {
        let mut p = MultiPoly::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> Option<&C> {
        self.terms.get(e)
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: C) {
        assert_eq!(e.len(), self.nvars, "exponent length");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                let s = x.add(&c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().map(|&x| x as usize).sum()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.neg());
        }
        r
    }

    pub fn neg(&self) -> Self {
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                r.add_term(e, ca.mul(cb));
            }
        }
        r
    }

    /// Multiply by the monomial `c X^e`.
    pub fn mul_term(&self, e: &[u32], c: &C) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(ea, ca)| (ea.iter().zip(e).map(|(x, y)| x + y).collect(), ca.mul(c)))
                .filter(|(_, c)| !Coeff::is_zero(c))
                .collect(),
        }
    }

    /// Apply `f` to every coefficient, dropping zeros.
    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MultiPoly<D> {
        MultiPoly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Leading term under an ordering.
    pub fn leading(&self, ord: MonomialOrder) -> Option<(&Vec<u32>, &C)> {
        self.terms.iter().max_by(|a, b| ord.cmp(a.0, b.0))
    }

    /// Terms sorted from largest to smallest monomial.
    pub fn sorted_terms(&self, ord: MonomialOrder) -> Vec<(&Vec<u32>, &C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| ord.cmp(b.0, a.0));
        v
    }

    /// Evaluate with `eval_term(c, e)` producing each term's value and `add` folding them.
    pub fn fold<T>(&self, init: T, mut step: impl FnMut(T, &[u32], &C) -> T) -> T {
        let mut acc = init;
        for (e, c) in &self.terms {
            acc = step(acc, e, c);
        }
        acc
    }
}

impl MultiPoly<BigInt> {
    /// Largest absolute coefficient.
    pub fn height(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
    }
}

impl<C: Coeff> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .sorted_terms(MonomialOrder::GrLex)
            .into_iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(i, &x)| if x == 1 { format!("X{}", i + 1) } else { format!("X{}^{}", i + 1, x) })
                    .collect();
                if mono.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Coeff> fmt::Debug for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(terms: &[(&[u32], i64)]) -> MultiPoly<BigInt> {
        MultiPoly::from_terms(2, terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))))
    }

    #[test]
    fn arithmetic_and_height() {
        let a = ip(&[(&[1, 0], 3), (&[0, 0], -5)]);
        let b = ip(&[(&[1, 0], -3), (&[0, 1], 2)]);
        assert_eq!(a.add(&b), ip(&[(&[0, 0], -5), (&[0, 1], 2)]));
        assert_eq!(a.mul(&b).total_degree(), 2);
        assert_eq!(a.height(), BigInt::from(5));
        assert_eq!(MultiPoly::<BigInt>::zero(2).height(), BigInt::zero());
    }

    #[test]
    fn orderings() {
        assert_eq!(MonomialOrder::GrLex.cmp(&[0, 2], &[1, 0]), Ordering::Greater);
        assert_eq!(MonomialOrder::Lex.cmp(&[0, 2], &[1, 0]), Ordering::Less);
        let p = ip(&[(&[0, 2], 1), (&[1, 0], 1)]);
        assert_eq!(p.leading(MonomialOrder::GrLex).unwrap().0, &vec![0, 2]);
    }
}
