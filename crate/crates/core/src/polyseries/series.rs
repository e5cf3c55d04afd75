use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::Poly;
use crate::exactnum::{FieldElement, NumberField};

/// Valuation of a truncated series: exact, or only bounded below by the truncation order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Valuation {
    Finite(usize),
    AtLeast(usize),
}

impl Valuation {
    pub fn finite(self) -> Option<usize> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    /// The certified lower bound in both cases.
    pub fn lower(self) -> usize {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">= {v}"),
        }
    }
}

/// Power series known modulo `z^order`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries {
    field: NumberField,
    coeffs: Vec<FieldElement>,
}

impl TruncSeries {
    /// Series whose coefficients are exactly `coeffs`; the order is `coeffs.len()`.
    pub fn new(field: &NumberField, coeffs: Vec<FieldElement>) -> Self {
        TruncSeries { field: field.clone(), coeffs }
    }

    pub fn zero(field: &NumberField, order: usize) -> Self {
        TruncSeries { field: field.clone(), coeffs: vec![field.zero(); order] }
    }

    pub fn one(field: &NumberField, order: usize) -> Self {
        let mut s = TruncSeries::zero(field, order);
        if order > 0 {
            s.coeffs[0] = field.one();
        }
        s
    }

    pub fn from_poly(p: &Poly, order: usize) -> Self {
        TruncSeries { field: p.field().clone(), coeffs: (0..order).map(|k| p.coeff(k)).collect() }
    }

    pub fn from_rationals(field: &NumberField, coeffs: &[BigRational]) -> Self {
        TruncSeries::new(field, coeffs.iter().map(|c| field.from_rational(c.clone())).collect())
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &FieldElement {
        &self.coeffs[k]
    }

    pub fn truncate(&self, order: usize) -> TruncSeries {
        assert!(order <= self.order(), "cannot extend a truncation");
        TruncSeries { field: self.field.clone(), coeffs: self.coeffs[..order].to_vec() }
    }

    pub fn valuation(&self) -> Valuation {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(v) => Valuation::Finite(v),
            None => Valuation::AtLeast(self.order()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &TruncSeries) -> TruncSeries {
        let n = self.order().min(o.order());
        TruncSeries::new(&self.field, (0..n).map(|k| self.coeffs[k].add(&o.coeffs[k])).collect())
    }

    pub fn sub(&self, o: &TruncSeries) -> TruncSeries {
        let n = self.order().min(o.order());
        TruncSeries::new(&self.field, (0..n).map(|k| self.coeffs[k].sub(&o.coeffs[k])).collect())
    }

    pub fn neg(&self) -> TruncSeries {
        TruncSeries::new(&self.field, self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn scale(&self, c: &FieldElement) -> TruncSeries {
        TruncSeries::new(&self.field, self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    pub fn mul(&self, o: &TruncSeries) -> TruncSeries {
        let n = self.order().min(o.order());
        let (la, a) = integer_coords(&self.coeffs[..n]);
        let (lb, b) = integer_coords(&o.coeffs[..n]);
        let h = self.field.degree();
        // unreduced products of coordinate vectors, degree < 2h - 1 in θ
        let mut raw = vec![vec![BigInt::zero(); 2 * h - 1]; n];
        for (i, x) in a.iter().enumerate() {
            let Some(x) = x else { continue };
            for (j, y) in b.iter().take(n - i).enumerate() {
                let Some(y) = y else { continue };
                let acc = &mut raw[i + j];
                for (u, xu) in x.iter().enumerate() {
                    if xu.is_zero() {
                        continue;
                    }
                    for (v, yv) in y.iter().enumerate() {
                        acc[u + v] += xu * yv;
                    }
                }
            }
        }
        let powers: Vec<FieldElement> = (0..2 * h - 1).map(|e| self.field.generator().pow(e as u64)).collect();
        let den = BigRational::new(BigInt::one(), la * lb);
        let out = raw
            .into_iter()
            .map(|r| {
                let mut low: Vec<BigRational> = r[..h].iter().map(|c| BigRational::from_integer(c.clone())).collect();
                low.resize(h, BigRational::zero());
                let mut x = self.field.element(low).expect("coordinate count matches degree");
                for (e, c) in r.iter().enumerate().skip(h) {
                    if !c.is_zero() {
                        x = x.add(&powers[e].scale_int(c));
                    }
                }
                x.scale(&den)
            })
            .collect();
        TruncSeries::new(&self.field, out)
    }

    /// Product with a polynomial; the order is unchanged.
    pub fn mul_poly(&self, p: &Poly) -> TruncSeries {
        let n = self.order();
        let mut out = vec![self.field.zero(); n];
        for (i, a) in p.coeffs().iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in self.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        TruncSeries::new(&self.field, out)
    }

    /// Derivative; the order drops by one.
    pub fn derivative(&self) -> TruncSeries {
        TruncSeries::new(
            &self.field,
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.scale_int(&BigInt::from(i))).collect(),
        )
    }

    /// `s(z^q)`, known to order `q * order`.
    pub fn substitute_power(&self, q: usize) -> TruncSeries {
        let n = self.order() * q;
        let mut out = vec![self.field.zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * q] = c.clone();
        }
        TruncSeries::new(&self.field, out)
    }

    /// Multiply by `z^k`; the order grows by `k`.
    pub fn shift(&self, k: usize) -> TruncSeries {
        let mut out = vec![self.field.zero(); k];
        out.extend(self.coeffs.iter().cloned());
        TruncSeries::new(&self.field, out)
    }

    pub fn pow(&self, e: u32) -> TruncSeries {
        let mut acc = TruncSeries::one(&self.field, self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})z^{i}"))
            .collect();
        write!(f, "{} + O(z^{})", if parts.is_empty() { "0".into() } else { parts.join(" + ") }, self.order())
    }
}

/// Common denominator of all coordinates and the integer coordinate vectors (`None` for zero).
fn integer_coords(c: &[FieldElement]) -> (BigInt, Vec<Option<Vec<BigInt>>>) {
    let l = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denominator()));
    let v = c
        .iter()
        .map(|x| {
            (!x.is_zero()).then(|| x.coords().iter().map(|q| (q * BigRational::from_integer(l.clone())).to_integer()).collect())
        })
        .collect();
    (l, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::ratio;
    use proptest::prelude::*;

    fn series(v: &[i64]) -> TruncSeries {
        let k = NumberField::rationals();
        TruncSeries::new(&k, v.iter().map(|&x| k.from_int(x)).collect())
    }

    fn naive_mul(a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
        let n = a.order().min(b.order());
        let out = (0..n)
            .map(|k| (0..=k).fold(a.field().zero(), |acc, i| acc.add(&a.coeff(i).mul(b.coeff(k - i)))))
            .collect();
        TruncSeries::new(a.field(), out)
    }

    proptest! {
        #[test]
        fn product_matches_naive_over_quadratic_field(
            a in prop::collection::vec((-9i64..10, -9i64..10, 1i64..7), 1..8),
            b in prop::collection::vec((-9i64..10, -9i64..10, 1i64..7), 1..8),
        ) {
            let k = NumberField::new(vec![ratio(-2, 1), ratio(0, 1), ratio(1, 1)]).unwrap();
            let mk = |v: &[(i64, i64, i64)]| TruncSeries::new(&k, v.iter().map(|&(x, y, d)| k.element(vec![ratio(x, d), ratio(y, d)]).unwrap()).collect());
            let (sa, sb) = (mk(&a), mk(&b));
            prop_assert_eq!(sa.mul(&sb), naive_mul(&sa, &sb));
        }
    }

    fn factorial(n: i64) -> i64 {
        (1..=n).product()
    }

    #[test]
    fn valuation_examples() {
        let mut v = vec![0; 10];
        v[3] = 1;
        v[5] = 1;
        assert_eq!(series(&v).valuation(), Valuation::Finite(3));
        assert_eq!(series(&[0; 10]).valuation(), Valuation::AtLeast(10));
        let k = NumberField::rationals();
        // sin z - z, from the alternating factorial expansion
        let coeffs: Vec<FieldElement> = (0..8)
            .map(|n| match n % 4 {
                1 if n > 1 => k.from_rational(ratio(1, factorial(n))),
                3 => k.from_rational(ratio(-1, factorial(n))),
                _ => k.zero(),
            })
            .collect();
        let s = TruncSeries::new(&k, coeffs);
        assert_eq!(s.valuation(), Valuation::Finite(3));
        assert_eq!(*s.coeff(3), k.from_rational(ratio(-1, 6)));
    }

    #[test]
    fn substitution_and_derivative_orders() {
        let s = series(&[1, 2, 3]);
        assert_eq!(s.substitute_power(2).order(), 6);
        assert_eq!(s.derivative().order(), 2);
        assert_eq!(s.shift(2).valuation(), Valuation::Finite(2));
    }

    proptest! {
        #[test]
        fn multiplication_laws(a in prop::collection::vec(-5i64..5, 1..9), b in prop::collection::vec(-5i64..5, 1..9), c in prop::collection::vec(-5i64..5, 1..9)) {
            let (x, y, z) = (series(&a), series(&b), series(&c));
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            let n = x.order().min(y.order());
            if let (Valuation::Finite(vx), Valuation::Finite(vy)) = (x.truncate(n).valuation(), y.truncate(n).valuation()) {
                if vx + vy < n {
                    prop_assert_eq!(x.mul(&y).valuation(), Valuation::Finite(vx + vy));
                }
            }
        }
    }
}
