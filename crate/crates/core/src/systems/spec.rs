use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactnum::{FieldElement, NumberField};
use crate::polyseries::{Poly, TruncSeries};

/// Differential (`∂ = d/dz`) or Mahler (`z ↦ z^q`) equations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Kind {
    Differential,
    Mahler { q: usize },
}

impl Kind {
    pub fn q(&self) -> Option<usize> {
        match self {
            Kind::Differential => None,
            Kind::Mahler { q } => Some(*q),
        }
    }

    pub fn is_mahler(&self) -> bool {
        matches!(self, Kind::Mahler { .. })
    }
}

/// Coefficient growth `|σ(f_n)| <= B C^n` (Mahler) or `B C^n / n!` (differential)
/// at the evaluation embedding.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthBound {
    pub constant: BigRational,
    pub rate: BigRational,
}

/// A scalar equation `Σ_j a_j(z) L^j f = b(z)` with `L = ∂` or `L f = f(z^q)`,
/// together with leading coefficients of the solution.
#[derive(Clone, Debug)]
pub struct FunctionSpec {
    pub name: String,
    pub field: NumberField,
    pub kind: Kind,
    pub coeffs: Vec<Poly>,
    pub rhs: Option<Poly>,
    pub initial: Vec<FieldElement>,
    pub growth: Option<GrowthBound>,
    /// Rational lower bound on the radius of convergence (Mahler functions).
    pub radius: Option<BigRational>,
}

impl FunctionSpec {
    pub fn new(field: &NumberField, kind: Kind, coeffs: Vec<Poly>, initial: Vec<FieldElement>) -> Result<Self> {
        let spec = FunctionSpec {
            name: String::new(),
            field: field.clone(),
            kind,
            coeffs,
            rhs: None,
            initial,
            growth: None,
            radius: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_rhs(mut self, rhs: Poly) -> Self {
        self.rhs = if rhs.is_zero() { None } else { Some(rhs) };
        self
    }

    pub fn with_growth(mut self, constant: BigRational, rate: BigRational) -> Self {
        self.growth = Some(GrowthBound { constant, rate });
        self
    }

    pub fn with_radius(mut self, radius: BigRational) -> Self {
        self.radius = Some(radius);
        self
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// Equation order `m_i`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_inhomogeneous(&self) -> bool {
        self.rhs.is_some()
    }

    pub fn validate(&self) -> Result<()> {
        if self.coeffs.len() < 2 {
            return Err(Error::Invalid("an equation needs coefficients a_0, ..., a_m with m >= 1".into()));
        }
        if self.coeffs.last().unwrap().is_zero() {
            return Err(Error::Invalid("leading coefficient a_m must be nonzero".into()));
        }
        if let Kind::Mahler { q } = self.kind {
            if q < 2 {
                return Err(Error::Invalid("Mahler base q must be at least 2".into()));
            }
            if self.coeffs[0].is_zero() {
                return Err(Error::Invalid("Mahler equations need a_0 != 0".into()));
            }
        }
        let ok = self.coeffs.iter().all(|p| p.field().same(&self.field))
            && self.initial.iter().all(|c| c.field().same(&self.field));
        if !ok {
            return Err(Error::Invalid("coefficients must lie in the declared field".into()));
        }
        Ok(())
    }

    fn max_coeff_degree(&self) -> usize {
        let r = self.rhs.as_ref().map_or(0, |p| p.deg0());
        self.coeffs.iter().map(|p| p.deg0()).max().unwrap_or(0).max(r)
    }

    /// Coefficient equation for `z^n`: the map index → coefficient of `f_index`, and `[z^n] b`.
    fn equation(&self, n: usize) -> (BTreeMap<usize, FieldElement>, FieldElement) {
        let mut terms: BTreeMap<usize, FieldElement> = BTreeMap::new();
        let mut add = |i: usize, c: FieldElement| {
            if c.is_zero() {
                return;
            }
            let e = terms.entry(i).or_insert_with(|| self.field.zero());
            *e = e.add(&c);
        };
        for (j, a) in self.coeffs.iter().enumerate() {
            for (k, akj) in a.coeffs().iter().enumerate() {
                if akj.is_zero() || k > n {
                    continue;
                }
                match self.kind {
                    Kind::Differential => {
                        let i = n - k + j;
                        // i (i-1) ... (i-j+1)
                        let ff: BigInt = ((i + 1 - j)..=i).map(BigInt::from).product();
                        add(i, akj.scale_int(&ff));
                    }
                    Kind::Mahler { q } => {
                        let step = q.pow(j as u32);
                        if (n - k).is_multiple_of(step) {
                            add((n - k) / step, akj.clone());
                        }
                    }
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        let b = self.rhs.as_ref().map_or_else(|| self.field.zero(), |p| p.coeff(n));
        (terms, b)
    }

    /// Series of the solution to order `order`, from the initial coefficients and
    /// the coefficient equations.
    pub fn extend_series(&self, order: usize) -> Result<TruncSeries> {
        let mut known: Vec<FieldElement> = self.initial.clone();
        let slack = self.max_coeff_degree() + self.order() + 1;
        let last = order + slack;
        for n in 0..=last {
            let (terms, b) = self.equation(n);
            let unknown: Vec<usize> = terms.keys().copied().filter(|&i| i >= known.len()).collect();
            let mut residual = b.neg();
            for (i, c) in &terms {
                if *i < known.len() {
                    residual = residual.add(&c.mul(&known[*i]));
                }
            }
            match unknown.as_slice() {
                [] => {
                    if !residual.is_zero() {
                        return Err(Error::InconsistentInitialData { equation: n });
                    }
                }
                [i] if *i == known.len() && *i < order => {
                    let c = &terms[i];
                    known.push(residual.neg().mul(&c.inv().unwrap()));
                }
                _ if unknown[0] >= order => {}
                _ => return Err(Error::InsufficientInitialData { index: known.len() }),
            }
        }
        if known.len() < order {
            return Err(Error::InsufficientInitialData { index: known.len() });
        }
        known.truncate(order);
        Ok(TruncSeries::new(&self.field, known))
    }

    /// Coefficients of `Σ a_j L^j s - b` on the part of the truncation where they are determined.
    pub fn residual(&self, s: &TruncSeries) -> TruncSeries {
        let order = s.order();
        let valid = match self.kind {
            Kind::Differential => order.saturating_sub(self.order()),
            Kind::Mahler { .. } => order,
        };
        let mut acc = TruncSeries::zero(&self.field, valid);
        let mut cur = s.clone();
        for (j, a) in self.coeffs.iter().enumerate() {
            if j > 0 {
                cur = match self.kind {
                    Kind::Differential => cur.derivative(),
                    Kind::Mahler { q } => cur.substitute_power(q),
                };
            }
            acc = acc.add(&cur.truncate(valid).mul_poly(a));
        }
        if let Some(b) = &self.rhs {
            acc = acc.sub(&TruncSeries::from_poly(b, valid));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::ratio;

    fn q() -> NumberField {
        NumberField::rationals()
    }

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(&q(), c)
    }

    #[test]
    fn exponential_coefficients() {
        let k = q();
        let spec = FunctionSpec::new(&k, Kind::Differential, vec![p(&[-1]), p(&[1])], vec![k.one()]).unwrap();
        let s = spec.extend_series(6).unwrap();
        let expect = [1, 1, 2, 6, 24, 120];
        for (n, d) in expect.iter().enumerate() {
            assert_eq!(*s.coeff(n), k.from_rational(ratio(1, *d)));
        }
    }

    #[test]
    fn cosine_coefficients() {
        let k = q();
        let spec = FunctionSpec::new(&k, Kind::Differential, vec![p(&[1]), p(&[]), p(&[1])], vec![k.one(), k.zero()]).unwrap();
        let s = spec.extend_series(7).unwrap();
        let expect = [ratio(1, 1), ratio(0, 1), ratio(-1, 2), ratio(0, 1), ratio(1, 24), ratio(0, 1), ratio(-1, 720)];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(*s.coeff(n), k.from_rational(e.clone()));
        }
    }

    #[test]
    fn fredholm_lacunary() {
        let k = q();
        let spec = FunctionSpec::new(&k, Kind::Mahler { q: 2 }, vec![p(&[-1]), p(&[1])], vec![k.zero(), k.one()])
            .unwrap()
            .with_rhs(p(&[0, -1]));
        let s = spec.extend_series(9).unwrap();
        for n in 0..9 {
            let expect = if [1, 2, 4, 8].contains(&n) { 1 } else { 0 };
            assert_eq!(*s.coeff(n), k.from_int(expect));
        }
        assert!(spec.residual(&s).is_zero());
    }

    #[test]
    fn data_errors() {
        let k = q();
        let spec = FunctionSpec::new(&k, Kind::Mahler { q: 2 }, vec![p(&[-1]), p(&[1])], vec![]).unwrap().with_rhs(p(&[0, -1]));
        assert_eq!(spec.extend_series(5), Err(Error::InsufficientInitialData { index: 0 }));
        let bad = FunctionSpec::new(&k, Kind::Mahler { q: 2 }, vec![p(&[-1]), p(&[1])], vec![k.zero(), k.from_int(2)])
            .unwrap()
            .with_rhs(p(&[0, -1]));
        assert_eq!(bad.extend_series(5), Err(Error::InconsistentInitialData { equation: 1 }));
        // z f' - f = 0 leaves f_1 free
        let sing = FunctionSpec::new(&k, Kind::Differential, vec![p(&[-1]), p(&[0, 1])], vec![k.zero()]).unwrap();
        assert_eq!(sing.extend_series(4), Err(Error::InsufficientInitialData { index: 1 }));
        let ok = FunctionSpec::new(&k, Kind::Differential, vec![p(&[-1]), p(&[0, 1])], vec![k.zero(), k.from_int(3)]).unwrap();
        assert_eq!(*ok.extend_series(4).unwrap().coeff(1), k.from_int(3));
    }
}
