use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{poly_height_field, FieldElement};
use crate::polyseries::{Poly, TruncSeries, Valuation};

/// `R(z, Y) = P_1(z) Y_1 + … + P_p(z) Y_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct AuxiliaryForm {
    pub coeffs: Vec<Poly>,
    /// Bound on the z-degree of the coefficients.
    pub degree_bound: usize,
    /// Number of recursion steps applied since construction.
    pub generation: usize,
}

impl AuxiliaryForm {
    pub fn new(coeffs: Vec<Poly>, degree_bound: usize) -> Self {
        AuxiliaryForm { coeffs, degree_bound, generation: 0 }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|p| p.is_zero())
    }

    /// Largest actual z-degree.
    pub fn max_degree(&self) -> usize {
        self.coeffs.iter().map(|p| p.deg0()).max().unwrap_or(0)
    }

    /// `R(z, g(z))` on the common truncation of `g`.
    pub fn evaluate(&self, g: &[TruncSeries]) -> Result<TruncSeries> {
        if g.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: g.len() });
        }
        let order = g.iter().map(|s| s.order()).min().unwrap_or(0);
        let field = g[0].field();
        let mut acc = TruncSeries::zero(field, order);
        for (p, s) in self.coeffs.iter().zip(g) {
            if !p.is_zero() {
                acc = acc.add(&s.truncate(order).mul_poly(p));
            }
        }
        Ok(acc)
    }

    pub fn valuation_on(&self, g: &[TruncSeries]) -> Result<Valuation> {
        Ok(self.evaluate(g)?.valuation())
    }

    /// Maximum house of the coefficients.
    pub fn height(&self, prec: u32) -> Result<BigRational> {
        poly_height_field(self.coeffs.iter().flat_map(|p| p.coeffs().iter()), prec)
    }

    fn all_coords(&self) -> impl Iterator<Item = &BigRational> {
        self.coeffs.iter().flat_map(|p| p.coeffs().iter()).flat_map(|c| c.coords().iter())
    }

    /// Scale so every coefficient has integral coordinates with gcd 1 and the first
    /// nonzero coordinate is positive.
    pub fn cleared(&self) -> AuxiliaryForm {
        let den = self.all_coords().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled: Vec<BigInt> = self.all_coords().map(|c| (c * BigRational::from(den.clone())).to_integer()).collect();
        let g = scaled.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return self.clone();
        }
        let first_negative = scaled.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
        let mut factor = BigRational::new(den, g);
        if first_negative {
            factor = -factor;
        }
        AuxiliaryForm {
            coeffs: self.coeffs.iter().map(|p| p.scale_rational(&factor)).collect(),
            degree_bound: self.degree_bound,
            generation: self.generation,
        }
    }

    /// Whether all coefficients have integral power-basis coordinates.
    pub fn is_integral(&self) -> bool {
        self.all_coords().all(|c| c.is_integer())
    }

    pub fn scale(&self, c: &FieldElement) -> AuxiliaryForm {
        AuxiliaryForm {
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
            degree_bound: self.degree_bound,
            generation: self.generation,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{ratio, NumberField};

    #[test]
    fn clearing_makes_primitive_integral() {
        let k = NumberField::rationals();
        let f = AuxiliaryForm::new(
            vec![
                Poly::from_rationals(&k, &[ratio(-1, 2), ratio(1, 3)]),
                Poly::from_rationals(&k, &[ratio(1, 6)]),
            ],
            1,
        );
        let c = f.cleared();
        assert!(c.is_integral());
        assert_eq!(c.coeffs[0], Poly::from_ints(&k, &[3, -2]));
        assert_eq!(c.coeffs[1], Poly::from_ints(&k, &[-1]));
        assert_eq!(c.height(64).unwrap(), ratio(3, 1));
    }
}
