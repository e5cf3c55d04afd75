use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::exactnum::{Dyadic, Round};

/// `coefficient · √radicand`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdConstant {
    pub coefficient: BigInt,
    pub radicand: u64,
}

impl SurdConstant {
    /// Exact value when the radicand is a perfect square.
    pub fn exact(&self) -> Option<BigRational> {
        let r = self.radicand.sqrt();
        (r * r == self.radicand).then(|| BigRational::from_integer(&self.coefficient * BigInt::from(r)))
    }

    /// Certified bounds `(lower, upper)` with `prec` significant bits.
    pub fn bounds(&self, prec: u32) -> (Dyadic, Dyadic) {
        let c = Dyadic::from_int(self.coefficient.clone());
        let rad = Dyadic::from_int(self.radicand);
        let lo = (&c * &rad.sqrt_lower(prec + 8)).round(prec, Round::Floor);
        let hi = (&c * &rad.sqrt_upper(prec + 8)).round(prec, Round::Ceil);
        (lo, hi)
    }

    pub fn to_f64(&self) -> f64 {
        self.coefficient.to_f64().unwrap_or(f64::INFINITY) * (self.radicand as f64).sqrt()
    }
}

/// `√m · 4^m · h^{m+1}`.
pub fn reference_c2(m: u32, h: u32) -> SurdConstant {
    assert!(m >= 1 && h >= 1, "m and h must be positive");
    let coefficient = BigInt::from(4).pow(m) * BigInt::from(h).pow(m + 1);
    SurdConstant { coefficient, radicand: u64::from(m) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert_eq!(reference_c2(1, 1).exact(), Some(BigRational::from_integer(4.into())));
        assert_eq!(reference_c2(4, 1).exact(), Some(BigRational::from_integer(512.into())));
        let c = reference_c2(2, 2);
        assert_eq!(c.coefficient, BigInt::from(128));
        assert_eq!(c.exact(), None);
        let (lo, hi) = c.bounds(64);
        assert!(lo.to_f64() <= 181.019336 && hi.to_f64() >= 181.019335);
        assert!((&hi - &lo).to_f64() < 1e-12);
    }
}
