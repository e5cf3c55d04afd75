//! Univariate polynomials and truncated power series over K, graded monomial
//! bases, and sparse multivariate polynomials.

pub mod monomial;
pub mod multipoly;
pub mod poly;
pub mod series;

pub use monomial::{all_monomials, basis_size, monomial_eval, MonomialBasis};
pub use multipoly::{Coeff, MonomialOrder, MultiPoly};
pub use poly::Poly;
pub use series::{TruncSeries, Valuation};

/// Smallest exponent with a nonzero coefficient, or the truncation sentinel.
pub fn series_valuation(s: &TruncSeries) -> Valuation {
    s.valuation()
}
