//! Exact arithmetic over Q and simple number fields, with certified complex balls.

pub mod ball;
pub mod dyadic;
pub mod field;
pub mod ratpoly;
pub mod roots;

pub use ball::{BallRecord, ComplexBall};
pub use dyadic::{Dyadic, Round};
pub use field::{poly_height_field, poly_height_int, FieldElement, NumberField};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
