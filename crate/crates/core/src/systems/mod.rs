//! Scalar equations and first-order linear systems over K(z), differential and Mahler.

pub mod linear;
pub mod regular;
pub mod spec;

pub use linear::{
    companion, companion_solution, direct_sum, integral_primitive, mahler_compose, AffineSystem, LinearSystemSpec, RatFunc,
};
pub use regular::{choose_ell, is_regular, singular_polynomial, RegularityReport, RegularityWitness};
pub use spec::{FunctionSpec, GrowthBound, Kind};
