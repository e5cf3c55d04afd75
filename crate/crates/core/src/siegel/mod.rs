//! Auxiliary linear forms vanishing to high order, and the recursions that produce
//! further forms from a linear system.

mod form;
mod multiplicity;
mod pade;
mod steps;

pub use form::AuxiliaryForm;
pub use multiplicity::{check_multiplicity, MultiplicityReport, COEFF_RANGE};
pub use pade::{build_auxiliary, default_vstar, proportional, AuxiliaryResult, AuxiliarySummary, HEIGHT_PREC};
pub use steps::{iterate, mahler_defect, mahler_step, theta_defect, theta_step, IterationRecord, MahlerStep};
