//! Polynomial relations between power series, Gröbner bases, and the dimension ledger
//! of degree-filtered spaces.

mod groebner;
mod kernel;
mod ledger;

pub use groebner::{buchberger, is_groebner, reduce, s_polynomial};
pub use kernel::{certification_order, normalize, relation_kernel, specialize, RelationBasis, DEFAULT_MARGIN};
pub use ledger::{functional_rank, ledger, linear_forms_from_relations, psi, DimensionLedger, LedgerParams, LinearForms};
