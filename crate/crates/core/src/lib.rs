//! Exact-arithmetic machinery behind Liouville-type algebraic independence
//! measures for values of E-functions and Mahler functions.

pub mod error;
pub mod linalg;
pub mod exactnum;
pub mod polyseries;
pub mod systems;
pub mod siegel;
pub mod relations;
pub mod measure;
pub mod specfile;

pub use error::{Error, ErrorKind, Result};
