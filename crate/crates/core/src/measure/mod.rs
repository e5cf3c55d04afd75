mod constants;
mod eval;
mod lll;
mod scan;

pub use constants::{reference_c2, SurdConstant};
pub use eval::{eval_at, poly_value, EvalMode, EvalOptions, Evaluation, Instance, PolyValue, ValueSource, ValueVector, ZeroStatus};
pub use lll::{integer_relations, is_lll_reduced, lll_reduce};
pub use scan::{
    estimate_wd, for_each_row, liouville_scan, record_for, Fit, MeasureReport, Record, Retention, Row, ScanConfig, Strategy, WdEstimate, WdPoint,
    RETAIN_ALL_LIMIT,
};
