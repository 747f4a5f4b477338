//! Enumeration audits and minimum-support searches.

pub mod enumerate;
pub mod min_support;
pub mod symmetry;

use serde::Serialize;

use crate::qary_domain::FunctionTable;

pub use enumerate::{
    bits_to_table, enumerate_boolean, table_to_bits, Candidate, EnumerationMode, EnumerationPlan, EnumerationSummary,
    NoopVisitor, SpectrumClassStats, Visitor, DEFAULT_MAX_ENUM,
};
pub use min_support::{min_support_search, sharpness_audit, SearchOptions, SharpnessRecord};
pub use symmetry::{SymmetryElement, SymmetryGroup};

/// A table together with the quantity it achieves and the bound it is
/// measured against.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub table: FunctionTable,
    pub achieved: u64,
    pub target: u64,
}
