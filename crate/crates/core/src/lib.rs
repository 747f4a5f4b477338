//! Fourier analysis of complex- and Boolean-valued functions on `Z_q^n`,
//! relevant-variable bounds for Boolean functions with a restricted
//! spectrum, and equitable 2-partitions of the Hamming graph `H(n, q)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`qary_domain`]: points of `Z_q^n`, mixed-radix indexing, the Hamming
//!   graph, and the dense [`FunctionTable`] carrier.
//! * [`fourier`]: characters, the tensor Fourier transform, spectra,
//!   eigenspace projections and exact cyclotomic zero-tests.
//! * [`boundary`]: edge boundaries, restrictions `f_{i,a,b}`, supports and
//!   relevant variables.
//! * [`bounds`]: closed-form bounds in exact rational arithmetic and the
//!   audit of a concrete Boolean function against them.
//! * [`equitable`]: quotient matrices and equitable 2-partitions.
//! * [`search`]: exhaustive / sampled enumeration of Boolean tables and the
//!   minimum-support eigenfunction search.
//! * [`cli`]: file formats and JSON reports behind the command-line tool.

#![forbid(unsafe_code)]

pub mod boundary;
pub mod bounds;
pub mod cli;
pub mod equitable;
mod error;
pub mod fourier;
pub mod qary_domain;
pub mod search;

pub use error::{Error, NotEquitable, Result};
pub use fourier::{SpectrumReport, SpectrumTable, DEFAULT_ZERO_TOLERANCE};
pub use qary_domain::{DomainParams, FunctionTable, Point, ValueMode};
