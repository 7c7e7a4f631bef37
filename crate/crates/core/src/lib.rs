//! Chunk reduction of bifiltered chain complexes.
//!
//! A bifiltered chain complex is stored as a boundary matrix whose columns are
//! decorated with an index, a grade in the plane, and a dimension. The
//! [`reduce`] module shrinks such a matrix to the smallest quasi-isomorphic
//! bifiltered complex in three phases: a chunk-local reduction that pairs
//! columns of equal grade, a compression step that strips paired indices out
//! of the surviving columns, and a removal step. The [`oracle`] module holds
//! independent brute-force machinery (Betti numbers, rank invariants and the
//! per-grade lower bounds) used to check the output.
//!
//! The crate is `no_std` with `alloc`. The `std` feature enables phase
//! timings, `parallel` runs the chunk and compression phases on rayon.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod chain;
pub mod column;
pub mod complex;
pub mod field;
pub mod grade;
pub mod heap;
pub mod ingest;
pub mod oracle;
pub mod reduce;
#[cfg(any(test, feature = "synth"))]
pub mod synth;

pub use chain::Chain;
pub use column::{add_scaled, Column};
pub use complex::{local_pivot, BifilteredComplex};
pub use field::{Coeff, FieldChar, FieldError};
pub use grade::{grade_leq, grade_lub, Axes, Axis, Coord, Grade};
pub use ingest::{
    expand_h_critical, mesh_bifiltration, sort_and_index, validate, IngestError, Mesh,
    MultiCriticalGenerator, RawGenerator, ValidationReport, Violation, ViolationKind,
};
pub use reduce::{
    chunk_reduce, modified_chunk_reduce, order_preserving_addition, remove_local_pair, Labeling,
    ReduceError, ReductionStats, Tag,
};
