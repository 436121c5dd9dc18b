//! Exact computations with nilpotent Leibniz algebras given by structure
//! constants over the rationals.
//!
//! - [`algebra`]: the [`Algebra`] type, brackets, the Leibniz identity, the
//!   square ideal and changes of basis.
//! - [`invariants`]: lower central series, nilindex, right multiplications,
//!   Jordan profiles and characteristic sequences.
//! - [`gradations`]: verification of diagonal ℤ-gradations, the natural
//!   gradation and searches for gradations of maximum length.
//! - [`catalog`]: the p-filiform families and their known gradations.
//! - [`pipeline`]: end-to-end checks over grids of catalog instances.
//! - [`json`]: the algebra file format.

pub mod algebra;
pub mod catalog;
mod error;
pub mod gradations;
pub mod invariants;
pub mod json;
pub mod linalg;
pub mod pipeline;

pub use algebra::{Algebra, LeibnizReport, LeibnizViolation};
pub use catalog::{Family, FamilySpec};
pub use error::{Error, Result};
pub use gradations::{DegreeAssignment, GradationReport, Verdict};
pub use invariants::CharacteristicSequence;
pub use linalg::{Matrix, Scalar, Subspace, Vector};

/// Version string embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
