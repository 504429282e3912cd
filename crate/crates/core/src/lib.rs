//! Canonical forms of matrices over the real numbers, the complex numbers and
//! the quaternions.
//!
//! A canonical form is described by a [`CfExpr`] tree built from basic forms,
//! spreadings and inner sums. The crate checks membership of concrete
//! matrices, factors members of spreadings, samples members, enumerates the
//! cell decomposition of the manifold of members and computes its Poincaré
//! polynomial. [`sympow`] covers symmetric products of the complex line.

pub mod canonical;
pub mod cells;
pub mod cli;
pub mod error;
pub mod expr;
pub mod matrix;
pub mod parse;
pub mod poincare;
pub mod preset;
pub mod report;
pub mod scalar;
pub mod sympow;
mod util;

pub use error::{CfmError, Result};
pub use cells::{Cell, CellSymbol};
pub use expr::{CanonicalForm, CfExpr, ColumnSet, NestingOrder};
pub use matrix::{MatrixF, Tolerance};
pub use poincare::IntPoly;
pub use report::{IssueCode, ValidationIssue, ValidationReport};
pub use scalar::{Field, Scalar};
