//! Jacobi theta functions at configurable precision, graded jets, q-series,
//! equivariant Witten-bundle expansions and numerical rigidity checks for
//! Lefschetz numbers of circle actions.

pub mod algebra;
pub mod bundles;
pub mod error;
pub mod genus;
pub mod instance;
pub mod jet;
pub mod lefschetz;
pub mod precision;
pub mod qseries;
pub mod quadrature;
pub mod rigidity;
pub mod theta;

pub use error::{Error, Result};
pub use precision::{PrecisionComplex, PrecisionConfig};
