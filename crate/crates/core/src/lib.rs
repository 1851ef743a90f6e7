//! Exact, certified computation of the 3D index of ideal triangulations.
//!
//! The crate evaluates the index as a truncated series in `q^(1/2)` with
//! arbitrary-precision integer coefficients. Every emitted coefficient is
//! exact: infinite sums are cut off only where a proven lower bound on the
//! degree of the omitted terms exceeds the requested cap.

pub mod bounds;
pub mod cone;
pub mod dehnfill;
pub mod enumeration;
pub mod error;
pub mod fixtures;
pub mod identities;
pub mod index;
pub mod lattice;
pub mod lst;
pub mod qseries;
pub mod triangulation;

pub use error::{Error, Result};
pub use qseries::{HalfExp, TruncatedQSeries};
