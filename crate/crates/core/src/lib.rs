//! Matrix functions on the unit circle, thematic factorizations, and the
//! Hankel-operator invariants that pin down their indices.

pub mod circle_fn;
pub mod cli;
pub mod error;
pub mod hankel;
pub mod invariance;
pub mod linalg;
pub mod poly;
pub mod thematic;

pub use circle_fn::{CircleFunction, GridSpec, SymbolKind, ToleranceConfig};
pub use error::{Error, ErrorClass, Result};
