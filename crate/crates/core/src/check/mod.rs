//! Residual checks of relations, commutativity and cancellation identities.

pub mod affine;
pub mod cancellation;
pub mod contraction;
pub mod delta;
pub mod relations;
pub mod report;

pub use report::CheckRecord;
