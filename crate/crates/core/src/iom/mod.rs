//! Integrals of motion of both algebras and the duality check.

pub mod symbolic;
pub mod contour;
pub mod theta;
pub mod build;
pub mod cache;
pub mod hfun;
pub mod duality;
