//! Vertex-operator realizations of the currents.

pub mod action;
pub mod coproduct;
pub mod currents;
pub mod dressed;
pub mod engine;
pub mod highest;

pub use engine::{mode_matrices, modes_1d, sum_modes_1d, Affine, VertexOp, ZeroModeFactor};
