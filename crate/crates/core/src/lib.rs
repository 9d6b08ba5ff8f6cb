//! Fock representations of the quantum toroidal algebras `E_m` and `E_n`
//! on a shared boson-plus-lattice Fock space, with numerical certificates for
//! their relations, contractions and the duality of their integrals of motion.

pub mod boson;
pub mod check;
pub mod error;
pub mod fock;
pub mod iom;
pub mod params;
pub mod suite;
pub mod vertex;

pub use error::{Error, Result};
pub use params::AlgebraParams;
