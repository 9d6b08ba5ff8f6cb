//! Boson expressions, current coefficients and contraction formulas.

pub mod check;
pub mod expr;
pub mod series;
pub mod tables;

pub use expr::{b, bc, current_coefficient, h_mode, hc_mode, pair_commutator, BosonExpr, Family};
pub use series::TruncatedSeries;
