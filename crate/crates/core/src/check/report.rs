//! Machine-readable verification records.

use serde::Serialize;

use crate::fock::Residual;

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub relation: String,
    pub case: String,
    pub residual: f64,
    pub abs: f64,
    pub scale: f64,
    pub exact_columns: usize,
    pub tolerance: f64,
    /// `true` when the identity is expected to fail (a witness).
    pub expect_nonzero: bool,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(relation: impl Into<String>, case: impl Into<String>, res: Residual, tolerance: f64) -> Self {
        Self {
            relation: relation.into(),
            case: case.into(),
            residual: res.rel,
            abs: res.abs,
            scale: res.scale,
            exact_columns: res.exact_columns,
            tolerance,
            expect_nonzero: false,
            pass: res.rel <= tolerance && res.exact_columns > 0,
        }
    }

    /// A record that passes when the residual is at least `threshold`.
    pub fn witness(relation: impl Into<String>, case: impl Into<String>, res: Residual, threshold: f64) -> Self {
        Self {
            relation: relation.into(),
            case: case.into(),
            residual: res.rel,
            abs: res.abs,
            scale: res.scale,
            exact_columns: res.exact_columns,
            tolerance: threshold,
            expect_nonzero: true,
            pass: res.rel >= threshold,
        }
    }
}

pub fn all_pass(records: &[CheckRecord]) -> bool {
    records.iter().all(|r| r.pass)
}

/// Largest residual among records that expect zero.
pub fn worst(records: &[CheckRecord]) -> f64 {
    records.iter().filter(|r| !r.expect_nonzero).map(|r| r.residual).fold(0.0, f64::max)
}
