//! Boson commutation relations on the truncated Fock space.

use num_complex::Complex64 as C64;

use super::expr::{b, bc, c, BosonExpr};
use crate::check::CheckRecord;
use crate::fock::{ExactOp, FockBasis, Residual};
use crate::params::AlgebraParams;
use crate::vertex::currents::boson_matrix;

fn delta(a: i64, b: i64, m: usize) -> f64 {
    if (a - b).rem_euclid(m as i64) == 0 {
        1.0
    } else {
        0.0
    }
}

/// `[X_r, Y_{-s}]` against `want · 1` on the exact columns.
fn scalar_commutator(basis: &FockBasis, params: &AlgebraParams, x: &BosonExpr, y: &BosonExpr, want: C64) -> Residual {
    let lhs = boson_matrix(basis, params, x).commutator(&boson_matrix(basis, params, y));
    Residual::of(&lhs, &ExactOp::identity(basis.len()).scale(want))
}

/// `(aa)` for modes `1 ≤ r, s ≤ r_max` with `|r - s| ≤ 1`, and the four
/// `b`/`b̌` commutators for `1 ≤ r ≤ r_max`, all as matrix identities.
/// `basis` needs `d_max ≥ r_max` for the columns to be exact.
pub fn check_boson_algebra(basis: &FockBasis, params: &AlgebraParams, r_max: i32, tol: f64) -> Vec<CheckRecord> {
    let (m, n) = (params.m, params.n);
    let (q1, q2, q3, qc1, qc3) = (params.q1(), params.q2(), params.q3(), params.qc1(), params.qc3());
    let idx: Vec<(i64, i64)> = (0..m as i64).flat_map(|i| (0..n as i64).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for r in 1..=r_max {
        for s in (r - 1).max(1)..=(r + 1).min(r_max) {
            for &(i, j) in &idx {
                for &(k, l) in &idx {
                    let same = r == s && i == k && j == l;
                    let want = if same { params.boson_norm(r) } else { c(0.0) };
                    let x = BosonExpr::elementary(params, i, j, r);
                    let y = BosonExpr::elementary(params, k, l, -s);
                    let res = scalar_commutator(basis, params, &x, &y, want);
                    out.push(CheckRecord::new("aa", format!("({i},{j})_{r} ({k},{l})_-{s}"), res, tol));
                }
            }
        }
        let pre = params.boson_norm(r) * params.q.powi(r);
        for &(i, j) in &idx {
            for &(k, l) in &idx {
                let (dm, dn) = (|a, b| delta(a, b, m), |a, b| delta(a, b, n));
                let cases = [
                    (
                        "bb1",
                        b(params, i, j, r),
                        b(params, k, l, -r),
                        pre * ((c(1.0) + q2.powi(-r)) * dm(i, k) - q1.powi(r) * dm(i + 1, k) - q3.powi(r) * dm(i - 1, k)) * dn(j, l),
                    ),
                    (
                        "bb2",
                        bc(params, i, j, r),
                        bc(params, k, l, -r),
                        pre * dm(i, k) * ((c(1.0) + q2.powi(-r)) * dn(j, l) - qc1.powi(r) * dn(j, l - 1) - qc3.powi(r) * dn(j, l + 1)),
                    ),
                    (
                        "bb3",
                        b(params, i, j, r),
                        bc(params, k, l, -r),
                        -pre * (q3.powi(r) * dm(i - 1, k) - dm(i, k)) * (qc1.powi(r) * dn(j, l - 1) - dn(j, l)),
                    ),
                    // written as [b̌^{k,l}_r, b^{i,j}_{-r}]
                    (
                        "bb4",
                        bc(params, k, l, r),
                        b(params, i, j, -r),
                        -pre * (q1.powi(r) * dm(i - 1, k) - dm(i, k)) * (qc3.powi(r) * dn(j, l - 1) - dn(j, l)),
                    ),
                ];
                for (rel, x, y, want) in cases {
                    let res = scalar_commutator(basis, params, &x, &y, want);
                    out.push(CheckRecord::new(rel, format!("r={r} i={i} j={j} k={k} l={l}"), res, tol));
                }
            }
        }
    }
    out
}
