//! Matrix-level checks of the dressed currents: quasi-periodicity of the
//! oscillator parts and the extended components at index `−1`.


use super::currents::{component, extended_component, q_power};
use super::engine::{Affine, VertexOp};
use super::modes_1d;
use crate::boson::current_coefficient;
use crate::boson::tables::OscCurrent;
use crate::check::CheckRecord;
use crate::fock::{FockBasis, Residual};
use crate::params::AlgebraParams;

/// `:exp X^{i,j}(z):` for any integer indices (no zero modes).
fn oscillator(params: &AlgebraParams, r_max: usize, kind: OscCurrent, i: i64, j: i64) -> VertexOp {
    VertexOp::exponential(params, r_max, |r| current_coefficient(params, kind.family(), i, j, r))
}

/// `X^{i,j−n}(z) = X^{i,j}(s z)` (primal) or `X^{i−m,j}(z) = X^{i,j}(s z)`
/// (dual) with `s ∈ {p*, p, p̌*, p̌}`, compared mode by mode.
pub fn quasi_periodicity_check(basis: &FockBasis, params: &AlgebraParams, window: i64, tol: f64) -> Vec<CheckRecord> {
    let (m, n) = (params.m as i64, params.n as i64);
    let ks: Vec<i64> = (-window..=window).collect();
    let r_max = basis.d_max;
    let mut out = Vec::new();
    let kinds = [
        (OscCurrent::EDr, params.p_star()),
        (OscCurrent::FDr, params.p()),
        (OscCurrent::EcDr, params.pc_star()),
        (OscCurrent::FcDr, params.pc()),
    ];
    for (kind, s) in kinds {
        for i in 0..m {
            for j in 0..n {
                let (si, sj) = if kind.is_dual() { (i - m, j) } else { (i, j - n) };
                let lhs = modes_1d(basis, params, &oscillator(params, r_max, kind, si, sj), &ks);
                let rhs = modes_1d(basis, params, &oscillator(params, r_max, kind, i, j), &ks);
                for ((k, a), b) in ks.iter().zip(&lhs).zip(&rhs) {
                    let b = b.scale(s.powi(-(*k as i32)));
                    // modes creating more than the truncation allows have no exact column
                    if a.exact_count() == 0 {
                        continue;
                    }
                    out.push(CheckRecord::new("quasi-periodicity", format!("{kind:?} i={i} j={j} k={k}"), Residual::of(a, &b), tol));
                }
            }
        }
    }
    out
}

/// Extended components from the engine against mode matrices of the base
/// component, rescaled and multiplied by the diagonal twist on the right.
pub fn extended_component_check(basis: &FockBasis, params: &AlgebraParams, window: i64, tol: f64) -> Vec<CheckRecord> {
    let (m, n) = (params.m as i64, params.n as i64);
    let ks: Vec<i64> = (-window..=window).collect();
    let r_max = basis.d_max;
    let positions = params.m * params.n;
    let pos = |i: i64, j: i64| (i.rem_euclid(m) * n + j.rem_euclid(n)) as usize;
    let e = |i: i64| (0..n).fold(Affine::constant(0, positions), |a, t| a.with(pos(i, t), 1));
    let ec = |j: i64| (0..m).fold(Affine::constant(0, positions), |a, s| a.with(pos(s, j), -1));
    let mut out = Vec::new();
    let kinds = [
        (OscCurrent::EDr, params.p_star()),
        (OscCurrent::FDr, params.p()),
        (OscCurrent::EcDr, params.pc_star()),
        (OscCurrent::FcDr, params.pc()),
    ];
    for (kind, s) in kinds {
        let range = if kind.is_dual() { n } else { m };
        for idx in 0..range {
            let (base, twist, scalar) = if kind.is_dual() {
                (component(params, r_max, kind, m - 1, idx), ec(idx - 1).times(-1).plus(&ec(idx)), params.d.powi(-(m as i32)))
            } else {
                (component(params, r_max, kind, idx, n - 1), e(idx - 1).times(-1).plus(&e(idx)), params.dc.powi(-(n as i32)))
            };
            let q_twist = q_power(basis, params, &twist);
            let base_modes = modes_1d(basis, params, &base, &ks);
            let ext = modes_1d(basis, params, &extended_component(params, r_max, kind, idx), &ks);
            for ((k, a), b) in ks.iter().zip(&ext).zip(&base_modes) {
                let rhs = b.scale(s.powi(-(*k as i32)) * scalar).matmul(&q_twist);
                out.push(CheckRecord::new("extended-component", format!("{kind:?} idx={idx} k={k}"), Residual::of(a, &rhs), tol));
            }
        }
    }
    out
}
