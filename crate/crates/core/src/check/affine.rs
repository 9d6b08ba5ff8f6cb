//! Commutativity of the vertical subalgebras of the two actions.

use super::report::CheckRecord;
use crate::fock::{ExactOp, FockBasis, Residual};
use crate::vertex::action::ActionModes;

fn vanishes(rel: &str, case: String, op: &ExactOp, tol: f64) -> CheckRecord {
    CheckRecord::new(rel, case, Residual::of(op, &ExactOp::zero(op.dim())), tol)
}

/// Affine commutators for `1 ≤ i ≤ m−1`, `1 ≤ l ≤ n−1` and `|k|, |k'| ≤ window`,
/// followed by one expected-nonzero witness with `i = 0`.
pub fn check_affine_commutativity(
    basis: &FockBasis,
    primal: &ActionModes,
    dual: &ActionModes,
    window: i64,
    h_max: i32,
    tol: f64,
    witness: f64,
) -> Vec<CheckRecord> {
    assert!(!primal.dual && dual.dual);
    let (m, n) = (primal.nodes as i64, dual.nodes as i64);
    let mut out = Vec::new();
    let rs: Vec<i32> = (1..=h_max).flat_map(|r| [r, -r]).collect();
    for i in 1..m {
        for l in 1..n {
            for k in -window..=window {
                for kc in -window..=window {
                    let case = format!("i={i} l={l} k={k} k'={kc}");
                    out.push(vanishes("affine-EE", case.clone(), &primal.e(i, k).commutator(dual.e(l, kc)), tol));
                    out.push(vanishes("affine-FF", case.clone(), &primal.f(i, k).commutator(dual.f(l, kc)), tol));
                    out.push(vanishes("affine-EF", case.clone(), &primal.e(i, k).commutator(dual.f(l, kc)), tol));
                }
            }
            for k in -window..=window {
                for &r in &rs {
                    let case = format!("i={i} l={l} r={r} k={k}");
                    out.push(vanishes("affine-HX", format!("[H,Ec] {case}"), &primal.h(i, r).commutator(dual.e(l, k)), tol));
                    out.push(vanishes("affine-HX", format!("[H,Fc] {case}"), &primal.h(i, r).commutator(dual.f(l, k)), tol));
                    out.push(vanishes("affine-HX", format!("[E,Hc] {case}"), &primal.e(i, k).commutator(dual.h(l, r)), tol));
                    out.push(vanishes("affine-HX", format!("[F,Hc] {case}"), &primal.f(i, k).commutator(dual.h(l, r)), tol));
                }
            }
            for &r in &rs {
                for &rc in &rs {
                    let case = format!("[H,Hc] i={i} l={l} r={r} r'={rc}");
                    out.push(vanishes("affine-HX", case, &primal.h(i, r).commutator(dual.h(l, rc)), tol));
                }
            }
        }
    }
    // [Ě_i, F_l] with the dual index first
    for i in 1..n {
        for l in 1..m {
            for k in -window..=window {
                for kc in -window..=window {
                    let case = format!("i={i} l={l} k={k} k'={kc}");
                    out.push(vanishes("affine-FE", case, &dual.e(i, k).commutator(primal.f(l, kc)), tol));
                }
            }
        }
    }
    // the toroidal currents do not commute
    let mut best: Option<(Residual, String)> = None;
    for k in -window..=window {
        for kc in -window..=window {
            let op = primal.e(0, k).commutator(dual.e(1 % n, kc));
            let res = Residual::of(&op, &ExactOp::zero(basis.len()));
            if best.as_ref().is_none_or(|(b, _)| res.rel > b.rel) {
                best = Some((res, format!("i=0 l={} k={k} k'={kc}", 1 % n)));
            }
        }
    }
    if let Some((res, case)) = best {
        out.push(CheckRecord::witness("affine-witness", case, res, witness));
    }
    out
}
