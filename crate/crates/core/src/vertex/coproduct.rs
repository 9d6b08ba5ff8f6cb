//! The level-2 action rebuilt from two level-one modules through the
//! coproduct, for comparison with the closed formulas.
//!
//! Slot `t` of `F_{m,1} ⊗ F_{m,1}` is realized on the families `(·, t)` of
//! `F_{m,2}`, with the level-one boson `b^{i,0}_{±r}` of slot `t` identified
//! with `ď^{±tr} b^{i,t}_{±r}`. Both constructions use the same ordering of
//! lattice positions for the signs of `e^{±ε}`; the currents only move
//! charge inside one slot, so this differs from the plain tensor product by
//! a diagonal sign conjugation.

use num_complex::Complex64 as C64;

use super::action::ActionModes;
use super::engine::{Affine, VertexOp, ZeroModeFactor};
use super::sum_modes_1d;
use crate::boson::{b, BosonExpr};
use crate::check::CheckRecord;
use crate::fock::{diagonal_op, ExactOp, FockBasis, Residual};
use crate::params::AlgebraParams;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

struct Slots<'a> {
    p: &'a AlgebraParams,
    r_max: usize,
}

impl Slots<'_> {
    fn pos(&self, i: i64, t: usize) -> usize {
        i.rem_euclid(self.p.m as i64) as usize * 2 + t
    }

    fn zero(&self) -> Affine {
        Affine::constant(0, self.p.m * 2)
    }

    /// Slot-`t` image of `b^{i,0}_r`.
    fn boson(&self, i: i64, t: usize, r: i32) -> BosonExpr {
        b(self.p, i, t as i64, r).scale(self.p.dc.powi(r * t as i32))
    }

    /// `H^{(t)}_{i,r}` of the level-one module.
    fn h(&self, i: i64, t: usize, r: i32) -> BosonExpr {
        self.boson(i, t, r)
    }

    /// Level-one `E_i(z)` or `F_i(z)` in slot `t`.
    fn current(&self, e: bool, i: i64, t: usize) -> VertexOp {
        let p = self.p;
        let qint = |r: i32| p.qint(r);
        let mut op = VertexOp::identity(1, p.m * 2, self.r_max);
        for r in 1..=self.r_max as i32 {
            let (ann, cre) = if e {
                (self.boson(i, t, r).scale(-c(1.0) / qint(r)), self.boson(i, t, -r).scale(p.q.powi(-r) / qint(r)))
            } else {
                (self.boson(i, t, r).scale(p.q.powi(r) / qint(r)), self.boson(i, t, -r).scale(-c(1.0) / qint(r)))
            };
            op.annihilation[0][r as usize - 1] = ann.coeffs;
            op.creation[0][r as usize - 1] = cre.coeffs;
        }
        let (here, prev) = (self.pos(i, t), self.pos(i - 1, t));
        let d_diff = self.zero().with(prev, 1).with(here, -1);
        let d_sum = self.zero().with(prev, 1).with(here, 1);
        let mut zf = ZeroModeFactor::identity(1, p.m * 2);
        if e {
            zf.shifts = vec![(here, -1), (prev, 1)];
            zf.var_exp = vec![Affine { constant: 1, ..d_diff }];
            zf.powers = vec![(p.d_half(), d_sum)];
        } else {
            zf.shifts = vec![(prev, -1), (here, 1)];
            zf.var_exp = vec![Affine { constant: 1, ..d_diff.times(-1) }];
            zf.powers = vec![(p.d_half(), d_sum.times(-1))];
        }
        op.zero = zf;
        let u = p.u[t];
        let weight = if i.rem_euclid(p.m as i64) == 0 { if e { c(1.0) / u } else { u } } else { c(1.0) };
        op.scaled(weight)
    }

    /// Multiplies by `K^±_i(z)` of slot `t` (placed to the right; slots
    /// commute so the product stays normal ordered).
    fn times_k(&self, mut op: VertexOp, i: i64, t: usize, plus: bool) -> VertexOp {
        let p = self.p;
        let qq = p.q - c(1.0) / p.q;
        for r in 1..=self.r_max {
            if plus {
                let h = self.h(i, t, r as i32).scale(qq);
                op.annihilation[0][r - 1].iter_mut().zip(&h.coeffs).for_each(|(a, x)| *a += x);
            } else {
                let h = self.h(i, t, -(r as i32)).scale(-qq);
                op.creation[0][r - 1].iter_mut().zip(&h.coeffs).for_each(|(a, x)| *a += x);
            }
        }
        let k = self.zero().with(self.pos(i - 1, t), 1).with(self.pos(i, t), -1);
        op.zero.powers.push((p.q_half(), k.times(if plus { 2 } else { -2 })));
        op
    }
}

/// `Δ E_i(z) = E_i(C₂z) ⊗ K⁻_i(z) + 1 ⊗ E_i(z)` as two vertex operators.
pub fn coproduct_e(params: &AlgebraParams, r_max: usize, i: i64) -> [VertexOp; 2] {
    let s = Slots { p: params, r_max };
    let first = s.current(true, i, 0).rescaled(params.q_half());
    [s.times_k(first, i, 1, false), s.current(true, i, 1)]
}

/// `Δ F_i(z) = F_i(z) ⊗ 1 + K⁺_i(z) ⊗ F_i(C₁z)`.
pub fn coproduct_f(params: &AlgebraParams, r_max: usize, i: i64) -> [VertexOp; 2] {
    let s = Slots { p: params, r_max };
    let second = s.current(false, i, 1).rescaled(params.q_half());
    [s.current(false, i, 0), s.times_k(second, i, 0, true)]
}

/// `Δ H_{i,r}`: `H ⊗ 1 + C^{-r} ⊗ H` for `r > 0`, `C^{-r} H ⊗ 1 + 1 ⊗ H` otherwise.
pub fn coproduct_h(params: &AlgebraParams, i: i64, r: i32) -> BosonExpr {
    let s = Slots { p: params, r_max: 0 };
    if r > 0 {
        s.h(i, 0, r).axpy(params.q.powi(-r), &s.h(i, 1, r))
    } else {
        s.h(i, 0, r).scale(params.q.powi(-r)).axpy(c(1.0), &s.h(i, 1, r))
    }
}

/// `d^Z` with `Z = −Σ_s (s + ½) ∂_{s,0} ∂_{s,1}`.
fn gauge(basis: &FockBasis, params: &AlgebraParams, sign: i64) -> ExactOp {
    diagonal_op(basis, |idx| {
        let lat = basis.lattice_of_rank(basis.split(idx).0);
        let twice: i64 = (0..params.m).map(|s| -(2 * s as i64 + 1) * lat[2 * s] as i64 * lat[2 * s + 1] as i64).sum();
        params.d_half().pow_half(sign * twice)
    })
}

/// Compares `d^Z Δ(x) d^{−Z}` with the closed formulas for `E_{i,k}`,
/// `F_{i,k}` (`|k| ≤ window`) and `H_{i,±r}` (`r ≤ h_max`).
pub fn coproduct_cross_check(
    basis: &FockBasis,
    params: &AlgebraParams,
    closed: &ActionModes,
    window: i64,
    h_max: i32,
    tol: f64,
) -> Vec<CheckRecord> {
    assert_eq!(params.n, 2, "the cross-check is written for n = 2");
    let r_max = basis.d_max;
    let (g, g_inv) = (gauge(basis, params, 1), gauge(basis, params, -1));
    let ks: Vec<i64> = (-window..=window).collect();
    let mut out = Vec::new();
    for i in 0..params.m as i64 {
        let de = sum_modes_1d(basis, params, &coproduct_e(params, r_max, i), &ks);
        let df = sum_modes_1d(basis, params, &coproduct_f(params, r_max, i), &ks);
        for (n, &k) in ks.iter().enumerate() {
            let lhs = g.matmul(&de[n]).matmul(&g_inv);
            out.push(CheckRecord::new("coproduct-E", format!("i={i} k={k}"), Residual::of(&lhs, closed.e(i, k)), tol));
            let lhs = g.matmul(&df[n]).matmul(&g_inv);
            out.push(CheckRecord::new("coproduct-F", format!("i={i} k={k}"), Residual::of(&lhs, closed.f(i, k)), tol));
        }
        for r in (1..=h_max).flat_map(|r| [r, -r]) {
            let lhs = super::currents::boson_matrix(basis, params, &coproduct_h(params, i, r));
            let lhs = g.matmul(&lhs).matmul(&g_inv);
            out.push(CheckRecord::new("coproduct-H", format!("i={i} r={r}"), Residual::of(&lhs, closed.h(i, r)), tol));
        }
    }
    out
}
