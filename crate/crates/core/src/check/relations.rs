//! Defining relations of `E_m` (and of the dual algebra) on built modes.

use num_complex::Complex64 as C64;

use super::report::CheckRecord;
use crate::fock::{diagonal_op, ExactOp, FockBasis, Residual};
use crate::params::AlgebraParams;
use crate::vertex::action::ActionModes;
use crate::vertex::currents::{q_power, weight};

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Structure data `a_{i,j}(r)`, `g_{i,j}`, `d_{i,j}` of the algebra acting.
#[derive(Clone, Debug)]
pub struct Structure {
    pub nodes: usize,
    pub q: C64,
    pub q1: C64,
    pub q3: C64,
    pub d: C64,
}

impl Structure {
    pub fn new(params: &AlgebraParams, dual: bool) -> Self {
        if dual {
            Self { nodes: params.n, q: params.q, q1: params.qc1(), q3: params.qc3(), d: params.dc }
        } else {
            Self { nodes: params.m, q: params.q, q1: params.q1(), q3: params.q3(), d: params.d }
        }
    }

    fn is(&self, a: i64, b: i64) -> bool {
        (a - b).rem_euclid(self.nodes as i64) == 0
    }

    fn delta(&self, a: i64, b: i64) -> f64 {
        if self.is(a, b) { 1.0 } else { 0.0 }
    }

    pub fn qint(&self, r: i32) -> C64 {
        (self.q.powi(r) - self.q.powi(-r)) / (self.q - c(1.0) / self.q)
    }

    pub fn a(&self, i: i64, j: i64, r: i32) -> C64 {
        self.qint(r) / r as f64
            * ((self.q.powi(r) + self.q.powi(-r)) * self.delta(i, j)
                - self.d.powi(r) * self.delta(i, j - 1)
                - self.d.powi(-r) * self.delta(i, j + 1))
    }

    /// `g_{i,j}(z,w)` as monomials `(a, b, coeff)` for `coeff z^a w^b`.
    pub fn g(&self, i: i64, j: i64) -> Vec<(i64, i64, C64)> {
        let q2 = self.q * self.q;
        if self.nodes == 2 {
            if self.is(i, j) {
                vec![(1, 0, c(1.0)), (0, 1, -q2)]
            } else {
                vec![(2, 0, c(1.0)), (1, 1, -(self.q1 + self.q3)), (0, 2, self.q1 * self.q3)]
            }
        } else {
            let k = if self.is(i, j - 1) {
                self.q1
            } else if self.is(i, j) {
                q2
            } else if self.is(i, j + 1) {
                self.q3
            } else {
                c(1.0)
            };
            vec![(1, 0, c(1.0)), (0, 1, -k)]
        }
    }

    pub fn d_ij(&self, i: i64, j: i64) -> C64 {
        if self.nodes == 2 {
            if self.is(i, j) { c(1.0) } else { c(-1.0) }
        } else if self.is(i, j - 1) {
            c(1.0) / self.d
        } else if self.is(i, j + 1) {
            self.d
        } else {
            c(1.0)
        }
    }
}

/// Settings of a relation sweep.
#[derive(Clone, Copy, Debug)]
pub struct RelationWindow {
    /// Checks use `|k|, |l| ≤ modes`.
    pub modes: i64,
    pub h_max: i32,
    pub tol: f64,
}

fn sum(terms: Vec<(C64, ExactOp)>, dim: usize) -> ExactOp {
    terms.into_iter().fold(ExactOp::zero(dim), |acc, (s, op)| acc.lin_comb(c(1.0), &op, s))
}

/// Checks the defining relations mode by mode.
pub fn check_defining_relations(
    basis: &FockBasis,
    params: &AlgebraParams,
    modes: &ActionModes,
    win: RelationWindow,
) -> Vec<CheckRecord> {
    let st = Structure::new(params, modes.dual);
    let dim = basis.len();
    let tag = if modes.dual { "dual " } else { "" };
    let nodes = st.nodes as i64;
    let level = modes.level(params);
    let qq = params.q - c(1.0) / params.q;
    let w = win.modes;
    let mut out = Vec::new();
    let rec = |rel: &str, case: String, lhs: &ExactOp, rhs: &ExactOp| {
        CheckRecord::new(format!("{tag}{rel}"), case, Residual::of(lhs, rhs), win.tol)
    };

    // q^h conjugation and D covariance
    let qdeg = diagonal_op(basis, |s| params.q_half().pow_half(basis.degree2(s)));
    let qdeg_inv = diagonal_op(basis, |s| params.q_half().pow_half(-basis.degree2(s)));
    for s in 0..nodes {
        let wt = weight(params, modes.dual, s);
        let (qh, qh_inv) = (q_power(basis, params, &wt), q_power(basis, params, &wt.times(-1)));
        for i in 0..nodes {
            let pair = st.delta(s, i - 1) - st.delta(s, i);
            for k in [-1, 0, 1] {
                let e = modes.e(i, k);
                let lhs = qh.matmul(e).matmul(&qh_inv);
                out.push(rec("CK-qh-E", format!("h=eps{s} i={i} k={k}"), &lhs, &e.scale(params.q.powf(pair))));
                let f = modes.f(i, k);
                let lhs = qh.matmul(f).matmul(&qh_inv);
                out.push(rec("CK-qh-F", format!("h=eps{s} i={i} k={k}"), &lhs, &f.scale(params.q.powf(-pair))));
            }
        }
    }
    for i in 0..nodes {
        for k in -w..=w {
            let e = modes.e(i, k);
            let lhs = qdeg.matmul(e).matmul(&qdeg_inv);
            out.push(rec("CK-D-E", format!("i={i} k={k}"), &lhs, &e.scale(params.q.powi(-(k as i32)))));
            let f = modes.f(i, k);
            let lhs = qdeg.matmul(f).matmul(&qdeg_inv);
            out.push(rec("CK-D-F", format!("i={i} k={k}"), &lhs, &f.scale(params.q.powi(-(k as i32)))));
        }
    }

    // H–E, H–F, H–H
    for i in 0..nodes {
        for j in 0..nodes {
            for r in (1..=win.h_max).flat_map(|r| [r, -r]) {
                let a = st.a(i, j, r);
                let ce = level.powi(-(r + r.abs()) / 2);
                let cf = level.powi(-(r - r.abs()) / 2);
                for k in -w..=w {
                    let kr = k + r as i64;
                    if kr.abs() > modes.ef_window {
                        continue;
                    }
                    let h = modes.h(i, r);
                    let lhs = h.commutator(modes.e(j, k));
                    out.push(rec("HE", format!("i={i} j={j} r={r} k={k}"), &lhs, &modes.e(j, kr).scale(a * ce)));
                    let lhs = h.commutator(modes.f(j, k));
                    out.push(rec("HF", format!("i={i} j={j} r={r} k={k}"), &lhs, &modes.f(j, kr).scale(-a * cf)));
                }
                if r > 0 {
                    let lhs = modes.h(i, r).commutator(modes.h(j, -r));
                    let rhs = ExactOp::identity(dim).scale(a * (level.powi(r) - level.powi(-r)) / qq);
                    out.push(rec("HH", format!("i={i} j={j} r={r}"), &lhs, &rhs));
                }
            }
        }
    }

    // E–F
    for i in 0..nodes {
        for j in 0..nodes {
            for k in -w..=w {
                for l in -w..=w {
                    let lhs = modes.e(i, k).commutator(modes.f(j, l));
                    let rhs = if i == j {
                        let s = k + l;
                        sum(
                            vec![
                                (level.powi(k as i32) / qq, modes.k_plus(i, s, dim)),
                                (-level.powi(l as i32) / qq, modes.k_minus(i, s, dim)),
                            ],
                            dim,
                        )
                    } else {
                        ExactOp::zero(dim)
                    };
                    out.push(rec("EF", format!("i={i} j={j} k={k} l={l}"), &lhs, &rhs));
                }
            }
        }
    }

    // E–E and F–F
    for i in 0..nodes {
        for j in 0..nodes {
            let (g_ij, g_ji) = (st.g(i, j), st.g(j, i));
            let far = !st.is(i, j) && !st.is(i, j + 1) && !st.is(i, j - 1);
            for k in -w..=w {
                for l in -w..=w {
                    let fits = |x: i64| x.abs() <= modes.ef_window;
                    if far {
                        out.push(rec("EE-far", format!("i={i} j={j} k={k} l={l}"), &modes.e(i, k).commutator(modes.e(j, l)), &ExactOp::zero(dim)));
                        out.push(rec("FF-far", format!("i={i} j={j} k={k} l={l}"), &modes.f(i, k).commutator(modes.f(j, l)), &ExactOp::zero(dim)));
                        continue;
                    }
                    if !g_ij.iter().chain(&g_ji).all(|&(a, b, _)| fits(k + a) && fits(l + b) && fits(k + b) && fits(l + a)) {
                        continue;
                    }
                    // d_ij g_ij(z,w) E_i(z)E_j(w) + g_ji(w,z) E_j(w)E_i(z)
                    let mut lhs = ExactOp::zero(dim);
                    for &(a, b, g) in &g_ij {
                        lhs = lhs.lin_comb(c(1.0), &modes.e(i, k + a).matmul(modes.e(j, l + b)), st.d_ij(i, j) * g);
                    }
                    for &(a, b, g) in &g_ji {
                        lhs = lhs.lin_comb(c(1.0), &modes.e(j, l + a).matmul(modes.e(i, k + b)), g);
                    }
                    out.push(rec("EE", format!("i={i} j={j} k={k} l={l}"), &lhs, &ExactOp::zero(dim)));
                    // d_ji g_ji(w,z) F_i(z)F_j(w) + g_ij(z,w) F_j(w)F_i(z)
                    let mut lhs = ExactOp::zero(dim);
                    for &(a, b, g) in &g_ji {
                        lhs = lhs.lin_comb(c(1.0), &modes.f(i, k + b).matmul(modes.f(j, l + a)), st.d_ij(j, i) * g);
                    }
                    for &(a, b, g) in &g_ij {
                        lhs = lhs.lin_comb(c(1.0), &modes.f(j, l + b).matmul(modes.f(i, k + a)), g);
                    }
                    out.push(rec("FF", format!("i={i} j={j} k={k} l={l}"), &lhs, &ExactOp::zero(dim)));
                }
            }
        }
    }
    out
}
