//! Highest-weight data of the level-one module and the sector decomposition
//! of the level-n module.

use num_complex::Complex64 as C64;

use super::action::ActionModes;
use crate::check::CheckRecord;
use crate::fock::{ExactOp, FockBasis, Residual, SparseMatrix};
use crate::params::AlgebraParams;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `θ⁻¹(H_{i,1})` from the nested `q`-commutators of `F_{·,k}`, `k ∈ {−1,0,1}`.
pub fn theta_inverse_h1(params: &AlgebraParams, modes: &ActionModes, i: i64) -> ExactOp {
    assert!(!modes.dual);
    let m = params.m as i64;
    let (q, q2) = (params.q, params.q * params.q);
    let qc = |x: ExactOp, y: &ExactOp, p: C64| x.q_commutator(y, p);
    let i = i.rem_euclid(m);
    let minus_d = -params.d;
    if i == 0 {
        let mut x = modes.f(1, 1).clone();
        for s in 2..m {
            x = qc(x, modes.f(s, 0), q);
        }
        qc(x, modes.f(0, -1), q2).scale(-minus_d.powi(-(m as i32) + 1))
    } else {
        let mut x = modes.f(0, 0).clone();
        for s in (i + 1..m).rev() {
            x = qc(x, modes.f(s, 0), q);
        }
        for s in 1..i {
            x = qc(x, modes.f(s, 0), q);
        }
        qc(x, modes.f(i, 0), q2).scale(-minus_d.powi(-(i as i32)))
    }
}

/// `v^{(s)} = |l+1, …, l+1, l, …, l⟩` (`ν` entries `l+1`) with `s = ml + ν`.
pub fn highest_weight_lattice(m: usize, s: i64) -> Vec<i32> {
    let (l, nu) = (s.div_euclid(m as i64), s.rem_euclid(m as i64));
    (0..m as i64).map(|k| (if k < nu { l + 1 } else { l }) as i32).collect()
}

/// `u^{(s)} = (−1)^m d^{−s−m/2} q u`.
pub fn spectral_shift(params: &AlgebraParams, s: i64) -> C64 {
    let m = params.m as i64;
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    params.d_half().pow_half(-2 * s - m) * params.q * params.u[0] * sign
}

/// Degree `t^{(s)} = (ν/2)(l+1)² + ((m−ν)/2) l²`.
pub fn highest_weight_degree(m: usize, s: i64) -> f64 {
    let (l, nu) = (s.div_euclid(m as i64) as f64, s.rem_euclid(m as i64) as f64);
    nu / 2.0 * (l + 1.0).powi(2) + (m as f64 - nu) / 2.0 * l * l
}

fn vector_residual(op: &ExactOp, col: usize, expected: C64) -> Residual {
    let mut abs = 0.0f64;
    let mut scale = expected.norm();
    let mut diag = C64::new(0.0, 0.0);
    for &(row, v) in &op.mat.cols[col] {
        if row as usize == col {
            diag = v;
        } else {
            abs = abs.max(v.norm());
        }
        scale = scale.max(v.norm());
    }
    abs = abs.max((diag - expected).norm());
    Residual { abs, scale, rel: abs / scale.max(1.0), exact_columns: op.exact[col] as usize }
}

/// Level-one (`n = 1`) checks for `|s| ≤ s_max`: the degree and central
/// charge of `v^{(s)}`, and `θ⁻¹(H_{i,1}) v^{(s)} = δ_{i,ν} u^{(s)}(1−q₂⁻¹)/(q−q⁻¹) v^{(s)}`.
pub fn highest_weight_check(basis: &FockBasis, params: &AlgebraParams, modes: &ActionModes, s_max: i64, tol: f64) -> Vec<CheckRecord> {
    assert_eq!(params.n, 1);
    let m = params.m;
    let thetas: Vec<ExactOp> = (0..m as i64).map(|i| theta_inverse_h1(params, modes, i)).collect();
    let mut out = Vec::new();
    for s in -s_max..=s_max {
        let lat = highest_weight_lattice(m, s);
        let Some(lr) = basis.lattice_rank(&lat) else {
            continue;
        };
        let col = basis.compose(lr, 0);
        let deg_err = (basis.degree(col) - highest_weight_degree(m, s)).abs();
        let unit = |abs: f64| Residual { abs, scale: 1.0, rel: abs, exact_columns: 1 };
        out.push(CheckRecord::new("hw-degree", format!("s={s}"), unit(deg_err), tol));
        let charge: i64 = lat.iter().map(|&x| x as i64).sum();
        let central = params.q.powi(charge as i32) - params.q.powi(s as i32);
        out.push(CheckRecord::new("hw-central", format!("s={s}"), unit(central.norm()), tol));
        let nu = s.rem_euclid(m as i64);
        let lambda = spectral_shift(params, s) * (c(1.0) - c(1.0) / (params.q * params.q)) / (params.q - c(1.0) / params.q);
        for (i, th) in thetas.iter().enumerate() {
            let expected = if i as i64 == nu { lambda } else { c(0.0) };
            out.push(CheckRecord::new("hw-check", format!("s={s} i={i}"), vector_residual(th, col, expected), tol));
        }
    }
    out
}

/// Slot charges `s_t = Σ_s m_{s,t}` of a basis state.
pub fn sector(basis: &FockBasis, idx: usize) -> Vec<i64> {
    let lat = basis.lattice_of_rank(basis.split(idx).0);
    (0..basis.n).map(|t| (0..basis.m).map(|s| lat[s * basis.n + t] as i64).sum()).collect()
}

/// Largest entry of `op` joining different sectors, relative to its largest entry.
pub fn off_sector_residual(basis: &FockBasis, op: &SparseMatrix) -> Residual {
    let (mut abs, mut scale) = (0.0f64, 0.0f64);
    for (col, entries) in op.cols.iter().enumerate() {
        let sc = sector(basis, col);
        for &(row, v) in entries {
            scale = scale.max(v.norm());
            if sector(basis, row as usize) != sc {
                abs = abs.max(v.norm());
            }
        }
    }
    Residual { abs, scale, rel: abs / scale.max(1.0), exact_columns: op.cols.len() }
}

/// Block-diagonality of all built generators in the slot-charge sectors.
pub fn block_structure_check(basis: &FockBasis, modes: &ActionModes, tol: f64) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let mut push = |name: &str, key: String, op: &ExactOp| {
        let res = off_sector_residual(basis, &op.mat);
        out.push(CheckRecord::new(name, key, res, tol));
    };
    let mut keys: Vec<_> = modes.e.keys().copied().collect();
    keys.sort();
    for (i, k) in keys {
        push("block-E", format!("i={i} k={k}"), &modes.e[&(i, k)]);
        push("block-F", format!("i={i} k={k}"), &modes.f[&(i, k)]);
    }
    let mut hk: Vec<_> = modes.h.keys().copied().collect();
    hk.sort();
    for (i, r) in hk {
        push("block-H", format!("i={i} r={r}"), &modes.h[&(i, r)]);
    }
    out
}
