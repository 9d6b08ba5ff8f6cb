//! Delta-supported commutators of component currents.
//!
//! A relation `X(z)Y(w) − t·Y(w)X(z) = S z⁻¹ δ(c w/z) :X(z)Y(w):` is checked
//! in modes as `X_a Y_b − t Y_b X_a = c^{−b} S N_{a+b−1}`, where `N` is the
//! normal-ordered product restricted to `w = z/c`.

use num_complex::Complex64 as C64;

use super::report::CheckRecord;
use crate::boson::tables::OscCurrent;
use crate::fock::{ExactOp, FockBasis, Residual};
use crate::params::{AlgebraParams, HalfBase};
use crate::vertex::currents::component;
use crate::vertex::{modes_1d, VertexOp};

/// Which pair of component currents is commuted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaPair {
    EEc,
    FFc,
    EFc,
}

/// Expected form of one component commutator.
#[derive(Clone, Copy, Debug)]
pub struct DeltaCase {
    pub twist: C64,
    /// `(c, S)` when a delta term is present.
    pub support: Option<(C64, C64)>,
}

fn dl(a: i64, b: i64, modulus: usize) -> i64 {
    ((a - b).rem_euclid(modulus as i64) == 0) as i64
}

/// Undressed commutators for `1 ≤ i ≤ m−1`, `1 ≤ l ≤ n−1` (plain commutator,
/// at most one surviving delta term).
pub fn undressed_case(params: &AlgebraParams, pair: DeltaPair, i: i64, j: i64, k: i64, l: i64) -> DeltaCase {
    let (m, n) = (params.m, params.n);
    let (mi, ni) = (m as i32, n as i32);
    let q = params.q;
    let q2inv = C64::new(1.0, 0.0) / (q * q);
    let one = C64::new(1.0, 0.0);
    let diag = dl(k, i, m) * dl(j, l, n) == 1;
    let off = dl(k, i - 1, m) * dl(j, l - 1, n) == 1;
    let (ii, ll) = (i as i32, l as i32);
    let (c, p, pref) = match pair {
        DeltaPair::EEc => {
            let c = q.powi(mi - ni) * params.q3().powi(ii) * params.qc3().powi(-ll);
            let p = q.powi(mi - 1 - ii) * params.dc.powi(ll);
            (c, p, if diag { Some(one) } else if off { Some(q2inv) } else { None })
        }
        DeltaPair::FFc => {
            let c = params.q1().powi(-ii) * params.qc1().powi(ll);
            let p = q.powi(ii - 1) * params.dc.powi(ll);
            (c, p, if diag { Some(q2inv) } else if off { Some(one) } else { None })
        }
        DeltaPair::EFc => {
            let c = q.powi(-ni) * params.q1().powi(-ii) * params.qc3().powi(-ll);
            let p = q.powi(ii - 1) * params.dc.powi(ll);
            let a = dl(k, i - 1, m) * dl(j, l, n) == 1;
            let b = dl(k, i, m) * dl(j, l - 1, n) == 1;
            (c, p, if a { Some(one) } else if b { Some(q2inv) } else { None })
        }
    };
    DeltaCase { twist: one, support: pref.map(|s| (c, c / p * s)) }
}

/// Dressed twisted commutators for all `0 ≤ i,k ≤ m−1`, `0 ≤ j,l ≤ n−1`.
pub fn dressed_case(params: &AlgebraParams, pair: DeltaPair, i: i64, j: i64, k: i64, l: i64) -> DeltaCase {
    let (m, n) = (params.m, params.n);
    let q = params.q;
    let qp = |e: i64| q.powi(e as i32);
    let (di0, d0l) = (dl(i, 0, m), dl(0, l, n));
    let dm = dl(i, k, m) - dl(i - 1, k, m);
    let dn = dl(j, l, n) - dl(j, l - 1, n);
    let (ki, ji, ni, mi) = (k as i32, j as i32, n as i32, m as i32);
    let d = params.d;
    let a = dl(i, k, m) * dl(j, l, n) == 1;
    let b = dl(i - 1, k, m) * dl(j, l - 1, n) == 1;
    let zj = q.powi(ni - 1 - ji);
    match pair {
        DeltaPair::EEc if a => DeltaCase {
            twist: qp(di0 - d0l),
            support: Some((q.powi(mi - ni) * params.q3().powi(ki) * params.qc3().powi(-ji), d.powi(-ki) * qp(-d0l) / zj)),
        },
        DeltaPair::EEc if b => DeltaCase {
            twist: qp(-di0 + d0l),
            support: Some((
                q.powi(mi - ni) * params.q3().powi(ki + 1) * params.qc3().powi(-ji - 1),
                d.powi(-ki - 1) * qp(-1 + d0l) / zj,
            )),
        },
        DeltaPair::FFc if a => DeltaCase {
            twist: qp(-di0 + d0l),
            support: Some((params.q1().powi(-ki) * params.qc1().powi(ji), d.powi(-ki) * qp(-1 + d0l) / q.powi(ji))),
        },
        DeltaPair::FFc if b => DeltaCase {
            twist: qp(di0 - d0l),
            support: Some((params.q1().powi(-ki - 1) * params.qc1().powi(ji + 1), d.powi(-ki - 1) * qp(-d0l) / q.powi(ji))),
        },
        DeltaPair::EFc if dl(i, k, m) * dl(j, l - 1, n) == 1 => DeltaCase {
            twist: qp(-di0 + d0l),
            support: Some((
                C64::new(1.0, 0.0) / (q.powi(ni) * params.q1().powi(ki) * params.qc3().powi(ji + 1)),
                d.powi(-ki) * qp(-1 + d0l) / zj,
            )),
        },
        DeltaPair::EFc if dl(i - 1, k, m) * dl(j, l, n) == 1 => DeltaCase {
            twist: qp(di0 - d0l),
            support: Some((
                C64::new(1.0, 0.0) / (q.powi(ni) * params.q1().powi(ki + 1) * params.qc3().powi(ji)),
                d.powi(-ki - 1) * qp(-d0l) / zj,
            )),
        },
        DeltaPair::EEc => DeltaCase { twist: qp(-dm * d0l + dn * di0), support: None },
        DeltaPair::FFc => DeltaCase { twist: qp(dm * d0l - dn * di0), support: None },
        DeltaPair::EFc => DeltaCase { twist: qp(dm * d0l + dn * di0), support: None },
    }
}

fn kinds(pair: DeltaPair, dressed: bool) -> (OscCurrent, OscCurrent) {
    use OscCurrent::*;
    match (pair, dressed) {
        (DeltaPair::EEc, false) => (E, Ec),
        (DeltaPair::FFc, false) => (F, Fc),
        (DeltaPair::EFc, false) => (E, Fc),
        (DeltaPair::EEc, true) => (EDr, EcDr),
        (DeltaPair::FFc, true) => (FDr, FcDr),
        (DeltaPair::EFc, true) => (EDr, FcDr),
    }
}

/// Checks one component commutator for mode pairs `|a|, |b| ≤ window`.
#[allow(clippy::too_many_arguments)]
pub fn check_delta_commutator(
    basis: &FockBasis,
    params: &AlgebraParams,
    pair: DeltaPair,
    dressed: bool,
    idx: [i64; 4],
    window: i64,
    tol: f64,
) -> Vec<CheckRecord> {
    let [i, j, k, l] = idx;
    let case = if dressed { dressed_case(params, pair, i, j, k, l) } else { undressed_case(params, pair, i, j, k, l) };
    let (xk, yk) = kinds(pair, dressed);
    let r_max = basis.d_max;
    let (x, y) = (component(params, r_max, xk, i, j), component(params, r_max, yk, k, l));
    let ks: Vec<i64> = (-window..=window).collect();
    let (xm, ym) = (modes_1d(basis, params, &x, &ks), modes_1d(basis, params, &y, &ks));
    let nks: Vec<i64> = (-2 * window - 1..=2 * window - 1).collect();
    let normal = case.support.map(|(c, _)| {
        let op = VertexOp::normal_product(&x, &y).restrict_diagonal(HalfBase::new(C64::new(1.0, 0.0) / c));
        modes_1d(basis, params, &op, &nks)
    });
    let rel = match (pair, dressed) {
        (DeltaPair::EEc, false) => "delta-EEc",
        (DeltaPair::FFc, false) => "delta-FFc",
        (DeltaPair::EFc, false) => "delta-EFc",
        (DeltaPair::EEc, true) => "delta-dressed-EEc",
        (DeltaPair::FFc, true) => "delta-dressed-FFc",
        (DeltaPair::EFc, true) => "delta-dressed-EFc",
    };
    let mut out = Vec::new();
    for (ai, &a) in ks.iter().enumerate() {
        for (bi, &b) in ks.iter().enumerate() {
            let lhs = xm[ai].q_commutator(&ym[bi], case.twist);
            let rhs = match (&normal, case.support) {
                (Some(nm), Some((c, s))) => nm[(a + b - 1 + 2 * window + 1) as usize].scale(c.powi(-(b as i32)) * s),
                _ => ExactOp::zero(basis.len()),
            };
            out.push(CheckRecord::new(rel, format!("i={i} j={j} k={k} l={l} a={a} b={b}"), Residual::of(&lhs, &rhs), tol));
        }
    }
    out
}

/// All index cases: undressed with `1 ≤ i ≤ m−1`, `1 ≤ l ≤ n−1`, dressed over
/// the full range.
pub fn check_delta_commutators(basis: &FockBasis, params: &AlgebraParams, window: i64, tol: f64) -> Vec<CheckRecord> {
    let (m, n) = (params.m as i64, params.n as i64);
    let mut out = Vec::new();
    for dressed in [false, true] {
        let lo = if dressed { 0 } else { 1 };
        for pair in [DeltaPair::EEc, DeltaPair::FFc, DeltaPair::EFc] {
            for i in lo..m {
                for l in lo..n {
                    for j in 0..n {
                        for k in 0..m {
                            out.extend(check_delta_commutator(basis, params, pair, dressed, [i, j, k, l], window, tol));
                        }
                    }
                }
            }
        }
    }
    out
}
