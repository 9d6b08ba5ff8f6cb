//! Pointwise cancellation of normal-ordered component products.

use num_complex::Complex64 as C64;

use super::report::CheckRecord;
use crate::boson::tables::OscCurrent;
use crate::fock::{FockBasis, Residual};
use crate::params::{AlgebraParams, HalfBase};
use crate::vertex::currents::{component, extended_component};
use crate::vertex::{modes_1d, VertexOp};

/// The three cancellation families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cancellation {
    /// `E`–`Ě` at `w = q^{n−m} q₃^{−i} q̌₃^{l} z`.
    EE,
    /// `F`–`F̌` at `w = q₁^{i} q̌₁^{−l} z`.
    FF,
    /// `E`–`F̌` at `w = qⁿ q₁^{i} q̌₃^{l} z`.
    EF,
}

impl Cancellation {
    pub const ALL: [Cancellation; 3] = [Cancellation::EE, Cancellation::FF, Cancellation::EF];

    pub fn point(self, params: &AlgebraParams, i: i64, l: i64) -> C64 {
        let (m, n) = (params.m as i32, params.n as i32);
        let (i, l) = (i as i32, l as i32);
        match self {
            Cancellation::EE => params.q.powi(n - m) * params.q3().powi(-i) * params.qc3().powi(l),
            Cancellation::FF => params.q1().powi(i) * params.qc1().powi(-l),
            Cancellation::EF => params.q.powi(n) * params.q1().powi(i) * params.qc3().powi(l),
        }
    }

    fn name(self, dressed: bool) -> &'static str {
        match (self, dressed) {
            (Cancellation::EE, false) => "cancel-UU",
            (Cancellation::FF, false) => "cancel-VV",
            (Cancellation::EF, false) => "cancel-UV",
            (Cancellation::EE, true) => "cancel-EbEb",
            (Cancellation::FF, true) => "cancel-FbFb",
            (Cancellation::EF, true) => "cancel-EbFb",
        }
    }
}

fn comp(params: &AlgebraParams, r_max: usize, kind: OscCurrent, i: i64, j: i64) -> VertexOp {
    if kind.is_dual() && i < 0 || !kind.is_dual() && j < 0 {
        let idx = if kind.is_dual() { j } else { i };
        extended_component(params, r_max, kind, idx)
    } else {
        component(params, r_max, kind, i, j)
    }
}

/// The two normal-ordered products at `w = c z`, the second one carrying its
/// `q^{±2}` prefactor.
pub fn cancellation_terms(
    params: &AlgebraParams,
    r_max: usize,
    which: Cancellation,
    dressed: bool,
    i: i64,
    l: i64,
    c: C64,
) -> [VertexOp; 2] {
    use OscCurrent::*;
    let (x, y) = match (which, dressed) {
        (Cancellation::EE, false) => (E, Ec),
        (Cancellation::FF, false) => (F, Fc),
        (Cancellation::EF, false) => (E, Fc),
        (Cancellation::EE, true) => (EDr, EcDr),
        (Cancellation::FF, true) => (FDr, FcDr),
        (Cancellation::EF, true) => (EDr, FcDr),
    };
    let q2 = params.q * params.q;
    let ((a1, b1), (a2, b2), pref) = match which {
        Cancellation::EE => (((i, l), (i, l)), ((i, l - 1), (i - 1, l)), C64::new(1.0, 0.0) / q2),
        Cancellation::FF => (((i, l), (i, l)), ((i, l - 1), (i - 1, l)), q2),
        Cancellation::EF => (((i, l), (i - 1, l)), ((i, l - 1), (i, l)), C64::new(1.0, 0.0) / q2),
    };
    let half = HalfBase::new(c);
    let prod = |p: (i64, i64), q: (i64, i64)| {
        VertexOp::normal_product(&comp(params, r_max, x, p.0, p.1), &comp(params, r_max, y, q.0, q.1)).restrict_diagonal(half)
    };
    [prod(a1, b1), prod(a2, b2).scaled(pref)]
}

/// Checks one identity for every in-range `(i, l)` and modes `|k| ≤ window`.
/// Each record compares the two terms; a control record at a perturbed
/// point is appended per family.
pub fn check_pointwise_cancellation(
    basis: &FockBasis,
    params: &AlgebraParams,
    which: Cancellation,
    dressed: bool,
    window: i64,
    tol: f64,
    control: f64,
) -> Vec<CheckRecord> {
    let (m, n) = (params.m as i64, params.n as i64);
    let lo = if dressed { 0 } else { 1 };
    let ks: Vec<i64> = (-window..=window).collect();
    let r_max = basis.d_max;
    let name = which.name(dressed);
    let mut out = Vec::new();
    let compare = |i: i64, l: i64, c: C64| -> Vec<Residual> {
        let [t1, t2] = cancellation_terms(params, r_max, which, dressed, i, l, c);
        let (m1, m2) = (modes_1d(basis, params, &t1, &ks), modes_1d(basis, params, &t2, &ks));
        m1.iter().zip(&m2).map(|(a, b)| Residual::of(a, &b.scale(C64::new(-1.0, 0.0)))).collect()
    };
    for i in lo..m {
        for l in lo..n {
            for (k, res) in ks.iter().zip(compare(i, l, which.point(params, i, l))) {
                out.push(CheckRecord::new(name, format!("i={i} l={l} k={k}"), res, tol));
            }
        }
    }
    let (i, l) = (1, 1);
    let generic = which.point(params, i, l) * C64::from_polar(1.3, 0.7);
    let worst = compare(i, l, generic).into_iter().zip(&ks).max_by(|a, b| a.0.rel.total_cmp(&b.0.rel));
    if let Some((res, k)) = worst {
        out.push(CheckRecord::witness(format!("{name}-control"), format!("i={i} l={l} k={k} generic w"), res, control));
    }
    out
}
