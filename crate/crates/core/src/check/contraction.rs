//! Products of currents against contraction × normal-ordered product.

use num_complex::Complex64 as C64;

use super::report::CheckRecord;
use crate::boson::tables::{contraction_series, OscCurrent};
use crate::fock::{ExactOp, FockBasis, Residual};
use crate::params::AlgebraParams;
use crate::vertex::currents::{component, zero_mode_factor, ZeroKind};
use crate::vertex::{mode_matrices, modes_1d, VertexOp};

/// Zero-mode contraction `L(x)R(y) = s·x^{e_L}·y^{e_R} :L(x)R(y):`.
#[derive(Clone, Copy, Debug)]
pub struct ZeroContraction {
    pub scalar: C64,
    pub left_exp: i64,
    pub right_exp: i64,
}

fn dl(a: i64, b: i64, modulus: usize) -> i64 {
    ((a - b).rem_euclid(modulus as i64) == 0) as i64
}

/// The closed forms for the pairs among `U, V` and between `U, V` and
/// `Ǔ, V̌`; `None` for dual–dual pairs. Left indices `(i,j)` belong to the
/// primal factor whenever one is present.
pub fn zero_contraction(params: &AlgebraParams, left: (ZeroKind, i64, i64), right: (ZeroKind, i64, i64)) -> Option<ZeroContraction> {
    use ZeroKind::*;
    let (m, n) = (params.m, params.n);
    let q = |e: i64| params.q.powi(e as i32);
    let d = |e: i64| params.d.powi(e as i32);
    let dc = |e: i64| params.dc.powi(e as i32);
    let zc = |scalar, left_exp, right_exp| Some(ZeroContraction { scalar, left_exp, right_exp });
    let primal = |k: ZeroKind| matches!(k, U | V);
    if primal(left.0) && primal(right.0) {
        // pairs within E_m: indices (i,j) on the U-side for V U
        let ((i, j), (k, l)) = if left.0 == V && right.0 == U { ((right.1, right.2), (left.1, left.2)) } else { ((left.1, left.2), (right.1, right.2)) };
        let abar = -dl(i - 1, k, m) + 2 * dl(i, k, m) - dl(i + 1, k, m);
        let pm = |a: i64, b: i64| {
            let ab = -dl(a - 1, b, m) + 2 * dl(a, b, m) - dl(a + 1, b, m);
            a * ab + m as i64 * dl(a, 0, m) * (dl(b, 0, m) - dl(b, -1, m))
        };
        let djl = dl(j, l, n);
        let half = dl(i - 1, k, m) - dl(i + 1, k, m);
        let dh = |twice: i64| params.d_half().pow_half(twice);
        let (lt, gt) = ((j < l) as i64, (j > l) as i64);
        let nj = n as i64 - j - 1;
        return match (left.0, right.0) {
            (U, U) => zc(q(nj * abar * djl) * dh(-half - 2 * pm(i, k) * (1 - djl)) * q(-lt * abar), abar * djl, 0),
            (V, V) => zc(q(j * abar * djl) * dh(-half - 2 * pm(i, k) * (1 - djl)) * q(-gt * abar), abar * djl, 0),
            (U, V) => zc(q(-nj * abar * djl) * dh(half + 2 * pm(i, k) * (1 - djl)) * q(lt * abar), -abar * djl, 0),
            (V, U) => zc(q(-l * abar * djl) * dh(-half + 2 * pm(k, i) * (1 - djl)) * q(lt * abar), -abar * djl, 0),
            _ => unreachable!(),
        };
    }
    if !primal(left.0) && !primal(right.0) {
        return None;
    }
    let primal_left = primal(left.0);
    let ((i, j), (k, l)) = if primal_left { ((left.1, left.2), (right.1, right.2)) } else { ((right.1, right.2), (left.1, left.2)) };
    let dm = dl(i, k, m) - dl(i - 1, k, m);
    let dn = dl(j, l, n) - dl(j, l - 1, n);
    let dd = dm * dn;
    let dpow = (-k * dl(i, k, m) + (k + 1) * dl(i - 1, k, m)) * dn;
    let dcpow = dm * (-j * dl(j, l, n) + (j + 1) * dl(j, l - 1, n));
    let (nj, mk) = (n as i64 - 1 - j, m as i64 - 1 - k);
    match (left.0, right.0) {
        (U, Uc) => zc(q(-nj * dd) * d(dpow) * q(dm * (dl(j, l - 1, n) - dl(0, l, n))), -dd, 0),
        (Uc, U) => zc(q(-mk * dd) * dc(dcpow) * q((dl(i - 1, k, m) - dl(i, 0, m)) * dn), -dd, 0),
        (V, Vc) => zc(q(-j * dd) * d(dpow) * q(-dm * (dl(j, l, n) - dl(0, l, n))), -dd, 0),
        (Vc, V) => zc(q(-k * dd) * dc(dcpow) * q(-(dl(i, k, m) - dl(i, 0, m)) * dn), -dd, 0),
        (U, Vc) => zc(q(nj * dd) * d(-dpow) * q(-dm * (dl(j, l - 1, n) - dl(0, l, n))), dd, 0),
        (Vc, U) => zc(q(k * dd) * dc(-dcpow) * q((dl(i, k, m) - dl(i, 0, m)) * dn), dd, 0),
        _ => None,
    }
}

fn zero_only(params: &AlgebraParams, kind: ZeroKind, i: i64, j: i64) -> VertexOp {
    let mut op = VertexOp::identity(1, params.m * params.n, 1);
    op.zero = zero_mode_factor(params, kind, i, j);
    op
}

/// Index ranges `0..m` / `0..n` of a zero kind's two labels.
fn kind_name(k: ZeroKind) -> &'static str {
    match k {
        ZeroKind::U => "U",
        ZeroKind::V => "V",
        ZeroKind::Uc => "Uc",
        ZeroKind::Vc => "Vc",
    }
}

/// Shared mode comparison: `L_a R_b` against `s Σ_t f_t N_{a−t+e_L, b+t+e_R}`.
#[allow(clippy::too_many_arguments)]
fn compare_products(
    basis: &FockBasis,
    params: &AlgebraParams,
    l: &VertexOp,
    r: &VertexOp,
    zc: ZeroContraction,
    f: &[C64],
    window: i64,
    tol: f64,
    rel: &str,
    case: &str,
) -> Vec<CheckRecord> {
    let ks: Vec<i64> = (-window..=window).collect();
    let (lm, rm) = (modes_1d(basis, params, l, &ks), modes_1d(basis, params, r, &ks));
    let normal = VertexOp::normal_product(l, r);
    let mut wanted = Vec::new();
    for &a in &ks {
        for &b in &ks {
            for t in 0..f.len() as i64 {
                wanted.push([a - t + zc.left_exp, b + t + zc.right_exp]);
            }
        }
    }
    wanted.sort();
    wanted.dedup();
    let nm = mode_matrices(basis, params, &normal, &wanted);
    let lookup = |key: [i64; 2]| &nm[wanted.binary_search(&key).expect("requested mode")];
    let mut out = Vec::new();
    for (ai, &a) in ks.iter().enumerate() {
        for (bi, &b) in ks.iter().enumerate() {
            let lhs = lm[ai].matmul(&rm[bi]);
            let mut rhs = ExactOp::zero(basis.len());
            for (t, ft) in f.iter().enumerate() {
                let t = t as i64;
                rhs = rhs.lin_comb(C64::new(1.0, 0.0), lookup([a - t + zc.left_exp, b + t + zc.right_exp]), zc.scalar * ft);
            }
            out.push(CheckRecord::new(rel, format!("{case} a={a} b={b}"), Residual::of(&lhs, &rhs), tol));
        }
    }
    out
}

/// Zero-mode contraction formulas checked on pure zero-mode operators for
/// every index pair and every pairing that has a closed form.
pub fn check_zero_mode_contractions(basis: &FockBasis, params: &AlgebraParams, window: i64, tol: f64) -> Vec<CheckRecord> {
    use ZeroKind::*;
    let (m, n) = (params.m as i64, params.n as i64);
    let pairs = [(U, U), (V, V), (U, V), (V, U), (U, Uc), (Uc, U), (V, Vc), (Vc, V), (U, Vc), (Vc, U)];
    let mut out = Vec::new();
    for (lk, rk) in pairs {
        for i in 0..m {
            for j in 0..n {
                for k in 0..m {
                    for l in 0..n {
                        // the primal factor always carries (i,j)
                        let (left, right) = if matches!(lk, U | V) && !(lk == V && rk == U) {
                            ((lk, i, j), (rk, k, l))
                        } else {
                            ((lk, k, l), (rk, i, j))
                        };
                        let zc = zero_contraction(params, left, right).expect("closed form");
                        let (lo, ro) = (zero_only(params, left.0, left.1, left.2), zero_only(params, right.0, right.1, right.2));
                        let rel = format!("zero-{}{}", kind_name(lk), kind_name(rk));
                        let case = format!("left=({},{}) right=({},{})", left.1, left.2, right.1, right.2);
                        out.extend(compare_products(basis, params, &lo, &ro, zc, &[C64::new(1.0, 0.0)], window, tol, &rel, &case));
                    }
                }
            }
        }
    }
    out
}

/// Full component products `X(z)Y(w) = f(w/z)·(zero contraction)·:X(z)Y(w):`
/// with the oscillator contraction expanded to `order`.
#[allow(clippy::too_many_arguments)]
pub fn check_normal_ordering(
    basis: &FockBasis,
    params: &AlgebraParams,
    x: (OscCurrent, i64, i64),
    y: (OscCurrent, i64, i64),
    order: usize,
    window: i64,
    tol: f64,
) -> Vec<CheckRecord> {
    let r_max = basis.d_max;
    let zc = zero_contraction(params, (x.0.zero_kind(), x.1, x.2), (y.0.zero_kind(), y.1, y.2)).expect("closed form");
    let series = contraction_series(params, x, y, order);
    let f: Vec<C64> = (0..=order as i32).map(|t| series.coeff(&[t])).collect();
    let (l, r) = (component(params, r_max, x.0, x.1, x.2), component(params, r_max, y.0, y.1, y.2));
    let case = format!("{:?}({},{}) {:?}({},{})", x.0, x.1, x.2, y.0, y.1, y.2);
    compare_products(basis, params, &l, &r, zc, &f, window, tol, "normal-ordering", &case)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SamplingRegime;

    #[test]
    fn ordered_product_reproduces_closed_forms() {
        use ZeroKind::*;
        let params = AlgebraParams::sample(2, 2, 5, &SamplingRegime::default()).unwrap();
        let basis = FockBasis::new(&params, 0, 1).unwrap();
        let pairs = [(U, U), (V, V), (U, V), (V, U), (U, Uc), (Uc, U), (V, Vc), (Vc, V), (U, Vc), (Vc, U)];
        let mut worst: f64 = 0.0;
        for (lk, rk) in pairs {
            for (i, j, k, l) in [(0, 0, 1, 0), (1, 1, 1, 1), (1, 0, 0, 1), (0, 1, 0, 0)] {
                let zc = zero_contraction(&params, (lk, i, j), (rk, k, l)).unwrap();
                let (lo, ro) = (zero_only(&params, lk, i, j), zero_only(&params, rk, k, l));
                let ordered = VertexOp::ordered_product(&lo, &ro);
                let normal = VertexOp::normal_product(&lo, &ro);
                for a in -2..=2 {
                    for b in -2..=2 {
                        let got = &mode_matrices(&basis, &params, &ordered, &[[a, b]])[0];
                        let want = mode_matrices(&basis, &params, &normal, &[[a + zc.left_exp, b + zc.right_exp]])[0].scale(zc.scalar);
                        worst = worst.max(Residual::of(got, &want).rel);
                    }
                }
            }
        }
        assert!(worst < 1e-12, "{worst:e}");
    }
}
