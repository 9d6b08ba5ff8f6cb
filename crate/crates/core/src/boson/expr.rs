//! Linear combinations of boson modes at a fixed mode number.

use num_complex::Complex64 as C64;

use crate::params::AlgebraParams;

/// `Σ_{i,j} c_{i,j} a^{i,j}_{mode}`, coefficient of `a^{i,j}` at `i*n + j`.
#[derive(Clone, Debug, PartialEq)]
pub struct BosonExpr {
    pub mode: i32,
    pub coeffs: Vec<C64>,
    pub tag: String,
}

/// Current coefficient families built from the `b` and `b̌` bosons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
    Ac,
    Bc,
    ADr,
    BDr,
    AcDr,
    BcDr,
}

pub(crate) fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn wrap(i: i64, m: usize) -> usize {
    i.rem_euclid(m as i64) as usize
}

impl BosonExpr {
    pub fn zero(params: &AlgebraParams, mode: i32) -> Self {
        Self { mode, coeffs: vec![c(0.0); params.m * params.n], tag: String::new() }
    }

    /// The single mode `a^{i,j}_{mode}`, indices taken periodically.
    pub fn elementary(params: &AlgebraParams, i: i64, j: i64, mode: i32) -> Self {
        let mut e = Self::zero(params, mode);
        e.coeffs[wrap(i, params.m) * params.n + wrap(j, params.n)] = c(1.0);
        e.tag = format!("a^{{{i},{j}}}_{{{mode}}}");
        e
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = tag.into();
        self
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { mode: self.mode, coeffs: self.coeffs.iter().map(|x| x * s).collect(), tag: self.tag.clone() }
    }

    /// `self + s * other`
    pub fn axpy(&self, s: C64, other: &Self) -> Self {
        assert_eq!(self.mode, other.mode, "mode numbers differ");
        Self {
            mode: self.mode,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x + s * y).collect(),
            tag: self.tag.clone(),
        }
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Coefficient-wise comparison relative to the largest coefficient.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.mode == other.mode && self.axpy(c(-1.0), other).max_coeff() <= tol * self.max_coeff().max(other.max_coeff()).max(1.0)
    }

    pub fn coeff(&self, params: &AlgebraParams, i: i64, j: i64) -> C64 {
        self.coeffs[wrap(i, params.m) * params.n + wrap(j, params.n)]
    }
}

/// `[X_r, Y_{-r}]` from `[a^{i,j}_r, a^{k,l}_{-s}] = δ δ δ_{r,s} [r]²/r`.
pub fn pair_commutator(params: &AlgebraParams, x: &BosonExpr, y: &BosonExpr) -> C64 {
    if x.mode != -y.mode {
        return c(0.0);
    }
    let dot: C64 = x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a * b).sum();
    let norm = params.boson_norm(x.mode.abs());
    if x.mode > 0 { dot * norm } else { -dot * norm }
}

/// `b^{i,j}_r` (mode `r` signed, nonzero).
pub fn b(params: &AlgebraParams, i: i64, j: i64, r: i32) -> BosonExpr {
    assert!(r != 0);
    let rr = r.abs();
    let tag = format!("b^{{{i},{j}}}_{{{r}}}");
    let lower = BosonExpr::elementary(params, i - 1, j, r);
    let same = BosonExpr::elementary(params, i, j, r);
    if r > 0 {
        let qr = params.q.powi(rr);
        lower.scale(qr * params.q3().powi(rr)).axpy(-qr, &same).with_tag(tag)
    } else {
        lower.scale(params.q1().powi(rr)).axpy(c(-1.0), &same).with_tag(tag)
    }
}

/// `b̌^{i,j}_r` (mode `r` signed, nonzero).
pub fn bc(params: &AlgebraParams, i: i64, j: i64, r: i32) -> BosonExpr {
    assert!(r != 0);
    let rr = r.abs();
    let tag = format!("bc^{{{i},{j}}}_{{{r}}}");
    let lower = BosonExpr::elementary(params, i, j - 1, r);
    let same = BosonExpr::elementary(params, i, j, r);
    if r > 0 {
        let qr = params.q.powi(rr);
        lower.scale(-qr * params.qc3().powi(rr)).axpy(qr, &same).with_tag(tag)
    } else {
        lower.scale(-params.qc1().powi(rr)).axpy(c(1.0), &same).with_tag(tag)
    }
}

/// Fourier coefficient `X_r` of the current `X^{i,j}(z) = Σ X_r z^{-r}`.
pub fn current_coefficient(params: &AlgebraParams, kind: Family, i: i64, j: i64, r: i32) -> BosonExpr {
    assert!(r != 0);
    let (m, n) = (params.m as i64, params.n as i64);
    let s = r.abs();
    let q = params.q;
    let inv_qint = c(1.0) / params.qint(s);
    let (q1, q2, q3, qc1, qc3) = (params.q1(), params.q2(), params.q3(), params.qc1(), params.qc3());
    let pw = |x: C64, e: i64| x.powi((e * s as i64) as i32);
    let mut out = BosonExpr::zero(params, r);
    match (kind, r > 0) {
        (Family::A, true) | (Family::ADr, true) => {
            out = b(params, i, j, r).scale(-inv_qint * pw(q, -(n - 1)) * pw(qc3, -j));
        }
        (Family::A, false) => {
            let pre = inv_qint * pw(q, n - 2);
            out = out.axpy(pre * pw(qc3, j), &b(params, i, j, r));
            for t in j + 1..n {
                out = out.axpy(pre * (c(1.0) - pw(q2, 1)) * pw(qc3, t), &b(params, i, t, r));
            }
        }
        (Family::B, true) => {
            let pre = inv_qint * pw(q, 1);
            out = out.axpy(pre * pw(qc1, j), &b(params, i, j, r));
            for t in 0..j {
                out = out.axpy(pre * (c(1.0) - pw(q2, -1)) * pw(qc1, t), &b(params, i, t, r));
            }
        }
        (Family::B, false) | (Family::BDr, false) => {
            out = b(params, i, j, r).scale(-inv_qint * pw(qc1, -j));
        }
        (Family::Ac, true) | (Family::AcDr, true) => {
            out = bc(params, i, j, r).scale(-inv_qint * pw(q, -(m - 1)) * pw(q3, -i));
        }
        (Family::Ac, false) => {
            let pre = inv_qint * pw(q, m - 2);
            out = out.axpy(pre * pw(q3, i), &bc(params, i, j, r));
            for s2 in i + 1..m {
                out = out.axpy(pre * (c(1.0) - pw(q2, 1)) * pw(q3, s2), &bc(params, s2, j, r));
            }
        }
        (Family::Bc, true) => {
            let pre = inv_qint * pw(q, 1);
            out = out.axpy(pre * pw(q1, i), &bc(params, i, j, r));
            for s2 in 0..i {
                out = out.axpy(pre * (c(1.0) - pw(q2, -1)) * pw(q1, s2), &bc(params, s2, j, r));
            }
        }
        (Family::Bc, false) | (Family::BcDr, false) => {
            out = bc(params, i, j, r).scale(-inv_qint * pw(q1, -i));
        }
        (Family::ADr, false) => {
            let pre = inv_qint * pw(q, n - 2) * pw(qc3, j);
            let ratio = (c(1.0) - pw(q2, 1)) / (c(1.0) - pw(params.p_star(), 1));
            out = out.axpy(pre, &b(params, i, j, r));
            for t in 0..n {
                out = out.axpy(-pre * ratio * pw(qc3, -t), &b(params, i, j - t, r));
            }
        }
        (Family::BDr, true) => {
            let pre = inv_qint * pw(q, 1) * pw(qc1, j);
            let ratio = (c(1.0) - pw(q2, -1)) / (c(1.0) - pw(params.p(), 1));
            out = out.axpy(pre, &b(params, i, j, r));
            for t in 0..n {
                out = out.axpy(-pre * ratio * pw(qc1, t), &b(params, i, j + t, r));
            }
        }
        (Family::AcDr, false) => {
            let pre = inv_qint * pw(q, m - 2) * pw(q3, i);
            let ratio = (c(1.0) - pw(q2, 1)) / (c(1.0) - pw(params.pc_star(), 1));
            out = out.axpy(pre, &bc(params, i, j, r));
            for s2 in 0..m {
                out = out.axpy(-pre * ratio * pw(q3, -s2), &bc(params, i - s2, j, r));
            }
        }
        (Family::BcDr, true) => {
            let pre = inv_qint * pw(q, 1) * pw(q1, i);
            let ratio = (c(1.0) - pw(q2, -1)) / (c(1.0) - pw(params.pc(), 1));
            out = out.axpy(pre, &bc(params, i, j, r));
            for s2 in 0..m {
                out = out.axpy(-pre * ratio * pw(q1, s2), &bc(params, i + s2, j, r));
            }
        }
    }
    out.with_tag(format!("{kind:?}^{{{i},{j}}}_{{{r}}}"))
}

/// `H_{i,r}` of the level-n action.
pub fn h_mode(params: &AlgebraParams, i: i64, r: i32) -> BosonExpr {
    let s = r.abs();
    let mut out = BosonExpr::zero(params, r);
    for j in 0..params.n as i64 {
        let coef = if r > 0 {
            params.qc1().powi(j as i32 * s)
        } else {
            params.q.powi((params.n as i32 - 1) * s) * params.qc3().powi(j as i32 * s)
        };
        out = out.axpy(coef, &b(params, i, j, r));
    }
    out.with_tag(format!("H_{{{i},{r}}}"))
}

/// `Ȟ_{j,r}` of the level-m dual action.
///
/// Weights are `q₁^{ir}` for `r > 0` and `q^{(m-1)r} q₃^{ir}` for `r < 0`,
/// mirroring `H_{i,±r}` under `(b, q̌) ↔ (b̌, q)`. With these weights
/// `[Ȟ_{j,r}, Ǎ^{i,l}_{-r}]` does not depend on `i`, which the dual currents
/// need; see [`hc_mode_as_printed`] for the variant that breaks this.
pub fn hc_mode(params: &AlgebraParams, j: i64, r: i32) -> BosonExpr {
    let s = r.abs();
    let mut out = BosonExpr::zero(params, r);
    for i in 0..params.m as i32 {
        let coef = if r > 0 {
            params.q1().powi(i * s)
        } else {
            params.q.powi((params.m as i32 - 1) * s) * params.q3().powi(i * s)
        };
        out = out.axpy(coef, &bc(params, i as i64, j, r));
    }
    out.with_tag(format!("Hc_{{{j},{r}}}"))
}

/// `Ȟ_{j,r}` with weights `q₃^{-ir}` and `q^{-(m-1)r} q₁^{-ir}`.
pub fn hc_mode_as_printed(params: &AlgebraParams, j: i64, r: i32) -> BosonExpr {
    let s = r.abs();
    let mut out = BosonExpr::zero(params, r);
    for i in 0..params.m as i32 {
        let coef = if r > 0 {
            params.q3().powi(-i * s)
        } else {
            params.q.powi(-(params.m as i32 - 1) * s) * params.q1().powi(-i * s)
        };
        out = out.axpy(coef, &bc(params, i as i64, j, r));
    }
    out.with_tag(format!("Hc'_{{{j},{r}}}"))
}
