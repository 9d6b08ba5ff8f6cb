//! The currents of the level-n action of `E_m`, the level-m action of the
//! dual algebra, and their dressed versions.

use num_complex::Complex64 as C64;

use super::engine::{Affine, VertexOp, ZeroModeFactor};
use crate::boson::tables::OscCurrent;
use crate::boson::{current_coefficient, h_mode, hc_mode, BosonExpr};
use crate::fock::{diagonal_op, ExactOp, FockBasis};
use crate::params::{AlgebraParams, HalfBase};

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

struct Lat {
    m: usize,
    n: usize,
}

impl Lat {
    fn pos(&self, i: i64, j: i64) -> usize {
        i.rem_euclid(self.m as i64) as usize * self.n + j.rem_euclid(self.n as i64) as usize
    }

    fn zero(&self) -> Affine {
        Affine::constant(0, self.m * self.n)
    }

    fn d(&self, i: i64, j: i64) -> Affine {
        self.zero().with(self.pos(i, j), 1)
    }

    /// `𝗲_i = Σ_t ∂_{i,t}`
    fn e(&self, i: i64) -> Affine {
        (0..self.n as i64).fold(self.zero(), |a, t| a.plus(&self.d(i, t)))
    }

    /// `𝗲̌_j = -Σ_s ∂_{s,j}`
    fn ec(&self, j: i64) -> Affine {
        (0..self.m as i64).fold(self.zero(), |a, s| a.plus(&self.d(s, j).times(-1)))
    }
}

/// Which zero-mode factor accompanies a component current.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroKind {
    U,
    V,
    Uc,
    Vc,
}

impl OscCurrent {
    pub fn zero_kind(self) -> ZeroKind {
        match self {
            Self::E | Self::EDr => ZeroKind::U,
            Self::F | Self::FDr => ZeroKind::V,
            Self::Ec | Self::EcDr => ZeroKind::Uc,
            Self::Fc | Self::FcDr => ZeroKind::Vc,
        }
    }

    pub fn is_dual(self) -> bool {
        matches!(self, Self::Ec | Self::Fc | Self::EcDr | Self::FcDr)
    }
}

/// Zero-mode factor `U^{i,j}`, `V^{i,j}`, `Ǔ^{i,j}` or `V̌^{i,j}` in the
/// variable `z`; indices are representatives `0 ≤ i < m`, `0 ≤ j < n`.
pub fn zero_mode_factor(params: &AlgebraParams, kind: ZeroKind, i: i64, j: i64) -> ZeroModeFactor {
    let (m, n) = (params.m as i64, params.n as i64);
    let l = Lat { m: params.m, n: params.n };
    let qh = params.q_half();
    let mut zf = ZeroModeFactor::identity(1, params.m * params.n);
    match kind {
        ZeroKind::U | ZeroKind::V => {
            let ip = i - 1;
            // D = ∂_{i-1,j} - ∂_{i,j}
            let dd = l.d(ip, j).plus(&l.d(i, j).times(-1));
            let dpow2 = if i == 0 {
                l.e(m - 1).times(1 - 2 * m).plus(&l.e(0)).plus(&l.d(m - 1, j).times(2 * m))
            } else {
                l.e(ip).times(1 - 2 * i).plus(&l.e(i).times(1 + 2 * i)).plus(&dd.times(2 * i))
            };
            let zexp = Affine { constant: 1, ..dd.clone() };
            if kind == ZeroKind::U {
                zf.shifts = vec![(l.pos(i, j), -1), (l.pos(ip, j), 1)];
                let tail = (j + 1..n).fold(l.zero(), |a, t| a.plus(&l.d(ip, t)).plus(&l.d(i, t).times(-1)));
                zf.var_exp = vec![zexp.clone()];
                zf.powers = vec![
                    (qh, zexp.times(2 * (n - 1 - j)).plus(&tail.times(-2))),
                    (params.d_half(), dpow2),
                ];
            } else {
                zf.shifts = vec![(l.pos(ip, j), -1), (l.pos(i, j), 1)];
                let zexp = Affine { constant: 1, ..dd.times(-1) };
                let head = (0..j).fold(l.zero(), |a, t| a.plus(&l.d(ip, t)).plus(&l.d(i, t).times(-1)));
                zf.var_exp = vec![zexp.clone()];
                zf.powers = vec![(qh, zexp.times(2 * j).plus(&head.times(2))), (params.d_half(), dpow2.times(-1))];
            }
        }
        ZeroKind::Uc | ZeroKind::Vc => {
            let jp = j - 1;
            // D = ∂_{i,j-1} - ∂_{i,j}
            let dd = l.d(i, jp).plus(&l.d(i, j).times(-1));
            let dpow2 = if j == 0 {
                l.ec(n - 1).times(1 - 2 * n).plus(&l.ec(0)).plus(&l.d(i, n - 1).times(-2 * n))
            } else {
                l.ec(jp).times(1 - 2 * j).plus(&l.ec(j).times(1 + 2 * j)).plus(&dd.times(-2 * j))
            };
            let tail_s = |range: std::ops::Range<i64>| range.fold(l.zero(), |a, s| a.plus(&l.d(s, jp)).plus(&l.d(s, j).times(-1)));
            if kind == ZeroKind::Uc {
                zf.shifts = vec![(l.pos(i, j), 1), (l.pos(i, jp), -1)];
                let zexp = Affine { constant: 1, ..dd.times(-1) };
                zf.var_exp = vec![zexp.clone()];
                zf.powers = vec![
                    (qh, zexp.times(2 * (m - 1 - i)).plus(&tail_s(i + 1..m).times(2))),
                    (params.dc_half(), dpow2),
                ];
            } else {
                zf.shifts = vec![(l.pos(i, jp), 1), (l.pos(i, j), -1)];
                let zexp = Affine { constant: 1, ..dd.clone() };
                zf.var_exp = vec![zexp.clone()];
                zf.powers = vec![
                    (qh, zexp.times(2 * i).plus(&tail_s(0..i).times(-2))),
                    (params.dc_half(), dpow2.times(-1)),
                ];
            }
        }
    }
    zf
}

/// Component current `X^{i,j}(z) = :exp(X-boson(z)): · zero mode`, without
/// spectral weights.
pub fn component(params: &AlgebraParams, r_max: usize, kind: OscCurrent, i: i64, j: i64) -> VertexOp {
    let fam = kind.family();
    let mut op = VertexOp::exponential(params, r_max, |r| current_coefficient(params, fam, i, j, r));
    op.zero = zero_mode_factor(params, kind.zero_kind(), i.rem_euclid(params.m as i64), j.rem_euclid(params.n as i64));
    op
}

/// Spectral weight of a component inside `E_i`, `F_i`, `Ě_j` or `F̌_j`.
pub fn spectral_weight(params: &AlgebraParams, kind: OscCurrent, i: i64, j: i64) -> C64 {
    let (i, j) = (i.rem_euclid(params.m as i64) as usize, j.rem_euclid(params.n as i64) as usize);
    match kind {
        OscCurrent::E | OscCurrent::EDr if i == 0 => c(1.0) / params.u[j],
        OscCurrent::F | OscCurrent::FDr if i == 0 => params.u[j],
        OscCurrent::Ec | OscCurrent::EcDr if j == 0 => c(1.0) / params.uc[i],
        OscCurrent::Fc | OscCurrent::FcDr if j == 0 => params.uc[i],
        _ => c(1.0),
    }
}

/// Weighted components of the full current with label `idx`
/// (`E_idx` sums over `j`, `Ě_idx` sums over `i`).
pub fn current(params: &AlgebraParams, r_max: usize, kind: OscCurrent, idx: i64) -> Vec<VertexOp> {
    if kind.is_dual() {
        (0..params.m as i64)
            .map(|i| component(params, r_max, kind, i, idx).scaled(spectral_weight(params, kind, i, idx)))
            .collect()
    } else {
        (0..params.n as i64)
            .map(|j| component(params, r_max, kind, idx, j).scaled(spectral_weight(params, kind, idx, j)))
            .collect()
    }
}

/// Extended components `𝔼^{i,-1}`, `𝔽^{i,-1}`, `𝔼̌^{-1,l}`, `𝔽̌^{-1,l}`.
pub fn extended_component(params: &AlgebraParams, r_max: usize, kind: OscCurrent, idx: i64) -> VertexOp {
    let l = Lat { m: params.m, n: params.n };
    let qh = params.q_half();
    let (m, n) = (params.m as i64, params.n as i64);
    let (base, scale, tw, scalar) = match kind {
        OscCurrent::EDr => (component(params, r_max, kind, idx, n - 1), params.p_star(), l.e(idx - 1).times(-1).plus(&l.e(idx)), params.dc.powi(-(n as i32))),
        OscCurrent::FDr => (component(params, r_max, kind, idx, n - 1), params.p(), l.e(idx - 1).times(-1).plus(&l.e(idx)), params.dc.powi(-(n as i32))),
        OscCurrent::EcDr => (component(params, r_max, kind, m - 1, idx), params.pc_star(), l.ec(idx - 1).times(-1).plus(&l.ec(idx)), params.d.powi(-(m as i32))),
        OscCurrent::FcDr => (component(params, r_max, kind, m - 1, idx), params.pc(), l.ec(idx - 1).times(-1).plus(&l.ec(idx)), params.d.powi(-(m as i32))),
        _ => panic!("extended components exist only for dressed currents"),
    };
    let mut op = base.rescaled(HalfBase::new(scale)).scaled(scalar);
    op.zero.powers.push((qh, tw.times(2)));
    op
}

/// Matrix of a boson expression `Σ c_{i,j} a^{i,j}_r`.
pub fn boson_matrix(basis: &FockBasis, params: &AlgebraParams, expr: &BosonExpr) -> ExactOp {
    let mut acc = ExactOp::zero(basis.len());
    for (f, coef) in expr.coeffs.iter().enumerate() {
        if *coef != c(0.0) {
            let op = crate::fock::boson_op(basis, params, f / params.n, f % params.n, expr.mode).op;
            acc = acc.lin_comb(c(1.0), &op, *coef);
        }
    }
    acc
}

/// `H_{i,r}` (primal) or `Ȟ_{i,r}` (dual) as a matrix.
pub fn cartan_mode(basis: &FockBasis, params: &AlgebraParams, dual: bool, i: i64, r: i32) -> ExactOp {
    let e = if dual { hc_mode(params, i, r) } else { h_mode(params, i, r) };
    boson_matrix(basis, params, &e)
}

/// Diagonal `q^{a(∂)}` with `a` affine in the lattice.
pub fn q_power(basis: &FockBasis, params: &AlgebraParams, a: &Affine) -> ExactOp {
    diagonal_op(basis, |idx| {
        let lat = basis.lattice_of_rank(basis.split(idx).0);
        params.q.powi(a.eval(&lat) as i32)
    })
}

/// `𝗲_i` (primal) or `𝗲̌_i` (dual) as an affine function.
pub fn weight(params: &AlgebraParams, dual: bool, i: i64) -> Affine {
    let l = Lat { m: params.m, n: params.n };
    if dual { l.ec(i) } else { l.e(i) }
}

/// Exponent of `K_i = q^{ε_{i-1} - ε_i}` (or its dual).
pub fn k_exponent(params: &AlgebraParams, dual: bool, i: i64) -> Affine {
    weight(params, dual, i - 1).plus(&weight(params, dual, i).times(-1))
}

/// `K^±_i(z) = K_i^{±1} exp(±(q - q⁻¹) Σ_{r>0} H_{i,±r} z^{∓r})`.
pub fn k_current(params: &AlgebraParams, r_max: usize, dual: bool, i: i64, plus: bool) -> VertexOp {
    let qq = params.q - c(1.0) / params.q;
    let h = |r: i32| if dual { hc_mode(params, i, r) } else { h_mode(params, i, r) };
    let mut op = VertexOp::identity(1, params.m * params.n, r_max);
    for r in 1..=r_max {
        if plus {
            op.annihilation[0][r - 1] = h(r as i32).scale(qq).coeffs;
        } else {
            op.creation[0][r - 1] = h(-(r as i32)).scale(-qq).coeffs;
        }
    }
    let sign = if plus { 2 } else { -2 };
    op.zero.powers.push((params.q_half(), k_exponent(params, dual, i).times(sign)));
    op
}
