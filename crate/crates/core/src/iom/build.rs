//! Matrices of the integrals of motion.
//!
//! With two integration variables the integrand is `X(x₁)Y(x₂)·h` (or the
//! reversed order for the second kind). The product splits into the
//! oscillator contraction `f(t)`, `t = x₂/x₁`, and the ordered normal product
//! `N'(x₁, x₂)`. Only the `t^e` part of `N'` survives the constant term, so
//!
//! `G = Σ_{comps} w Σ_e N'_e · Σ_β c_β CT[t^{e+s_β} f(t) / Θ(q₃⁻¹t) Θ(q₁/t)]`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::contour::{moments, Kernel, Regime};
use super::symbolic::{dressed_pair, theta_constant, theta_reciprocal, Cur, Gens, Mono, Side};
use super::theta::lattice_theta_terms;
use crate::boson::tables::OscCurrent;
use crate::error::{Error, Result};
use crate::fock::{ExactOp, FockBasis, SparseMatrix};
use crate::params::{AlgebraParams, HalfBase};
use crate::vertex::currents::{component, spectral_weight, weight};
use crate::vertex::engine::{mode_matrices, VertexOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IomKind {
    First,
    Second,
    DualFirst,
    DualSecond,
}

impl IomKind {
    pub const ALL: [IomKind; 4] = [IomKind::First, IomKind::Second, IomKind::DualFirst, IomKind::DualSecond];

    pub fn side(self) -> Side {
        match self {
            IomKind::First | IomKind::Second => Side::Primal,
            IomKind::DualFirst | IomKind::DualSecond => Side::Dual,
        }
    }

    pub fn cur(self) -> Cur {
        match self {
            IomKind::First | IomKind::DualFirst => Cur::F,
            IomKind::Second | IomKind::DualSecond => Cur::E,
        }
    }

    pub fn regime(self) -> Regime {
        match self.cur() {
            Cur::F => Regime::First,
            Cur::E => Regime::Second,
        }
    }

    fn osc(self) -> OscCurrent {
        match self {
            IomKind::First => OscCurrent::FDr,
            IomKind::Second => OscCurrent::EDr,
            IomKind::DualFirst => OscCurrent::FcDr,
            IomKind::DualSecond => OscCurrent::EcDr,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IomKind::First => "G",
            IomKind::Second => "G*",
            IomKind::DualFirst => "Ǧ",
            IomKind::DualSecond => "Ǧ*",
        }
    }
}

/// `p̄_1..p̄_{m-1}` and `p̄̌_1..p̄̌_{n-1}`. The elliptic nomes themselves are
/// fixed by the algebra parameters (`p = q̌₁ⁿ`, `p̌ = q₁ᵐ`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightParams {
    pub pbar: Vec<C64>,
    pub pbar_c: Vec<C64>,
}

impl WeightParams {
    /// `p̄_i = ǔ_i/ǔ_{i-1}`, `p̄̌_l = u_l/u_{l-1}`.
    pub fn duality(params: &AlgebraParams) -> Self {
        let (pbar, pbar_c) = params.duality_weights();
        Self { pbar, pbar_c }
    }

    /// `p̄_1` moved off the constraint by `1 + δ`.
    pub fn perturbed(&self, delta: f64) -> Self {
        let mut out = self.clone();
        out.pbar[0] *= 1.0 + delta;
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    /// Ladder rung `K`: infinite products keep `K + 1` factors and the
    /// lattice theta keeps terms up to `P`-order `K` past the leading one.
    pub k_p: usize,
    /// Largest `|e|` of `x`-exponents tried before giving up.
    pub window_cap: i64,
}

impl Truncation {
    pub fn new(k_p: usize) -> Self {
        Self { k_p, window_cap: 48 }
    }
}

#[derive(Clone, Debug)]
pub struct IomOperator {
    pub kind: IomKind,
    pub mu: usize,
    pub order: usize,
    pub k_p: usize,
    /// `x`-exponent window actually used.
    pub window: i64,
    /// Lattice theta terms kept.
    pub theta_terms: usize,
    pub op: ExactOp,
}

/// Exponent of `q` in `p_s` (first kind) on the sector `lattice`; the second
/// kind uses the opposite sign.
fn sector_exponent(params: &AlgebraParams, dual: bool, s: i64, lattice: &[i32]) -> i64 {
    -weight(params, dual, s - 1).eval(lattice) + weight(params, dual, s).eval(lattice)
}

/// Kernel `f(t) / ((P;P)² Θ_P(q₃⁻¹t) Θ_P(q₁/t))` for one component pair.
fn kernel(kind: IomKind, nodes: usize, left: i64, right: i64, gens: &Gens, k_p: usize) -> Kernel {
    let mut k = Kernel::one();
    let (pair, dir) = match kind.cur() {
        // 𝔽_1(x₁)𝔽_0(x₂): contraction in x₂/x₁ = t
        Cur::F => (dressed_pair(Cur::F, nodes, (1, left), (0, right)), 1),
        // 𝔼_0(x₂)𝔼_1(x₁): contraction in x₁/x₂ = 1/t
        Cur::E => (dressed_pair(Cur::E, nodes, (0, right), (1, left)), -1),
    };
    for f in pair {
        k.push(f, dir, k_p, gens);
    }
    for (f, d) in theta_reciprocal(Mono::q3().inv(), 1).into_iter().chain(theta_reciprocal(Mono::q1(), -1)) {
        k.push(f, d, k_p, gens);
    }
    let c = theta_constant(gens, k_p);
    k.scale(C64::new(1.0, 0.0) / (c * c));
    k
}

/// Builds `G_{μ,1}`, `G*_{μ,1}`, `Ǧ_{ν,1}` or `Ǧ*_{ν,1}` on `basis`.
pub fn build_iom(
    basis: &FockBasis,
    params: &AlgebraParams,
    kind: IomKind,
    mu: usize,
    order: usize,
    wp: &WeightParams,
    trunc: &Truncation,
) -> Result<IomOperator> {
    let side = kind.side();
    let dual = side == Side::Dual;
    let (nodes, comps) = side.shape(params);
    if nodes != 2 || order != 1 {
        return Err(Error::Unsupported(format!(
            "integrals of motion are built for two integration variables (2 nodes, order 1); got {nodes} nodes, order {order}"
        )));
    }
    let pbar = if dual { &wp.pbar_c } else { &wp.pbar };
    if pbar.len() != nodes - 1 {
        return Err(Error::InvalidParams(format!("expected {} weight parameters, got {}", nodes - 1, pbar.len())));
    }
    let gens = side.gens(params, kind.cur());
    let k_p = trunc.k_p;
    let star = kind.cur() == Cur::E;

    // theta terms with unit p_s; the p_s part is applied per sector
    let terms = lattice_theta_terms(nodes, mu % nodes, HalfBase::new(gens.nome), &[C64::new(1.0, 0.0)], k_p as i32 + 2);
    let lead = terms.iter().map(|t| t.norm2).min().unwrap_or(0);
    let terms: Vec<_> = terms.into_iter().filter(|t| t.norm2 - lead <= 2 * k_p as i64).collect();
    // exponent of t in ϑ(x₁, x₂) (first kind) or ϑ(1/x₁, 1/x₂)
    let s_of = |z: &[i32]| if star { -z[1] } else { z[1] } as i64;
    let s_lo = terms.iter().map(|t| s_of(&t.z_exp)).min().unwrap_or(0);
    let s_hi = terms.iter().map(|t| s_of(&t.z_exp)).max().unwrap_or(0);

    let osc = kind.osc();
    let comp = |node: i64, c: i64| -> (VertexOp, C64) {
        let (i, j) = if dual { (c, node) } else { (node, c) };
        (component(params, basis.d_max, osc, i, j), spectral_weight(params, osc, i, j))
    };

    let dim = basis.len();
    let lattices: Vec<Vec<i32>> = (0..basis.lattice_count()).map(|r| basis.lattice_of_rank(r)).collect();
    // Π p_s^{-(β,Λ̄_s)} per sector and theta term, p_s = p̄_s q^{∓ε_{s-1}±ε_s}
    let theta_coeff: Vec<Vec<C64>> = lattices
        .iter()
        .map(|lat| {
            let sign = if star { -1 } else { 1 };
            let p1 = pbar[0] * params.q.powi((sign * sector_exponent(params, dual, 1, lat)) as i32);
            terms.iter().map(|t| t.coeff * p1.powi(-t.beta[1])).collect()
        })
        .collect();

    let mut window = (2 * basis.d_max as i64 + 4 * basis.l_max as i64 + 4).min(trunc.window_cap);
    let mut acc = ExactOp::zero(dim);
    for left in 0..comps as i64 {
        for right in 0..comps as i64 {
            let (x, wx) = comp(1, left);
            let (y, wy) = comp(0, right);
            let prod = match kind.cur() {
                Cur::F => VertexOp::ordered_product(&x, &y),
                Cur::E => VertexOp::ordered_product(&y, &x),
            };
            // modes t^e: [e, -e] for (x₁, x₂), [-e, e] for (x₂, x₁)
            let (mats, used) = loop {
                let es: Vec<i64> = (-window..=window).collect();
                let modes: Vec<[i64; 2]> = es.iter().map(|&e| if star { [-e, e] } else { [e, -e] }).collect();
                let mats = mode_matrices(basis, params, &prod, &modes);
                let edge = mats.first().unwrap().mat.nnz() + mats.last().unwrap().mat.nnz();
                if edge == 0 {
                    break (mats, es);
                }
                if window >= trunc.window_cap {
                    return Err(Error::Unsupported(format!("x-exponent window {window} overflows the cap {}", trunc.window_cap)));
                }
                window = (2 * window).min(trunc.window_cap);
            };
            let ker = kernel(kind, nodes, left, right, &gens, k_p);
            let lo = used[0] + s_lo;
            let hi = used[used.len() - 1] + s_hi;
            let mom = moments(&ker, &gens, kind.regime(), (lo as i32, hi as i32))?;
            let w = wx * wy;
            for (e, n_e) in used.iter().zip(mats) {
                if n_e.mat.nnz() == 0 {
                    acc.exact = acc.exact.iter().zip(&n_e.exact).map(|(a, b)| *a && *b).collect();
                    continue;
                }
                let per_sector: Vec<C64> = theta_coeff
                    .iter()
                    .map(|cs| {
                        w * terms.iter().zip(cs).map(|(t, c)| c * mom[(e + s_of(&t.z_exp) - lo) as usize]).sum::<C64>()
                    })
                    .collect();
                let scaled = n_e.mat.map_entries(|_, col, v| v * per_sector[basis.split(col).0]);
                acc = acc.add(&ExactOp::new(scaled, n_e.exact));
            }
        }
    }
    Ok(IomOperator { kind, mu, order, k_p, window, theta_terms: terms.len(), op: acc })
}

/// `true` when every entry connects states of equal degree and equal
/// weights `𝗲_i`, `𝗲̌_j`.
pub fn is_block_diagonal(basis: &FockBasis, params: &AlgebraParams, op: &SparseMatrix) -> bool {
    let key = |idx: usize| {
        let lat = basis.lattice_of_rank(basis.split(idx).0);
        let mut k = vec![basis.degree2(idx)];
        k.extend((0..params.m as i64).map(|i| weight(params, false, i).eval(&lat)));
        k.extend((0..params.n as i64).map(|j| weight(params, true, j).eval(&lat)));
        k
    };
    op.triplets().all(|(r, c, _)| key(r) == key(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SamplingRegime;

    fn setup() -> (AlgebraParams, FockBasis) {
        let p = AlgebraParams::sample(2, 2, 1, &SamplingRegime::default()).unwrap();
        let b = FockBasis::new(&p, 1, 1).unwrap();
        (p, b)
    }

    #[test]
    fn operators_are_block_diagonal() {
        let (p, b) = setup();
        let wp = WeightParams::duality(&p);
        for kind in IomKind::ALL {
            for mu in 0..2 {
                let g = build_iom(&b, &p, kind, mu, 1, &wp, &Truncation::new(2)).unwrap();
                assert!(g.op.mat.nnz() > 0, "{} μ={mu} vanishes", kind.name());
                assert!(is_block_diagonal(&b, &p, &g.op.mat), "{} μ={mu}", kind.name());
                assert!(g.op.exact_count() > 0);
            }
        }
    }

    #[test]
    fn other_shapes_are_unsupported() {
        let p = AlgebraParams::sample(3, 2, 1, &SamplingRegime::default()).unwrap();
        let b = FockBasis::new(&p, 1, 0).unwrap();
        let wp = WeightParams::duality(&p);
        let err = build_iom(&b, &p, IomKind::First, 0, 1, &wp, &Truncation::new(1)).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
        let (p, b) = setup();
        let wp = WeightParams::duality(&p);
        let err = build_iom(&b, &p, IomKind::First, 0, 2, &wp, &Truncation::new(1)).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn tiny_window_cap_is_reported() {
        let (p, b) = setup();
        let wp = WeightParams::duality(&p);
        let trunc = Truncation { k_p: 1, window_cap: 1 };
        assert!(matches!(build_iom(&b, &p, IomKind::First, 0, 1, &wp, &trunc), Err(Error::Unsupported(_))));
    }
}
