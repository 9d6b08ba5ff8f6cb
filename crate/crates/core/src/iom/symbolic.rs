//! Monomials in `(q₁, q₃, P)` and the linear factors built from them.
//!
//! Pole positions of the integrands are kept symbolic so that the contour
//! prescription can be decided by exponent signs instead of by moduli.

use num_complex::Complex64 as C64;

use crate::params::AlgebraParams;

/// `q₁^a q₃^b P^k` for the generators of one algebra.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    pub a: i32,
    pub b: i32,
    pub k: i32,
}

impl Mono {
    pub const ONE: Mono = Mono { a: 0, b: 0, k: 0 };

    pub const fn new(a: i32, b: i32, k: i32) -> Self {
        Self { a, b, k }
    }

    pub fn q1() -> Self {
        Self::new(1, 0, 0)
    }
    pub fn q3() -> Self {
        Self::new(0, 1, 0)
    }
    /// `q₂ = q₁⁻¹q₃⁻¹`
    pub fn q2() -> Self {
        Self::new(-1, -1, 0)
    }
    pub fn nome() -> Self {
        Self::new(0, 0, 1)
    }

    pub fn mul(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b, self.k + o.k)
    }

    pub fn inv(self) -> Self {
        Self::new(-self.a, -self.b, -self.k)
    }

    pub fn pow(self, e: i32) -> Self {
        Self::new(self.a * e, self.b * e, self.k * e)
    }
}

/// Numerical values of the generators.
#[derive(Clone, Copy, Debug)]
pub struct Gens {
    pub q1: C64,
    pub q3: C64,
    pub nome: C64,
}

impl Gens {
    pub fn eval(&self, m: Mono) -> C64 {
        self.q1.powi(m.a) * self.q3.powi(m.b) * self.nome.powi(m.k)
    }
}

/// Which of the two algebras a current belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Side {
    Primal,
    Dual,
}

/// Dressed `𝔼` or `𝔽`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cur {
    E,
    F,
}

impl Side {
    /// Generators with `P = p`, `p*`, `p̌` or `p̌*` as the nome of `cur`.
    pub fn gens(self, params: &AlgebraParams, cur: Cur) -> Gens {
        match (self, cur) {
            (Side::Primal, Cur::F) => Gens { q1: params.q1(), q3: params.q3(), nome: params.p() },
            (Side::Primal, Cur::E) => Gens { q1: params.q1(), q3: params.q3(), nome: params.p_star() },
            (Side::Dual, Cur::F) => Gens { q1: params.qc1(), q3: params.qc3(), nome: params.pc() },
            (Side::Dual, Cur::E) => Gens { q1: params.qc1(), q3: params.qc3(), nome: params.pc_star() },
        }
    }

    /// Number of nodes of the algebra and number of components per current.
    pub fn shape(self, params: &AlgebraParams) -> (usize, usize) {
        match self {
            Side::Primal => (params.m, params.n),
            Side::Dual => (params.n, params.m),
        }
    }
}

/// `(c t; P)_∞^power` when `inf`, else `(1 - c t)^power`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymFactor {
    pub c: Mono,
    pub inf: bool,
    pub power: i32,
}

fn lin(c: Mono, power: i32) -> SymFactor {
    SymFactor { c, inf: false, power }
}

fn inf(c: Mono, power: i32) -> SymFactor {
    SymFactor { c, inf: true, power }
}

/// Oscillator contraction of two dressed components of the same kind and
/// algebra, `X^{node,comp}(z) X^{node',comp'}(w)`, in `t = w/z`. Nodes are
/// taken modulo the number of nodes; components are literal `0 ≤ c < count`.
pub fn dressed_pair(cur: Cur, nodes: usize, left: (i64, i64), right: (i64, i64)) -> Vec<SymFactor> {
    use std::cmp::Ordering::*;
    let is = |a: i64, b: i64| (a - b).rem_euclid(nodes as i64) == 0;
    let (i, j) = left;
    let (k, l) = right;
    let rows = [is(i, k), is(i + 1, k), is(i - 1, k)];
    let p = Mono::nome();
    let (q1, q2, q3) = (Mono::q1(), Mono::q2(), Mono::q3());
    let mut out = Vec::new();
    for (row, hit) in rows.iter().enumerate() {
        if !hit {
            continue;
        }
        // numerator and denominator constants for the three columns
        let (num, den) = match (cur, row) {
            (Cur::F, 0) => (q2.inv(), q2),
            (Cur::F, 1) => (q3.inv(), q1),
            (Cur::F, 2) => (q1.inv(), q3),
            (Cur::E, 0) => (q2, q2.inv()),
            (Cur::E, 1) => (q1, q3.inv()),
            (Cur::E, 2) => (q3, q1.inv()),
            _ => unreachable!(),
        };
        let cell = match (j.cmp(&l), row, cur) {
            (Less, _, _) => vec![inf(num, 1), inf(den, -1)],
            (Equal, 0, _) => vec![lin(Mono::ONE, 1), inf(num, 1), inf(p.mul(den), -1)],
            (Equal, _, _) => vec![inf(p.mul(num), 1), inf(den, -1)],
            (Greater, _, _) => vec![inf(p.mul(num), 1), inf(p.mul(den), -1)],
        };
        out.extend(cell);
        if row == 0 {
            break;
        }
    }
    out
}

/// `Θ_P(c·t^dir)⁻¹` as linear factors in `t^{±1}`; the constant `(P;P)_∞⁻¹`
/// is returned separately by [`theta_constant`].
pub fn theta_reciprocal(c: Mono, dir: i32) -> Vec<(SymFactor, i32)> {
    // Θ_P(z) = (z;P)(P/z;P)(P;P)
    vec![(inf(c, -1), dir), (inf(Mono::nome().mul(c.inv()), -1), -dir)]
}

/// `(P;P)_∞` truncated to `k_p + 1` factors.
pub fn theta_constant(gens: &Gens, k_p: usize) -> C64 {
    (1..=k_p as i32 + 1).map(|k| C64::new(1.0, 0.0) - gens.nome.powi(k)).product()
}

/// Exact `log` coefficient of `Π factors` at `t^r` (`|P| < 1`).
pub fn log_coeff(factors: &[SymFactor], gens: &Gens, r: i32) -> C64 {
    factors
        .iter()
        .map(|f| {
            let geo = if f.inf { C64::new(1.0, 0.0) / (C64::new(1.0, 0.0) - gens.nome.powi(r)) } else { C64::new(1.0, 0.0) };
            -(f.power as f64) * gens.eval(f.c).powi(r) / r as f64 * geo
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boson::tables::{log_contraction, OscCurrent};
    use crate::params::SamplingRegime;

    fn agree(params: &AlgebraParams, side: Side, cur: Cur) -> f64 {
        let osc = match (side, cur) {
            (Side::Primal, Cur::E) => OscCurrent::EDr,
            (Side::Primal, Cur::F) => OscCurrent::FDr,
            (Side::Dual, Cur::E) => OscCurrent::EcDr,
            (Side::Dual, Cur::F) => OscCurrent::FcDr,
        };
        let (nodes, comps) = side.shape(params);
        let gens = side.gens(params, cur);
        let mut worst: f64 = 0.0;
        for a in 0..nodes as i64 {
            for c in 0..comps as i64 {
                for b in 0..nodes as i64 {
                    for d in 0..comps as i64 {
                        let f = dressed_pair(cur, nodes, (a, c), (b, d));
                        // the dual labels are (component, node)
                        let (x, y) = match side {
                            Side::Primal => ((osc, a, c), (osc, b, d)),
                            Side::Dual => ((osc, c, a), (osc, d, b)),
                        };
                        for r in 1..=10 {
                            let want = log_contraction(params, x, y, r);
                            let got = log_coeff(&f, &gens, r);
                            worst = worst.max((want - got).norm() / want.norm().max(1.0));
                        }
                    }
                }
            }
        }
        worst
    }

    #[test]
    fn dressed_pairs_match_boson_commutators() {
        for (m, n) in [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)] {
            let params = AlgebraParams::sample(m, n, 11, &SamplingRegime::default()).unwrap();
            for side in [Side::Primal, Side::Dual] {
                for cur in [Cur::E, Cur::F] {
                    let w = agree(&params, side, cur);
                    assert!(w < 1e-10, "({m},{n}) {side:?} {cur:?}: {w:e}");
                }
            }
        }
    }
}
