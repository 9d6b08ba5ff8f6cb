//! Normal-ordered vertex operators in one or two formal variables, expanded
//! into mode matrices on the truncated Fock space.

use std::collections::HashMap;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::boson::BosonExpr;
use crate::fock::{ExactOp, FockBasis, SparseMatrix};
use crate::params::{AlgebraParams, HalfBase};

/// `constant + Σ coeffs[pos] ∂_pos` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Affine {
    pub constant: i64,
    pub coeffs: Vec<i64>,
}

impl Affine {
    pub fn constant(c: i64, len: usize) -> Self {
        Self { constant: c, coeffs: vec![0; len] }
    }

    pub fn eval(&self, lattice: &[i32]) -> i64 {
        self.constant + self.coeffs.iter().zip(lattice).map(|(c, x)| c * *x as i64).sum::<i64>()
    }

    /// Adds `k ∂_pos`.
    pub fn with(mut self, pos: usize, k: i64) -> Self {
        self.coeffs[pos] += k;
        self
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self {
            constant: self.constant + other.constant,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn times(&self, k: i64) -> Self {
        Self { constant: self.constant * k, coeffs: self.coeffs.iter().map(|a| a * k).collect() }
    }

    /// Value after the lattice point moves by `shift`.
    pub fn shifted(&self, shift: &[i32]) -> Self {
        Self { constant: self.eval(shift), coeffs: self.coeffs.clone() }
    }
}

/// Lattice part of a vertex operator: a word of shifts `e^{±ε}` (leftmost
/// first) times monomials whose exponents are affine in the `∂`'s of the
/// state the word acts on.
#[derive(Clone, Debug, Default)]
pub struct ZeroModeFactor {
    pub shifts: Vec<(usize, i32)>,
    /// Exponent of each formal variable.
    pub var_exp: Vec<Affine>,
    /// `base^{exponent / 2}`.
    pub powers: Vec<(HalfBase, Affine)>,
}

impl ZeroModeFactor {
    pub fn identity(nvars: usize, positions: usize) -> Self {
        Self { shifts: Vec::new(), var_exp: vec![Affine::constant(0, positions); nvars], powers: Vec::new() }
    }

    /// Net lattice shift of the word.
    pub fn total_shift(&self, positions: usize) -> Vec<i32> {
        let mut out = vec![0; positions];
        for &(p, s) in &self.shifts {
            out[p] += s;
        }
        out
    }

    /// Applies the factor to a lattice point. Returns the target, the sign,
    /// the scalar and the variable exponents.
    pub fn apply(&self, basis: &FockBasis, lattice: &[i32]) -> (Vec<i32>, f64, C64, Vec<i64>) {
        let exps = self.var_exp.iter().map(|a| a.eval(lattice)).collect();
        let scalar = self.powers.iter().map(|(b, a)| b.pow_half(a.eval(lattice))).product();
        let mut target = lattice.to_vec();
        let mut sign = 1.0;
        for &(pos, s) in self.shifts.iter().rev() {
            let (i, j) = (pos / basis.n, pos % basis.n);
            sign *= basis.shift_sign(&target, i, j);
            target[pos] += s;
        }
        (target, sign, scalar, exps)
    }
}

/// `scalar · :exp(Σ_v Σ_r γ_{v,r}·a_{-r} z_v^r) exp(Σ_v Σ_r δ_{v,r}·a_r z_v^{-r}): · zero`.
/// Oscillator data is indexed `[var][r-1][family]`, family `i*n + j`.
#[derive(Clone, Debug)]
pub struct VertexOp {
    pub nvars: usize,
    pub creation: Vec<Vec<Vec<C64>>>,
    pub annihilation: Vec<Vec<Vec<C64>>>,
    pub zero: ZeroModeFactor,
    pub scalar: C64,
}

impl VertexOp {
    pub fn identity(nvars: usize, families: usize, r_max: usize) -> Self {
        let empty = vec![vec![vec![C64::new(0.0, 0.0); families]; r_max]; nvars];
        Self {
            nvars,
            creation: empty.clone(),
            annihilation: empty,
            zero: ZeroModeFactor::identity(nvars, families),
            scalar: C64::new(1.0, 0.0),
        }
    }

    /// Single-variable `:exp(Σ_{r≠0} X_r z^{-r}):` from a mode-coefficient closure.
    pub fn exponential(params: &AlgebraParams, r_max: usize, coeff: impl Fn(i32) -> BosonExpr) -> Self {
        let mut op = Self::identity(1, params.m * params.n, r_max);
        for r in 1..=r_max {
            op.creation[0][r - 1] = coeff(-(r as i32)).coeffs;
            op.annihilation[0][r - 1] = coeff(r as i32).coeffs;
        }
        op
    }

    /// Normal-ordered product `:X(z) Y(w):` of two single-variable operators
    /// in two variables (`z` first).
    pub fn normal_product(x: &Self, y: &Self) -> Self {
        assert!(x.nvars == 1 && y.nvars == 1);
        let positions = x.zero.var_exp[0].coeffs.len();
        let mut zero = ZeroModeFactor::identity(2, positions);
        zero.shifts = x.zero.shifts.iter().chain(&y.zero.shifts).copied().collect();
        zero.var_exp = vec![x.zero.var_exp[0].clone(), y.zero.var_exp[0].clone()];
        zero.powers = x.zero.powers.iter().chain(&y.zero.powers).cloned().collect();
        Self {
            nvars: 2,
            creation: vec![x.creation[0].clone(), y.creation[0].clone()],
            annihilation: vec![x.annihilation[0].clone(), y.annihilation[0].clone()],
            zero,
            scalar: x.scalar * y.scalar,
        }
    }

    /// Zero-mode part of the product `X(z)Y(w)` with the oscillators still
    /// normal ordered: the lattice data of `x` is read after `y` has shifted
    /// the lattice, so `X(z)Y(w) = f(w/z) · ordered_product(x, y)`.
    pub fn ordered_product(x: &Self, y: &Self) -> Self {
        let positions = x.zero.var_exp[0].coeffs.len();
        let shift = y.zero.total_shift(positions);
        let mut xs = x.clone();
        xs.zero.var_exp = x.zero.var_exp.iter().map(|a| a.shifted(&shift)).collect();
        xs.zero.powers = x.zero.powers.iter().map(|(b, a)| (*b, a.shifted(&shift))).collect();
        Self::normal_product(&xs, y)
    }

    /// Substitutes `w = c z` in a two-variable operator. `c_half` supplies
    /// `c` with a square root for the half-integral exponents of `w`.
    pub fn restrict_diagonal(&self, c_half: HalfBase) -> Self {
        assert_eq!(self.nvars, 2);
        let cc = c_half.value;
        let creation = vec![(0..self.creation[0].len())
            .map(|r| {
                let k = cc.powi(r as i32 + 1);
                self.creation[0][r].iter().zip(&self.creation[1][r]).map(|(a, b)| a + k * b).collect()
            })
            .collect()];
        let annihilation = vec![(0..self.annihilation[0].len())
            .map(|r| {
                let k = cc.powi(-(r as i32 + 1));
                self.annihilation[0][r].iter().zip(&self.annihilation[1][r]).map(|(a, b)| a + k * b).collect()
            })
            .collect()];
        let mut zero = self.zero.clone();
        zero.var_exp = vec![self.zero.var_exp[0].plus(&self.zero.var_exp[1])];
        zero.powers.push((c_half, self.zero.var_exp[1].times(2)));
        Self { nvars: 1, creation, annihilation, zero, scalar: self.scalar }
    }

    pub fn scaled(mut self, s: C64) -> Self {
        self.scalar *= s;
        self
    }

    /// Replaces the variable `z` by `s z` (single variable); `s_half` carries
    /// the square root used for the lattice-dependent exponent.
    pub fn rescaled(&self, s_half: HalfBase) -> Self {
        assert_eq!(self.nvars, 1);
        let s = s_half.value;
        let mut out = self.clone();
        for (r, row) in out.creation[0].iter_mut().enumerate() {
            row.iter_mut().for_each(|x| *x *= s.powi(r as i32 + 1));
        }
        for (r, row) in out.annihilation[0].iter_mut().enumerate() {
            row.iter_mut().for_each(|x| *x *= s.powi(-(r as i32 + 1)));
        }
        out.zero.powers.push((s_half, self.zero.var_exp[0].times(2)));
        out
    }
}

type Terms = Vec<(Vec<u8>, [i64; 2], C64)>;

struct CreationTable {
    /// `(added multiplicities, degree, exponents, coefficient)` sorted by degree.
    terms: Vec<(Vec<u8>, usize, [i64; 2], C64)>,
}

fn creation_table(op: &VertexOp, basis: &FockBasis) -> CreationTable {
    let d_max = basis.d_max;
    let families = basis.m * basis.n;
    // (var, family, r) generators with nonzero coefficient
    let mut gens = Vec::new();
    for v in 0..op.nvars {
        for r in 1..=d_max.min(op.creation[v].len()) {
            for f in 0..families {
                let g = op.creation[v][r - 1][f];
                if g != C64::new(0.0, 0.0) {
                    gens.push((v, f, r, g));
                }
            }
        }
    }
    let mut terms = Vec::new();
    let mut counts = vec![0u32; gens.len()];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        gens: &[(usize, usize, usize, C64)],
        k: usize,
        budget: usize,
        counts: &mut Vec<u32>,
        out: &mut Vec<(Vec<u8>, usize, [i64; 2], C64)>,
        d_max: usize,
        families: usize,
        used: usize,
    ) {
        if k == gens.len() {
            let mut add = vec![0u8; families * d_max];
            let mut exps = [0i64; 2];
            let mut coeff = C64::new(1.0, 0.0);
            for (g, &c) in gens.iter().zip(counts.iter()) {
                if c > 0 {
                    add[g.1 * d_max + g.2 - 1] += c as u8;
                    exps[g.0] += (g.2 as i64) * c as i64;
                    let fact: f64 = (1..=c).map(|x| x as f64).product();
                    coeff *= g.3.powi(c as i32) / fact;
                }
            }
            out.push((add, used, exps, coeff));
            return;
        }
        let r = gens[k].2;
        let mut c = 0;
        while c * r <= budget {
            counts[k] = c as u32;
            rec(gens, k + 1, budget - c * r, counts, out, d_max, families, used + c * r);
            c += 1;
        }
        counts[k] = 0;
    }
    rec(&gens, 0, d_max, &mut counts, &mut terms, d_max, families, 0);
    terms.sort_by_key(|t| t.1);
    CreationTable { terms }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Oscillator action on one monomial: annihilation by translation, then the
/// creation exponential up to the degree headroom.
fn oscillator_terms(
    op: &VertexOp,
    params: &AlgebraParams,
    basis: &FockBasis,
    table: &CreationTable,
    osc: &[u8],
) -> Terms {
    let d_max = basis.d_max;
    let mut partial: Terms = vec![(osc.to_vec(), [0, 0], C64::new(1.0, 0.0))];
    for (slot, &k) in osc.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let (f, r) = (slot / d_max, slot % d_max + 1);
        let norm = params.boson_norm(r as i32);
        let ys: Vec<C64> = (0..op.nvars)
            .map(|v| op.annihilation[v].get(r - 1).map_or(C64::new(0.0, 0.0), |row| row[f] * norm))
            .collect();
        if ys.iter().all(|y| *y == C64::new(0.0, 0.0)) {
            continue;
        }
        let mut next = Vec::new();
        for (mono, exps, coeff) in &partial {
            // (x + y_0 + y_1)^k = Σ C(k,a) C(k-a,b) x^{k-a-b} y_0^a y_1^b
            for a in 0..=k as u32 {
                let b_max = if op.nvars > 1 { k as u32 - a } else { 0 };
                for b in 0..=b_max {
                    let ya = if a > 0 { ys[0].powi(a as i32) } else { C64::new(1.0, 0.0) };
                    let yb = if b > 0 { ys[1].powi(b as i32) } else { C64::new(1.0, 0.0) };
                    let c = coeff * binomial(k as u32, a) * binomial(k as u32 - a, b) * ya * yb;
                    if c == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let mut m2 = mono.clone();
                    m2[slot] -= (a + b) as u8;
                    let e = [exps[0] - (a as i64) * r as i64, exps[1] - (b as i64) * r as i64];
                    next.push((m2, e, c));
                }
            }
        }
        partial = next;
    }
    let mut out = Vec::new();
    for (mono, exps, coeff) in partial {
        let deg: usize = mono.iter().enumerate().map(|(s, &k)| k as usize * (s % d_max + 1)).sum();
        let headroom = d_max.saturating_sub(deg);
        for (add, d, e2, c2) in &table.terms {
            if *d > headroom {
                break;
            }
            let merged: Vec<u8> = mono.iter().zip(add).map(|(a, b)| a + b).collect();
            out.push((merged, [exps[0] + e2[0], exps[1] + e2[1]], coeff * c2));
        }
    }
    out
}

/// Matrices of the requested modes. Mode `[k, l]` is the coefficient of
/// `z^{-k} w^{-l}` (`l` ignored for one variable).
pub fn mode_matrices(basis: &FockBasis, params: &AlgebraParams, op: &VertexOp, modes: &[[i64; 2]]) -> Vec<ExactOp> {
    let dim = basis.len();
    let table = creation_table(op, basis);
    let index: HashMap<[i64; 2], usize> = modes.iter().enumerate().map(|(k, m)| (norm_mode(op, *m), k)).collect();
    let per_column: Vec<(Vec<Vec<(u32, C64)>>, Vec<bool>)> = (0..dim)
        .into_par_iter()
        .map(|col| {
            let (lr, or) = basis.split(col);
            let lattice = basis.lattice_of_rank(lr);
            let (target, sign, scalar, zexp) = op.zero.apply(basis, &lattice);
            let target_rank = basis.lattice_rank(&target);
            let norm2: i64 = target.iter().map(|&x| (x as i64) * (x as i64)).sum();
            let deg2 = basis.degree2(col);
            let mut cols = vec![Vec::new(); modes.len()];
            let exact = modes
                .iter()
                .map(|m| {
                    let k_total = if op.nvars == 1 { m[0] } else { m[0] + m[1] };
                    let d2 = deg2 - 2 * k_total - norm2;
                    d2 < 0 || d2 % 2 != 0 || (target_rank.is_some() && d2 <= 2 * basis.d_max as i64)
                })
                .collect();
            if let Some(tr) = target_rank {
                let pre = op.scalar * scalar * sign;
                for (mono, exps, c) in oscillator_terms(op, params, basis, &table, basis.osc_state(or)) {
                    let mut key = [-(exps[0] + zexp[0]), 0];
                    if op.nvars > 1 {
                        key[1] = -(exps[1] + zexp[1]);
                    }
                    if let Some(&slot) = index.get(&key) {
                        if let Some(orank) = basis.osc_rank(&mono) {
                            cols[slot].push((basis.compose(tr, orank) as u32, pre * c));
                        }
                    }
                }
            }
            (cols, exact)
        })
        .collect();
    let mut out_cols: Vec<Vec<Vec<(u32, C64)>>> = vec![Vec::with_capacity(dim); modes.len()];
    let mut out_exact = vec![Vec::with_capacity(dim); modes.len()];
    for (cols, exact) in per_column {
        for (k, (c, e)) in cols.into_iter().zip(exact).enumerate() {
            out_cols[k].push(c);
            out_exact[k].push(e);
        }
    }
    out_cols
        .into_iter()
        .zip(out_exact)
        .map(|(cols, exact)| ExactOp::new(SparseMatrix::from_columns(dim, cols), exact))
        .collect()
}

fn norm_mode(op: &VertexOp, m: [i64; 2]) -> [i64; 2] {
    if op.nvars == 1 { [m[0], 0] } else { m }
}

/// Convenience wrapper for single-variable operators.
pub fn modes_1d(basis: &FockBasis, params: &AlgebraParams, op: &VertexOp, ks: &[i64]) -> Vec<ExactOp> {
    let modes: Vec<[i64; 2]> = ks.iter().map(|&k| [k, 0]).collect();
    mode_matrices(basis, params, op, &modes)
}

/// Mode matrices of a sum of single-variable operators.
pub fn sum_modes_1d(basis: &FockBasis, params: &AlgebraParams, ops: &[VertexOp], ks: &[i64]) -> Vec<ExactOp> {
    let mut acc: Vec<ExactOp> = ks.iter().map(|_| ExactOp::zero(basis.len())).collect();
    for op in ops {
        for (a, m) in acc.iter_mut().zip(modes_1d(basis, params, op, ks)) {
            *a = a.add(&m);
        }
    }
    acc
}
