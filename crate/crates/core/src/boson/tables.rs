//! Closed-form oscillator contractions and their first-principles oracle.

use num_complex::Complex64 as C64;

use super::expr::{c, current_coefficient, pair_commutator, Family};
use super::series::TruncatedSeries;
use crate::error::{Error, Result};
use crate::params::AlgebraParams;

/// Oscillator part `:exp(X(z)):` of a current component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OscCurrent {
    E,
    F,
    EDr,
    FDr,
    Ec,
    Fc,
    EcDr,
    FcDr,
}

impl OscCurrent {
    pub fn family(self) -> Family {
        match self {
            Self::E => Family::A,
            Self::F => Family::B,
            Self::EDr => Family::ADr,
            Self::FDr => Family::BDr,
            Self::Ec => Family::Ac,
            Self::Fc => Family::Bc,
            Self::EcDr => Family::AcDr,
            Self::FcDr => Family::BcDr,
        }
    }
}

/// `log` coefficient `[X_r, Y_{-r}]` of the contraction `X(z)Y(w)` in `t = w/z`.
pub fn log_contraction(params: &AlgebraParams, x: (OscCurrent, i64, i64), y: (OscCurrent, i64, i64), r: i32) -> C64 {
    let xr = current_coefficient(params, x.0.family(), x.1, x.2, r);
    let ym = current_coefficient(params, y.0.family(), y.1, y.2, -r);
    pair_commutator(params, &xr, &ym)
}

/// `exp(Σ_{r=1}^{N} [X_r, Y_{-r}] t^r)` truncated at order `N`.
pub fn contraction_series(
    params: &AlgebraParams,
    x: (OscCurrent, i64, i64),
    y: (OscCurrent, i64, i64),
    order: usize,
) -> TruncatedSeries {
    let log: Vec<C64> = (0..=order).map(|r| if r == 0 { c(0.0) } else { log_contraction(params, x, y, r as i32) }).collect();
    TruncatedSeries::univariate("t", &log).exp().expect("log series has no constant term")
}

/// `(1 - c t)^power`, or `(c t; nome)_∞^power` when a nome is present.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Factor {
    pub c: C64,
    pub nome: Option<C64>,
    pub power: i32,
}

/// Product of [`Factor`]s; the empty product is 1.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProductFormula {
    pub factors: Vec<Factor>,
}

impl ProductFormula {
    pub fn one() -> Self {
        Self::default()
    }

    fn lin(mut self, c: C64, power: i32) -> Self {
        self.factors.push(Factor { c, nome: None, power });
        self
    }

    fn inf(mut self, c: C64, nome: C64, power: i32) -> Self {
        self.factors.push(Factor { c, nome: Some(nome), power });
        self
    }

    pub fn times(mut self, other: Self) -> Self {
        self.factors.extend(other.factors);
        self
    }

    /// Number of p-factors kept so that `|c| |P|^{K+1} < tol / 10`.
    pub fn p_order(&self, tol: f64) -> usize {
        self.factors
            .iter()
            .filter_map(|f| f.nome.map(|p| (f.c.norm(), p.norm())))
            .map(|(cn, pn)| {
                let mut k = 0;
                while cn * pn.powi(k as i32 + 1) >= tol / 10.0 && k < 10_000 {
                    k += 1;
                }
                k
            })
            .max()
            .unwrap_or(0)
    }

    /// Factors with every infinite product expanded to `k_p + 1` linear factors.
    pub fn expanded(&self, k_p: usize) -> Vec<(C64, i32)> {
        let mut out = Vec::new();
        for f in &self.factors {
            match f.nome {
                None => out.push((f.c, f.power)),
                Some(p) => {
                    let mut ck = f.c;
                    for _ in 0..=k_p {
                        out.push((ck, f.power));
                        ck *= p;
                    }
                }
            }
        }
        out
    }

    /// Series in `t` to order `N` with p-products truncated at `k_p`.
    pub fn series(&self, order: usize, k_p: usize) -> TruncatedSeries {
        let one = TruncatedSeries::constant(&["t"], &[(0, order as i32)], c(1.0));
        self.expanded(k_p).into_iter().fold(one, |acc, (cf, pw)| {
            let mut lin = TruncatedSeries::zero(&["t"], &[(0, order as i32)]);
            lin.add_term(vec![0], c(1.0));
            lin.add_term(vec![1], -cf);
            let f = if pw >= 0 { lin } else { lin.reciprocal().expect("unit constant term") };
            (0..pw.unsigned_abs()).fold(acc, |a, _| a.mul(&f))
        })
    }

    /// Exact `log` coefficient at `t^r`.
    pub fn log_coeff(&self, r: i32) -> C64 {
        self.factors
            .iter()
            .map(|f| {
                let geo = f.nome.map_or(c(1.0), |p| c(1.0) / (c(1.0) - p.powi(r)));
                -(f.power as f64) * f.c.powi(r) / r as f64 * geo
            })
            .sum()
    }

    /// Value at `t` (p-products truncated at `k_p`).
    pub fn eval(&self, t: C64, k_p: usize) -> C64 {
        self.expanded(k_p).into_iter().map(|(cf, pw)| (c(1.0) - cf * t).powi(pw)).product()
    }
}

/// Contraction tables in their customary order (`Table::id` is 1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Table {
    EE,
    FF,
    EF,
    FE,
    EEDr,
    FFDr,
    EFDr,
    FEDr,
    EEc,
    EcE,
    FFc,
    FcF,
    EFc,
    FcE,
}

impl Table {
    pub const ALL: [Table; 14] = [
        Table::EE,
        Table::FF,
        Table::EF,
        Table::FE,
        Table::EEDr,
        Table::FFDr,
        Table::EFDr,
        Table::FEDr,
        Table::EEc,
        Table::EcE,
        Table::FFc,
        Table::FcF,
        Table::EFc,
        Table::FcE,
    ];

    pub fn id(self) -> usize {
        Self::ALL.iter().position(|t| *t == self).unwrap() + 1
    }

    /// Left and right current for indices `(i,j)` of the `E_m` current and
    /// `(k,l)` of the other one, as in the table captions.
    pub fn pair(self, i: i64, j: i64, k: i64, l: i64) -> ((OscCurrent, i64, i64), (OscCurrent, i64, i64)) {
        use OscCurrent as O;
        let (a, b, swap) = match self {
            Table::EE => (O::E, O::E, false),
            Table::FF => (O::F, O::F, false),
            Table::EF => (O::E, O::F, false),
            Table::FE => (O::E, O::F, true),
            Table::EEDr => (O::EDr, O::EDr, false),
            Table::FFDr => (O::FDr, O::FDr, false),
            Table::EFDr => (O::EDr, O::FDr, false),
            Table::FEDr => (O::EDr, O::FDr, true),
            Table::EEc => (O::EDr, O::EcDr, false),
            Table::EcE => (O::EDr, O::EcDr, true),
            Table::FFc => (O::FDr, O::FcDr, false),
            Table::FcF => (O::FDr, O::FcDr, true),
            Table::EFc => (O::EDr, O::FcDr, false),
            Table::FcE => (O::EDr, O::FcDr, true),
        };
        if swap { ((b, k, l), (a, i, j)) } else { ((a, i, j), (b, k, l)) }
    }
}

fn is(a: i64, b: i64, m: usize) -> bool {
    (a - b).rem_euclid(m as i64) == 0
}

/// Closed form of a table cell; indices are literal representatives
/// `0 ≤ i,k < m`, `0 ≤ j,l < n`. Cells outside the table give 1. For `m = 2`
/// the rows `i+1 ≡ k` and `i-1 ≡ k` both apply and their entries multiply.
pub fn table_closed_form(params: &AlgebraParams, table: Table, i: i64, j: i64, k: i64, l: i64) -> Result<ProductFormula> {
    let (m, n) = (params.m, params.n);
    if !(0..m as i64).contains(&i) || !(0..m as i64).contains(&k) || !(0..n as i64).contains(&j) || !(0..n as i64).contains(&l) {
        return Err(Error::InvalidCase(format!("table {} indices ({i},{j},{k},{l}) out of range", table.id())));
    }
    let (q, q1, q2, q3, qc1, qc3) = (params.q, params.q1(), params.q2(), params.q3(), params.qc1(), params.qc3());
    let (ps, p) = (params.p_star(), params.p());
    let (mi, ni) = (m as i32, n as i32);
    let (ji, ki) = (j as i32, k as i32);
    let one = ProductFormula::one;
    let rows = [is(i, k, m), is(i + 1, k, m), is(i - 1, k, m)];
    let cmp = j.cmp(&l);
    use std::cmp::Ordering::{Equal, Greater, Less};
    let mut out = one();
    match table {
        Table::EE | Table::FF | Table::EEDr | Table::FFDr => {
            for (row, hit) in rows.iter().enumerate() {
                if !hit {
                    continue;
                }
                let cell = match (table, row, cmp) {
                    (Table::EE, 0, Equal) => one().lin(c(1.0), 1).lin(q2.inv(), 1),
                    (Table::EE, 0, Greater) => one().lin(q2.inv(), 1).lin(q2, -1),
                    (Table::EE, 1, Equal) => one().lin(q1, -1),
                    (Table::EE, 1, Greater) => one().lin(q3.inv(), 1).lin(q1, -1),
                    (Table::EE, 2, Equal) => one().lin(q3, -1),
                    (Table::EE, 2, Greater) => one().lin(q1.inv(), 1).lin(q3, -1),
                    (Table::FF, 0, Equal) => one().lin(c(1.0), 1).lin(q2, 1),
                    (Table::FF, 0, Greater) => one().lin(q2, 1).lin(q2.inv(), -1),
                    (Table::FF, 1, Equal) => one().lin(q3.inv(), -1),
                    (Table::FF, 1, Greater) => one().lin(q1, 1).lin(q3.inv(), -1),
                    (Table::FF, 2, Equal) => one().lin(q1.inv(), -1),
                    // the printed denominator (1 - q₃⁻¹w/z) disagrees with the
                    // boson commutators; (1 - q₁⁻¹w/z) is what they give
                    (Table::FF, 2, Greater) => one().lin(q3, 1).lin(q1.inv(), -1),
                    (Table::EE | Table::FF, _, Less) => one(),
                    (Table::EEDr, 0, Less) => one().inf(q2, ps, 1).inf(q2.inv(), ps, -1),
                    (Table::EEDr, 0, Equal) => one().lin(c(1.0), 1).inf(q2, ps, 1).inf(ps / q2, ps, -1),
                    (Table::EEDr, 0, Greater) => one().inf(ps * q2, ps, 1).inf(ps / q2, ps, -1),
                    (Table::EEDr, 1, Less) => one().inf(q1, ps, 1).inf(q3.inv(), ps, -1),
                    (Table::EEDr, 1, Equal) => one().inf(ps * q1, ps, 1).inf(q3.inv(), ps, -1),
                    (Table::EEDr, 1, Greater) => one().inf(ps * q1, ps, 1).inf(ps / q3, ps, -1),
                    (Table::EEDr, 2, Less) => one().inf(q3, ps, 1).inf(q1.inv(), ps, -1),
                    (Table::EEDr, 2, Equal) => one().inf(ps * q3, ps, 1).inf(q1.inv(), ps, -1),
                    (Table::EEDr, 2, Greater) => one().inf(ps * q3, ps, 1).inf(ps / q1, ps, -1),
                    (Table::FFDr, 0, Less) => one().inf(q2.inv(), p, 1).inf(q2, p, -1),
                    (Table::FFDr, 0, Equal) => one().lin(c(1.0), 1).inf(q2.inv(), p, 1).inf(p * q2, p, -1),
                    (Table::FFDr, 0, Greater) => one().inf(p / q2, p, 1).inf(p * q2, p, -1),
                    (Table::FFDr, 1, Less) => one().inf(q3.inv(), p, 1).inf(q1, p, -1),
                    (Table::FFDr, 1, Equal) => one().inf(p / q3, p, 1).inf(q1, p, -1),
                    (Table::FFDr, 1, Greater) => one().inf(p / q3, p, 1).inf(p * q1, p, -1),
                    (Table::FFDr, 2, Less) => one().inf(q1.inv(), p, 1).inf(q3, p, -1),
                    (Table::FFDr, 2, Equal) => one().inf(p / q1, p, 1).inf(q3, p, -1),
                    (Table::FFDr, 2, Greater) => one().inf(p / q1, p, 1).inf(p * q3, p, -1),
                    _ => unreachable!(),
                };
                out = out.times(cell);
                if row == 0 {
                    break;
                }
            }
        }
        Table::EF | Table::EFDr | Table::FE | Table::FEDr => {
            if cmp == Equal {
                let fwd = matches!(table, Table::EF | Table::EFDr);
                let base = if fwd { q.powi(-ni + 2 * ji) } else { q.powi(ni - 2 * ji) };
                for (row, hit) in rows.iter().enumerate() {
                    if !hit {
                        continue;
                    }
                    let cell = match (fwd, row) {
                        (true, 0) => one().lin(base, -1).lin(base * q2, -1),
                        (true, 1) => one().lin(base / q3, 1),
                        (true, 2) => one().lin(base / q1, 1),
                        (false, 0) => one().lin(base, -1).lin(base / q2, -1),
                        (false, 1) => one().lin(base * q3, 1),
                        (false, 2) => one().lin(base * q1, 1),
                        _ => unreachable!(),
                    };
                    out = out.times(cell);
                    if row == 0 {
                        break;
                    }
                }
            }
        }
        _ => {
            let same_j = is(j, l, n);
            let next_j = is(j, l - 1, n);
            let row = if is(i, k, m) { 0 } else if is(i - 1, k, m) { 1 } else { return Ok(out) };
            if !same_j && !next_j {
                return Ok(out);
            }
            let col = if same_j { 0 } else { 1 };
            let (jj, kk) = (ji + col, ki + row);
            out = match table {
                Table::EEc => {
                    let cf = q.powi(mi - ni) * qc3.powi(-jj) * q3.powi(kk);
                    match (row, col) {
                        (0, 0) => one().lin(cf, -1),
                        (0, 1) => one().lin(cf / q2, 1),
                        (1, 0) => one().lin(cf * q2, 1),
                        _ => one().lin(cf, -1),
                    }
                }
                Table::EcE => {
                    let cf = q.powi(ni - mi) * qc3.powi(jj) * q3.powi(-kk);
                    match (row, col) {
                        (0, 0) => one().lin(cf, -1),
                        (0, 1) => one().lin(cf * q2, 1),
                        (1, 0) => one().lin(cf / q2, 1),
                        _ => one().lin(cf, -1),
                    }
                }
                Table::FFc => {
                    let cf = qc1.powi(jj) * q1.powi(-kk);
                    match (row, col) {
                        (0, 0) => one().lin(cf, -1),
                        (0, 1) => one().lin(cf * q2, 1),
                        (1, 0) => one().lin(cf / q2, 1),
                        _ => one().lin(cf, -1),
                    }
                }
                Table::FcF => {
                    let cf = qc1.powi(-jj) * q1.powi(kk);
                    match (row, col) {
                        (0, 0) => one().lin(cf, -1),
                        (0, 1) => one().lin(cf / q2, 1),
                        (1, 0) => one().lin(cf * q2, 1),
                        _ => one().lin(cf, -1),
                    }
                }
                Table::EFc => {
                    let cf = q.powi(-ni) * qc3.powi(-jj) * q1.powi(-kk);
                    match (row, col) {
                        (0, 0) => one().lin(cf * q2, 1),
                        (0, 1) => one().lin(cf, -1),
                        (1, 0) => one().lin(cf, -1),
                        _ => one().lin(cf / q2, 1),
                    }
                }
                Table::FcE => {
                    let cf = q.powi(ni) * qc3.powi(jj) * q1.powi(kk);
                    match (row, col) {
                        (0, 0) => one().lin(cf / q2, 1),
                        (0, 1) => one().lin(cf, -1),
                        (1, 0) => one().lin(cf, -1),
                        _ => one().lin(cf * q2, 1),
                    }
                }
                _ => unreachable!(),
            };
        }
    }
    Ok(out)
}

/// Outcome of comparing a table cell with its first-principles series.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CellCheck {
    pub table: usize,
    pub indices: (i64, i64, i64, i64),
    pub max_deviation: f64,
    pub order: usize,
    pub p_order: usize,
    /// Both series are compared in the variable `t·ρ` with this `ρ`.
    pub scale: f64,
}

/// Compares every cell of `table` against the oracle series. Coefficients
/// of `t^k` are divided by `ρ^k`, `ρ` the largest `|c|` in the cell, so that
/// cells with large constants are not judged by cancellation noise.
pub fn check_table(params: &AlgebraParams, table: Table, order: usize, tol: f64) -> Result<Vec<CellCheck>> {
    let mut out = Vec::new();
    for i in 0..params.m as i64 {
        for j in 0..params.n as i64 {
            for k in 0..params.m as i64 {
                for l in 0..params.n as i64 {
                    let formula = table_closed_form(params, table, i, j, k, l)?;
                    let k_p = formula.p_order(tol);
                    let (x, y) = table.pair(i, j, k, l);
                    let rho = formula.factors.iter().map(|f| f.c.norm()).fold(1.0, f64::max);
                    let mut oracle = contraction_series(params, x, y, order);
                    let mut closed = formula.series(order, k_p);
                    for s in [&mut oracle, &mut closed] {
                        for (e, v) in s.coeffs.iter_mut() {
                            *v /= rho.powi(e[0]);
                        }
                    }
                    let norm = oracle.max_coeff().max(closed.max_coeff()).max(1.0);
                    out.push(CellCheck {
                        table: table.id(),
                        indices: (i, j, k, l),
                        max_deviation: oracle.max_diff(&closed) / norm,
                        order,
                        p_order: k_p,
                        scale: rho,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SamplingRegime;

    #[test]
    fn all_cells_match_oracle() {
        let mut bad = Vec::new();
        for (m, n) in [(2, 2), (2, 3), (3, 2)] {
            let p = AlgebraParams::sample(m, n, 3, &SamplingRegime::default()).unwrap();
            for t in Table::ALL {
                for cell in check_table(&p, t, 8, 1e-8).unwrap() {
                    if cell.max_deviation > 1e-8 {
                        bad.push(format!("({m},{n}) table {} {:?} dev {:.2e}", cell.table, cell.indices, cell.max_deviation));
                    }
                }
            }
        }
        assert!(bad.is_empty(), "{}\n{} mismatches", bad.join("\n"), bad.len());
    }

    fn params() -> AlgebraParams {
        AlgebraParams::sample(2, 3, 5, &SamplingRegime::default()).unwrap()
    }

    #[test]
    fn spec_examples() {
        let p = params();
        let q2 = p.q2();
        let same = contraction_series(&p, (OscCurrent::E, 1, 1), (OscCurrent::E, 1, 1), 6);
        let want = ProductFormula::one().lin(c(1.0), 1).lin(q2.inv(), 1).series(6, 0);
        assert!(same.max_diff(&want) < 1e-12);
        let ff = table_closed_form(&p, Table::FF, 0, 1, 0, 1).unwrap();
        assert_eq!(ff, ProductFormula::one().lin(c(1.0), 1).lin(q2, 1));
        let ee = table_closed_form(&p, Table::EEDr, 1, 0, 1, 2).unwrap();
        let ps = p.p_star();
        assert_eq!(ee, ProductFormula::one().inf(q2, ps, 1).inf(q2.inv(), ps, -1));
        let (j, k) = (2, 1);
        let f = table_closed_form(&p, Table::FFc, 1, j, k, j).unwrap();
        assert_eq!(f, ProductFormula::one().lin(p.qc1().powi(j as i32) * p.q1().powi(-(k as i32)), -1));
        let empty = contraction_series(&p, (OscCurrent::FDr, 0, 0), (OscCurrent::FcDr, 1, 1), 0);
        assert_eq!(empty.coeffs.len(), 1);
        assert_eq!(empty.coeff(&[0]), c(1.0));
    }

    #[test]
    fn trivial_cells_are_one() {
        let p = AlgebraParams::sample(3, 3, 2, &SamplingRegime::default()).unwrap();
        // i = 0, k = 2 is adjacent for m = 3; use j < l for a trivial E–E cell
        let f = table_closed_form(&p, Table::EE, 0, 0, 2, 1).unwrap();
        assert!(f.factors.is_empty());
        assert!(table_closed_form(&p, Table::EE, 3, 0, 0, 0).is_err());
    }

    #[test]
    fn log_coefficients_are_exact_geometric_sums() {
        let p = params();
        let f = table_closed_form(&p, Table::FFDr, 0, 1, 1, 0).unwrap();
        let k_p = f.p_order(1e-14);
        let s = f.series(5, k_p);
        let log: Vec<C64> = (0..=5).map(|r| if r == 0 { c(0.0) } else { f.log_coeff(r) }).collect();
        let e = TruncatedSeries::univariate("t", &log).exp().unwrap();
        assert!(e.max_diff(&s) < 1e-10 * s.max_coeff().max(1.0));
    }
}
