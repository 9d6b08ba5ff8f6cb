//! Column-major sparse complex matrices with per-column exactness flags.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

/// Column-major sparse matrix; every column is sorted by row index.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    pub dim: usize,
    pub cols: Vec<Vec<(u32, C64)>>,
}

impl SparseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, cols: vec![Vec::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, cols: (0..dim).map(|i| vec![(i as u32, C64::new(1.0, 0.0))]).collect() }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        Self {
            dim: diag.len(),
            cols: diag
                .iter()
                .enumerate()
                .map(|(i, v)| if *v == C64::new(0.0, 0.0) { Vec::new() } else { vec![(i as u32, *v)] })
                .collect(),
        }
    }

    /// Builds from unsorted `(row, value)` lists per column, merging duplicates.
    pub fn from_columns(dim: usize, cols: Vec<Vec<(u32, C64)>>) -> Self {
        let cols = cols.into_iter().map(normalize_column).collect();
        Self { dim, cols }
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        match self.cols[col].binary_search_by_key(&(row as u32), |e| e.0) {
            Ok(k) => self.cols[col][k].1,
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            cols: self.cols.iter().map(|c| c.iter().map(|&(r, v)| (r, v * s)).collect()).collect(),
        }
    }

    /// `a * self + b * other`
    pub fn lin_comb(&self, a: C64, other: &Self, b: C64) -> Self {
        assert_eq!(self.dim, other.dim);
        let cols = self
            .cols
            .par_iter()
            .zip(other.cols.par_iter())
            .map(|(x, y)| merge_columns(x, a, y, b))
            .collect();
        Self { dim: self.dim, cols }
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let dim = self.dim;
        let cols = rhs
            .cols
            .par_iter()
            .map_init(
                || (vec![C64::new(0.0, 0.0); dim], Vec::<u32>::new(), vec![false; dim]),
                |(acc, touched, seen), col| {
                    for &(k, bv) in col {
                        for &(i, av) in &self.cols[k as usize] {
                            if !seen[i as usize] {
                                seen[i as usize] = true;
                                touched.push(i);
                            }
                            acc[i as usize] += av * bv;
                        }
                    }
                    touched.sort_unstable();
                    let mut out = Vec::with_capacity(touched.len());
                    for &i in touched.iter() {
                        let v = acc[i as usize];
                        if v != C64::new(0.0, 0.0) {
                            out.push((i, v));
                        }
                        acc[i as usize] = C64::new(0.0, 0.0);
                        seen[i as usize] = false;
                    }
                    touched.clear();
                    out
                },
            )
            .collect();
        Self { dim, cols }
    }

    /// Applies `f(row, col)` as a multiplicative factor to every entry.
    pub fn map_entries(&self, f: impl Fn(usize, usize, C64) -> C64 + Sync) -> Self {
        let cols = self
            .cols
            .par_iter()
            .enumerate()
            .map(|(c, col)| col.iter().map(|&(r, v)| (r, f(r as usize, c, v))).collect())
            .collect();
        Self { dim: self.dim, cols }
    }

    /// Dense rendering; only for small test matrices.
    pub fn to_dense(&self) -> Vec<Vec<C64>> {
        let mut out = vec![vec![C64::new(0.0, 0.0); self.dim]; self.dim];
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                out[r as usize][c] = v;
            }
        }
        out
    }

    /// Sparse triplets `(row, col, value)` in column-major canonical order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r as usize, c, v)))
    }
}

fn normalize_column(mut col: Vec<(u32, C64)>) -> Vec<(u32, C64)> {
    col.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(u32, C64)> = Vec::with_capacity(col.len());
    for (r, v) in col {
        match out.last_mut() {
            Some(last) if last.0 == r => last.1 += v,
            _ => out.push((r, v)),
        }
    }
    out.retain(|e| e.1 != C64::new(0.0, 0.0));
    out
}

fn merge_columns(x: &[(u32, C64)], a: C64, y: &[(u32, C64)], b: C64) -> Vec<(u32, C64)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        let (r, v) = if take_x {
            i += 1;
            (x[i - 1].0, a * x[i - 1].1)
        } else if take_y {
            j += 1;
            (y[j - 1].0, b * y[j - 1].1)
        } else {
            i += 1;
            j += 1;
            (x[i - 1].0, a * x[i - 1].1 + b * y[j - 1].1)
        };
        if v != C64::new(0.0, 0.0) {
            out.push((r, v));
        }
    }
    out
}

/// A linear operator on the truncated space together with the set of columns
/// on which it coincides with the untruncated operator.
///
/// Column `s` is *exact* when the image of basis vector `s` under the true
/// operator lies entirely inside the truncated space.
#[derive(Clone, Debug)]
pub struct ExactOp {
    pub mat: SparseMatrix,
    pub exact: Vec<bool>,
}

impl ExactOp {
    pub fn new(mat: SparseMatrix, exact: Vec<bool>) -> Self {
        assert_eq!(mat.dim, exact.len());
        Self { mat, exact }
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(SparseMatrix::identity(dim), vec![true; dim])
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(SparseMatrix::zeros(dim), vec![true; dim])
    }

    pub fn dim(&self) -> usize {
        self.mat.dim
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.mat.scale(s), self.exact.clone())
    }

    pub fn lin_comb(&self, a: C64, other: &Self, b: C64) -> Self {
        let exact = self.exact.iter().zip(&other.exact).map(|(x, y)| *x && *y).collect();
        Self::new(self.mat.lin_comb(a, &other.mat, b), exact)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.lin_comb(C64::new(1.0, 0.0), other, C64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.lin_comb(C64::new(1.0, 0.0), other, C64::new(-1.0, 0.0))
    }

    /// Product; column `s` of `self * rhs` is exact when column `s` of `rhs`
    /// is exact and every column of `self` it reaches is exact.
    pub fn matmul(&self, rhs: &Self) -> Self {
        let mat = self.mat.matmul(&rhs.mat);
        let exact = rhs
            .mat
            .cols
            .iter()
            .zip(&rhs.exact)
            .map(|(col, &ex)| ex && col.iter().all(|&(u, _)| self.exact[u as usize]))
            .collect();
        Self::new(mat, exact)
    }

    /// `[self, rhs]_c = self*rhs - c * rhs*self`
    pub fn q_commutator(&self, rhs: &Self, c: C64) -> Self {
        self.matmul(rhs).lin_comb(C64::new(1.0, 0.0), &rhs.matmul(self), -c)
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        self.q_commutator(rhs, C64::new(1.0, 0.0))
    }

    pub fn exact_count(&self) -> usize {
        self.exact.iter().filter(|e| **e).count()
    }

    /// Largest entry modulus over exact columns.
    pub fn max_abs_exact(&self, mask: Option<&[bool]>) -> f64 {
        self.mat
            .cols
            .iter()
            .enumerate()
            .filter(|(c, _)| self.exact[*c] && mask.is_none_or(|m| m[*c]))
            .flat_map(|(_, col)| col.iter().map(|e| e.1.norm()))
            .fold(0.0, f64::max)
    }
}

/// Residual of an identity `lhs == rhs`, measured on the common exact columns.
#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct Residual {
    pub abs: f64,
    pub scale: f64,
    pub rel: f64,
    pub exact_columns: usize,
}

impl Residual {
    /// `‖lhs - rhs‖ / max(‖lhs‖, ‖rhs‖, 1)` with max-entry norms on exact columns.
    pub fn of(lhs: &ExactOp, rhs: &ExactOp) -> Self {
        let diff = lhs.sub(rhs);
        let mask: Vec<bool> = diff.exact.clone();
        let abs = diff.max_abs_exact(None);
        let scale = lhs.max_abs_exact(Some(&mask)).max(rhs.max_abs_exact(Some(&mask)));
        let denom = scale.max(1.0);
        Self { abs, scale, rel: abs / denom, exact_columns: diff.exact_count() }
    }

    /// Residual of `op == 0`, relative to a supplied reference scale.
    pub fn of_zero(op: &ExactOp, reference: f64) -> Self {
        let abs = op.max_abs_exact(None);
        Self { abs, scale: reference, rel: abs / reference.max(1.0), exact_columns: op.exact_count() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn matmul_matches_dense() {
        let a = SparseMatrix::from_columns(3, vec![vec![(0, c(1.0)), (2, c(2.0))], vec![(1, c(3.0))], vec![]]);
        let b = SparseMatrix::from_columns(3, vec![vec![(1, c(1.0))], vec![(0, c(1.0)), (1, c(-1.0))], vec![(2, c(5.0))]]);
        let p = a.matmul(&b).to_dense();
        let (ad, bd) = (a.to_dense(), b.to_dense());
        for i in 0..3 {
            for j in 0..3 {
                let want: C64 = (0..3).map(|k| ad[i][k] * bd[k][j]).sum();
                assert_eq!(p[i][j], want);
            }
        }
    }

    #[test]
    fn exactness_propagates_through_products() {
        let a = ExactOp::new(SparseMatrix::identity(2), vec![true, false]);
        let swap = SparseMatrix::from_columns(2, vec![vec![(1, c(1.0))], vec![(0, c(1.0))]]);
        let b = ExactOp::new(swap, vec![true, true]);
        // column 0 of b hits row 1, where a is inexact
        assert_eq!(a.matmul(&b).exact, vec![false, true]);
    }

    #[test]
    fn duplicate_entries_merge() {
        let m = SparseMatrix::from_columns(2, vec![vec![(1, c(1.0)), (1, c(2.0)), (0, c(0.0))], vec![]]);
        assert_eq!(m.cols[0], vec![(1, c(3.0))]);
    }
}
