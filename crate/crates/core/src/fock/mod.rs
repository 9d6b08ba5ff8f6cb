//! Truncated Fock space and its elementary operators.

pub mod basis;
pub mod cache;
pub mod sparse;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

pub use basis::{Action, FockBasis, FockBasisState, ZeroMode};
pub use sparse::{ExactOp, Residual, SparseMatrix};

use crate::params::AlgebraParams;

/// Declared lattice shift of an operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeShift {
    Fixed(Vec<i32>),
    Mixed,
}

/// Sparse operator with declared degree and lattice shifts.
#[derive(Clone, Debug)]
pub struct GradedOp {
    pub op: ExactOp,
    /// Twice the degree shift; `None` for mixed-degree operators.
    pub degree2: Option<i64>,
    pub lattice: LatticeShift,
    pub tag: String,
}

impl GradedOp {
    /// Checks that every nonzero entry respects the declared shifts.
    pub fn shifts_consistent(&self, basis: &FockBasis) -> bool {
        self.op.mat.cols.par_iter().enumerate().all(|(c, col)| {
            let lc = basis.lattice_of_rank(basis.split(c).0);
            col.iter().all(|&(r, _)| {
                let r = r as usize;
                let deg_ok = self.degree2.is_none_or(|d| basis.degree2(r) - basis.degree2(c) == d);
                let lat_ok = match &self.lattice {
                    LatticeShift::Mixed => true,
                    LatticeShift::Fixed(shift) => {
                        let lr = basis.lattice_of_rank(basis.split(r).0);
                        lr.iter().zip(&lc).zip(shift).all(|((a, b), s)| a - b == *s)
                    }
                };
                deg_ok && lat_ok
            })
        })
    }
}

/// Assembles an operator column by column from an elementary action.
pub fn assemble(basis: &FockBasis, f: impl Fn(usize) -> Action + Sync) -> ExactOp {
    let (cols, exact): (Vec<_>, Vec<_>) = (0..basis.len())
        .into_par_iter()
        .map(|c| {
            let a = f(c);
            (a.terms.into_iter().map(|(r, v)| (r as u32, v)).collect::<Vec<_>>(), !a.truncated)
        })
        .unzip();
    ExactOp::new(SparseMatrix::from_columns(basis.len(), cols), exact)
}

/// Matrix of `a^{i,j}_{mode}`.
pub fn boson_op(basis: &FockBasis, params: &AlgebraParams, i: usize, j: usize, mode: i32) -> GradedOp {
    let op = assemble(basis, |c| basis.apply_boson(params, i, j, mode, c));
    GradedOp {
        op,
        degree2: Some(-2 * mode as i64),
        lattice: LatticeShift::Fixed(vec![0; basis.m * basis.n]),
        tag: format!("a^{{{i},{j}}}_{{{mode}}}"),
    }
}

/// Matrix of `e^{±ε_{i,j}}` or `∂_{i,j}`. The degree of a lattice shift is
/// state dependent, so it is declared mixed.
pub fn zero_mode_op(basis: &FockBasis, kind: ZeroMode) -> GradedOp {
    let op = assemble(basis, |c| basis.apply_zero_mode(kind, c));
    let mut shift = vec![0; basis.m * basis.n];
    let (tag, degree2) = match kind {
        ZeroMode::Raise(i, j) => {
            shift[basis.pos(i, j)] = 1;
            (format!("e^{{+eps_{{{i},{j}}}}}"), None)
        }
        ZeroMode::Lower(i, j) => {
            shift[basis.pos(i, j)] = -1;
            (format!("e^{{-eps_{{{i},{j}}}}}"), None)
        }
        ZeroMode::Partial(i, j) => (format!("d_{{{i},{j}}}"), Some(0)),
    };
    GradedOp { op, degree2, lattice: LatticeShift::Fixed(shift), tag }
}

/// Diagonal operator `f(state index)`; always exact.
pub fn diagonal_op(basis: &FockBasis, f: impl Fn(usize) -> C64 + Sync) -> ExactOp {
    let diag: Vec<C64> = (0..basis.len()).into_par_iter().map(&f).collect();
    ExactOp::new(SparseMatrix::from_diagonal(&diag), vec![true; basis.len()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SamplingRegime;

    fn setup() -> (AlgebraParams, FockBasis) {
        let p = AlgebraParams::sample(2, 2, 7, &SamplingRegime::default()).unwrap();
        let b = FockBasis::new(&p, 3, 1).unwrap();
        (p, b)
    }

    #[test]
    fn spec_boson_examples() {
        let mut p = AlgebraParams::sample(2, 2, 1, &SamplingRegime::default()).unwrap();
        p.q = C64::new(2.0, 0.0);
        let b = FockBasis::new(&p, 2, 0).unwrap();
        let vac = 0;
        let one = b.apply_boson(&p, 0, 0, -1, vac).terms[0].0;
        assert_eq!(b.apply_boson(&p, 0, 0, 1, one).terms, vec![(vac, C64::new(1.0, 0.0))]);
        let other = b.apply_boson(&p, 1, 0, -1, vac).terms[0].0;
        assert!(b.apply_boson(&p, 0, 0, 1, other).terms.is_empty());
        let two = b.apply_boson(&p, 0, 0, -2, vac).terms[0].0;
        let got = b.apply_boson(&p, 0, 0, 2, two).terms[0].1;
        assert!((got - C64::new(3.125, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn heisenberg_relations_on_exact_block() {
        let (p, b) = setup();
        for (i, j, r) in [(0, 0, 1), (1, 1, 2), (0, 1, 1)] {
            for (k, l, s) in [(0, 0, -1), (1, 1, -2), (1, 0, -1), (0, 1, -2)] {
                let x = boson_op(&b, &p, i, j, r).op;
                let y = boson_op(&b, &p, k, l, s).op;
                let comm = x.commutator(&y);
                let expect = if (i, j, r + s) == (k, l, 0) { p.boson_norm(r) } else { C64::new(0.0, 0.0) };
                let rhs = ExactOp::identity(b.len()).scale(expect);
                assert!(Residual::of(&comm, &rhs).rel < 1e-13);
            }
        }
    }

    #[test]
    fn shifts_anticommute() {
        let (_, b) = setup();
        let x = zero_mode_op(&b, ZeroMode::Raise(0, 1)).op;
        let y = zero_mode_op(&b, ZeroMode::Raise(1, 0)).op;
        let z = zero_mode_op(&b, ZeroMode::Lower(1, 1)).op;
        let anti = |a: &ExactOp, c: &ExactOp| a.matmul(c).add(&c.matmul(a));
        assert!(anti(&x, &y).max_abs_exact(None) < 1e-15);
        assert!(anti(&x, &z).max_abs_exact(None) < 1e-15);
        assert!(anti(&x, &y).exact_count() > 0);
    }

    #[test]
    fn declared_shifts_hold() {
        let (p, b) = setup();
        assert!(boson_op(&b, &p, 1, 0, -2).shifts_consistent(&b));
        assert!(zero_mode_op(&b, ZeroMode::Lower(0, 1)).shifts_consistent(&b));
        assert!(zero_mode_op(&b, ZeroMode::Partial(1, 1)).shifts_consistent(&b));
    }
}
