//! Materialized mode families of the primal and dual actions.

use std::collections::HashMap;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::currents::{cartan_mode, current, k_current};
use super::engine::sum_modes_1d;
use crate::boson::tables::OscCurrent;
use crate::fock::{ExactOp, FockBasis};
use crate::params::AlgebraParams;

/// Mode matrices `E_{i,k}`, `F_{i,k}`, `K^±_{i,s}`, `H_{i,r}` of one action.
pub struct ActionModes {
    pub dual: bool,
    /// Number of node labels (`m` for the primal action, `n` for the dual).
    pub nodes: usize,
    pub e: HashMap<(i64, i64), ExactOp>,
    pub f: HashMap<(i64, i64), ExactOp>,
    pub k_plus: HashMap<(i64, i64), ExactOp>,
    pub k_minus: HashMap<(i64, i64), ExactOp>,
    pub h: HashMap<(i64, i32), ExactOp>,
    pub ef_window: i64,
    pub k_window: i64,
    pub h_max: i32,
}

impl ActionModes {
    /// Builds `E, F` for `|k| ≤ ef_window`, `K^±` for `|s| ≤ k_window` and
    /// `H_{±r}` for `1 ≤ r ≤ h_max`.
    pub fn build(basis: &FockBasis, params: &AlgebraParams, dual: bool, ef_window: i64, k_window: i64, h_max: i32) -> Self {
        let r_max = basis.d_max;
        let nodes = if dual { params.n } else { params.m };
        let (ek, fk) = if dual { (OscCurrent::Ec, OscCurrent::Fc) } else { (OscCurrent::E, OscCurrent::F) };
        let ks: Vec<i64> = (-ef_window..=ef_window).collect();
        let kp: Vec<i64> = (0..=k_window).collect();
        let km: Vec<i64> = (-k_window..=0).collect();
        let per_node: Vec<_> = (0..nodes as i64)
            .into_par_iter()
            .map(|i| {
                let e = sum_modes_1d(basis, params, &current(params, r_max, ek, i), &ks);
                let f = sum_modes_1d(basis, params, &current(params, r_max, fk, i), &ks);
                let p = sum_modes_1d(basis, params, &[k_current(params, r_max, dual, i, true)], &kp);
                let m = sum_modes_1d(basis, params, &[k_current(params, r_max, dual, i, false)], &km);
                let h: Vec<_> = (1..=h_max)
                    .flat_map(|r| [r, -r])
                    .map(|r| (r, cartan_mode(basis, params, dual, i, r)))
                    .collect();
                (i, e, f, p, m, h)
            })
            .collect();
        let mut out = Self {
            dual,
            nodes,
            e: HashMap::new(),
            f: HashMap::new(),
            k_plus: HashMap::new(),
            k_minus: HashMap::new(),
            h: HashMap::new(),
            ef_window,
            k_window,
            h_max,
        };
        for (i, e, f, p, m, h) in per_node {
            for (k, (a, b)) in ks.iter().zip(e.into_iter().zip(f)) {
                out.e.insert((i, *k), a);
                out.f.insert((i, *k), b);
            }
            for (s, a) in kp.iter().zip(p) {
                out.k_plus.insert((i, *s), a);
            }
            for (s, a) in km.iter().zip(m) {
                out.k_minus.insert((i, *s), a);
            }
            for (r, a) in h {
                out.h.insert((i, r), a);
            }
        }
        out
    }

    fn wrap(&self, i: i64) -> i64 {
        i.rem_euclid(self.nodes as i64)
    }

    pub fn e(&self, i: i64, k: i64) -> &ExactOp {
        &self.e[&(self.wrap(i), k)]
    }

    pub fn f(&self, i: i64, k: i64) -> &ExactOp {
        &self.f[&(self.wrap(i), k)]
    }

    pub fn h(&self, i: i64, r: i32) -> &ExactOp {
        &self.h[&(self.wrap(i), r)]
    }

    /// `K^+_{i,s}` (zero for `s < 0`).
    pub fn k_plus(&self, i: i64, s: i64, dim: usize) -> ExactOp {
        self.k_plus.get(&(self.wrap(i), s)).cloned().unwrap_or_else(|| ExactOp::zero(dim))
    }

    /// `K^-_{i,s}` (zero for `s > 0`).
    pub fn k_minus(&self, i: i64, s: i64, dim: usize) -> ExactOp {
        self.k_minus.get(&(self.wrap(i), s)).cloned().unwrap_or_else(|| ExactOp::zero(dim))
    }

    /// Level: `C = qⁿ` for the primal action, `Č = qᵐ` for the dual one.
    pub fn level(&self, params: &AlgebraParams) -> C64 {
        params.q.powi(if self.dual { params.m } else { params.n } as i32)
    }
}
