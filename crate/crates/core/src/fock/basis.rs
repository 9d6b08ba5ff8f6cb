//! Truncated total Fock space: oscillator multisets times a lattice box.

use std::collections::HashMap;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::params::AlgebraParams;

/// Default cap on the number of enumerated basis states.
pub const DEFAULT_BASIS_CAP: usize = 2_000_000;

/// Creation label `(i, j, r)` for `a^{i,j}_{-r}`.
pub type OscLabel = (usize, usize, u32);

/// One basis vector: oscillator multiplicities plus a lattice point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FockBasisState {
    /// Multiplicity of `a^{i,j}_{-r}` at slot `(i*n + j) * d_max + (r - 1)`.
    pub osc: Vec<u8>,
    /// `m_{s,t}` at index `s*n + t`.
    pub lattice: Vec<i32>,
}

impl FockBasisState {
    pub fn osc_degree(&self, d_max: usize) -> u32 {
        if d_max == 0 {
            return 0;
        }
        self.osc.iter().enumerate().map(|(slot, &k)| k as u32 * (slot % d_max + 1) as u32).sum()
    }

    /// Twice the degree `Σ r + ½ Σ m²`.
    pub fn degree2(&self, d_max: usize) -> i64 {
        2 * self.osc_degree(d_max) as i64 + self.lattice.iter().map(|&x| (x as i64) * (x as i64)).sum::<i64>()
    }
}

/// Result of a truncated elementary action.
#[derive(Clone, Debug, PartialEq)]
pub struct Action {
    pub terms: Vec<(usize, C64)>,
    /// Some contribution left the truncated space and was dropped.
    pub truncated: bool,
}

/// Zero-mode operators of the lattice part.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroMode {
    Raise(usize, usize),
    Lower(usize, usize),
    Partial(usize, usize),
}

#[derive(Clone, Debug)]
pub struct FockBasis {
    pub m: usize,
    pub n: usize,
    pub d_max: usize,
    pub l_max: i32,
    /// Oscillator multisets in canonical order, shared by every lattice point.
    osc_states: Vec<Vec<u8>>,
    osc_index: HashMap<Vec<u8>, usize>,
    osc_degrees: Vec<u32>,
    lattice_side: usize,
    lattice_count: usize,
}

impl FockBasis {
    pub fn new(params: &AlgebraParams, d_max: usize, l_max: usize) -> Result<Self> {
        Self::with_shape(params.m, params.n, d_max, l_max, DEFAULT_BASIS_CAP)
    }

    pub fn with_shape(m: usize, n: usize, d_max: usize, l_max: usize, cap: usize) -> Result<Self> {
        let side = 2 * l_max + 1;
        let lattice_count = side
            .checked_pow((m * n) as u32)
            .ok_or(Error::BasisTooLarge { size: usize::MAX, cap })?;
        let families = m * n;
        let mut osc_states = Vec::new();
        enumerate_multisets(families * d_max, d_max, &mut vec![0u8; families * d_max], 0, d_max, &mut osc_states, cap)?;
        let size = lattice_count.saturating_mul(osc_states.len());
        if size > cap {
            return Err(Error::BasisTooLarge { size, cap });
        }
        // lexicographic order of the sorted label lists
        let labels_of = |v: &Vec<u8>| -> Vec<OscLabel> { osc_labels(v, n, d_max) };
        osc_states.sort_by_cached_key(labels_of);
        let osc_index = osc_states.iter().enumerate().map(|(k, v)| (v.clone(), k)).collect();
        let osc_degrees = osc_states
            .iter()
            .map(|v| v.iter().enumerate().map(|(s, &k)| k as u32 * (s % d_max.max(1) + 1) as u32).sum())
            .collect();
        Ok(Self { m, n, d_max, l_max: l_max as i32, osc_states, osc_index, osc_degrees, lattice_side: side, lattice_count })
    }

    pub fn len(&self) -> usize {
        self.lattice_count * self.osc_states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn osc_count(&self) -> usize {
        self.osc_states.len()
    }

    pub fn lattice_count(&self) -> usize {
        self.lattice_count
    }

    pub fn pos(&self, i: usize, j: usize) -> usize {
        (i % self.m) * self.n + (j % self.n)
    }

    pub fn slot(&self, i: usize, j: usize, r: u32) -> usize {
        self.pos(i, j) * self.d_max + (r as usize - 1)
    }

    pub fn lattice_rank(&self, lattice: &[i32]) -> Option<usize> {
        let mut rank = 0usize;
        for &x in lattice {
            if x.abs() > self.l_max {
                return None;
            }
            rank = rank * self.lattice_side + (x + self.l_max) as usize;
        }
        Some(rank)
    }

    pub fn lattice_of_rank(&self, mut rank: usize) -> Vec<i32> {
        let mut out = vec![0; self.m * self.n];
        for k in (0..out.len()).rev() {
            out[k] = (rank % self.lattice_side) as i32 - self.l_max;
            rank /= self.lattice_side;
        }
        out
    }

    pub fn osc_rank(&self, osc: &[u8]) -> Option<usize> {
        self.osc_index.get(osc).copied()
    }

    pub fn osc_state(&self, k: usize) -> &[u8] {
        &self.osc_states[k]
    }

    pub fn osc_degree_of_rank(&self, k: usize) -> u32 {
        self.osc_degrees[k]
    }

    pub fn compose(&self, lattice_rank: usize, osc_rank: usize) -> usize {
        lattice_rank * self.osc_states.len() + osc_rank
    }

    pub fn split(&self, idx: usize) -> (usize, usize) {
        (idx / self.osc_states.len(), idx % self.osc_states.len())
    }

    pub fn index_of(&self, state: &FockBasisState) -> Option<usize> {
        Some(self.compose(self.lattice_rank(&state.lattice)?, self.osc_rank(&state.osc)?))
    }

    pub fn state(&self, idx: usize) -> FockBasisState {
        let (l, o) = self.split(idx);
        FockBasisState { osc: self.osc_states[o].clone(), lattice: self.lattice_of_rank(l) }
    }

    pub fn states(&self) -> impl Iterator<Item = FockBasisState> + '_ {
        (0..self.len()).map(|k| self.state(k))
    }

    pub fn degree2(&self, idx: usize) -> i64 {
        let (l, o) = self.split(idx);
        2 * self.osc_degrees[o] as i64 + self.lattice_of_rank(l).iter().map(|&x| (x * x) as i64).sum::<i64>()
    }

    /// Degree as a float (`Σ r + ½ Σ m²`).
    pub fn degree(&self, idx: usize) -> f64 {
        self.degree2(idx) as f64 / 2.0
    }

    /// Action of `a^{i,j}_{mode}` (mode ≠ 0) on a basis state.
    pub fn apply_boson(&self, params: &AlgebraParams, i: usize, j: usize, mode: i32, idx: usize) -> Action {
        assert!(mode != 0, "boson mode must be nonzero");
        let r = mode.unsigned_abs();
        let (l, o) = self.split(idx);
        if r as usize > self.d_max {
            // creation leaves the box; annihilation finds nothing to remove
            return Action { terms: Vec::new(), truncated: mode < 0 };
        }
        let slot = self.slot(i, j, r);
        let mut osc = self.osc_states[o].clone();
        if mode < 0 {
            osc[slot] += 1;
            match self.osc_rank(&osc) {
                Some(k) => Action { terms: vec![(self.compose(l, k), C64::new(1.0, 0.0))], truncated: false },
                None => Action { terms: Vec::new(), truncated: true },
            }
        } else {
            let mult = osc[slot];
            if mult == 0 {
                return Action { terms: Vec::new(), truncated: false };
            }
            osc[slot] -= 1;
            let k = self.osc_rank(&osc).expect("removing a label stays in the basis");
            Action { terms: vec![(self.compose(l, k), params.boson_norm(r as i32) * mult as f64)], truncated: false }
        }
    }

    /// Sign `(-1)^{Σ_{(s,t) before (i,j)} m_{s,t}}` for the lattice shifts.
    pub fn shift_sign(&self, lattice: &[i32], i: usize, j: usize) -> f64 {
        let before: i32 = lattice[..self.pos(i, j)].iter().sum();
        if before.rem_euclid(2) == 0 { 1.0 } else { -1.0 }
    }

    pub fn apply_zero_mode(&self, op: ZeroMode, idx: usize) -> Action {
        let (l, o) = self.split(idx);
        let mut lattice = self.lattice_of_rank(l);
        let (i, j, step) = match op {
            ZeroMode::Partial(i, j) => {
                let v = lattice[self.pos(i, j)] as f64;
                let terms = if v == 0.0 { Vec::new() } else { vec![(idx, C64::new(v, 0.0))] };
                return Action { terms, truncated: false };
            }
            ZeroMode::Raise(i, j) => (i, j, 1),
            ZeroMode::Lower(i, j) => (i, j, -1),
        };
        let sign = self.shift_sign(&lattice, i, j);
        lattice[self.pos(i, j)] += step;
        match self.lattice_rank(&lattice) {
            Some(r) => Action { terms: vec![(self.compose(r, o), C64::new(sign, 0.0))], truncated: false },
            None => Action { terms: Vec::new(), truncated: true },
        }
    }
}

/// Sorted creation labels of an oscillator multiset.
pub fn osc_labels(osc: &[u8], n: usize, d_max: usize) -> Vec<OscLabel> {
    let mut out = Vec::new();
    for (slot, &k) in osc.iter().enumerate() {
        let f = slot / d_max;
        let r = (slot % d_max + 1) as u32;
        for _ in 0..k {
            out.push((f / n, f % n, r));
        }
    }
    out.sort_unstable();
    out
}

fn enumerate_multisets(
    slots: usize,
    d_max: usize,
    cur: &mut Vec<u8>,
    from: usize,
    budget: usize,
    out: &mut Vec<Vec<u8>>,
    cap: usize,
) -> Result<()> {
    if out.len() >= cap {
        return Err(Error::BasisTooLarge { size: out.len() + 1, cap });
    }
    out.push(cur.clone());
    for slot in from..slots {
        let r = slot % d_max + 1;
        if r <= budget {
            cur[slot] += 1;
            enumerate_multisets(slots, d_max, cur, slot, budget - r, out, cap)?;
            cur[slot] -= 1;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(m: usize, n: usize, d: usize, l: usize) -> FockBasis {
        FockBasis::with_shape(m, n, d, l, DEFAULT_BASIS_CAP).unwrap()
    }

    #[test]
    fn spec_counts() {
        assert_eq!(shape(2, 2, 0, 0).len(), 1);
        assert_eq!(shape(2, 2, 1, 0).len(), 5);
        assert_eq!(shape(2, 1, 0, 1).len(), 9);
    }

    #[test]
    fn oscillator_count_matches_partition_generating_function() {
        // four families: coefficients of prod_r (1 - x^r)^{-4} up to x^3 are 1, 4, 14, 40
        assert_eq!(shape(2, 2, 3, 0).len(), 1 + 4 + 14 + 40);
    }

    #[test]
    fn index_round_trip_and_vacuum_first() {
        let b = shape(2, 2, 2, 1);
        for k in 0..b.len() {
            assert_eq!(b.index_of(&b.state(k)), Some(k));
        }
        let s = b.state(b.compose(b.lattice_rank(&[0; 4]).unwrap(), 0));
        assert!(s.osc.iter().all(|&x| x == 0));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(FockBasis::with_shape(3, 3, 0, 2, 1000), Err(Error::BasisTooLarge { .. })));
    }

    #[test]
    fn degrees() {
        let b = shape(2, 2, 3, 1);
        let mut osc = vec![0u8; 4 * 3];
        osc[b.slot(0, 1, 3)] = 1;
        let s = FockBasisState { osc, lattice: vec![0; 4] };
        assert_eq!(s.degree2(3), 6);
        let t = FockBasisState { osc: vec![0; 12], lattice: vec![1, 0, 0, 0] };
        assert_eq!(b.degree(b.index_of(&t).unwrap()), 0.5);
    }

    #[test]
    fn zero_mode_sign_example() {
        let b = shape(2, 1, 0, 1);
        let src = b.index_of(&FockBasisState { osc: vec![], lattice: vec![1, 0] }).unwrap();
        let act = b.apply_zero_mode(ZeroMode::Raise(1, 0), src);
        let dst = b.index_of(&FockBasisState { osc: vec![], lattice: vec![1, 1] }).unwrap();
        assert_eq!(act.terms, vec![(dst, C64::new(-1.0, 0.0))]);
        let vac = b.index_of(&FockBasisState { osc: vec![], lattice: vec![0, 0] }).unwrap();
        assert!(b.apply_zero_mode(ZeroMode::Partial(0, 0), vac).terms.is_empty());
    }
}
