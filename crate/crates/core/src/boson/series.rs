//! Multivariate truncated Laurent series with per-variable exponent windows.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    pub vars: Vec<String>,
    /// Inclusive exponent window per variable.
    pub windows: Vec<(i32, i32)>,
    pub coeffs: BTreeMap<Vec<i32>, C64>,
    /// Some product or power dropped terms outside the windows.
    pub truncated: bool,
}

impl TruncatedSeries {
    pub fn zero(vars: &[&str], windows: &[(i32, i32)]) -> Self {
        assert_eq!(vars.len(), windows.len());
        Self {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            windows: windows.to_vec(),
            coeffs: BTreeMap::new(),
            truncated: false,
        }
    }

    pub fn constant(vars: &[&str], windows: &[(i32, i32)], c: C64) -> Self {
        let mut s = Self::zero(vars, windows);
        s.add_term(vec![0; vars.len()], c);
        s
    }

    /// One-variable series from coefficients at exponents `0..coeffs.len()`.
    pub fn univariate(var: &str, coeffs: &[C64]) -> Self {
        let hi = coeffs.len() as i32 - 1;
        let mut s = Self::zero(&[var], &[(0, hi.max(0))]);
        for (k, c) in coeffs.iter().enumerate() {
            s.add_term(vec![k as i32], *c);
        }
        s
    }

    fn in_window(&self, e: &[i32]) -> bool {
        e.iter().zip(&self.windows).all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    /// Adds `c * x^e`; terms outside the windows set the truncation flag.
    pub fn add_term(&mut self, e: Vec<i32>, c: C64) {
        if c == C64::new(0.0, 0.0) {
            return;
        }
        if !self.in_window(&e) {
            self.truncated = true;
            return;
        }
        *self.coeffs.entry(e).or_insert(C64::new(0.0, 0.0)) += c;
    }

    pub fn coeff(&self, e: &[i32]) -> C64 {
        self.coeffs.get(e).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    fn same_shape(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "series variables differ");
        assert_eq!(self.windows, other.windows, "series windows differ");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_shape(other);
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(e.clone(), *c);
        }
        out.truncated |= other.truncated;
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        out.coeffs.values_mut().for_each(|c| *c *= s);
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_shape(other);
        let mut out = Self::zero(&[], &[]);
        out.vars = self.vars.clone();
        out.windows = self.windows.clone();
        out.truncated = self.truncated || other.truncated;
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| *c == C64::new(0.0, 0.0))
    }

    /// `Σ_k coef(k) x^k` until the powers of `x` leave the windows.
    fn power_sum(&self, coef: impl Fn(usize) -> C64, what: &str) -> Result<Self> {
        if self.coeff(&vec![0; self.vars.len()]) != C64::new(0.0, 0.0) {
            return Err(Error::InvalidParams(format!("{what}: nonzero constant term")));
        }
        let one = Self { coeffs: BTreeMap::new(), ..self.clone() }.add(&Self::constant(
            &self.vars.iter().map(String::as_str).collect::<Vec<_>>(),
            &self.windows,
            C64::new(1.0, 0.0),
        ));
        let mut out = one.clone();
        let mut pow = one;
        let limit: i64 = self.windows.iter().map(|(lo, hi)| (hi - lo) as i64 + 1).product::<i64>() + 1;
        for k in 1..=limit as usize {
            pow = pow.mul(self);
            if pow.is_zero() {
                out.truncated |= pow.truncated;
                return Ok(out);
            }
            out = out.add(&pow.scale(coef(k)));
        }
        Err(Error::InvalidParams(format!("{what}: argument is not nilpotent within the windows")))
    }

    /// `exp(self)` for a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        let mut fact = vec![1.0f64];
        for k in 1..64 {
            fact.push(fact[k - 1] * k as f64);
        }
        self.power_sum(|k| C64::new(1.0 / fact.get(k).copied().unwrap_or(f64::INFINITY), 0.0), "exp")
    }

    /// `1 / self` for a series with unit constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let zero = vec![0; self.vars.len()];
        if (self.coeff(&zero) - C64::new(1.0, 0.0)).norm() > 1e-14 {
            return Err(Error::InvalidParams("reciprocal: constant term must be 1".into()));
        }
        let mut x = self.clone();
        x.coeffs.remove(&zero);
        x.power_sum(|k| C64::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0), "reciprocal")
    }

    /// Largest coefficient difference.
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.same_shape(other);
        let keys = self.coeffs.keys().chain(other.coeffs.keys());
        keys.map(|e| (self.coeff(e) - other.coeff(e)).norm()).fold(0.0, f64::max)
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Evaluates at a point (finite sum of the stored terms).
    pub fn eval(&self, x: &[C64]) -> C64 {
        self.coeffs
            .iter()
            .map(|(e, c)| e.iter().zip(x).fold(*c, |acc, (k, v)| acc * v.powi(*k)))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn exp_of_log_one_minus() {
        // exp(-Σ t^r / r) = 1 - t
        let n = 8;
        let coeffs: Vec<C64> = (0..=n).map(|r| if r == 0 { c(0.0) } else { c(-1.0 / r as f64) }).collect();
        let e = TruncatedSeries::univariate("t", &coeffs).exp().unwrap();
        let want = TruncatedSeries::univariate("t", &[c(1.0), c(-1.0)]);
        let want = TruncatedSeries { windows: e.windows.clone(), ..want };
        assert!(e.max_diff(&want) < 1e-13);
    }

    #[test]
    fn reciprocal_round_trip() {
        let s = TruncatedSeries::univariate("t", &[c(1.0), c(0.5), C64::new(0.0, 2.0), c(-1.0), c(0.0), c(0.0)]);
        let prod = s.mul(&s.reciprocal().unwrap());
        let one = TruncatedSeries::constant(&["t"], &s.windows, c(1.0));
        assert!(prod.max_diff(&one) < 1e-12);
    }

    #[test]
    fn products_respect_windows() {
        let s = TruncatedSeries::univariate("t", &[c(1.0), c(1.0)]);
        let mut sq = s.mul(&s);
        assert!(sq.truncated);
        assert_eq!(sq.coeff(&[1]), c(2.0));
        sq.windows = vec![(0, 2)];
        assert!(sq.coeffs.keys().all(|e| e[0] <= 1));
    }

    #[test]
    fn exp_requires_zero_constant() {
        let s = TruncatedSeries::univariate("t", &[c(1.0), c(1.0)]);
        assert!(s.exp().is_err());
    }
}
