//! Constant terms of rational kernels in one ratio `t` along the contour
//! prescribed for the integrals of motion.
//!
//! The kernel is kept as `A · t^e · Π (1 - C_f t)^{n_f}` with symbolic
//! `C_f`. A pole `t = C_f⁻¹` lies inside the contour when it is small in the
//! reference regime of the integral (`|q₁|, |q₃| < 1` for the first kind,
//! `|q₁|, |q₃| > 1` for the second, the nome `P` much smaller than both). The constant
//! term is the Laurent coefficient on a circle plus residues of the poles the
//! circle puts on the wrong side.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::symbolic::{Gens, Mono, SymFactor};
use crate::error::{Error, Result};

/// Reference regime deciding which poles the contour encircles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `|q₁|, |q₃| < 1`
    First,
    /// `|q₁|, |q₃| > 1`
    Second,
}

impl Regime {
    /// `Some(true)` for a pole inside the contour, `Some(false)` outside,
    /// `None` when the reference regime does not order it against `|t| = 1`.
    pub fn inside(self, pole: Mono) -> Option<bool> {
        if pole == Mono::ONE {
            return None;
        }
        // the nome is the smallest scale; q₁, q₃ only order poles at P⁰
        if pole.k != 0 {
            return Some(pole.k > 0);
        }
        let (a, b) = match self {
            Regime::First => (pole.a, pole.b),
            Regime::Second => (-pole.a, -pole.b),
        };
        if a >= 0 && b >= 0 {
            Some(true)
        } else if a <= 0 && b <= 0 {
            Some(false)
        } else {
            None
        }
    }
}

/// `A · t^e · Π (1 - C t)^{n}`.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub prefactor: C64,
    pub t_exp: i32,
    pub factors: BTreeMap<Mono, i32>,
}

impl Kernel {
    pub fn one() -> Self {
        Self { prefactor: C64::new(1.0, 0.0), t_exp: 0, factors: BTreeMap::new() }
    }

    fn push_linear(&mut self, c: Mono, dir: i32, power: i32, gens: &Gens) {
        if dir > 0 {
            *self.factors.entry(c).or_insert(0) += power;
        } else {
            // (1 - c/t)^n = (-c)^n t^{-n} (1 - t/c)^n
            self.prefactor *= (-gens.eval(c)).powi(power);
            self.t_exp -= power;
            *self.factors.entry(c.inv()).or_insert(0) += power;
        }
    }

    /// Multiplies by `f(t^dir)`, with infinite products cut after `k_p + 1`
    /// factors.
    pub fn push(&mut self, f: SymFactor, dir: i32, k_p: usize, gens: &Gens) {
        let count = if f.inf { k_p as i32 + 1 } else { 1 };
        for k in 0..count {
            self.push_linear(f.c.mul(Mono::nome().pow(k)), dir, f.power, gens);
        }
    }

    pub fn scale(&mut self, s: C64) {
        self.prefactor *= s;
    }

    pub fn eval(&self, t: C64, gens: &Gens) -> C64 {
        self.factors
            .iter()
            .filter(|(_, &n)| n != 0)
            .fold(self.prefactor * t.powi(self.t_exp), |acc, (c, &n)| acc * (C64::new(1.0, 0.0) - gens.eval(*c) * t).powi(n))
    }

    /// Poles `t = C⁻¹` as `(symbolic location, order)`.
    pub fn poles(&self) -> Vec<(Mono, i32)> {
        self.factors.iter().filter(|(_, &n)| n < 0).map(|(c, &n)| (c.inv(), -n)).collect()
    }
}

/// Constant terms `CT[t^s · K(t)]` for `s` in `s_range`.
pub fn moments(kernel: &Kernel, gens: &Gens, regime: Regime, s_range: (i32, i32)) -> Result<Vec<C64>> {
    let poles: Vec<(C64, bool)> = kernel
        .poles()
        .into_iter()
        .map(|(loc, _)| {
            let side = regime
                .inside(loc)
                .ok_or_else(|| Error::Prescription(format!("pole q1^{} q3^{} P^{} is not ordered by the reference regime", loc.a, loc.b, loc.k)))?;
            Ok((gens.eval(loc), side))
        })
        .collect::<Result<_>>()?;
    let log_r: Vec<f64> = poles.iter().map(|(c, _)| c.norm().ln()).collect();
    // circle radius: a gap of 0.7 in log-modulus is plenty; beyond that stay
    // close to |t| = 1 to keep the powers of t tame
    let mut best = (0.0f64, f64::NEG_INFINITY);
    for step in 0..=300 {
        let s = -1.5 + 3.0 * step as f64 / 300.0;
        let gap = log_r.iter().map(|l| (l - s).abs()).fold(f64::INFINITY, f64::min).min(0.7);
        if gap > best.1 + 1e-12 || (gap >= best.1 - 1e-12 && s.abs() < best.0.abs()) {
            best = (s, gap);
        }
    }
    let (log_rho, gap) = best;
    let rho = log_rho.exp();
    let span = s_range.0.abs().max(s_range.1.abs()) as usize;
    let mut points = (40.0 / gap).ceil() as usize + 4 * span + 16;
    points = points.next_power_of_two().min(1 << 16);
    let mut out = vec![C64::new(0.0, 0.0); (s_range.1 - s_range.0 + 1) as usize];
    let mut accumulate = |t: C64, w: C64| {
        let base = w * kernel.eval(t, gens);
        let mut tp = t.powi(s_range.0);
        for o in out.iter_mut() {
            *o += base * tp;
            tp *= t;
        }
    };
    for k in 0..points {
        let t = C64::from_polar(rho, 2.0 * PI * k as f64 / points as f64);
        accumulate(t, C64::new(1.0 / points as f64, 0.0));
    }
    for (idx, &(c, inside)) in poles.iter().enumerate() {
        let sign = match (inside, c.norm() > rho) {
            (true, true) => 1.0,
            (false, false) => -1.0,
            _ => continue,
        };
        let mut delta = c.norm();
        for (jdx, (c2, _)) in poles.iter().enumerate() {
            if jdx != idx {
                delta = delta.min((c - c2).norm());
            }
        }
        if delta < 1e-9 * c.norm() {
            return Err(Error::Prescription("coincident poles on both sides of the contour".into()));
        }
        let delta = 0.3 * delta;
        let small = 64;
        for k in 0..small {
            let e = C64::from_polar(1.0, 2.0 * PI * k as f64 / small as f64);
            let t = c + e * delta;
            // (1/2πi)∮ g(t) dt/t  with dt = iδe^{iθ}dθ
            accumulate(t, sign * e * delta / t / small as f64);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn gens() -> Gens {
        Gens { q1: c(0.3, 0.1), q3: c(2.5, -0.4), nome: c(0.05, 0.02) }
    }

    #[test]
    fn classification_follows_exponent_signs() {
        assert_eq!(Regime::First.inside(Mono::q1()), Some(true));
        assert_eq!(Regime::First.inside(Mono::q3().inv()), Some(false));
        assert_eq!(Regime::First.inside(Mono::new(1, -1, 0)), None);
        assert_eq!(Regime::Second.inside(Mono::q1().inv().mul(Mono::nome())), Some(true));
        assert_eq!(Regime::Second.inside(Mono::q3()), Some(false));
        assert_eq!(Regime::First.inside(Mono::new(1, 0, -1)), Some(false));
        assert_eq!(Regime::First.inside(Mono::new(-2, 1, 1)), Some(true));
    }

    #[test]
    fn geometric_series_on_the_circle() {
        // 1/(1 - q1 t) with the pole t = 1/q1 outside: CT[t^s K] = q1^{-s} for s ≤ 0
        let g = gens();
        let mut k = Kernel::one();
        k.push(SymFactor { c: Mono::q1(), inf: false, power: -1 }, 1, 0, &g);
        let mom = moments(&k, &g, Regime::First, (-4, 2)).unwrap();
        for (idx, s) in (-4..=2).enumerate() {
            let want = if s <= 0 { g.q1.powi(-s) } else { c(0.0, 0.0) };
            assert!((mom[idx] - want).norm() < 1e-13, "s={s}");
        }
    }

    #[test]
    fn misplaced_poles_pick_up_residues() {
        // K = 1/(1 - q3/t): pole t = q3 is inside for the first kind although
        // |q3| > 1, so CT[t^s K] = q3^s for s ≥ 0 (expansion in q3/t)
        let g = gens();
        let mut k = Kernel::one();
        k.push(SymFactor { c: Mono::q3(), inf: false, power: -1 }, -1, 0, &g);
        let mom = moments(&k, &g, Regime::First, (-2, 5)).unwrap();
        for (idx, s) in (-2..=5).enumerate() {
            let want = if s >= 0 { g.q3.powi(s) } else { c(0.0, 0.0) };
            assert!((mom[idx] - want).norm() < 1e-10 * want.norm().max(1.0), "s={s}: {} vs {want}", mom[idx]);
        }
        // the same pole written as 1/(1 - t/q3) = -Σ_{n≥1} (q3/t)^n
        let mut k2 = Kernel::one();
        k2.push(SymFactor { c: Mono::q3().inv(), inf: false, power: -1 }, 1, 0, &g);
        let mom2 = moments(&k2, &g, Regime::First, (-1, 2)).unwrap();
        assert!(mom2[0].norm() < 1e-12 && mom2[1].norm() < 1e-12);
        assert!((mom2[3] + g.q3.powi(2)).norm() < 1e-10 * g.q3.norm_sqr());
    }

    #[test]
    fn unordered_pole_is_a_prescription_error() {
        let g = gens();
        let mut k = Kernel::one();
        k.push(SymFactor { c: Mono::new(1, -1, 0), inf: false, power: -1 }, 1, 0, &g);
        assert!(matches!(moments(&k, &g, Regime::First, (0, 0)), Err(Error::Prescription(_))));
    }
}
