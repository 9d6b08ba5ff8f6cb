//! Scalar parameters of the two toroidal algebras and their derived families.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// A nonzero complex base that can be raised to half-integer powers.
///
/// The square root is fixed once (principal branch) so that
/// `pow_half(a) * pow_half(b) == pow_half(a + b)` holds exactly in exponent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfBase {
    pub value: C64,
    pub sqrt: C64,
}

impl HalfBase {
    pub fn new(value: C64) -> Self {
        Self { value, sqrt: value.sqrt() }
    }

    /// `value^(twice / 2)`.
    pub fn pow_half(&self, twice: i64) -> C64 {
        if twice % 2 == 0 {
            self.value.powi((twice / 2) as i32)
        } else {
            self.sqrt.powi(twice as i32)
        }
    }

    pub fn powi(&self, e: i64) -> C64 {
        self.value.powi(e as i32)
    }
}

/// Rejection thresholds for the finite-box genericity proxy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Genericity {
    pub box_radius: i32,
    pub epsilon: f64,
}

impl Default for Genericity {
    fn default() -> Self {
        Self { box_radius: 4, epsilon: 1e-3 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraParams {
    pub m: usize,
    pub n: usize,
    pub q: C64,
    pub d: C64,
    pub dc: C64,
    /// Spectral parameters `u_0..u_{n-1}` of the level-n action.
    pub u: Vec<C64>,
    /// Spectral parameters `ǔ_0..ǔ_{m-1}` of the level-m action.
    pub uc: Vec<C64>,
}

fn nonzero(x: C64) -> bool {
    x.norm() > 1e-300 && x.re.is_finite() && x.im.is_finite()
}

impl AlgebraParams {
    /// Validates shapes and nonvanishing. `n == 1` is allowed for the level-one
    /// primal action; anything touching the dual algebra needs `n >= 2`.
    pub fn new(m: usize, n: usize, q: C64, d: C64, dc: C64, u: Vec<C64>, uc: Vec<C64>) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParams(format!("m must be >= 2, got {m}")));
        }
        if n < 1 {
            return Err(Error::InvalidParams("n must be >= 1".into()));
        }
        if u.len() != n || uc.len() != m {
            return Err(Error::InvalidParams(format!(
                "expected {n} values of u and {m} values of ǔ, got {} and {}",
                u.len(),
                uc.len()
            )));
        }
        for (name, x) in [("q", q), ("d", d), ("ď", dc)] {
            if !nonzero(x) {
                return Err(Error::InvalidParams(format!("{name} must be nonzero")));
            }
        }
        if (q * q - C64::new(1.0, 0.0)).norm() < 1e-12 {
            return Err(Error::InvalidParams("q^2 = 1 makes [r] singular".into()));
        }
        if u.iter().chain(uc.iter()).any(|x| !nonzero(*x)) {
            return Err(Error::InvalidParams("spectral parameters must be nonzero".into()));
        }
        Ok(Self { m, n, q, d, dc, u, uc })
    }

    pub fn q1(&self) -> C64 {
        self.d / self.q
    }
    pub fn q2(&self) -> C64 {
        self.q * self.q
    }
    pub fn q3(&self) -> C64 {
        C64::new(1.0, 0.0) / (self.q * self.d)
    }
    pub fn qc1(&self) -> C64 {
        self.dc / self.q
    }
    pub fn qc3(&self) -> C64 {
        C64::new(1.0, 0.0) / (self.q * self.dc)
    }
    /// `p = q̌₁ⁿ`
    pub fn p(&self) -> C64 {
        self.qc1().powi(self.n as i32)
    }
    /// `p* = q̌₃⁻ⁿ`
    pub fn p_star(&self) -> C64 {
        self.qc3().powi(-(self.n as i32))
    }
    /// `p̌ = q₁ᵐ`
    pub fn pc(&self) -> C64 {
        self.q1().powi(self.m as i32)
    }
    /// `p̌* = q₃⁻ᵐ`
    pub fn pc_star(&self) -> C64 {
        self.q3().powi(-(self.m as i32))
    }

    pub fn q_half(&self) -> HalfBase {
        HalfBase::new(self.q)
    }
    pub fn d_half(&self) -> HalfBase {
        HalfBase::new(self.d)
    }
    pub fn dc_half(&self) -> HalfBase {
        HalfBase::new(self.dc)
    }

    /// The q-integer `[r] = (q^r - q^-r)/(q - q^-1)`.
    pub fn qint(&self, r: i32) -> C64 {
        let q = self.q;
        (q.powi(r) - q.powi(-r)) / (q - q.inv())
    }

    /// `[r]^2 / r`, the normalization of the boson commutator.
    pub fn boson_norm(&self, r: i32) -> C64 {
        let b = self.qint(r);
        b * b / r as f64
    }

    /// Errors unless `|p|, |p*|, |p̌|, |p̌*| < 1`.
    pub fn check_moduli(&self) -> Result<()> {
        for (name, v) in [("p", self.p()), ("p*", self.p_star()), ("p̌", self.pc()), ("p̌*", self.pc_star())] {
            if v.norm() >= 1.0 {
                return Err(Error::InvalidParams(format!("|{name}| = {} is not < 1", v.norm())));
            }
        }
        Ok(())
    }

    /// Finite-box proxy of genericity for `(q1,q2,q3)` and `(q̌1,q2,q̌3)`:
    /// returns the smallest `|q1^i q2^j q3^k - 1|` over the box with `(i,j,k)`
    /// not all equal, minimized over both triples.
    pub fn genericity_margin(&self, box_radius: i32) -> f64 {
        let one = C64::new(1.0, 0.0);
        let mut worst = f64::INFINITY;
        for (a1, a3) in [(self.q1(), self.q3()), (self.qc1(), self.qc3())] {
            let a2 = self.q2();
            for i in -box_radius..=box_radius {
                for j in -box_radius..=box_radius {
                    for k in -box_radius..=box_radius {
                        if i == j && j == k {
                            continue;
                        }
                        let v = a1.powi(i) * a2.powi(j) * a3.powi(k);
                        worst = worst.min((v - one).norm());
                    }
                }
            }
        }
        worst
    }

    pub fn check_generic(&self, g: Genericity) -> Result<()> {
        let margin = self.genericity_margin(g.box_radius);
        if margin <= g.epsilon {
            return Err(Error::InvalidParams(format!(
                "genericity certificate failed: margin {margin:.3e} <= {:.3e}",
                g.epsilon
            )));
        }
        Ok(())
    }

    /// Imposes `ǔ_i = p̄_i ǔ_{i-1}` style constraints from given weight ratios.
    /// Returns the constrained weight parameters `p̄_i = ǔ_i/ǔ_{i-1}` and
    /// `p̄̌_l = u_l/u_{l-1}`.
    pub fn duality_weights(&self) -> (Vec<C64>, Vec<C64>) {
        let pbar = (1..self.m).map(|i| self.uc[i] / self.uc[i - 1]).collect();
        let pbar_c = (1..self.n).map(|l| self.u[l] / self.u[l - 1]).collect();
        (pbar, pbar_c)
    }

    /// Stable digest of every scalar, used as a cache and report key.
    pub fn hash_hex(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.m as u64).to_le_bytes());
        h.update((self.n as u64).to_le_bytes());
        let mut push = |x: C64| {
            h.update(x.re.to_bits().to_le_bytes());
            h.update(x.im.to_bits().to_le_bytes());
        };
        push(self.q);
        push(self.d);
        push(self.dc);
        for x in self.u.iter().chain(self.uc.iter()) {
            push(*x);
        }
        hex::encode(h.finalize())
    }
}

/// Annuli from which random parameters are drawn.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingRegime {
    pub q_abs: (f64, f64),
    pub d_abs: (f64, f64),
    pub dc_abs: (f64, f64),
    pub u_abs: (f64, f64),
    pub genericity: Genericity,
}

impl Default for SamplingRegime {
    /// Small `|q₁|, |q̌₁|` so that `|p|, |p̌| <= 0.1` at `m = n = 2`, while
    /// `|q₃|, |q̌₃| > 1` keeps `|p*|, |p̌*| < 1`.
    fn default() -> Self {
        Self {
            q_abs: (1.05, 1.2),
            d_abs: (0.24, 0.3),
            dc_abs: (0.24, 0.3),
            u_abs: (0.8, 1.25),
            genericity: Genericity::default(),
        }
    }
}

fn sample_annulus(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> C64 {
    let r = rng.gen_range(lo..=hi);
    let phase = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    C64::from_polar(r, phase)
}

impl AlgebraParams {
    /// Draws parameters from `regime` with a rejection loop on genericity and
    /// (when `n >= 2`) on the moduli of the elliptic nomes.
    pub fn sample(m: usize, n: usize, seed: u64, regime: &SamplingRegime) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let q = sample_annulus(&mut rng, regime.q_abs);
            let d = sample_annulus(&mut rng, regime.d_abs);
            let dc = sample_annulus(&mut rng, regime.dc_abs);
            let u = (0..n).map(|_| sample_annulus(&mut rng, regime.u_abs)).collect();
            let uc = (0..m).map(|_| sample_annulus(&mut rng, regime.u_abs)).collect();
            let p = Self::new(m, n, q, d, dc, u, uc)?;
            if p.check_generic(regime.genericity).is_err() {
                continue;
            }
            if n >= 2 && p.check_moduli().is_err() {
                continue;
            }
            return Ok(p);
        }
        Err(Error::InvalidParams("rejection sampling exhausted 1000 draws".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn triple_products_are_one() {
        let p = AlgebraParams::sample(2, 2, 7, &SamplingRegime::default()).unwrap();
        assert!((p.q1() * p.q2() * p.q3() - 1.0).norm() < 1e-13);
        assert!((p.qc1() * p.q2() * p.qc3() - 1.0).norm() < 1e-13);
    }

    #[test]
    fn default_regime_has_small_nomes() {
        for seed in 0..20 {
            let p = AlgebraParams::sample(2, 2, seed, &SamplingRegime::default()).unwrap();
            assert!(p.p().norm() <= 0.1 && p.pc().norm() <= 0.1, "seed {seed}");
            p.check_moduli().unwrap();
        }
    }

    #[test]
    fn qint_at_two() {
        let p = AlgebraParams::new(2, 2, c(2.0, 0.0), c(0.3, 0.0), c(0.3, 0.0), vec![c(1.0, 0.0); 2], vec![c(1.0, 0.0); 2])
            .unwrap();
        // [2]^2/2 = (q + 1/q)^2 / 2 = 3.125 at q = 2
        assert!((p.boson_norm(2) - 3.125).norm() < 1e-14);
        assert!((p.boson_norm(1) - 1.0).norm() < 1e-14);
    }

    #[test]
    fn half_powers_compose() {
        let b = HalfBase::new(c(-0.3, 0.4));
        for a in -5..5 {
            for e in -5..5 {
                let lhs = b.pow_half(a) * b.pow_half(e);
                assert!((lhs - b.pow_half(a + e)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_q_is_rejected() {
        let one = c(1.0, 0.0);
        assert!(AlgebraParams::new(2, 2, one, one, one, vec![one; 2], vec![one; 2]).is_err());
        // root-of-unity-like parameters fail genericity
        let p = AlgebraParams::new(2, 2, c(0.0, 1.0).sqrt(), one, one, vec![one; 2], vec![one; 2]).unwrap();
        assert!(p.check_generic(Genericity::default()).is_err());
    }

    #[test]
    fn hash_is_deterministic() {
        let a = AlgebraParams::sample(2, 3, 11, &SamplingRegime::default()).unwrap();
        let b = AlgebraParams::sample(2, 3, 11, &SamplingRegime::default()).unwrap();
        assert_eq!(a.hash_hex(), b.hash_hex());
    }
}
