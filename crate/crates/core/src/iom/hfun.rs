//! Pointwise evaluation of the kernels `h_{μ,M}` and `h*_{μ,M}`.

use num_complex::Complex64 as C64;

use super::theta::lattice_theta_terms;
use crate::params::HalfBase;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// `Θ_P(z) = (z, P/z, P; P)_∞`, with factors taken until they stop mattering.
pub fn theta_p(z: C64, nome: C64) -> C64 {
    let mut acc = one();
    let mut pk = one();
    for _ in 0..4096 {
        acc *= (one() - pk * z) * (one() - pk * nome / z) * (one() - pk * nome);
        pk *= nome;
        if pk.norm() * (1.0 + z.norm() + 1.0 / z.norm()) < 1e-18 {
            break;
        }
    }
    acc
}

/// Parameters of `h_{μ,M}` (or `h*` when `star`) for one algebra.
#[derive(Clone, Debug)]
pub struct HFunction {
    pub nodes: usize,
    pub order: usize,
    pub mu: usize,
    pub star: bool,
    pub q1: C64,
    pub q3: C64,
    /// `p` or `p*`
    pub nome: C64,
    /// `p_1..p_{m-1}` (or the starred ones) on the sector of interest.
    pub p_s: Vec<C64>,
    pub radius: i32,
}

impl HFunction {
    fn q2(&self) -> C64 {
        one() / (self.q1 * self.q3)
    }

    fn theta(&self, z: &[C64]) -> C64 {
        lattice_theta_terms(self.nodes, self.mu % self.nodes, HalfBase::new(self.nome), &self.p_s, self.radius)
            .iter()
            .map(|t| t.coeff * z.iter().zip(&t.z_exp).map(|(zi, &e)| zi.powi(e)).product::<C64>())
            .sum()
    }

    /// `x[i][a]` holds `x_{i+1,a+1}`.
    pub fn eval(&self, x: &[Vec<C64>]) -> C64 {
        let (m, big_m) = (self.nodes, self.order);
        let th = |z: C64| theta_p(z, self.nome);
        let mut num = one();
        for xi in x {
            for a in 0..big_m {
                for b in a + 1..big_m {
                    let r = xi[b] / xi[a];
                    num *= th(r) * th(self.q2() * r);
                }
            }
        }
        let mut den = one();
        for i in 0..m - 1 {
            for a in 0..big_m {
                for b in 0..big_m {
                    den *= th(x[i + 1][b] / x[i][a] / self.q3);
                }
            }
        }
        for a in 0..big_m {
            for b in 0..big_m {
                den *= th(self.q1 * x[0][b] / x[m - 1][a]);
            }
        }
        let mono: C64 = x
            .iter()
            .flat_map(|xi| xi.iter().enumerate().map(move |(a, v)| v.powi(big_m as i32 - 2 * a as i32 - 1)))
            .product();
        let z: Vec<C64> = x
            .iter()
            .map(|xi| {
                let p: C64 = xi.iter().product();
                if self.star { one() / p } else { p }
            })
            .collect();
        num / den * mono * self.theta(&z)
    }

    /// Stated ratio `h(.., P x_{i,a}, ..)/h` for `1 ≤ i ≤ m`, `1 ≤ a ≤ M`.
    pub fn quasi_factor(&self, i: usize, a: usize) -> C64 {
        let (m, big_m) = (self.nodes as i32, self.order as i32);
        let p_i = if i as i32 == m { one() / self.p_s.iter().product::<C64>() } else { self.p_s[i - 1] };
        let delta = |x: bool| x as i32;
        let e = big_m - 2 * a as i32 + 1 + big_m * (delta(i as i32 == m) - delta(i == 1));
        let scalar = if self.star { one() / p_i } else { p_i };
        scalar * self.q2().powi(e)
    }

    /// Largest `|h(shifted)/h / factor - 1|` over all `(i, a)` at `x`.
    pub fn quasi_periodicity_residual(&self, x: &[Vec<C64>]) -> f64 {
        let base = self.eval(x);
        let mut worst: f64 = 0.0;
        for i in 0..self.nodes {
            for a in 0..self.order {
                let mut y = x.to_vec();
                y[i][a] *= self.nome;
                let ratio = self.eval(&y) / base;
                worst = worst.max((ratio / self.quasi_factor(i + 1, a + 1) - one()).norm());
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rnd(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> C64 {
        C64::from_polar(rng.gen_range(lo..hi), rng.gen_range(-3.1..3.1))
    }

    fn sample(rng: &mut ChaCha8Rng, nodes: usize, order: usize, mu: usize, star: bool) -> (HFunction, Vec<Vec<C64>>) {
        let h = HFunction {
            nodes,
            order,
            mu,
            star,
            q1: rnd(rng, 0.2, 0.5),
            q3: rnd(rng, 1.5, 3.0),
            nome: rnd(rng, 0.03, 0.1),
            p_s: (1..nodes).map(|_| rnd(rng, 0.7, 1.4)).collect(),
            radius: 6,
        };
        let x = (0..nodes).map(|_| (0..order).map(|_| rnd(rng, 0.8, 1.25)).collect()).collect();
        (h, x)
    }

    #[test]
    fn theta_p_quasi_periodicity() {
        // Θ(Pz) = -z⁻¹ Θ(z)
        let (z, p) = (C64::new(0.7, 0.4), C64::new(0.06, -0.03));
        let lhs = theta_p(p * z, p);
        let rhs = -theta_p(z, p) / z;
        assert!((lhs - rhs).norm() < 1e-13 * rhs.norm());
    }

    #[test]
    fn h_is_quasi_periodic() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (nodes, order) in [(2, 1), (2, 2), (3, 1), (3, 2), (4, 1)] {
            for mu in 0..nodes {
                for star in [false, true] {
                    let (h, x) = sample(&mut rng, nodes, order, mu, star);
                    let r = h.quasi_periodicity_residual(&x);
                    assert!(r < 1e-9, "m={nodes} M={order} μ={mu} star={star}: {r:e}");
                }
            }
        }
    }

    #[test]
    fn h_star_is_h_with_inverted_weights() {
        // ϑ_μ(1/z; p_s) = ϑ_{-μ}(z; 1/p_s), and shifting β by (1, .., 1)
        // gives ϑ_{m-μ} = P^{(m-2μ)/2} Π p_s^{-s} ϑ_{-μ} on the unprojected lattice
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (nodes, order) in [(2, 1), (3, 1), (2, 2)] {
            for mu in 0..nodes {
                let (hs, x) = sample(&mut rng, nodes, order, mu, true);
                let h = HFunction {
                    star: false,
                    mu: (nodes - mu) % nodes,
                    p_s: hs.p_s.iter().map(|p| one() / p).collect(),
                    ..hs.clone()
                };
                let shift = if mu == 0 {
                    one()
                } else {
                    HalfBase::new(hs.nome).pow_half((nodes as i64) - 2 * mu as i64)
                        * hs.p_s.iter().enumerate().map(|(s, p)| p.powi(s as i32 + 1)).product::<C64>()
                };
                let (a, b) = (hs.eval(&x), h.eval(&x) / shift);
                assert!((a - b).norm() < 1e-12 * a.norm(), "m={nodes} μ={mu}");
            }
        }
    }
}
