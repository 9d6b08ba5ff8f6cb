//! Jacobi theta series, q-Pochhammer reciprocals and the root-lattice theta
//! function, all as truncated Laurent series.

use num_complex::Complex64 as C64;

use crate::boson::TruncatedSeries;
use crate::params::HalfBase;

fn c1() -> C64 {
    C64::new(1.0, 0.0)
}

/// `Π (1 - c_k P^{k+shift} z^dir)` over `k` with the `P`-degree tracked in a
/// second variable, so that everything above `P^order` drops out.
fn linear_in_zp(coef: C64, dir: i32, p_deg: i32, window: (i32, i32), order: usize) -> TruncatedSeries {
    let windows = [window, (0, order as i32)];
    let mut s = TruncatedSeries::constant(&["z", "p"], &windows, c1());
    s.add_term(vec![dir, p_deg], -coef);
    s
}

fn substitute_p(s: &TruncatedSeries, p: C64, window: (i32, i32)) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(&["z"], &[window]);
    for (e, c) in &s.coeffs {
        out.add_term(vec![e[0]], c * p.powi(e[1]));
    }
    out.truncated = s.truncated;
    out
}

/// `Θ_p(z) = (z, p/z, p; p)_∞` expanded to `p`-order `order`.
pub fn theta_q(window: (i32, i32), p: C64, order: usize) -> TruncatedSeries {
    let windows = [window, (0, order as i32)];
    let mut acc = TruncatedSeries::constant(&["z", "p"], &windows, c1());
    for k in 0..=order as i32 {
        acc = acc.mul(&linear_in_zp(c1(), 1, k, window, order));
        acc = acc.mul(&linear_in_zp(c1(), -1, k + 1, window, order));
        acc = acc.mul(&linear_in_zp(c1(), 0, k + 1, window, order));
    }
    substitute_p(&acc, p, window)
}

/// `1/(c z; p)_∞` to `p`-order `order`, each `1/(1 - c p^k z)` expanded
/// geometrically in `z` inside `window`.
pub fn pochhammer_reciprocal(c: C64, window: (i32, i32), p: C64, order: usize) -> TruncatedSeries {
    let windows = [window, (0, order as i32)];
    let mut acc = TruncatedSeries::constant(&["z", "p"], &windows, c1());
    for k in 0..=order as i32 {
        let mut geo = TruncatedSeries::zero(&["z", "p"], &windows);
        for e in 0..=window.1.max(0) {
            geo.add_term(vec![e, k * e], c.powi(e));
        }
        acc = acc.mul(&geo);
    }
    substitute_p(&acc, p, window)
}

/// One summand of the root-lattice theta function.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaTerm {
    pub beta: Vec<i32>,
    /// `(β, β)`
    pub norm2: i64,
    pub coeff: C64,
    /// Exponent of `z_i`, `(β, ε_i - ε_{i+1})` for `i = 1..m`.
    pub z_exp: Vec<i32>,
}

/// Summands of `ϑ^{(m)}_μ(z; P, p_1..p_{m-1})` over
/// `β ∈ Q̄ + Λ̄_μ = {β ∈ ℤ^m : Σβ = μ}` with every `|β_i| ≤ radius`.
///
/// `z_i` pairs with `ε_i - ε_{i+1}` (indices mod m). With `ε_{i-1} - ε_i`
/// the shift `z_i → P z_i` would produce `p_{i-1}` instead of the `p_i` of
/// the quasi-periodicity of `h`.
pub fn lattice_theta_terms(nodes: usize, mu: usize, nome: HalfBase, p_s: &[C64], radius: i32) -> Vec<ThetaTerm> {
    assert_eq!(p_s.len(), nodes - 1);
    let mut out = Vec::new();
    let mut beta = vec![0i32; nodes];
    let free = nodes - 1;
    let side = (2 * radius + 1) as usize;
    for code in 0..side.pow(free as u32) {
        let mut rest = code;
        for b in beta.iter_mut().take(free) {
            *b = (rest % side) as i32 - radius;
            rest /= side;
        }
        let last = mu as i32 - beta[..free].iter().sum::<i32>();
        if last.abs() > radius {
            continue;
        }
        beta[free] = last;
        let norm2: i64 = beta.iter().map(|&b| (b as i64) * (b as i64)).sum();
        let mut coeff = nome.pow_half(norm2);
        let mut partial = 0;
        for (s, ps) in p_s.iter().enumerate() {
            // (β, Λ̄_s) = β_1 + ... + β_s
            partial += beta[s + 1];
            coeff *= ps.powi(-partial);
        }
        let z_exp = (1..=nodes).map(|i| beta[i % nodes] - beta[(i + 1) % nodes]).collect();
        out.push(ThetaTerm { beta: beta.clone(), norm2, coeff, z_exp });
    }
    out.sort_by_key(|t| t.norm2);
    out
}

/// The lattice theta function as a series in `z_1..z_m`.
pub fn lattice_theta(nodes: usize, mu: usize, nome: HalfBase, p_s: &[C64], radius: i32) -> TruncatedSeries {
    let names: Vec<String> = (1..=nodes).map(|i| format!("z{i}")).collect();
    let vars: Vec<&str> = names.iter().map(String::as_str).collect();
    let w = 2 * radius + 1;
    let mut s = TruncatedSeries::zero(&vars, &vec![(-w, w); nodes]);
    for t in lattice_theta_terms(nodes, mu, nome, p_s, radius) {
        s.add_term(t.z_exp, t.coeff);
    }
    s
}

/// Largest coefficient change when the summation radius grows by one,
/// relative to the largest coefficient.
pub fn theta_radius_change(nodes: usize, mu: usize, nome: HalfBase, p_s: &[C64], radius: i32) -> f64 {
    let small = lattice_theta(nodes, mu, nome, p_s, radius);
    let big = lattice_theta(nodes, mu, nome, p_s, radius + 1);
    let small = TruncatedSeries { windows: big.windows.clone(), ..small };
    small.max_diff(&big) / big.max_coeff().max(f64::MIN_POSITIVE)
}

/// Smallest radius whose outermost shell is below `tol` relative to the
/// leading term.
pub fn theta_radius_for(nodes: usize, mu: usize, nome: HalfBase, p_s: &[C64], tol: f64) -> i32 {
    (1..64).find(|&r| theta_radius_change(nodes, mu, nome, p_s, r) < tol).unwrap_or(64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn theta_at_order_zero_is_one_minus_z() {
        let s = theta_q((-3, 3), c(0.1, 0.05), 0);
        let mut want = TruncatedSeries::zero(&["z"], &[(-3, 3)]);
        want.add_term(vec![0], c(1.0, 0.0));
        want.add_term(vec![1], c(-1.0, 0.0));
        assert!(s.max_diff(&want) < 1e-15);
    }

    #[test]
    fn theta_first_order_in_p() {
        // (1 - z)(1 - p(z + 1/z + 1)) = 1 - z - p/z + p z² + O(p²)
        let p = c(0.01, 0.02);
        let s = theta_q((-3, 3), p, 1);
        let mut want = TruncatedSeries::zero(&["z"], &[(-3, 3)]);
        want.add_term(vec![0], c(1.0, 0.0));
        want.add_term(vec![1], c(-1.0, 0.0));
        want.add_term(vec![-1], -p);
        want.add_term(vec![2], p);
        assert!(s.max_diff(&want) < 1e-15);
    }

    #[test]
    fn pochhammer_reciprocal_matches_series_reciprocal() {
        let (cc, p) = (c(0.4, -0.2), c(0.1, 0.03));
        let r = pochhammer_reciprocal(cc, (0, 12), p, 2);
        // reciprocal of the truncated product (cz;p) to p^2, built directly
        let mut prod = TruncatedSeries::constant(&["z"], &[(0, 12)], c(1.0, 0.0));
        for k in 0..=2 {
            let mut lin = TruncatedSeries::zero(&["z"], &[(0, 12)]);
            lin.add_term(vec![0], c(1.0, 0.0));
            lin.add_term(vec![1], -cc * p.powi(k));
            prod = prod.mul(&lin);
        }
        let inv = prod.reciprocal().unwrap();
        // the two differ only at p-order three and above
        assert!(r.max_diff(&inv) < 20.0 * p.norm().powi(3));
    }

    #[test]
    fn rank_one_theta_by_hand() {
        // m = 2, μ = 0: β = (k, -k), (β,β)/2 = k², (β,Λ̄_1) = -k, z1 exponent -2k
        let nome = HalfBase::new(c(0.05, 0.01));
        let p1 = c(0.8, 0.3);
        let terms = lattice_theta_terms(2, 0, nome, &[p1], 2);
        assert_eq!(terms.len(), 5);
        for k in -2i32..=2 {
            let t = terms.iter().find(|t| t.beta == vec![k, -k]).unwrap();
            let want = nome.value.powi(k * k) * p1.powi(k);
            assert!((t.coeff - want).norm() < 1e-15);
            assert_eq!(t.z_exp, vec![-2 * k, 2 * k]);
        }
    }

    #[test]
    fn radius_convergence() {
        let nome = HalfBase::new(c(0.08, 0.02));
        for (nodes, mu) in [(2, 0), (2, 1), (3, 1), (3, 2)] {
            let ps = vec![c(1.1, 0.2); nodes - 1];
            let r = theta_radius_for(nodes, mu, nome, &ps, 1e-14);
            assert!(theta_radius_change(nodes, mu, nome, &ps, r) < 1e-14);
            assert!(r <= 6);
        }
    }
}
