//! Vacuum entry of `G_{0,1}` at `m = 2` against a direct double constant
//! term on the torus `|x₁| = |x₂| = 1`.
//!
//! With `|q₁|, |q₃| < 1` the prescribed contour is the literal torus, so the
//! oracle needs no residues. The oscillator vacuum expectation is summed from
//! the boson commutators, the zero modes are applied one current at a time,
//! and `h` is evaluated pointwise from its theta-function definition.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use toroidal_duality::boson::tables::{log_contraction, OscCurrent};
use toroidal_duality::fock::{FockBasis, FockBasisState};
use toroidal_duality::iom::build::{build_iom, IomKind, Truncation, WeightParams};
use toroidal_duality::iom::hfun::HFunction;
use toroidal_duality::params::AlgebraParams;
use toroidal_duality::vertex::currents::{component, spectral_weight, weight};

fn regime_a() -> AlgebraParams {
    let pol = C64::from_polar;
    AlgebraParams::new(
        2,
        2,
        pol(1.5, 0.3),
        pol(1.0, 0.7),
        pol(0.3, 1.1),
        vec![pol(1.1, 0.4), pol(0.9, -0.8)],
        vec![pol(0.95, 1.3), pol(1.2, -0.2)],
    )
    .unwrap()
}

/// `exp(Σ_r c_r t^r)` from the log coefficients `c_1, c_2, ..`.
fn contraction(logs: &[C64], t: C64) -> C64 {
    (logs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| (acc + c) * t)).exp()
}

const ORDER: i32 = 200;

fn oracle(params: &AlgebraParams, basis: &FockBasis, wp: &WeightParams, mu: usize) -> C64 {
    let zero = vec![0i32; params.m * params.n];
    // p₁ on the vacuum sector: p̄₁ q^{-𝗲_0 + 𝗲_1}
    let e = -weight(params, false, 0).eval(&zero) + weight(params, false, 1).eval(&zero);
    let h = HFunction {
        nodes: 2,
        order: 1,
        mu,
        star: false,
        q1: params.q1(),
        q3: params.q3(),
        nome: params.p(),
        p_s: vec![wp.pbar[0] * params.q.powi(e as i32)],
        radius: 8,
    };
    let (n1, n2) = (8usize, 1024usize);
    let mut total = C64::new(0.0, 0.0);
    for j in 0..params.n as i64 {
        for l in 0..params.n as i64 {
            let xo = component(params, 1, OscCurrent::FDr, 1, j);
            let yo = component(params, 1, OscCurrent::FDr, 0, l);
            // Y acts first on the vacuum, then X
            let (mid, s1, c1, ey) = yo.zero.apply(basis, &zero);
            let (end, s2, c2, ex) = xo.zero.apply(basis, &mid);
            if end != zero {
                continue;
            }
            let w = spectral_weight(params, OscCurrent::FDr, 1, j) * spectral_weight(params, OscCurrent::FDr, 0, l);
            let pre = w * s1 * s2 * c1 * c2 * xo.scalar * yo.scalar;
            let x = (OscCurrent::FDr, 1, j);
            let y = (OscCurrent::FDr, 0, l);
            let logs: Vec<C64> = (1..=ORDER).map(|r| log_contraction(params, x, y, r)).collect();
            // the series has to converge on |t| = 1
            let tail = logs[ORDER as usize - 1].norm();
            assert!(tail < 1e-14, "contraction log coefficients decay too slowly: {tail:e}");
            let mut ct = C64::new(0.0, 0.0);
            for a in 0..n1 {
                let x1 = C64::from_polar(1.0, 2.0 * PI * a as f64 / n1 as f64);
                for b in 0..n2 {
                    let x2 = C64::from_polar(1.0, 2.0 * PI * b as f64 / n2 as f64);
                    let f = contraction(&logs, x2 / x1);
                    ct += x1.powi(ex[0] as i32) * x2.powi(ey[0] as i32) * f * h.eval(&[vec![x1], vec![x2]]);
                }
            }
            total += pre * ct / (n1 * n2) as f64;
        }
    }
    total
}

#[test]
fn vacuum_entry_matches_direct_constant_term() {
    let params = regime_a();
    assert!(params.q1().norm() < 1.0 && params.q3().norm() < 1.0);
    let basis = FockBasis::new(&params, 1, 1).unwrap();
    let wp = WeightParams::duality(&params);
    let vac = basis
        .index_of(&FockBasisState { osc: vec![0; basis.osc_state(0).len()], lattice: vec![0; params.m * params.n] })
        .unwrap();
    for mu in 0..2 {
        let want = oracle(&params, &basis, &wp, mu);
        let g = build_iom(&basis, &params, IomKind::First, mu, 1, &wp, &Truncation::new(10)).unwrap();
        let got = g.op.mat.get(vac, vac);
        println!("μ={mu}: build {got:.6e} oracle {want:.6e}");
        assert!((got - want).norm() <= 1e-8 * want.norm().max(1e-12), "μ={mu}: {got} vs {want}");
    }
}
