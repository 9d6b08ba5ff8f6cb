//! Property tests over randomly drawn parameters.

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use toroidal_duality::fock::FockBasis;
use toroidal_duality::iom::build::{build_iom, is_block_diagonal, IomKind, Truncation, WeightParams};
use toroidal_duality::iom::cache::build_iom_cached;
use toroidal_duality::iom::hfun::HFunction;
use toroidal_duality::params::{AlgebraParams, SamplingRegime};
use toroidal_duality::suite::{SuiteConfig, SuiteId};

fn polar() -> impl Strategy<Value = (f64, f64)> {
    (0.0..1.0f64, -3.1..3.1f64)
}

fn c((r, t): (f64, f64), lo: f64, hi: f64) -> C64 {
    C64::from_polar(lo + r * (hi - lo), t)
}

fn kernel(nodes: usize, mu: usize, star: bool, radius: i32, raw: &[(f64, f64)]) -> HFunction {
    HFunction {
        nodes,
        order: 1,
        mu,
        star,
        q1: c(raw[0], 0.2, 0.5),
        q3: c(raw[1], 1.5, 3.0),
        nome: c(raw[2], 0.02, 0.1),
        p_s: raw[3..3 + nodes - 1].iter().map(|&x| c(x, 0.7, 1.4)).collect(),
        radius,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn h_quasi_periodicity(nodes in 2usize..=4, mu in 0usize..4, star: bool,
                           raw in prop::collection::vec(polar(), 6), xs in prop::collection::vec(polar(), 4)) {
        let h = kernel(nodes, mu % nodes, star, 6, &raw);
        let x: Vec<Vec<C64>> = xs[..nodes].iter().map(|&p| vec![c(p, 0.8, 1.25)]).collect();
        prop_assert!(h.quasi_periodicity_residual(&x) < 1e-9);
    }

    #[test]
    fn theta_sum_has_converged(nodes in 2usize..=3, mu in 0usize..3,
                               raw in prop::collection::vec(polar(), 6), xs in prop::collection::vec(polar(), 3)) {
        let x: Vec<Vec<C64>> = xs[..nodes].iter().map(|&p| vec![c(p, 0.8, 1.25)]).collect();
        let a = kernel(nodes, mu % nodes, false, 6, &raw).eval(&x);
        let b = kernel(nodes, mu % nodes, false, 9, &raw).eval(&x);
        prop_assert!((a - b).norm() <= 1e-12 * b.norm().max(1e-300));
    }

    #[test]
    fn config_hash_ignores_suite_order(ids in prop::sample::subsequence(SuiteId::ALL.to_vec(), 1..=8), seed in 0u64..1000) {
        let mut a = SuiteConfig { suites: ids.clone(), ..SuiteConfig::default() };
        a.params.seed = Some(seed);
        let mut b = a.clone();
        b.suites.reverse();
        b.suites.extend(ids);
        prop_assert_eq!(a.hash_hex(), b.hash_hex());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn integrals_of_motion_are_block_diagonal(seed in 0u64..10_000, kind in 0usize..4, mu in 0usize..2) {
        let p = AlgebraParams::sample(2, 2, seed, &SamplingRegime::default()).unwrap();
        let b = FockBasis::new(&p, 1, 1).unwrap();
        let g = build_iom(&b, &p, IomKind::ALL[kind], mu, 1, &WeightParams::duality(&p), &Truncation::new(1)).unwrap();
        prop_assert!(is_block_diagonal(&b, &p, &g.op.mat));
    }

    #[test]
    fn cache_round_trip_is_bit_identical(seed in 0u64..10_000, kind in 0usize..4) {
        let dir = tempfile::tempdir().unwrap();
        let p = AlgebraParams::sample(2, 2, seed, &SamplingRegime::default()).unwrap();
        let b = FockBasis::new(&p, 1, 0).unwrap();
        let wp = WeightParams::duality(&p);
        let args = (IomKind::ALL[kind], 1, 1, &wp, &Truncation::new(1));
        let (cold, hit0) = build_iom_cached(Some(dir.path()), &b, &p, args.0, args.1, args.2, args.3, args.4).unwrap();
        let (warm, hit1) = build_iom_cached(Some(dir.path()), &b, &p, args.0, args.1, args.2, args.3, args.4).unwrap();
        prop_assert!(!hit0 && hit1);
        let bits = |op: &toroidal_duality::fock::ExactOp| op.mat.triplets().map(|(r, c, v)| (r, c, v.re.to_bits(), v.im.to_bits())).collect::<Vec<_>>();
        prop_assert_eq!(bits(&cold.op), bits(&warm.op));
        prop_assert_eq!(cold.op.exact, warm.op.exact);
    }
}
