//! Quasi-periodicity of the dressed currents and the extended components.

use toroidal_duality::check::report::all_pass;
use toroidal_duality::fock::FockBasis;
use toroidal_duality::params::{AlgebraParams, SamplingRegime};
use toroidal_duality::vertex::dressed::{extended_component_check, quasi_periodicity_check};

#[test]
fn dressed_currents_are_quasi_periodic() {
    for (m, n) in [(2, 2), (3, 2), (2, 3)] {
        let p = AlgebraParams::sample(m, n, 11, &SamplingRegime::default()).unwrap();
        let b = FockBasis::new(&p, 2, 1).unwrap();
        let qp = quasi_periodicity_check(&b, &p, 3, 1e-10);
        let ext = extended_component_check(&b, &p, 3, 1e-10);
        assert!(!qp.is_empty() && !ext.is_empty());
        if let Some(r) = qp.iter().chain(&ext).find(|r| !r.pass) {
            panic!("({m},{n}) {} {}: {:e}", r.relation, r.case, r.residual);
        }
        assert!(all_pass(&qp) && all_pass(&ext));
    }
}
