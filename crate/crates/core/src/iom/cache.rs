//! Disk cache for integrals of motion, keyed by everything the build reads.

use std::path::Path;

use num_complex::Complex64 as C64;
use sha2::{Digest, Sha256};

use super::build::{build_iom, IomKind, IomOperator, Truncation, WeightParams};
use crate::error::Result;
use crate::fock::cache::{read_op, write_op};
use crate::fock::{FockBasis, GradedOp, LatticeShift};
use crate::params::AlgebraParams;

/// Hex digest of the parameters, basis shape, kind, `μ`, order, weights and
/// truncation.
pub fn iom_key(
    basis: &FockBasis,
    params: &AlgebraParams,
    kind: IomKind,
    mu: usize,
    order: usize,
    wp: &WeightParams,
    trunc: &Truncation,
) -> String {
    let mut h = Sha256::new();
    h.update(params.hash_hex());
    for x in [basis.d_max as u64, basis.l_max as u64, mu as u64, order as u64, trunc.k_p as u64, trunc.window_cap as u64] {
        h.update(x.to_le_bytes());
    }
    h.update(kind.name());
    let mut push = |x: &C64| {
        h.update(x.re.to_bits().to_le_bytes());
        h.update(x.im.to_bits().to_le_bytes());
    };
    wp.pbar.iter().chain(&wp.pbar_c).for_each(&mut push);
    hex::encode(h.finalize())
}

fn tag(g: &IomOperator) -> String {
    format!("iom {} mu={} order={} K={} window={} terms={}", g.kind.name(), g.mu, g.order, g.k_p, g.window, g.theta_terms)
}

fn from_tag(tag: &str, kind: IomKind) -> Option<(usize, usize, usize, i64, usize)> {
    let mut fields = tag.split_whitespace();
    if fields.next()? != "iom" || fields.next()? != kind.name() {
        return None;
    }
    let mut val = |key: &str| fields.next()?.strip_prefix(key)?.strip_prefix('=')?.parse::<i64>().ok();
    let (mu, order, k, window, terms) = (val("mu")?, val("order")?, val("K")?, val("window")?, val("terms")?);
    Some((mu as usize, order as usize, k as usize, window, terms as usize))
}

/// `build_iom` through the cache in `dir`. Returns the operator and whether
/// it came from disk. A corrupt or mismatched entry is rebuilt.
#[allow(clippy::too_many_arguments)]
pub fn build_iom_cached(
    dir: Option<&Path>,
    basis: &FockBasis,
    params: &AlgebraParams,
    kind: IomKind,
    mu: usize,
    order: usize,
    wp: &WeightParams,
    trunc: &Truncation,
) -> Result<(IomOperator, bool)> {
    let Some(dir) = dir else {
        return Ok((build_iom(basis, params, kind, mu, order, wp, trunc)?, false));
    };
    let key = iom_key(basis, params, kind, mu, order, wp, trunc);
    let path = dir.join(format!("iom-{key}.txt"));
    if let Ok(g) = read_op(&path, &key) {
        if g.op.dim() == basis.len() {
            if let Some((m, o, k, window, theta_terms)) = from_tag(&g.tag, kind) {
                if (m, o, k) == (mu, order, trunc.k_p) {
                    return Ok((IomOperator { kind, mu, order, k_p: k, window, theta_terms, op: g.op }, true));
                }
            }
        }
    }
    let g = build_iom(basis, params, kind, mu, order, wp, trunc)?;
    let graded = GradedOp { op: g.op.clone(), degree2: Some(0), lattice: LatticeShift::Mixed, tag: tag(&g) };
    write_op(&path, &graded, &key)?;
    Ok((g, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SamplingRegime;

    #[test]
    fn cache_hit_is_bit_identical_and_corruption_rebuilds() {
        let p = AlgebraParams::sample(2, 2, 2, &SamplingRegime::default()).unwrap();
        let b = FockBasis::new(&p, 1, 1).unwrap();
        let wp = WeightParams::duality(&p);
        let t = Truncation::new(2);
        let dir = tempfile::tempdir().unwrap();
        let (cold, hit) = build_iom_cached(Some(dir.path()), &b, &p, IomKind::Second, 1, 1, &wp, &t).unwrap();
        assert!(!hit);
        let (warm, hit) = build_iom_cached(Some(dir.path()), &b, &p, IomKind::Second, 1, 1, &wp, &t).unwrap();
        assert!(hit);
        assert_eq!(cold.op.mat, warm.op.mat);
        assert_eq!(cold.op.exact, warm.op.exact);
        assert_eq!((cold.window, cold.theta_terms), (warm.window, warm.theta_terms));

        let key = iom_key(&b, &p, IomKind::Second, 1, 1, &wp, &t);
        std::fs::write(dir.path().join(format!("iom-{key}.txt")), "garbage").unwrap();
        let (again, hit) = build_iom_cached(Some(dir.path()), &b, &p, IomKind::Second, 1, 1, &wp, &t).unwrap();
        assert!(!hit);
        assert_eq!(again.op.mat, cold.op.mat);
        // a different μ has a different key
        assert_ne!(key, iom_key(&b, &p, IomKind::Second, 0, 1, &wp, &t));
    }
}
