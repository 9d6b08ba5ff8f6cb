//! Duality of the two families of integrals of motion, checked along a
//! ladder of truncation orders.

use std::path::PathBuf;

use serde::Serialize;

use super::build::{IomKind, IomOperator, Truncation, WeightParams};
use super::cache::build_iom_cached;
use crate::check::CheckRecord;
use crate::error::{Error, Result};
use crate::fock::{ExactOp, FockBasis, FockBasisState, Residual};
use crate::params::AlgebraParams;

#[derive(Clone, Debug, Serialize)]
pub struct DualityConfig {
    /// Truncation orders `K`, increasing; the last one is the ladder top.
    pub ladder: Vec<usize>,
    /// Relative change of `p̄_1` for the broken-constraint control.
    pub control_delta: f64,
    /// Required inflation of the residual under the control.
    pub control_factor: f64,
    /// Allowed growth between consecutive rungs.
    pub monotone_slack: f64,
    pub floor: f64,
    /// Operator cache; `None` builds everything afresh.
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
}

impl Default for DualityConfig {
    fn default() -> Self {
        Self { ladder: vec![1, 2, 3, 4], control_delta: 0.1, control_factor: 1e2, monotone_slack: 2.0, floor: 1e-6, cache_dir: None }
    }
}

/// Residuals of one rung, keyed like `"G,Ǧ"`.
#[derive(Clone, Debug, Serialize)]
pub struct LadderRow {
    pub k: usize,
    pub residuals: Vec<(String, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub ladder: Vec<LadderRow>,
    pub records: Vec<CheckRecord>,
    /// Operators loaded from the cache instead of built.
    pub cache_hits: usize,
}

/// `‖[X, Y]‖ / (‖X‖ ‖Y‖)` over exact columns.
pub fn commutator_residual(x: &ExactOp, y: &ExactOp) -> Residual {
    let scale = x.max_abs_exact(None) * y.max_abs_exact(None);
    let abs = x.commutator(y).max_abs_exact(None);
    let exact = x.exact.iter().zip(&y.exact).filter(|(a, b)| **a && **b).count();
    Residual { abs, scale, rel: if scale > 0.0 { abs / scale } else { abs }, exact_columns: exact }
}

/// Modulus of the nome the operator is expanded in.
pub fn nome_of(params: &AlgebraParams, kind: IomKind) -> f64 {
    match kind {
        IomKind::First => params.p(),
        IomKind::Second => params.p_star(),
        IomKind::DualFirst => params.pc(),
        IomKind::DualSecond => params.pc_star(),
    }
    .norm()
}

/// `max(floor, 10 (|p_X|^{K+1} + |p_Y|^{K+1}))`.
pub fn truncation_bound(params: &AlgebraParams, a: IomKind, b: IomKind, k: usize, floor: f64) -> f64 {
    let e = k as i32 + 1;
    floor.max(10.0 * (nome_of(params, a).powi(e) + nome_of(params, b).powi(e)))
}

/// All `μ` of one kind at one truncation.
struct Family {
    kind: IomKind,
    ops: Vec<IomOperator>,
}

#[allow(clippy::too_many_arguments)]
fn family(
    basis: &FockBasis,
    params: &AlgebraParams,
    kind: IomKind,
    order: usize,
    wp: &WeightParams,
    k: usize,
    cfg: &DualityConfig,
    hits: &mut usize,
) -> Result<Family> {
    let nodes = if kind.side() == super::symbolic::Side::Primal { params.m } else { params.n };
    let trunc = Truncation::new(k);
    let mut ops = Vec::with_capacity(nodes);
    for mu in 0..nodes {
        let (op, hit) = build_iom_cached(cfg.cache_dir.as_deref(), basis, params, kind, mu, order, wp, &trunc)?;
        *hits += usize::from(hit);
        ops.push(op);
    }
    Ok(Family { kind, ops })
}

/// Worst residual over all `(μ, ν)` of two families.
fn pair_residual(a: &Family, b: &Family, skip_equal: bool) -> Residual {
    let mut worst = Residual { abs: 0.0, scale: 0.0, rel: 0.0, exact_columns: usize::MAX };
    for (i, x) in a.ops.iter().enumerate() {
        for (j, y) in b.ops.iter().enumerate() {
            if skip_equal && i >= j {
                continue;
            }
            let r = commutator_residual(&x.op, &y.op);
            let cols = worst.exact_columns.min(r.exact_columns);
            if r.rel >= worst.rel {
                worst = r;
            }
            worst.exact_columns = cols;
        }
    }
    if worst.exact_columns == usize::MAX {
        worst.exact_columns = 0;
    }
    worst
}

fn label(a: IomKind, b: IomKind) -> String {
    format!("{},{}", a.name(), b.name())
}

/// Duality `[G, Ǧ] = 0` for the four pairings, self-commutativity of each
/// side, monotone decay along the ladder and the broken-constraint control.
pub fn verify_duality(
    basis: &FockBasis,
    params: &AlgebraParams,
    order: usize,
    order_dual: usize,
    cfg: &DualityConfig,
) -> Result<DualityReport> {
    if cfg.ladder.is_empty() || cfg.ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParams("the truncation ladder must be nonempty and increasing".into()));
    }
    let wp = WeightParams::duality(params);
    let primal = [IomKind::First, IomKind::Second];
    let dual = [IomKind::DualFirst, IomKind::DualSecond];
    let order_of = |kind: IomKind| if kind.side() == super::symbolic::Side::Primal { order } else { order_dual };

    let mut ladder = Vec::new();
    let mut records = Vec::new();
    let mut history: Vec<Vec<f64>> = Vec::new();
    let mut hits = 0;
    let top = *cfg.ladder.last().unwrap();
    for &k in &cfg.ladder {
        let fams: Vec<Family> = IomKind::ALL
            .iter()
            .map(|&kind| family(basis, params, kind, order_of(kind), &wp, k, cfg, &mut hits))
            .collect::<Result<_>>()?;
        let by_kind = |kind: IomKind| fams.iter().find(|f| f.kind == kind).unwrap();
        let mut row = Vec::new();
        let mut rung = Vec::new();
        for a in primal {
            for b in dual {
                let res = pair_residual(by_kind(a), by_kind(b), false);
                row.push((label(a, b), res.rel));
                rung.push(res.rel);
                if k == top {
                    let tol = truncation_bound(params, a, b, k, cfg.floor);
                    records.push(CheckRecord::new("duality", format!("{} K={k}", label(a, b)), res, tol));
                }
            }
        }
        if k == top {
            // the vacuum spans a 1×1 block, so every commutator entry there is exactly 0
            let vac = basis.index_of(&FockBasisState { osc: vec![0; basis.osc_state(0).len()], lattice: vec![0; params.m * params.n] });
            if let Some(v) = vac {
                for a in primal {
                    for b in dual {
                        let mut worst = 0.0f64;
                        for x in &by_kind(a).ops {
                            for y in &by_kind(b).ops {
                                worst = worst.max(x.op.commutator(&y.op).mat.get(v, v).norm());
                            }
                        }
                        let res = Residual { abs: worst, scale: 1.0, rel: worst, exact_columns: 1 };
                        records.push(CheckRecord::new("duality-vacuum-block", format!("{} K={k}", label(a, b)), res, 0.0));
                    }
                }
            }
            // self-commutativity within each side
            for (a, b, skip) in [
                (IomKind::First, IomKind::First, true),
                (IomKind::First, IomKind::Second, false),
                (IomKind::Second, IomKind::Second, true),
                (IomKind::DualFirst, IomKind::DualFirst, true),
                (IomKind::DualFirst, IomKind::DualSecond, false),
                (IomKind::DualSecond, IomKind::DualSecond, true),
            ] {
                let res = pair_residual(by_kind(a), by_kind(b), skip);
                row.push((label(a, b), res.rel));
                let tol = truncation_bound(params, a, b, k, cfg.floor);
                records.push(CheckRecord::new("self-commutativity", format!("{} K={k}", label(a, b)), res, tol));
            }
            // broken constraint: p̄_1 moved off ǔ_1/ǔ_0
            let broken = wp.perturbed(cfg.control_delta);
            let moved: Vec<Family> = primal
                .iter()
                .map(|&kind| family(basis, params, kind, order, &broken, k, cfg, &mut hits))
                .collect::<Result<_>>()?;
            for (a, fam) in primal.iter().zip(&moved) {
                for b in dual {
                    let base = pair_residual(by_kind(*a), by_kind(b), false);
                    let off = pair_residual(fam, by_kind(b), false);
                    let ratio = off.rel / base.rel.max(f64::MIN_POSITIVE);
                    let res = Residual { abs: off.abs, scale: base.rel, rel: ratio, exact_columns: off.exact_columns };
                    records.push(CheckRecord::witness("duality-control", format!("{} δ={} K={k}", label(*a, b), cfg.control_delta), res, cfg.control_factor));
                }
            }
        }
        history.push(rung);
        ladder.push(LadderRow { k, residuals: row });
    }
    // monotone within slack along the ladder, per pairing
    let names: Vec<String> = primal.iter().flat_map(|&a| dual.iter().map(move |&b| label(a, b))).collect();
    for (idx, name) in names.iter().enumerate() {
        let growth = history.windows(2).map(|w| w[1][idx] / w[0][idx].max(f64::MIN_POSITIVE)).fold(0.0, f64::max);
        let res = Residual { abs: growth, scale: 1.0, rel: growth, exact_columns: usize::from(history.len() > 1) };
        let mut rec = CheckRecord::new("duality-monotone", format!("{name} K={:?}", cfg.ladder), res, cfg.monotone_slack);
        rec.pass = growth <= cfg.monotone_slack;
        records.push(rec);
    }
    Ok(DualityReport { ladder, records, cache_hits: hits })
}
