//! Suite orchestration: runs the selected checks for one configuration and
//! assembles a JSON report.

pub mod config;

use std::time::{Instant, SystemTime, UNIX_EPOCH};

use num_complex::Complex64 as C64;
use serde::Serialize;

pub use config::{ParamSource, Settings, SuiteConfig, SuiteId, Tolerances, Window};

use crate::boson::check::check_boson_algebra;
use crate::boson::tables::{check_table, Table};
use crate::check::affine::check_affine_commutativity;
use crate::check::cancellation::{check_pointwise_cancellation, Cancellation};
use crate::check::contraction::check_zero_mode_contractions;
use crate::check::delta::check_delta_commutators;
use crate::check::relations::{check_defining_relations, RelationWindow};
use crate::check::report::{all_pass, worst};
use crate::check::CheckRecord;
use crate::error::Result;
use crate::fock::{FockBasis, Residual};
use crate::iom::duality::{verify_duality, DualityConfig, LadderRow};
use crate::params::AlgebraParams;
use crate::vertex::action::ActionModes;
use crate::vertex::coproduct::coproduct_cross_check;
use crate::vertex::highest::{block_structure_check, highest_weight_check};

pub const REPORT_SCHEMA: &str = "toroidal-verify.report/1";

/// Parameters as used, with the derived nomes.
#[derive(Clone, Debug, Serialize)]
pub struct ResolvedParams {
    #[serde(flatten)]
    pub values: AlgebraParams,
    pub q1: C64,
    pub q3: C64,
    pub qc1: C64,
    pub qc3: C64,
    pub p: C64,
    pub p_star: C64,
    pub pc: C64,
    pub pc_star: C64,
    pub hash: String,
}

impl From<&AlgebraParams> for ResolvedParams {
    fn from(p: &AlgebraParams) -> Self {
        Self {
            values: p.clone(),
            q1: p.q1(),
            q3: p.q3(),
            qc1: p.qc1(),
            qc3: p.qc3(),
            p: p.p(),
            p_star: p.p_star(),
            pc: p.pc(),
            pc_star: p.pc_star(),
            hash: p.hash_hex(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisInfo {
    pub d_max: usize,
    pub l_max: i32,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub total: usize,
    pub failed: usize,
    /// Records with no exact column, left out of `records`.
    pub vacuous: usize,
    pub worst_residual: f64,
    /// Largest `residual / tolerance` over non-witness records.
    pub worst_ratio: f64,
}

fn worst_ratio(records: &[CheckRecord]) -> f64 {
    records.iter().filter(|r| !r.expect_nonzero && r.tolerance > 0.0).map(|r| r.residual / r.tolerance).fold(0.0, f64::max)
}

impl Summary {
    fn of(records: &[CheckRecord], vacuous: usize) -> Self {
        Self { total: records.len(), failed: records.iter().filter(|r| !r.pass).count(), vacuous, worst_residual: worst(records), worst_ratio: worst_ratio(records) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub id: SuiteId,
    pub pass: bool,
    pub summary: Summary,
    pub bases: Vec<BasisInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ladder: Option<Vec<LadderRow>>,
    pub records: Vec<CheckRecord>,
    /// Cases that fell entirely outside the exact blocks of the basis.
    pub vacuous: Vec<String>,
}

/// The only part of a report that changes between identical runs.
#[derive(Clone, Debug, Serialize)]
pub struct RunInfo {
    pub generated_unix: u64,
    pub elapsed_seconds: f64,
    pub cache_hits: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub config_hash: String,
    pub config: SuiteConfig,
    pub params: ResolvedParams,
    pub pass: bool,
    pub suites: Vec<SuiteResult>,
    pub run: RunInfo,
}

impl Report {
    pub fn suite(&self, id: SuiteId) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.id == id)
    }
}

fn info(b: &FockBasis) -> BasisInfo {
    BasisInfo { d_max: b.d_max, l_max: b.l_max, dim: b.len() }
}

fn unit(dev: f64) -> Residual {
    Residual { abs: dev, scale: 1.0, rel: dev, exact_columns: 1 }
}

/// Runs every selected suite in dependency order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let start = Instant::now();
    let params = cfg.resolve_params(cfg.m, cfg.n)?;
    let mut hits = 0;
    let mut suites = Vec::new();
    for id in cfg.ordered_suites() {
        suites.push(run_one(id, cfg, &params, &mut hits)?);
    }
    let generated_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    Ok(Report {
        schema: REPORT_SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION"),
        config_hash: cfg.hash_hex(),
        config: cfg.clone(),
        params: ResolvedParams::from(&params),
        pass: suites.iter().all(|s| s.pass),
        suites,
        run: RunInfo { generated_unix, elapsed_seconds: start.elapsed().as_secs_f64(), cache_hits: hits },
    })
}

fn finish(id: SuiteId, bases: Vec<BasisInfo>, records: Vec<CheckRecord>, ladder: Option<Vec<LadderRow>>) -> SuiteResult {
    let (records, empty): (Vec<_>, Vec<_>) = records.into_iter().partition(|r| r.expect_nonzero || r.exact_columns > 0);
    let vacuous: Vec<String> = empty.into_iter().map(|r| format!("{} {}", r.relation, r.case)).collect();
    SuiteResult {
        id,
        pass: !records.is_empty() && all_pass(&records),
        summary: Summary::of(&records, vacuous.len()),
        bases,
        ladder,
        records,
        vacuous,
    }
}

/// Modes of one action sized so that no relation in a `|k| ≤ w` sweep is skipped.
fn relation_modes(basis: &FockBasis, params: &AlgebraParams, dual: bool, w: &Window) -> ActionModes {
    let ef = w.modes + (w.h_max as i64).max(2);
    ActionModes::build(basis, params, dual, ef, 2 * w.modes, w.h_max)
}

pub fn run_one(id: SuiteId, cfg: &SuiteConfig, params: &AlgebraParams, hits: &mut usize) -> Result<SuiteResult> {
    let (s, t) = (&cfg.settings, &cfg.tolerance);
    let basis = |w: &Window| FockBasis::new(params, w.d_max, w.l_max);
    Ok(match id {
        SuiteId::Bosons => {
            let b = FockBasis::new(params, s.boson_r_max as usize, 0)?;
            finish(id, vec![info(&b)], check_boson_algebra(&b, params, s.boson_r_max, t.rel), None)
        }
        SuiteId::Contractions => {
            let mut records = Vec::new();
            for table in Table::ALL {
                for cell in check_table(params, table, s.table_order, t.rel)? {
                    let (i, j, k, l) = cell.indices;
                    let case = format!("table {} ({i},{j},{k},{l}) order={} p-order={}", cell.table, cell.order, cell.p_order);
                    records.push(CheckRecord::new("contraction-table", case, unit(cell.max_deviation), t.rel));
                }
            }
            let b = basis(&s.zero_modes)?;
            records.extend(check_zero_mode_contractions(&b, params, s.zero_modes.modes, t.rel));
            finish(id, vec![info(&b)], records, None)
        }
        SuiteId::Relations => {
            let w = &s.relations;
            let b = basis(w)?;
            let win = RelationWindow { modes: w.modes, h_max: w.h_max, tol: t.relations };
            let mut records = Vec::new();
            for dual in [false, true] {
                let modes = relation_modes(&b, params, dual, w);
                records.extend(check_defining_relations(&b, params, &modes, win));
            }
            finish(id, vec![info(&b)], records, None)
        }
        SuiteId::Coproduct => {
            let w = &s.coproduct;
            let b = basis(w)?;
            let closed = ActionModes::build(&b, params, false, w.modes, 0, w.h_max);
            finish(id, vec![info(&b)], coproduct_cross_check(&b, params, &closed, w.modes, w.h_max, t.coproduct), None)
        }
        SuiteId::Affine => {
            let w = &s.affine;
            let b = basis(w)?;
            let primal = ActionModes::build(&b, params, false, w.modes, 0, w.h_max);
            let dual = ActionModes::build(&b, params, true, w.modes, 0, w.h_max);
            let mut records = check_affine_commutativity(&b, &primal, &dual, w.modes, w.h_max, t.affine, t.affine_witness);
            records.extend(check_delta_commutators(&b, params, w.modes, t.affine));
            finish(id, vec![info(&b)], records, None)
        }
        SuiteId::Cancellation => {
            let w = &s.cancellation;
            let b = basis(w)?;
            let mut records = Vec::new();
            for which in Cancellation::ALL {
                for dressed in [false, true] {
                    records.extend(check_pointwise_cancellation(&b, params, which, dressed, w.modes, t.cancellation, t.cancellation_control));
                }
            }
            finish(id, vec![info(&b)], records, None)
        }
        SuiteId::HighestWeight => {
            // level one: the same parameters at n = 1
            let w = &s.highest_weight;
            let p1 = cfg.resolve_params(cfg.m, 1)?;
            let b = FockBasis::new(&p1, w.d_max, w.l_max)?;
            let modes = ActionModes::build(&b, &p1, false, w.modes, 0, 0);
            let mut records = highest_weight_check(&b, &p1, &modes, s.hw_s_max, t.highest_weight);
            records.extend(block_structure_check(&b, &modes, t.highest_weight));
            finish(id, vec![info(&b)], records, None)
        }
        SuiteId::IomDuality => {
            let io = &s.iom;
            let b = FockBasis::new(params, io.d_max, io.l_max)?;
            let dc = DualityConfig {
                ladder: io.ladder.clone(),
                control_delta: io.control_delta,
                floor: t.iom_floor,
                cache_dir: cfg.cache_dir.clone(),
                ..DualityConfig::default()
            };
            let rep = verify_duality(&b, params, io.order, io.order_dual, &dc)?;
            *hits += rep.cache_hits;
            finish(id, vec![info(&b)], rep.records, Some(rep.ladder))
        }
    })
}
