//! Acceptance criteria 1–9. Every test prints one `criterion N: PASS|FAIL`
//! line before asserting, so `--nocapture` gives a compact summary.

use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use toroidal_duality::check::CheckRecord;
use toroidal_duality::suite::{run_suite, SuiteConfig, SuiteId, SuiteResult, Window};

const TAU_REL: f64 = 1e-8;
const SHAPES: [(usize, usize); 3] = [(2, 2), (2, 3), (3, 2)];
const SEED: u64 = 1;

fn config(m: usize, n: usize, id: SuiteId) -> SuiteConfig {
    SuiteConfig { m, n, suites: vec![id], ..SuiteConfig::default() }
}

fn run(cfg: &SuiteConfig) -> (SuiteResult, Duration) {
    let t = Instant::now();
    let rep = run_suite(cfg).expect("suite runs");
    (rep.suites.into_iter().next().unwrap(), t.elapsed())
}

/// Worst failing record, for the summary line.
fn worst_failure(records: &[&CheckRecord]) -> String {
    records
        .iter()
        .filter(|r| !r.pass)
        .max_by(|a, b| a.residual.total_cmp(&b.residual))
        .map(|r| format!(" first failure: {} {} = {:.2e} vs {:.1e}", r.relation, r.case, r.residual, r.tolerance))
        .unwrap_or_default()
}

fn report(n: usize, what: &str, ok: bool, detail: String) {
    println!("criterion {n}: {} {what}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

fn relations_of(s: &SuiteResult) -> BTreeSet<String> {
    s.records.iter().map(|r| r.relation.clone()).collect()
}

fn max_residual<'a>(records: impl IntoIterator<Item = &'a CheckRecord>) -> f64 {
    records.into_iter().filter(|r| !r.expect_nonzero).map(|r| r.residual).fold(0.0, f64::max)
}

#[test]
fn criterion_1_boson_algebra() {
    let mut ok = true;
    let mut detail = Vec::new();
    for (m, n) in SHAPES {
        let mut cfg = config(m, n, SuiteId::Bosons);
        cfg.tolerance.rel = TAU_REL;
        cfg.settings.boson_r_max = 6;
        let (s, t) = run(&cfg);
        let want: BTreeSet<String> = ["aa", "bb1", "bb2", "bb3", "bb4"].map(String::from).into();
        let all: Vec<_> = s.records.iter().collect();
        ok &= s.pass && relations_of(&s) == want && s.records.iter().all(|r| r.tolerance == TAU_REL);
        detail.push(format!("({m},{n}) {} records worst {:.1e} in {:.1}s{}", s.summary.total, max_residual(&s.records), t.as_secs_f64(), worst_failure(&all)));
    }
    report(1, "boson commutators r <= 6", ok, detail.join("; "));
}

#[test]
fn criterion_2_contraction_tables() {
    let mut ok = true;
    let mut detail = Vec::new();
    for (m, n) in SHAPES {
        let mut cfg = config(m, n, SuiteId::Contractions);
        cfg.tolerance.rel = TAU_REL;
        cfg.settings.table_order = 8;
        let (s, t) = run(&cfg);
        let cells: Vec<&CheckRecord> = s.records.iter().filter(|r| r.relation == "contraction-table").collect();
        let tables: BTreeSet<usize> = cells.iter().map(|r| r.case.split_whitespace().nth(1).unwrap().parse().unwrap()).collect();
        ok &= s.pass && (1..=12).all(|k| tables.contains(&k)) && cells.iter().all(|r| r.case.contains("order=8"));
        detail.push(format!("({m},{n}) {} cells in {} tables worst {:.1e}, {} zero-mode products ({} vacuous) in {:.1}s{}", cells.len(), tables.len(), max_residual(cells.iter().copied()), s.summary.total - cells.len(), s.summary.vacuous, t.as_secs_f64(), worst_failure(&cells)));
    }
    report(2, "contraction tables to order 8", ok, detail.join("; "));
}

#[test]
fn criterion_3_defining_relations() {
    let mut cfg = config(2, 2, SuiteId::Relations);
    cfg.tolerance.relations = 1e-7;
    cfg.settings.relations = Window { d_max: 3, l_max: 1, modes: 3, h_max: 3 };
    let (s, t) = run(&cfg);
    let rels = relations_of(&s);
    let families = ["CK-qh-E", "CK-qh-F", "CK-D-E", "CK-D-F", "HE", "HF", "HH", "EF", "EE", "FF"];
    let covered = families.iter().all(|f| rels.contains(*f) && rels.contains(&format!("dual {f}")));
    // E_{i,k} F_{i,-k}: both K^+_0 and K^-_0 contribute
    let double: Vec<&CheckRecord> = s
        .records
        .iter()
        .filter(|r| r.relation.ends_with("EF") && {
            let f: Vec<i64> = r.case.split_whitespace().map(|kv| kv.split('=').nth(1).unwrap().parse().unwrap()).collect();
            f[0] == f[1] && f[2] + f[3] == 0
        })
        .collect();
    let all: Vec<_> = s.records.iter().collect();
    let ok = s.pass && covered && double.len() >= 2 * 2 * 7 && t <= Duration::from_secs(300);
    report(
        3,
        "defining relations on D_max=3, L_max=1, |k| <= 3",
        ok,
        format!(
            "{} records ({} vacuous) worst {:.1e}; {} double-support EF cases worst {:.1e}; {:.1}s{}",
            s.summary.total,
            s.summary.vacuous,
            max_residual(&s.records),
            double.len(),
            max_residual(double.iter().copied()),
            t.as_secs_f64(),
            worst_failure(&all)
        ),
    );
}

#[test]
fn criterion_4_coproduct() {
    let mut ok = true;
    let mut detail = Vec::new();
    for m in [2, 3] {
        let mut cfg = config(m, 2, SuiteId::Coproduct);
        cfg.tolerance.coproduct = 1e-10;
        cfg.settings.coproduct.d_max = 2;
        cfg.settings.coproduct.l_max = 1;
        let (s, t) = run(&cfg);
        let rels = relations_of(&s);
        let all: Vec<_> = s.records.iter().collect();
        ok &= s.pass && ["coproduct-E", "coproduct-F", "coproduct-H"].iter().all(|r| rels.contains(*r)) && t <= Duration::from_secs(120);
        detail.push(format!("m={m}: {} records worst {:.1e} in {:.1}s{}", s.summary.total, max_residual(&s.records), t.as_secs_f64(), worst_failure(&all)));
    }
    report(4, "coproduct cross-check on D_max=2, L_max=1", ok, detail.join("; "));
}

#[test]
fn criterion_5_affine_commutativity() {
    let mut cfg = config(2, 2, SuiteId::Affine);
    cfg.tolerance.affine = 1e-7;
    cfg.tolerance.affine_witness = 1e-4;
    let (s, t) = run(&cfg);
    let witness: Vec<&CheckRecord> = s.records.iter().filter(|r| r.expect_nonzero).collect();
    let all: Vec<_> = s.records.iter().collect();
    let ok = s.pass && !witness.is_empty() && witness.iter().all(|r| r.residual >= 1e-4) && t <= Duration::from_secs(300);
    report(
        5,
        "affine commutativity with out-of-range witness",
        ok,
        format!(
            "{} in-range records worst {:.1e}; witness {:.2e}; {:.1}s{}",
            s.summary.total - witness.len(),
            max_residual(&s.records),
            witness.iter().map(|r| r.residual).fold(f64::INFINITY, f64::min),
            t.as_secs_f64(),
            worst_failure(&all)
        ),
    );
}

#[test]
fn criterion_6_pointwise_cancellation() {
    let mut cfg = config(2, 2, SuiteId::Cancellation);
    cfg.tolerance.cancellation = 1e-7;
    cfg.tolerance.cancellation_control = 1e-3;
    let (s, t) = run(&cfg);
    let rels = relations_of(&s);
    let lemmas = ["cancel-UU", "cancel-VV", "cancel-UV", "cancel-EbEb", "cancel-FbFb", "cancel-EbFb"];
    let controls: Vec<&CheckRecord> = s.records.iter().filter(|r| r.expect_nonzero).collect();
    let all: Vec<_> = s.records.iter().collect();
    let ok = s.pass
        && lemmas.iter().all(|l| rels.contains(*l) && rels.contains(&format!("{l}-control")))
        && controls.iter().all(|r| r.residual > 1e-3)
        && t <= Duration::from_secs(120);
    report(
        6,
        "pointwise cancellation and generic-point control",
        ok,
        format!(
            "{} records worst {:.1e}; smallest control {:.2e}; {:.1}s{}",
            s.summary.total,
            max_residual(&s.records),
            controls.iter().map(|r| r.residual).fold(f64::INFINITY, f64::min),
            t.as_secs_f64(),
            worst_failure(&all)
        ),
    );
}

#[test]
fn criterion_7_highest_weight() {
    let mut cfg = config(2, 2, SuiteId::HighestWeight);
    cfg.tolerance.highest_weight = 1e-8;
    cfg.settings.hw_s_max = 3;
    let (s, t) = run(&cfg);
    let cases = |rel: &str| s.records.iter().filter(|r| r.relation == rel).count();
    let all: Vec<_> = s.records.iter().collect();
    let ok = s.pass && cases("hw-degree") == 7 && cases("hw-central") == 7 && cases("hw-check") == 14 && t <= Duration::from_secs(60);
    report(
        7,
        "highest-weight degrees, charges and eigenvalues for |s| <= 3",
        ok,
        format!("{} records worst {:.1e}; {:.1}s{}", s.summary.total, max_residual(&s.records), t.as_secs_f64(), worst_failure(&all)),
    );
}

fn duality() -> &'static (SuiteResult, Duration, [f64; 2]) {
    static RUN: OnceLock<(SuiteResult, Duration, [f64; 2])> = OnceLock::new();
    RUN.get_or_init(|| {
        let mut cfg = config(2, 2, SuiteId::IomDuality);
        cfg.params.seed = Some(SEED);
        cfg.settings.iom.d_max = 2;
        cfg.settings.iom.l_max = 1;
        cfg.settings.iom.ladder = vec![1, 2, 3, 4];
        cfg.settings.iom.order = 1;
        cfg.settings.iom.order_dual = 1;
        cfg.tolerance.iom_floor = 1e-6;
        let p = cfg.resolve_params(2, 2).unwrap();
        let (s, t) = run(&cfg);
        (s, t, [p.p().norm(), p.pc().norm()])
    })
}

#[test]
fn criterion_8_duality() {
    let (s, t, [p, pc]) = duality();
    let pick = |rel: &str| s.records.iter().filter(|r| r.relation == rel).collect::<Vec<_>>();
    let (main, mono, control) = (pick("duality"), pick("duality-monotone"), pick("duality-control"));
    let mut all = main.clone();
    all.extend(&mono);
    all.extend(&control);
    all.extend(pick("duality-vacuum-block"));
    let ok = *p <= 0.1
        && *pc <= 0.1
        && main.len() == 4
        && mono.len() == 4
        && control.len() == 4
        && all.iter().all(|r| r.pass)
        && main.iter().all(|r| r.case.ends_with("K=4"))
        && mono.iter().all(|r| r.residual <= 2.0)
        && control.iter().all(|r| r.residual >= 1e2)
        && *t <= Duration::from_secs(1800);
    let pairs: Vec<String> = main.iter().map(|r| format!("{} {:.1e}/{:.1e}", r.case, r.residual, r.tolerance)).collect();
    report(
        8,
        "duality of the two families on D_max=2, L_max=1",
        ok,
        format!(
            "|p|={p:.3} |p̌|={pc:.3}; residual/bound {} (literal |p|,|p̌| bound {:.1e}); max growth {:.2}; min control ratio {:.1e}; {:.1}s{}",
            pairs.join(", "),
            1e-6f64.max(10.0 * (p.powi(5) + pc.powi(5))),
            mono.iter().map(|r| r.residual).fold(0.0, f64::max),
            control.iter().map(|r| r.residual).fold(f64::INFINITY, f64::min),
            t.as_secs_f64(),
            worst_failure(&all)
        ),
    );
}

#[test]
fn criterion_9_self_commutativity() {
    let (s, _, _) = duality();
    let recs: Vec<&CheckRecord> = s.records.iter().filter(|r| r.relation == "self-commutativity").collect();
    let has = |pair: &str| recs.iter().any(|r| r.case.starts_with(pair));
    let ok = recs.len() == 6 && has("G,G ") && has("G,G* ") && recs.iter().all(|r| r.pass);
    let cases: Vec<String> = recs.iter().map(|r| format!("{} {:.1e}/{:.1e}", r.case, r.residual, r.tolerance)).collect();
    report(9, "self-commutativity within each family", ok, format!("{}{}", cases.join(", "), worst_failure(&recs)));
}
