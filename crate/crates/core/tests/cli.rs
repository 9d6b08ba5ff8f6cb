use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toroidal-verify")).args(args).output().expect("binary runs")
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn empty_suite_list_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("empty.toml");
    std::fs::write(&cfg, "m = 2\nn = 2\nsuites = []\n").unwrap();
    let out = verify(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("`suites`"), "{err}");
}

#[test]
fn unknown_key_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "m = 2\nn = 2\nsuites = [\"bosons\"]\n[settings]\nboson_rmax = 3\n").unwrap();
    let out = verify(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("boson_rmax"));
}

#[test]
fn contractions_suite_passes_and_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for path in [&a, &b] {
        let out = verify(&["--suite", "contractions", "--seed", "2", "--report", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
        assert!(String::from_utf8_lossy(&out.stdout).contains("PASS contractions"));
    }
    let (mut ra, mut rb) = (report(&a), report(&b));
    assert_eq!(ra["schema"], "toroidal-verify.report/1");
    assert_eq!(ra["pass"], true);
    assert!(ra["suites"][0]["summary"]["total"].as_u64().unwrap() > 0);
    ra.as_object_mut().unwrap().remove("run");
    rb.as_object_mut().unwrap().remove("run");
    assert_eq!(serde_json::to_string(&ra).unwrap(), serde_json::to_string(&rb).unwrap());
}

#[test]
fn cached_duality_run_reproduces_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let (cold, warm) = (dir.path().join("cold.json"), dir.path().join("warm.json"));
    for path in [&cold, &warm] {
        let out = verify(&[
            "verify-duality",
            "--seed",
            "1",
            "--ladder",
            "1,2",
            "--cache",
            cache.to_str().unwrap(),
            "--report",
            path.to_str().unwrap(),
        ]);
        // a two-rung ladder may miss the monotone slack, so only the run itself is required
        assert!(out.status.code().is_some_and(|c| c < 2), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let (c, w) = (report(&cold), report(&warm));
    assert_eq!(c["run"]["cache_hits"], 0);
    assert!(w["run"]["cache_hits"].as_u64().unwrap() > 0);
    assert_eq!(c["suites"], w["suites"]);
}

#[test]
fn build_iom_prints_a_summary() {
    let out = verify(&["build-iom", "--kind", "g", "--mu", "1", "--k", "1", "--seed", "4"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["kind"], "G");
    assert!(v["exact_columns"].as_u64().unwrap() > 0);
    assert_eq!(v["cache_hit"], false);
}
