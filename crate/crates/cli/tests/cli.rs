use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn dforms(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dforms"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("DFORMS_OUT")
        .env_remove("DFORMS_THREADS")
        .output()
        .expect("binary runs")
}

fn golden(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(p).unwrap()
}

fn c3_config(dir: &Path, patch: impl FnOnce(&mut Value)) -> PathBuf {
    let mut v = json!({
        "id": "C3", "character": "3:1", "a": 18,
        "r": "2", "omega": "5", "Omega": "5", "kappa": "9/2", "h": 9,
        "n_list": [6, 12], "precision_digits": 60
    });
    patch(&mut v);
    let p = dir.join("config.json");
    std::fs::write(&p, v.to_string()).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn chars_listings() {
    let tmp = tempfile::tempdir().unwrap();
    let o = dforms(&["chars", "3"], tmp.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("chars_3.txt"));
    assert_eq!(stdout(&o).lines().count(), 3);
    let o = dforms(&["chars", "4"], tmp.path());
    assert_eq!(stdout(&o), golden("chars_4.txt"));
    let o = dforms(&["chars", "1"], tmp.path());
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn bad_rational_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = c3_config(tmp.path(), |v| v["kappa"] = json!("9/two"));
    let o = dforms(&["--config", cfg.to_str().unwrap(), "construct"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("kappa"));
    let cfg = c3_config(tmp.path(), |v| v["r"] = json!(2.0));
    let o = dforms(&["--config", cfg.to_str().unwrap(), "construct"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(dforms(&["chars", "3", "--bogus"], tmp.path()).status.code(), Some(2));
}

#[test]
fn forms_without_construct_reports_missing_input() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = c3_config(tmp.path(), |_| {});
    let o = dforms(&["--config", cfg.to_str().unwrap(), "forms"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing input"));
}

#[test]
fn construct_forms_audit_pipeline() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = c3_config(tmp.path(), |_| {});
    let cfg = cfg.to_str().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(dforms(&["--config", cfg, "construct"], &a).status.code(), Some(0));
    assert_eq!(dforms(&["--config", cfg, "construct"], &b).status.code(), Some(0));
    for n in [6, 12] {
        let name = format!("fn_n{n}.json");
        let fa = std::fs::read(a.join(&name)).unwrap();
        assert_eq!(fa, std::fs::read(b.join(&name)).unwrap(), "{name} differs between runs");
    }
    assert_eq!(std::fs::read_to_string(a.join("fn_n6.json")).unwrap(), golden("c3_fn_n6.json"));

    let o = dforms(&["--config", cfg, "forms"], &a);
    assert_eq!(o.status.code(), Some(0));
    let table: Value = serde_json::from_slice(&std::fs::read(a.join("forms_n6.json")).unwrap()).unwrap();
    assert!(table.is_object());
    assert!(a.join("forms_n12.csv").exists());
    let values: Value = serde_json::from_slice(&std::fs::read(a.join("lambda_values_n6.json")).unwrap()).unwrap();
    assert_eq!(values["schema_version"], 1);
    assert_eq!(values["values"].as_array().unwrap().len(), 20);

    let o = dforms(&["--config", cfg, "--checks", "A5,A11,A12,A16", "audit"], &a);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_slice(&std::fs::read(a.join("audit.json")).unwrap()).unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["summary"]["fail"], 0);
    assert!(stdout(&o).contains("A12"));

    // a corrupted coefficient breaks the Taylor vanishing
    let path = a.join("fn_n6.json");
    let mut f: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let old: i64 = f["c"][0][0].as_str().unwrap().parse().unwrap();
    f["c"][0][0] = json!((old + 1).to_string());
    std::fs::write(&path, f.to_string()).unwrap();
    let o = dforms(&["--config", cfg, "--checks", "A5", "audit"], &a);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn full_audit_on_c3_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = c3_config(tmp.path(), |_| {});
    let cfg = cfg.to_str().unwrap();
    assert_eq!(dforms(&["--config", cfg, "construct"], tmp.path()).status.code(), Some(0));
    let o = dforms(&["--config", cfg, "audit"], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn bounds_schedule_reports_final_chain() {
    let tmp = tempfile::tempdir().unwrap();
    let o = dforms(&["bounds", "--a", "10000000000", "--modulus", "3"], tmp.path());
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&std::fs::read(tmp.path().join("bounds.json")).unwrap()).unwrap();
    let checks = doc["asymptotic_checks"].as_array().unwrap();
    let chain = checks.iter().find(|c| c["name"] == "final_chain").unwrap();
    let want = 0.40 / 3f64.powf(1.5);
    assert!((chain["threshold"].as_f64().unwrap() - want).abs() < 1e-12);
    assert!(doc["rate_report"]["alpha"]["value"].as_str().unwrap().contains('e'));
}

#[test]
fn optimize_outputs_and_infeasibility() {
    let tmp = tempfile::tempdir().unwrap();
    let o = dforms(&["optimize", "--a", "10000000000", "--modulus", "3"], tmp.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(tmp.path().join("pareto.csv")).unwrap();
    assert!(csv.starts_with("r,kappa,omega,Omega,h,"));
    assert!(csv.lines().count() > 1);
    let o = dforms(&["optimize", "--a", "20", "--modulus", "3"], tmp.path());
    assert_eq!(o.status.code(), Some(3));
}
