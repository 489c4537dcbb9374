use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn flowlab() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_flowlab"));
    c.env_remove("FLOWLAB_OUT");
    c
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.json"))
}

fn run(args: &[&str]) -> Output {
    flowlab().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// A copy of a bundled scenario with `edit` applied, written into `dir`.
fn edited(dir: &Path, name: &str, edit: impl FnOnce(&mut Value)) -> PathBuf {
    let mut v: Value = serde_json::from_str(&fs::read_to_string(scenario(name)).unwrap()).unwrap();
    edit(&mut v);
    let p = dir.join(format!("{name}.json"));
    fs::write(&p, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    p
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn audit<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["audits"].as_array().unwrap().iter().find(|a| a["name"] == name).unwrap()
}

#[test]
fn circle_scenario_passes_and_writes_artifacts() {
    let out = tempfile::tempdir().unwrap();
    let o = run(&["run", scenario("circle_selfsimilar").to_str().unwrap(), "--out", out.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let dir = out.path().join("circle_selfsimilar");
    for f in ["trace.json", "diagnostics.csv", "report.json", "curve_000000.csv"] {
        assert!(dir.join(f).is_file(), "missing {f}");
    }
    let r = report(&dir);
    assert_eq!(r["passed"], true);
    let radius = audit(&r, "radius_law");
    assert_eq!(radius["verdict"], "PASS");
    assert!(radius["value"].as_f64().unwrap() <= 1e-4);
}

#[test]
fn oval_classification_finds_a_doubled_line() {
    let out = tempfile::tempdir().unwrap();
    let o = run(&["run", scenario("oval_classification").to_str().unwrap(), "--out", out.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = report(&out.path().join("oval_classification"));
    let bd = audit(&r, "blow_down_class");
    assert_eq!(bd["verdict"], "PASS");
    assert!(bd["detail"].as_str().unwrap().starts_with("LineMult2"));
}

#[test]
fn missing_window_is_a_config_error_without_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let p = edited(tmp.path(), "circle_selfsimilar", |v| {
        v.as_object_mut().unwrap().remove("window");
    });
    let out = tmp.path().join("out");
    let o = run(&["run", p.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("window"));
    assert!(!out.exists());
}

#[test]
fn unknown_keys_and_audits_are_config_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let typo = edited(tmp.path(), "circle_selfsimilar", |v| {
        v["windw"] = v["window"].clone();
    });
    assert_eq!(run(&["run", typo.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]).status.code(), Some(2));
    let audit = edited(tmp.path(), "oval_support", |v| {
        v["audits"] = serde_json::json!([{ "name": "no_such_audit" }]);
    });
    assert_eq!(run(&["run", audit.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn failed_audit_exits_one_with_a_report() {
    let tmp = tempfile::tempdir().unwrap();
    let p = edited(tmp.path(), "circle_selfsimilar", |v| {
        v["audits"][0]["tolerance"] = serde_json::json!(1e-15);
    });
    let out = tmp.path().join("out");
    let o = run(&["run", p.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(&out.join("circle_selfsimilar"));
    assert_eq!(r["passed"], false);
    assert_eq!(audit(&r, "radius_law")["verdict"], "FAIL");
    assert_eq!(audit(&r, "area_law")["verdict"], "PASS");
}

#[test]
fn unwritable_output_is_an_io_error() {
    let tmp = tempfile::tempdir().unwrap();
    let file = tmp.path().join("not_a_dir");
    fs::write(&file, "x").unwrap();
    let o = run(&["run", scenario("circle_selfsimilar").to_str().unwrap(), "--out", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn output_root_defaults_to_the_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let o = flowlab()
        .env("FLOWLAB_OUT", tmp.path())
        .current_dir(tmp.path())
        .args(["run", scenario("circle_selfsimilar").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(tmp.path().join("circle_selfsimilar/report.json").is_file());
}

#[test]
fn runs_are_deterministic_and_jobs_do_not_change_results() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let names = ["circle_selfsimilar", "fourier_perturbed", "dodecagon_oracle"];
    let paths: Vec<String> = names.iter().map(|n| scenario(n).to_str().unwrap().to_string()).collect();
    let mut seq = vec!["run".to_string()];
    seq.extend(paths.iter().cloned());
    seq.extend(["--out".into(), a.path().to_str().unwrap().into()]);
    let mut par = vec!["run".to_string()];
    par.extend(paths.iter().cloned());
    par.extend(["--jobs".into(), "3".into(), "--out".into(), b.path().to_str().unwrap().into()]);
    assert_eq!(flowlab().args(&seq).status().unwrap().code(), Some(0));
    assert_eq!(flowlab().args(&par).status().unwrap().code(), Some(0));
    for n in names {
        let x = fs::read(a.path().join(n).join("diagnostics.csv")).unwrap();
        let y = fs::read(b.path().join(n).join("diagnostics.csv")).unwrap();
        assert_eq!(x, y, "{n} diagnostics differ");
    }
}

#[test]
fn audit_registry_lists_the_core_audits() {
    let o = run(&["audits"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in ["theta_monotonicity", "arrival_concavity", "grim_fit_r", "radius_law", "rectangle_claim"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
}

#[test]
fn sample_prints_polyline_csv() {
    let o = run(&["sample", "circle", "--t", "-0.5", "--n", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<(f64, f64)> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("index"))
        .map(|l| {
            let mut it = l.split(',').skip(1).map(|v| v.trim().parse::<f64>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 16);
    assert!(rows.iter().all(|(x, y)| ((x * x + y * y).sqrt() - 1.0).abs() < 1e-12));
    assert!(text.lines().next().unwrap().contains("t=-0.5"));

    let grim = run(&["sample", "grim", "--t", "-1", "--n", "32"]);
    assert_eq!(grim.status.code(), Some(0));
    assert_eq!(run(&["sample", "teardrop", "--t", "-1", "--n", "16"]).status.code(), Some(2));
    assert_eq!(run(&["sample", "circle", "--t", "1", "--n", "16"]).status.code(), Some(2));
}
