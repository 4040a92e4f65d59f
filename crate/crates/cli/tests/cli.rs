use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_voa-replicate"));
    c.env_remove("VOA_GOLDEN_PATH");
    c
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("voa-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn single_check_passes_with_json_document() {
    let o = bin().args(["verify", "--check", "j-ladder", "--cutoff", "8", "--format", "json"]).output().unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc = json(&o);
    assert_eq!(doc["version"], 1);
    assert_eq!(doc["config"]["cutoff"], 8);
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 1);
    let r = &reports[0];
    assert_eq!(r["check_id"], "j-ladder");
    assert_eq!(r["status"], "pass");
    for key in ["paper_ref", "expected", "computed", "runtime_ms"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn comma_separated_checks_come_back_sorted() {
    let o = bin().args(["verify", "--check", "p-roots,app1", "--format", "json"]).output().unwrap();
    assert_eq!(code(&o), 0);
    let ids: Vec<String> = json(&o)["reports"].as_array().unwrap().iter().map(|r| r["check_id"].as_str().unwrap().to_string()).collect();
    assert_eq!(ids, ["app1", "p-roots"]);
}

#[test]
fn table_output_lists_checks() {
    let o = bin().args(["verify", "--check", "theta-identity"]).output().unwrap();
    assert_eq!(code(&o), 0);
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.starts_with("check"));
    assert!(s.contains("theta-identity") && s.contains("pass"));
}

#[test]
fn failing_check_exits_one() {
    let o = bin().args(["verify", "--check", "lemma-jj", "--format", "json"]).output().unwrap();
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["reports"][0]["status"], "fail");
}

#[test]
fn inconclusive_fails_only_under_strict() {
    let args = ["verify", "--check", "app2", "--cutoff", "6", "--format", "json"];
    let o = bin().args(args).output().unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["reports"][0]["status"], "inconclusive");
    let o = bin().args(args).arg("--strict").output().unwrap();
    assert_eq!(code(&o), 1);
}

#[test]
fn usage_errors_exit_two() {
    let o = bin().args(["verify", "--check", "no-such-check"]).output().unwrap();
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no-such-check"));
    let o = bin().args(["verify", "--cutoff", "many"]).output().unwrap();
    assert_eq!(code(&o), 2);
    let o = bin().args(["char", "--order", "0"]).output().unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn unwritable_output_exits_three() {
    let dir = scratch("out");
    let bad = dir.join("missing").join("report.json");
    let o = bin().args(["verify", "--check", "p-roots", "--out"]).arg(&bad).output().unwrap();
    assert_eq!(code(&o), 3);
}

#[test]
fn out_file_receives_the_document() {
    let dir = scratch("file");
    let p = dir.join("r.json");
    let o = bin().args(["verify", "--check", "x0-gram", "--format", "json", "--out"]).arg(&p).output().unwrap();
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(doc["reports"][0]["check_id"], "x0-gram");
}

#[test]
fn pinning_respects_force() {
    let dir = scratch("pin");
    let g = dir.join("golden.json");
    let run = |extra: &[&str]| {
        bin().env("VOA_GOLDEN_PATH", &g).args(["verify", "--check", "j-ladder", "--format", "json"]).args(extra).output().unwrap()
    };
    let o = run(&["--pin"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let pinned: Value = serde_json::from_str(&std::fs::read_to_string(&g).unwrap()).unwrap();
    assert_eq!(pinned["values"]["lambda"], "-60");
    assert!(json(&o)["reports"][0]["computed"].as_str().unwrap().contains("-60"));

    assert_eq!(code(&run(&["--pin"])), 3);
    assert_eq!(code(&run(&["--pin", "--force"])), 0);
}

#[test]
fn wrong_pinned_value_fails_the_ladder() {
    let dir = scratch("bad");
    let g = dir.join("golden.json");
    std::fs::write(&g, r#"{"version": 1, "values": {"lambda": "7"}}"#).unwrap();
    let o = bin().env("VOA_GOLDEN_PATH", &g).args(["verify", "--check", "j-ladder", "--format", "json"]).output().unwrap();
    assert_eq!(code(&o), 1);
    std::fs::write(&g, "not json").unwrap();
    let o = bin().env("VOA_GOLDEN_PATH", &g).args(["verify", "--check", "j-ladder"]).output().unwrap();
    assert_eq!(code(&o), 3);
}

#[test]
fn sequential_and_parallel_reports_agree() {
    let args = ["verify", "--check", "form-props,fusion-eaa1", "--samples", "20", "--cutoff", "12", "--format", "json"];
    let strip = |mut v: Value| {
        for r in v["reports"].as_array_mut().unwrap() {
            r["runtime_ms"] = Value::Null;
        }
        v
    };
    let a = strip(json(&bin().args(args).output().unwrap()));
    let b = strip(json(&bin().args(args).arg("--sequential").output().unwrap()));
    assert_eq!(a, b);
}

#[test]
fn other_subcommands_run() {
    let o = bin().args(["probe", "--format", "json"]).output().unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["reports"].as_array().unwrap().len(), 2);

    let o = bin().args(["char", "--order", "8"]).output().unwrap();
    assert_eq!(code(&o), 0);
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.starts_with("M(1): 1 1 2 3 5 7 11 15\nM(1)+: 1 0 1 1 3 3 6 7"), "{s}");

    let o = bin().args(["fusion", "--cutoff", "12", "--format", "json"]).output().unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(json(&o)["reports"].as_array().unwrap().len(), 3);
}
