use std::path::PathBuf;

use dpmirror::cli::run;

fn out_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("dpmirror-cli-{}-{name}", std::process::id()))
}

fn run_to_file(args: &[&str], name: &str) -> (i32, String) {
    let path = out_path(name);
    let mut full = vec!["dpmirror"];
    full.extend_from_slice(args);
    let p = path.to_string_lossy().into_owned();
    full.extend_from_slice(&["--out", &p]);
    let code = run(full);
    let body = std::fs::read_to_string(&path).unwrap_or_default();
    let _ = std::fs::remove_file(&path);
    (code, body)
}

#[test]
fn verify_reports_success() {
    let (code, body) = run_to_file(&["verify", "--d", "3"], "verify");
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["command"], "verify");
    assert_eq!(v["passed"], true);
    assert!(v["result"]["sign_diagonal"].is_array());
}

#[test]
fn fibers_table_row() {
    let (code, body) = run_to_file(&["fibers", "--d", "1", "--variant", "exact"], "fibers");
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["result"]["summary"], "0: II*, 432: I1, ∞: I1");
}

#[test]
fn mirror_and_junction_pass() {
    assert_eq!(run_to_file(&["mirror", "--d", "2", "--order", "10"], "mirror").0, 0);
    assert_eq!(run_to_file(&["junction", "--d", "1"], "junction").0, 0);
    assert_eq!(run_to_file(&["ghs", "--ell", "7"], "ghs").0, 0);
}

#[test]
fn outputs_are_byte_identical() {
    let a = run_to_file(&["cycles", "--d", "3"], "c1");
    let b = run_to_file(&["cycles", "--d", "3"], "c2");
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    let csv = run_to_file(&["critvals", "--d", "3", "--format", "csv"], "cv");
    assert!(csv.1.starts_with("index,re,im\n"));
    assert_eq!(csv.1.lines().count(), 10);
}

#[test]
fn mutate_applies_words() {
    let (code, body) = run_to_file(&["mutate", "--d", "3", "--word", "L1"], "mutate");
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["result"]["classes"][1], "a-b");
}

#[test]
fn exit_codes() {
    assert_eq!(run(["dpmirror", "verify", "--d", "7"]), 1);
    assert_eq!(run(["dpmirror", "fibers"]), 1);
    assert_eq!(run(["dpmirror", "critvals", "--d", "2", "--epsilon", "0.01"]), 1);
    assert_eq!(run(["dpmirror", "mutate", "--d", "3", "--word", "Q3"]), 1);
    assert_eq!(run(["dpmirror", "verify", "--d", "3", "--format", "svg"]), 1);
    assert_eq!(run_to_file(&["search", "--d", "3", "--budget", "0"], "search").0, 2);
}
