use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ecseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecseq"))
        .args(args)
        .env_remove("ECSEQ_BUDGET_MS")
        .output()
        .expect("run ecseq")
}

fn generate(dir: &Path, name: &str, n: &str, t: &str, d: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    let out = ecseq(&["generate", "--n", n, "--t", t, "--d", d, "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn generate_and_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let file = generate(dir.path(), "fam.ecseq", "4", "-1", "3");
    let text = fs::read_to_string(&file).unwrap();
    assert!(text.starts_with("ECSEQ v1 n=4 t=-1 d=3 N=16 M=255\n"));

    let report = dir.path().join("report.json");
    let out = ecseq(&["analyze", file.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["correlation"]["within_bound"], true);
    assert_eq!(json["correlation"]["mode"], "exhaustive");
    assert_eq!(json["linear_complexity"]["satisfied"], true);
}

#[test]
fn generate_to_stdout_is_deterministic() {
    let a = ecseq(&["generate", "--n", "5", "--t", "8", "--d", "2"]);
    let b = ecseq(&["generate", "--n", "5", "--t", "8", "--d", "2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stderr).contains("\"digest\""));
}

#[test]
fn sampled_analysis_with_seed() {
    let dir = tempfile::tempdir().unwrap();
    let file = generate(dir.path(), "fam.ecseq", "6", "8", "2");
    let path = file.to_str().unwrap();
    let a = ecseq(&["analyze", path, "--sampled", "5000", "--seed", "11"]);
    let b = ecseq(&["analyze", path, "--sampled", "5000", "--seed", "11"]);
    assert!(a.status.success());
    let strip = |o: &Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v.as_object_mut().unwrap().remove("timings_ms");
        v
    };
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(strip(&a)["correlation"]["lower_estimate"], true);
}

#[test]
fn even_length_with_d_two_is_rejected() {
    let out = ecseq(&["generate", "--n", "6", "--t", "-1", "--d", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn inadmissible_trace_is_rejected() {
    let out = ecseq(&["generate", "--n", "6", "--t", "6", "--d", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn all_zero_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("zero.ecseq");
    fs::write(&file, "ECSEQ v1 n=3 t=4 d=2 N=13 M=2\n{}\n0000\n0000\n").unwrap();
    let out = ecseq(&["analyze", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("zero"));
}

#[test]
fn malformed_files_exit_with_format_code() {
    let dir = tempfile::tempdir().unwrap();
    for (k, body) in [
        "not a family\n",
        "ECSEQ v1 n=3 t=4 d=2 N=13 M=2\n{}\n0000\n",
        "ECSEQ v1 n=3 t=4 d=2 N=13 M=1\n{}\nffff\n",
    ]
    .iter()
    .enumerate()
    {
        let file = dir.path().join(format!("bad{k}.ecseq"));
        fs::write(&file, body).unwrap();
        let out = ecseq(&["analyze", file.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(4), "{body:?}");
    }
    let missing = dir.path().join("missing.ecseq");
    assert_eq!(ecseq(&["analyze", missing.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn reproduce_small_table() {
    let out = ecseq(&["reproduce-table", "--table", "3", "--from", "4", "--to", "6"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("73"));
}

#[test]
fn count_places_and_admissible() {
    let out = ecseq(&["count-places", "--n", "4", "--t", "-1", "--d", "3", "--verify"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("b_d_enumerated"));
    let out = ecseq(&["admissible", "--n", "3"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"t\": 4"));
}
