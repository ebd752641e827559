use std::path::Path;
use std::process::Command;

use serde_json::Value;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Out {
    let o = Command::new(env!("CARGO_BIN_EXE_uwstbc"))
        .args(args)
        .output()
        .expect("the tool runs");
    Out {
        code: o.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&o.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&o.stderr).into_owned(),
    }
}

fn p(path: &Path) -> &str {
    path.to_str().expect("utf-8 path")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).expect("file written")).expect("valid JSON")
}

fn error_of(o: &Out) -> Value {
    let v: Value = serde_json::from_str(o.stderr.trim()).expect("JSON error on stderr");
    v["error"].clone()
}

#[test]
fn searched_codes_verify() {
    let dir = tempfile::tempdir().unwrap();
    let codes = dir.path().join("codes.json");
    let report = dir.path().join("verify.json");
    let o = run(&["search", "--a", "2", "--groups", "3", "--sizes", "2,2,4", "--limit", "3", "--out", p(&codes)]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let list = read_json(&codes);
    assert_eq!(list.as_array().unwrap().len(), 3);
    let o = run(&["verify", "--code", p(&codes), "--report", p(&report)]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let reports = read_json(&report);
    for r in reports.as_array().unwrap() {
        assert_eq!(r["passed"], true);
        assert_eq!(r["rate"], "1");
    }
}

#[test]
fn worker_count_does_not_change_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let mut bytes = Vec::new();
    let mut manifests = Vec::new();
    for w in ["1", "4"] {
        let codes = dir.path().join(format!("codes_{w}.json"));
        let report = dir.path().join(format!("report_{w}.json"));
        let o = run(&[
            "search", "--a", "2", "--groups", "2", "--symmetric", "--max-rate",
            "--workers", w, "--out", p(&codes), "--report", p(&report),
        ]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        bytes.push((std::fs::read(&codes).unwrap(), std::fs::read(&report).unwrap()));
        manifests.push(read_json(&dir.path().join(format!("codes_{w}.json.manifest.json"))));
    }
    assert_eq!(bytes[0], bytes[1]);
    assert_eq!(manifests[0]["config_hash"], manifests[1]["config_hash"]);
    assert_eq!(manifests[0]["result_digests"], manifests[1]["result_digests"]);
    assert_ne!(manifests[0]["config"]["workers"], manifests[1]["config"]["workers"]);
}

#[test]
fn manifest_records_config_and_digests() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("basis.json");
    let manifest = dir.path().join("run").join("m.json");
    let o = run(&["--manifest", p(&manifest), "generate-basis", "--a", "1", "--out", p(&out)]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let m = read_json(&manifest);
    assert_eq!(m["config"]["command"], "generate-basis");
    assert_eq!(m["config"]["params"]["a"], 1);
    assert_eq!(m["outcome"], "ok");
    assert_eq!(m["config_hash"].as_str().unwrap().len(), 64);
    let digest = m["result_digests"].as_object().unwrap().values().next().unwrap().clone();
    use sha2::Digest;
    let want = hex::encode(sha2::Sha256::digest(std::fs::read(&out).unwrap()));
    assert_eq!(digest, want);
}

#[test]
fn output_path_does_not_change_config_hash() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_eq!(run(&["generate-basis", "--a", "2", "--out", p(&a)]).code, 0);
    assert_eq!(run(&["generate-basis", "--a", "2", "--out", p(&b)]).code, 0);
    let ma = read_json(&dir.path().join("a.json.manifest.json"));
    let mb = read_json(&dir.path().join("b.json.manifest.json"));
    assert_eq!(ma["config_hash"], mb["config_hash"]);
    let o = run(&["generate-basis", "--a", "2", "--sign-gamma1", "-1", "--out", p(&b)]);
    assert_eq!(o.code, 0);
    let mc = read_json(&dir.path().join("b.json.manifest.json"));
    assert_ne!(ma["config_hash"], mc["config_hash"]);
}

#[test]
fn basis_table_format() {
    let o = run(&["generate-basis", "--a", "2", "--format", "table"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("α_1 = jI"));
    assert_eq!(o.stdout.matches("α_").count(), 16);
}

#[test]
fn sign_flip_negates_first_generator_only() {
    let plus: Value = serde_json::from_str(&run(&["generate-basis", "--a", "1"]).stdout).unwrap();
    let minus: Value = serde_json::from_str(&run(&["generate-basis", "--a", "1", "--sign-gamma1", "-1"]).stdout).unwrap();
    assert_eq!(plus[0]["matrix"], minus[0]["matrix"]);
    assert_ne!(plus[1]["matrix"], minus[1]["matrix"]);
    assert_eq!(plus[2]["matrix"], minus[2]["matrix"]);
}

#[test]
fn lambda_count() {
    let o = run(&["enumerate-lambdas", "--a", "2", "--emit", "count"]);
    assert_eq!(o.code, 0);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["count"], 160);
    let o = run(&["enumerate-lambdas", "--a", "1", "--emit", "count"]);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["count"], 8);
}

#[test]
fn custom_first_weight_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let a1 = dir.path().join("a1.json");
    // a unitary diagonal first weight matrix
    std::fs::write(
        &a1,
        r#"[["j","0","0","0"],["0","1","0","0"],["0","0","-1","0"],["0","0","0","-j"]]"#,
    )
    .unwrap();
    let codes = dir.path().join("codes.json");
    let o = run(&["search", "--a", "2", "--groups", "2", "--sizes", "2,2", "--limit", "2", "--a1", p(&a1), "--out", p(&codes)]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let list = read_json(&codes);
    assert_eq!(list[0]["groups"][0][0][0][0], "j");
    assert_eq!(run(&["verify", "--code", p(&codes)]).code, 0);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["search", "--bogus"][..],
        &["repro"],
        &["search", "--a", "2", "--groups", "3", "--sizes", "2,2"],
        &["search", "--a", "2", "--groups", "2", "--sizes", "2,2", "--max-rate"],
    ] {
        let o = run(args);
        assert_eq!(o.code, 2, "{args:?}");
        assert_eq!(error_of(&o)["kind"], "usage", "{args:?}");
    }
}

#[test]
fn malformed_input_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let o = run(&["verify", "--code", p(&bad)]);
    assert_eq!(o.code, 3);
    assert_eq!(error_of(&o)["kind"], "input");
    let o = run(&["verify", "--code", p(&dir.path().join("missing.json"))]);
    assert_eq!(o.code, 3);
}

#[test]
fn out_of_domain_exits_4() {
    let o = run(&["enumerate-lambdas", "--a", "3"]);
    assert_eq!(o.code, 4);
    assert_eq!(error_of(&o)["kind"], "domain");
    let o = run(&["search", "--a", "5", "--groups", "2", "--sizes", "1,1"]);
    assert_eq!(o.code, 4);
}

#[test]
fn budget_exceeded_exits_5() {
    let o = run(&["search", "--a", "2", "--groups", "2", "--sizes", "2,2", "--max-results", "5"]);
    assert_eq!(o.code, 5);
    assert_eq!(error_of(&o)["kind"], "budget");
    let o = run(&["verify", "--code", "builtin:table2", "--constellation", "square:4", "--coding-gain", "--budget", "10"]);
    assert_eq!(o.code, 5);
}

#[test]
fn broken_code_exits_6_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let mut code: Value = serde_json::from_str(uwstbc::fixtures::TABLE2_JSON).unwrap();
    // reuse a weight matrix of the second group in the first
    code["groups"][0][1] = code["groups"][1][0].clone();
    let path = dir.path().join("broken.json");
    let report = dir.path().join("report.json");
    std::fs::write(&path, serde_json::to_string(&code).unwrap()).unwrap();
    let o = run(&["verify", "--code", p(&path), "--report", p(&report)]);
    assert_eq!(o.code, 6, "{}", o.stderr);
    assert_eq!(error_of(&o)["kind"], "verification");
    assert_eq!(read_json(&report)[0]["passed"], false);
}

#[test]
fn complexity_rows() {
    let o = run(&["complexity", "--sizes", "2,2,4", "--M", "16", "--kind", "nonrect"]);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["symbolic"], "2M + M^2");
    assert_eq!(v["value"], 288);
    let o = run(&["complexity", "--sizes", "5,5", "--M", "16"]);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["symbolic"], "2M^2");
}

#[test]
fn repro_with_edited_expectations_reports_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let expected = dir.path().join("expected.json");
    std::fs::write(&expected, r#"{"table1":"00"}"#).unwrap();
    let out = dir.path().join("report.json");
    let o = run(&["repro", "--paper-tables", "--expected", p(&expected), "--out", p(&out)]);
    assert_eq!(o.code, 7, "{}", o.stderr);
    assert_eq!(error_of(&o)["kind"], "mismatch");
    let report = read_json(&out);
    let table1 = report["digests"]
        .as_array()
        .unwrap()
        .iter()
        .find(|d| d["artifact"] == "table1")
        .unwrap()
        .clone();
    assert_eq!(table1["matches"], false);
}
