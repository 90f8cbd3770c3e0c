use std::fs;
use std::process::{Command, Output};

fn powergroup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_powergroup"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn enum_c2_writes_three_subquotient_records() {
    let o = powergroup(&["enum", "--group", "C2"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 3);
    for l in &lines {
        let v: serde_json::Value = serde_json::from_str(l).unwrap();
        assert_eq!(v["is_subquotient"], true);
        assert_eq!(v["thm1_b"], true);
    }
    assert!(stderr(&o).contains("3 power groups, 3 subquotients"));
}

#[test]
fn enum_s3_to_file_is_deterministic_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let o = powergroup(&["enum", "--group", "S3", "--out", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = powergroup(&[
        "--jobs",
        "1",
        "enum",
        "--group",
        "S3",
        "--out",
        b.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    assert_eq!(String::from_utf8(ta).unwrap().lines().count(), 12);
    // no temporary file left behind
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn enum_rejects_non_associative_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("loop.json");
    fs::write(
        &path,
        r#"{"order":5,"table":[[0,1,2,3,4],[1,0,3,4,2],[2,4,0,1,3],[3,2,4,0,1],[4,3,1,2,0]]}"#,
    )
    .unwrap();
    let o = powergroup(&["enum", "--table", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not associative"), "{}", stderr(&o));
}

#[test]
fn enum_respects_max_order() {
    let o = powergroup(&["enum", "--group", "S4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--max-order"));
}

#[test]
fn enum_reads_table_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c3.json");
    fs::write(&path, r#"{"order":3,"table":[[0,1,2],[1,2,0],[2,0,1]]}"#).unwrap();
    let o = powergroup(&["enum", "--table", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn verify_suites_pass() {
    for suite in [
        "thm2-finite",
        "oracle-equivalence",
        "qcuts-thm4",
        "thm1-equivalence",
    ] {
        let o = powergroup(&["verify", suite, "--max-order", "8", "--trials", "100"]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stderr(&o));
        let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
        assert_eq!(v["passed"], true);
        assert_eq!(v["suite"], suite);
    }
    let o = powergroup(&["verify", "qcuts-thm4", "--trials", "10"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(!v["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn verify_unknown_suite_is_usage_error() {
    let o = powergroup(&["verify", "no-such-suite"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn underlies_pairs_and_matrix() {
    let o = powergroup(&["underlies", "--g1", "S3", "--g2", "C2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("yes\n"));
    let o = powergroup(&["underlies", "--g1", "C3", "--g2", "C2"]);
    assert_eq!(stdout(&o), "no\n");

    let o = powergroup(&["underlies", "--matrix", "default"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!(csv.starts_with("g1\\g2,trivial,C2,"));
    assert_eq!(csv.lines().count(), 12);
    assert!(stderr(&o).contains("transitive: true"));
}

#[test]
fn zset_operations() {
    let o = powergroup(&["zset", "sum", "{0,1}", "{0,1}"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["sum"], "BB(0; 111; 1; 0)");

    let o = powergroup(&["zset", "idempotent", "N"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["idempotent"], true);

    let o = powergroup(&["zset", "sum", "N", "-N"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not representable"), "{}", stderr(&o));

    let o = powergroup(&["zset", "sum", "-N", "{-3,0}"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let o = powergroup(&["zset", "thm3-test", "N", "BB(3; ; 1; 1)"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["is_unit"], true);
    assert_eq!(v["is_translate"], true);

    let o = powergroup(&["zset", "coset-group", "TS(6; 0,2,4)", "--d", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["family_order"], 2);

    let o = powergroup(&["zset", "coset-group", "{0,1}"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn qcuts_operations() {
    let o = powergroup(&["qcuts", "verify"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["zero_in_identity"], false);
    assert_eq!(v["is_coset_group"], false);

    let o = powergroup(&["qcuts", "witness", "3/2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["witness"], "17/12");
    let o = powergroup(&["qcuts", "witness", "7/5"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["witness"], "41/29");
    assert_eq!(
        powergroup(&["qcuts", "witness", "sqrt2"]).status.code(),
        Some(2)
    );
    let o = powergroup(&["qcuts", "witness", "-1/3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        powergroup(&["qcuts", "verify", "1", "-1/3*sqrt2"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn catalog_list_and_show() {
    let o = powergroup(&["catalog", "list"]);
    assert!(stdout(&o).lines().any(|l| l == "Q8\t8"));
    let o = powergroup(&["catalog", "show", "C3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        v["table"],
        serde_json::json!([[0, 1, 2], [1, 2, 0], [2, 0, 1]])
    );
    assert_eq!(
        powergroup(&["catalog", "show", "X9"]).status.code(),
        Some(2)
    );
}

#[test]
fn subquotients_of_klein() {
    let o = powergroup(&["subquotients", "--group", "V4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 12);
}
