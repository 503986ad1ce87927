use std::process::{Command, Output};

fn moncurve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moncurve"))
        .args(args)
        .env_remove("MONCURVE_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn analyze_json_degree_21() {
    let out = moncurve(&["analyze", "--curve", "21:0,10,18,19,21", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["k"], 2);
    assert_eq!(v["reg"], 4);
    assert_eq!(v["new_generators"], serde_json::json!([[12, 30]]));
    assert_eq!(v["is_CM"], false);
}

#[test]
fn analyze_json_is_byte_stable() {
    let args = ["analyze", "--curve", "13:0,5,8,9,11,13", "--format", "json"];
    assert_eq!(moncurve(&args).stdout, moncurve(&args).stdout);
}

#[test]
fn analyze_line_is_cm() {
    let out = moncurve(&["analyze", "--curve", "1:0,1", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["k"], 0);
    assert_eq!(v["is_CM"], true);
    assert_eq!(v["a_invariant"], serde_json::Value::Null);
}

#[test]
fn analyze_rejects_bad_curves() {
    let out = moncurve(&["analyze", "--curve", "21:0,14,21"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("gcd 7"));

    let out = moncurve(&["analyze", "--curve", "21:0,1x,21"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("`1x`"));
}

#[test]
fn analyze_table_and_csv() {
    let out = moncurve(&["analyze", "--curve", "15:0,5,8,9,11,13,15"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("is_CM") && text.contains("true"));

    let out = moncurve(&[
        "analyze",
        "--curve",
        "15:0,5,8,9,11,13,15",
        "--format",
        "csv",
    ]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("curve,d,G,k,l,a_invariant"));
    assert!(
        lines.next().unwrap().starts_with("15:0,5,8,9,11,13,15,15,")
            || text.contains("\"15:0,5,8,9,11,13,15\"")
    );
}

#[test]
fn analyze_writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = moncurve(&[
        "analyze",
        "--curve",
        "13:0,5,8,9,11,13",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["reg"], 3);
}

#[test]
fn family_single_rows() {
    let out = moncurve(&["family", "--r", "5", "--n", "2", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["match"], "match");
    assert_eq!(v["report"]["k"], 1);
    assert_eq!(v["report"]["reg"], 3);

    let out = moncurve(&["family", "--r", "10", "--n", "1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("12,30"));
    assert!(text.contains("match                match"));

    let out = moncurve(&["family", "--r", "4", "--n", "1"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn family_range_delegates_to_sweep() {
    let out = moncurve(&["family", "--r", "5:6", "--n", "1:2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("r,n,d,G,"));
    assert!(text.contains("rows=4 matches=4 mismatches=0"));
}

#[test]
fn sweep_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = moncurve(&[
        "sweep",
        "--r",
        "5:9",
        "--n",
        "1:5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("rows=25 matches=25 mismatches=0 errors=0"));
    let mut reader = csv::Reader::from_path(&path).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header.join(","),
        "r,n,d,G,k,l,a_invariant,r_Q_R,r_Q_Rtilde,reg,is_CM,new_gens,prediction,prediction_source,match,question_residual"
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 25);
    assert!(rows.iter().all(|r| &r[14] == "match"));
}

#[test]
fn sweep_single_row_residual() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.csv");
    let out = moncurve(&[
        "sweep",
        "--r",
        "10:10",
        "--n",
        "1:1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("rows=1 matches=1"));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().nth(1).unwrap().ends_with(",match,0"));
}

#[test]
fn sweep_rejects_zero_n_and_bad_paths() {
    assert_eq!(code(&moncurve(&["sweep", "--r", "5:5", "--n", "0:0"])), 1);
    assert_eq!(code(&moncurve(&["sweep", "--r", "5:x", "--n", "1:1"])), 1);
    let out = moncurve(&[
        "sweep",
        "--r",
        "5:5",
        "--n",
        "1:1",
        "--out",
        "/nonexistent/dir/x.csv",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn jobs_env_overrides_flag() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let one = Command::new(env!("CARGO_BIN_EXE_moncurve"))
        .args([
            "--jobs",
            "1",
            "sweep",
            "--r",
            "5:7",
            "--n",
            "1:3",
            "--out",
            a.to_str().unwrap(),
        ])
        .env("MONCURVE_JOBS", "4")
        .output()
        .unwrap();
    assert_eq!(code(&one), 0);
    let two = moncurve(&[
        "--jobs",
        "2",
        "sweep",
        "--r",
        "5:7",
        "--n",
        "1:3",
        "--out",
        b.to_str().unwrap(),
    ]);
    assert_eq!(code(&two), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let bad = Command::new(env!("CARGO_BIN_EXE_moncurve"))
        .args(["sweep", "--r", "5:5", "--n", "1:1"])
        .env("MONCURVE_JOBS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 1);
}

#[test]
fn ideal_saturate_and_primary() {
    let out = moncurve(&[
        "ideal",
        "saturate",
        "--ideal",
        "13:0,5,8,9,11,13|13,0",
        "--by",
        "0,13",
        "--bound",
        "8",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out).lines().next(), Some("13,0;24,15"));

    let out = moncurve(&[
        "ideal",
        "primary",
        "--ideal",
        "13:0,5,8,9,11,13|13,0",
        "--bound",
        "6",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["status"], "fails");
    assert_eq!(v["bound"], 6);
    assert_eq!(
        v["counterexample"]["pair"]["f"],
        serde_json::json!([24, 15])
    );
    assert_eq!(v["counterexample"]["pair"]["g"], serde_json::json!([0, 13]));
}

#[test]
fn ideal_binary_ops() {
    let a = "13:0,5,8,9,11,13|13,0;24,15";
    let out = moncurve(&["ideal", "equal", "--ideal", a, "--ideal", a, "--bound", "6"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("holds up to degree 6"));

    let out = moncurve(&[
        "ideal",
        "intersect",
        "--ideal",
        "13:0,5,8,9,11,13|26,0;37,15",
        "--ideal",
        "13:0,5,8,9,11,13|26,0;0,104",
        "--bound",
        "8",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().next(), Some("26,0"));

    let out = moncurve(&["ideal", "equal", "--ideal", a]);
    assert_eq!(code(&out), 1);
}

#[test]
fn ideal_member_and_errors() {
    let i = "13:0,5,8,9,11,13|13,0";
    let out = moncurve(&["ideal", "member", "--ideal", i, "--monomial", "24,28"]);
    assert_eq!(stdout(&out).trim(), "true");
    let out = moncurve(&["ideal", "member", "--ideal", i, "--monomial", "24,15"]);
    assert_eq!(stdout(&out).trim(), "false");
    let out = moncurve(&["ideal", "member", "--ideal", i, "--monomial", "1,1"]);
    assert_eq!(code(&out), 1);
    let out = moncurve(&[
        "ideal", "colon", "--ideal", i, "--by", "0,13", "--bound", "0",
    ]);
    assert_eq!(code(&out), 1);
    let out = moncurve(&[
        "ideal",
        "colon",
        "--ideal",
        "13:0,5,8,9,11,13|12,1",
        "--by",
        "0,13",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&moncurve(&["--bogus"])), 1);
    assert_eq!(code(&moncurve(&["analyze"])), 1);
    assert_eq!(code(&moncurve(&["--help"])), 0);
}
