use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quiver-dt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_on(quiver: &str, args: &[&str]) -> Output {
    let path = data(quiver);
    let mut all = args.to_vec();
    all.extend(["--quiver", path.to_str().unwrap()]);
    run(&all)
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("valid JSON")
}

#[test]
fn hn_on_k1() {
    let out = run_on("k1.json", &["hn", "--dim", "1,1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("p = 1/(q - 1)"));

    let out = run_on("k1.json", &["hn", "--dim", "1,1", "--format", "json"]);
    let row = &json_of(&out)["rows"][0];
    assert_eq!(row["d"], json!({"i": 1, "j": 1}));
    assert_eq!(row["p"], json!({"numerator": [1], "denominator": [-1, 1], "laurent_shift": 0}));
}

#[test]
fn hn_on_one_vertex() {
    let out = run_on("q0.json", &["hn", "--dim", "3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    // 1/|GL_3(F_q)| = q^-3 / ((q - 1)(q^2 - 1)(q^3 - 1))
    let e = &json_of(&out)["rows"][0]["e"];
    assert_eq!(e["laurent_shift"], json!(-3));
    assert_eq!(e["numerator"], json!([1]));
    assert_eq!(e["denominator"], json!([-1, 1, 1, 0, -1, -1, 1]));
}

#[test]
fn configuration_errors() {
    let out = run_on("no_theta.json", &["hn"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("theta"));

    assert_eq!(code(&run_on("cyclic.json", &["hn"])), 2);
    assert_eq!(code(&run_on("k1.json", &["hn", "--dim", "1"])), 2);
    assert_eq!(code(&run_on("k1.json", &["verify", "--suites", "bogus"])), 2);
    assert_eq!(code(&run_on("k2.json", &["verify", "--suites", "dynkin"])), 2);
    assert_eq!(code(&run_on("k1.json", &["verify", "--suites", "oracle", "--q", "5"])), 2);
    assert_eq!(code(&run(&["hn"])), 2);
}

#[test]
fn wallcross_k2_diagonal() {
    let out = run_on("k2.json", &["wallcross", "--order", "6", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    let block = v["slopes"]
        .as_array()
        .unwrap()
        .iter()
        .find(|b| b["slope"] == json!({"numerator": 1, "denominator": 2}))
        .expect("slope 1/2");
    for k in 1..=3u32 {
        let row = block["rows"]
            .as_array()
            .unwrap()
            .iter()
            .find(|r| r["framing"] == json!({"i": 1, "j": 0}) && r["d"] == json!({"i": k, "j": k}))
            .expect("row present");
        assert_eq!(row["euler"], json!(k + 1));
    }
}

#[test]
fn wallcross_one_vertex_is_a_qbinomial_table() {
    let out = run_on("q0.json", &["wallcross", "--order", "4", "--format", "json"]);
    let rows = json_of(&out)["slopes"][0]["rows"].clone();
    let row = rows
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["framing"] == json!({"v": 4}) && r["d"] == json!({"v": 2}))
        .unwrap()
        .clone();
    assert_eq!(row["poincare"]["numerator"], json!([1, 1, 2, 1, 1]));
    assert_eq!(row["euler"], json!(6));

    let out = run_on("q0.json", &["wallcross", "--order", "0", "--format", "json"]);
    assert_eq!(json_of(&out)["slopes"], json!([]));
    let text = stdout(&run_on("q0.json", &["wallcross", "--order", "0"]));
    assert!(text.contains("constant 1"));
}

#[test]
fn json_round_trips_byte_for_byte() {
    let cases: Vec<Output> = vec![
        run_on("k2.json", &["hn", "--order", "4", "--format", "json"]),
        run_on("k2.json", &["wallcross", "--order", "5", "--format", "json"]),
        run_on("k1.json", &["verify", "--order", "4", "--format", "json"]),
        run(&["kronecker", "--m", "3", "--order", "8", "--format", "json"]),
        run(&["dynkin", "--type", "A3", "--order", "6", "--format", "json"]),
    ];
    for out in cases {
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        let text = stdout(&out);
        let again = serde_json::to_string_pretty(&json_of(&out)).unwrap() + "\n";
        assert_eq!(text, again);
    }
}

#[test]
fn verify_all_on_k1() {
    let out = run_on("k1.json", &["verify", "--order", "6", "--suites", "all"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("verify: all checks passed"));
}

#[test]
fn verify_oracle_on_k2() {
    let out = run_on("k2.json", &["verify", "--suites", "oracle", "--q", "2", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["passed"], json!(true));
    assert!(v["suites"][0]["checks"].as_array().unwrap().len() > 10);
}

#[test]
fn budget_exceeded_exits_three() {
    let out = run_on(
        "k2.json",
        &["verify", "--suites", "oracle", "--dim", "2,2", "--q", "2", "--budget-reps", "10"],
    );
    assert_eq!(code(&out), 3, "{}", stderr(&out));
}

#[test]
fn fixtures_catch_planted_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_on("k2.json", &["wallcross", "--order", "4", "--format", "json"]);
    let good = dir.path().join("good.json");
    std::fs::write(&good, stdout(&out)).unwrap();
    let ok = run_on("k2.json", &["verify", "--fixture", good.to_str().unwrap()]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));

    let mut v = json_of(&out);
    let rows = v["slopes"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|b| b["slope"] == json!({"numerator": 1, "denominator": 2}))
        .unwrap()["rows"]
        .as_array_mut()
        .unwrap();
    let row = rows
        .iter_mut()
        .find(|r| r["framing"] == json!({"i": 1, "j": 0}) && r["d"] == json!({"i": 1, "j": 1}))
        .unwrap();
    row["poincare"]["numerator"] = json!([1, 2]);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let out = run_on("k2.json", &["verify", "--fixture", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("slope 1/2, n [i:1 j:0], d [i:1 j:1]: poincare"), "{text}");
    assert!(text.contains("fixture 2*q + 1, computed q + 1"), "{text}");

    let hn = run_on("k1.json", &["hn", "--order", "3", "--format", "json"]);
    let path = dir.path().join("hn.json");
    std::fs::write(&path, stdout(&hn)).unwrap();
    assert_eq!(code(&run_on("k1.json", &["verify", "--fixture", path.to_str().unwrap()])), 0);
    assert_eq!(code(&run_on("k2.json", &["verify", "--fixture", path.to_str().unwrap()])), 2);
}

fn nonzero(m: u32, order: u32) -> Vec<Value> {
    let m = m.to_string();
    let order = order.to_string();
    let out = run(&["kronecker", "--m", &m, "--order", &order, "--format", "json"]);
    assert_eq!(code(&out), 0);
    json_of(&out)["nonzero"].as_array().unwrap().clone()
}

#[test]
fn kronecker_tables() {
    let one = nonzero(1, 6);
    assert_eq!(one.len(), 3);
    assert!(one.iter().all(|e| e["value"] == json!({"numerator": 1, "denominator": 1})));

    let two = nonzero(2, 8);
    let diag = two.iter().find(|e| e["d"] == json!({"i": 1, "j": 1})).unwrap();
    assert_eq!(diag["value"], json!({"numerator": 2, "denominator": 1}));
}

fn roots(kind: &str, seed: &str) -> Vec<String> {
    let out = run(&["dynkin", "--type", kind, "--order", "6", "--seed", seed, "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v = json_of(&out);
    assert_eq!(v["report"]["passed"], json!(true));
    let mut roots: Vec<String> = v["factors"].as_array().unwrap().iter().map(|f| f["root"].to_string()).collect();
    roots.sort();
    roots
}

#[test]
fn dynkin_factor_counts() {
    assert_eq!(roots("A2", "0").len(), 3);
    let a3 = roots("A3", "0");
    assert_eq!(a3.len(), 6);
    assert_eq!(roots("A3", "7"), a3);
    let out = run(&["dynkin", "--type", "A3", "--orientation", "alternating", "--order", "6"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("6 factors"));
}
