use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn nilalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilalg"))
        .args(args)
        .env_remove("NILALG_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn make(dir: &TempDir, name: &str, args: &[&str]) -> String {
    let path = dir.path().join(name);
    let path_s = path.to_str().unwrap().to_string();
    let mut full = vec!["catalog", "make"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &path_s]);
    let out = nilalg(&full);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path_s
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn catalog_list_names_all_families() {
    let out = nilalg(&["catalog", "list"]);
    assert_eq!(code(&out), 0);
    let names: Vec<String> = stdout_json(&out)
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["family"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(
        names,
        ["L", "Q", "TAU_NP1", "TAU_NP2", "M1", "M2", "M3", "M4", "M5"]
    );
}

#[test]
fn catalog_make_rejects_bad_parameters() {
    let out = nilalg(&[
        "catalog", "make", "M4", "--n", "10", "--p", "4", "--alpha", "1",
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("requires"));
}

#[test]
fn invariants_of_m1() {
    let dir = TempDir::new().unwrap();
    let m1 = make(&dir, "m1.json", &["M1", "--n", "8", "--p", "4"]);
    let out = nilalg(&["invariants", &m1]);
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    let r = &report["result"];
    assert_eq!(
        r["characteristic_sequence"],
        serde_json::json!([4, 1, 1, 1, 1])
    );
    assert_eq!(r["nilindex"], 4);
    assert_eq!(r["natural_gradation_dims"], serde_json::json!([3, 3, 1, 1]));
    assert_eq!(r["leibniz"], true);
    assert_eq!(r["is_lie"], false);
    assert_eq!(report["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(report["input"]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn invariants_of_abelian() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "ab.json",
        r#"{"dim": 3, "basis": ["a", "b", "c"], "brackets": {}}"#,
    );
    let out = nilalg(&["invariants", &f]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["result"]["nilindex"], 1);
}

#[test]
fn schema_errors_exit_2_with_position() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "bad.json",
        r#"{"dim": 2, "basis": ["a", "b"], "brackets": {"0,0": [[7, "1"]]}}"#,
    );
    let out = nilalg(&["invariants", &f]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("brackets"), "{err}");

    let f = write(
        &dir,
        "syntax.json",
        "{\"dim\": 2,\n  \"basis\": [\"a\" \"b\"]}",
    );
    let out = nilalg(&["invariants", &f]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn not_nilpotent_is_reported_with_exit_1() {
    let dir = TempDir::new().unwrap();
    // [a,a] = a
    let f = write(
        &dir,
        "nn.json",
        r#"{"dim": 1, "basis": ["a"], "brackets": {"0,0": [[0, "1"]]}}"#,
    );
    let out = nilalg(&["invariants", &f]);
    assert_eq!(code(&out), 1);
    let r = &stdout_json(&out)["result"];
    assert!(r["error"].as_str().unwrap().contains("not nilpotent"));
    assert_eq!(r["dim"], 1);
}

#[test]
fn grade_verify_with_reference_witness() {
    let dir = TempDir::new().unwrap();
    let out = nilalg(&[
        "catalog",
        "make",
        "M5",
        "--n",
        "10",
        "--p",
        "4",
        "--witness",
    ]);
    assert_eq!(code(&out), 0);
    let both = stdout_json(&out);
    let alg = write(&dir, "m5.json", &both["algebra"].to_string());
    let wit = write(&dir, "w.json", &both["witness"].to_string());
    let out = nilalg(&["grade", "verify", &alg, "--assignment", &wit]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["verdict"]["kind"], "MaximumLength");
    assert!(report["input"]["assignment_sha256"].is_string());

    // a collision is a negative verdict, not an error
    let mut degrees = both["witness"]["degrees"].clone();
    let first = degrees.as_object().unwrap().keys().next().unwrap().clone();
    let second = degrees.as_object().unwrap().keys().nth(1).unwrap().clone();
    degrees[&first] = degrees[&second].clone();
    let bad = write(
        &dir,
        "bad.json",
        &serde_json::json!({ "degrees": degrees }).to_string(),
    );
    let out = nilalg(&["grade", "verify", &alg, "--assignment", &bad]);
    assert_eq!(code(&out), 1);
    assert_eq!(
        stdout_json(&out)["result"]["verdict"]["kind"],
        "NotMaximumLength"
    );
}

#[test]
fn grade_search_on_l_finds_nothing() {
    let dir = TempDir::new().unwrap();
    let l = make(
        &dir,
        "l.json",
        &["L", "--n", "12", "--p", "4", "--r", "3,5,7"],
    );
    let out = nilalg(&["grade", "search", &l]);
    assert_eq!(code(&out), 1);
    let v = &stdout_json(&out)["result"]["verdict"];
    assert_eq!(v["kind"], "NoGradationFound");
}

#[test]
fn grade_diagonal_on_chain() {
    let dir = TempDir::new().unwrap();
    let chain = write(
        &dir,
        "chain.json",
        r#"{"dim": 4, "basis": ["e1","e2","e3","e4"],
            "brackets": {"0,0": [[1, "1"]], "1,0": [[2, "1"]], "2,0": [[3, "1"]]}}"#,
    );
    let out = nilalg(&["grade", "diagonal", &chain]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        stdout_json(&out)["result"]["verdict"]["kind"],
        "MaximumLength"
    );
}

#[test]
fn diagonal_refuses_large_inputs() {
    let dir = TempDir::new().unwrap();
    let l = make(
        &dir,
        "l.json",
        &["L", "--n", "12", "--p", "4", "--r", "3,5,7"],
    );
    let out = nilalg(&["grade", "diagonal", &l]);
    assert_eq!(code(&out), 2);
}

#[test]
fn seed_flag_beats_environment() {
    let dir = TempDir::new().unwrap();
    let m1 = make(&dir, "m1.json", &["M1", "--n", "8", "--p", "4"]);
    let run = |env: Option<&str>, flag: Option<&str>| -> Value {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_nilalg"));
        cmd.args(["invariants", &m1]).env_remove("NILALG_SEED");
        if let Some(s) = env {
            cmd.env("NILALG_SEED", s);
        }
        if let Some(s) = flag {
            cmd.args(["--seed", s]);
        }
        serde_json::from_slice(&cmd.output().unwrap().stdout).unwrap()
    };
    assert_eq!(run(Some("17"), None)["seed"], 17);
    assert_eq!(run(Some("17"), Some("5"))["seed"], 5);
    assert_ne!(run(None, None)["seed"], 17);
}

#[test]
fn reproduce_thm33_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = nilalg(&[
            "reproduce",
            "--theorem",
            "thm33",
            "--seed",
            "42",
            "--report",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let (ra, rb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ra, rb);
    let report: Value = serde_json::from_slice(&ra).unwrap();
    assert_eq!(report["seed"], 42);
    assert!(report["input"]["default_grid_sha256"].is_string());
}

#[test]
fn reproduce_with_grid_override() {
    let dir = TempDir::new().unwrap();
    let grid = write(&dir, "grid.json", r#"[{"family": "M3", "n": 9, "p": 5}]"#);
    let out = nilalg(&["reproduce", "--theorem", "thm34", "--grid", &grid]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout_json(&out)["input"]["grid_sha256"].is_string());

    // M1 is expected to grade; a tiny window hides the witness
    let grid = write(&dir, "m1.json", r#"[{"family": "M1", "n": 8, "p": 4}]"#);
    let out = nilalg(&[
        "reproduce",
        "--theorem",
        "thm34",
        "--grid",
        &grid,
        "--kt-window",
        "1",
    ]);
    assert_eq!(code(&out), 1);
    assert!(!stdout_json(&out)["result"]["first_counterexample"].is_null());

    let grid = write(
        &dir,
        "bad.json",
        r#"[{"family": "M4", "n": 10, "p": 4, "alpha": 1}]"#,
    );
    let out = nilalg(&["reproduce", "--theorem", "thm33", "--grid", &grid]);
    assert_eq!(code(&out), 2);
}

#[test]
fn missing_file_and_unknown_theorem_exit_2() {
    assert_eq!(code(&nilalg(&["invariants", "/nonexistent/alg.json"])), 2);
    assert_eq!(code(&nilalg(&["reproduce", "--theorem", "thm99"])), 2);
    assert!(!Path::new("/nonexistent").exists());
}

#[test]
fn report_does_not_depend_on_thread_count() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_nilalg"))
            .args(["reproduce", "--theorem", "thm31", "--seed", "9"])
            .env_remove("NILALG_SEED")
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap()
    };
    let (one, four) = (run("1"), run("4"));
    assert_eq!(code(&one), 0, "{}", String::from_utf8_lossy(&one.stderr));
    assert_eq!(one.stdout, four.stdout);
}
