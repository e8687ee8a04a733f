use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qshare(args: &[&str]) -> Output {
    qshare_env(args, None)
}

fn qshare_env(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qshare"));
    cmd.args(args).env_remove("QSHARE_THREADS");
    if let Some(t) = threads {
        cmd.env("QSHARE_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("structured output parses")
}

fn y_of(v: &Value) -> Vec<f64> {
    v["profile"]["y"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect()
}

#[test]
fn analyze_ghz_sits_at_vertex_e() {
    let out = qshare(&["analyze", "--family", "ghz", "--theta", "0.7853981634", "--format", "structured"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(y_of(&v).iter().all(|y| (y - 1.0).abs() < 1e-9));
    assert!((v["profile"]["y_total"].as_f64().unwrap() - 3.0).abs() < 1e-9);
    assert_eq!(v["face"], "vertex_E");
}

#[test]
fn analyze_symmetric_w_sits_on_triangle_abc() {
    let out = qshare(&[
        "analyze", "--family", "w", "--alpha", "0.57735", "--beta", "0.57735", "--gamma", "0.57735",
        "--format", "structured",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(y_of(&v).iter().all(|y| (y - 2.0 / 3.0).abs() < 1e-9));
    assert_eq!(v["face"], "triangle_ABC");
    let table = qshare(&["analyze", "--family", "w", "--alpha", "0.57735", "--beta", "0.57735", "--gamma", "0.57735"]);
    assert!(stdout(&table).contains("face: triangle_ABC"));
}

#[test]
fn analyze_product_state_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("product000.state");
    let mut amps = vec!["[1, 0]"];
    amps.extend(std::iter::repeat_n("[0, 0]", 7));
    std::fs::write(&path, format!("{{\"n_parties\": 3, \"amplitudes\": [{}]}}", amps.join(", "))).unwrap();
    let out = qshare(&["analyze", "--state-file", path.to_str().unwrap(), "--format", "structured"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(y_of(&v).iter().all(|&y| y == 0.0));
    for p in v["bounds"]["parties"].as_array().unwrap() {
        assert_eq!(p["lower"].as_f64().unwrap(), 0.0);
    }
    assert_eq!(v["face"], "vertex_O");
}

#[test]
fn state_file_family_matches_flags_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ghz.json");
    std::fs::write(&path, r#"{"family": "ghz", "params": {"theta": 0.4}}"#).unwrap();
    let from_file = qshare(&["analyze", "--state-file", path.to_str().unwrap(), "--format", "structured"]);
    let from_flags = qshare(&["analyze", "--family", "ghz", "--theta", "0.4", "--format", "structured"]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(from_file.stdout, from_flags.stdout);
}

#[test]
fn analyze_qudit_is_flagged_speculative() {
    let out = qshare(&["analyze", "--family", "haar", "--n", "3", "--m", "3", "--seed", "5", "--format", "structured"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["speculative"], true);
    assert_eq!(v["seed"], 5);
    assert_eq!(v["y"].as_array().unwrap().len(), 3);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.state");
    std::fs::write(&bad, r#"{"n_parties": 1, "amplitudes": [[1, 0], [0, 0]], "colour": 1}"#).unwrap();
    let out = qshare(&["analyze", "--state-file", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));

    let unnormalized = dir.path().join("un.state");
    std::fs::write(&unnormalized, r#"{"n_parties": 1, "amplitudes": [[1, 0], [1, 0]]}"#).unwrap();
    assert_eq!(code(&qshare(&["analyze", "--state-file", unnormalized.to_str().unwrap()])), 2);

    let cases: &[&[&str]] = &[
        &["analyze", "--family", "ghz", "--theta", "1", "--state-file", "x.state"],
        &["analyze"],
        &["analyze", "--family", "ghz"],
        &["analyze", "--family", "w", "--alpha", "1,2,3", "--beta", "0", "--gamma", "0"],
        &["analyze", "--state-file", "/nonexistent/state.json"],
        &["sample", "--n", "1"],
        &["sample", "--n", "3", "--bogus"],
        &["verify", "everything"],
        &["verify", "inequality", "--n", "0"],
        &["verify", "inequality", "--inject", "1,x"],
        &["geometry", "volume", "--n", "1"],
        &["geometry", "volume", "--n", "3", "--samples", "10"],
        &["geometry", "slice", "--n", "3", "--yt", "4"],
        &["figures", "fig4", "--grid", "1"],
        &["figures", "fig2"],
    ];
    for args in cases {
        assert_eq!(code(&qshare(args)), 2, "{args:?}");
    }
    let out = qshare_env(&["geometry", "volume", "--n", "3"], Some("many"));
    assert_eq!(code(&out), 2);
}

#[test]
fn injected_violation_exits_one_with_record() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = qshare(&[
        "verify", "inequality", "--inject", "1,0.1,0.1", "--n", "3", "--samples", "200", "--seed", "1",
        "-o", report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let checks = v[0]["checks"].as_array().unwrap();
    let injected = checks.iter().find(|c| c["name"] == "injected_sharing").unwrap();
    assert_eq!(injected["pass"], false);
    let record = &injected["counterexamples"][0];
    assert!((record["margin"].as_f64().unwrap() + 0.8).abs() < 1e-12);
}

#[test]
fn verify_all_passes() {
    let out = qshare(&["verify", "all", "--seed", "1", "--samples", "10000"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    for suite in ["inequality", "bounds", "identities", "families", "qudit"] {
        assert!(text.contains(&format!("suite {suite}")), "missing {suite}");
    }
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_qudit_is_speculative() {
    let out = qshare(&["verify", "qudit", "--m", "3", "--n", "3", "--samples", "2000", "--seed", "4"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("SPECULATIVE"));
}

#[test]
fn missing_seed_is_echoed() {
    let out = qshare(&["verify", "families", "--samples", "50", "--format", "structured"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let seed = v[0]["seed"].as_u64().unwrap();
    let again = qshare(&["verify", "families", "--samples", "50", "--format", "structured", "--seed", &seed.to_string()]);
    assert_eq!(out.stdout, again.stdout);
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn sample_rows_are_inhabitable() {
    let out = qshare(&["sample", "--n", "3", "--count", "100", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header, ["index", "y1", "y2", "y3", "y_total", "min_margin"]);
    assert_eq!(rows.len(), 100);
    assert!(rows.iter().all(|r| r[5] >= -1e-9));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed=7"));
}

#[test]
fn two_party_samples_have_equal_columns() {
    let out = qshare(&["sample", "--n", "2", "--count", "50"]);
    assert_eq!(code(&out), 0);
    let (_, rows) = parse_csv(&stdout(&out));
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|r| (r[1] - r[2]).abs() <= 1e-9));
}

fn run_to_file(dir: &Path, name: &str, args: &[&str], threads: &str) -> Vec<u8> {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    full.extend(["-o", &p]);
    let out = qshare_env(&full, Some(threads));
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::read(&path).unwrap()
}

#[test]
fn outputs_are_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let jobs: &[&[&str]] = &[
        &["sample", "--n", "4", "--count", "700", "--seed", "7"],
        &["figures", "fig1", "--seed", "3"],
        &["figures", "fig4", "--grid", "13", "--samples", "5000", "--seed", "3"],
        &["verify", "bounds", "--n", "3,4", "--samples", "600", "--seed", "2"],
        &["geometry", "volume", "--n", "4", "--samples", "100000", "--seed", "9", "--format", "csv"],
    ];
    for (i, args) in jobs.iter().enumerate() {
        let one = run_to_file(dir.path(), &format!("a{i}"), args, "1");
        let three = run_to_file(dir.path(), &format!("b{i}"), args, "3");
        let auto = run_to_file(dir.path(), &format!("c{i}"), args, "0");
        assert_eq!(one, three, "{args:?}");
        assert_eq!(one, auto, "{args:?}");
    }
}

#[test]
fn geometry_volume_and_mesh() {
    let out = qshare(&["geometry", "volume", "--n", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1/2 = 0.5\n");

    let dir = tempfile::tempdir().unwrap();
    let mesh = dir.path().join("mesh.json");
    let out = qshare(&["geometry", "mesh", "-o", mesh.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("5 vertices, 6 faces"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&mesh).unwrap()).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 5);
    assert_eq!(v["faces"].as_array().unwrap().len(), 6);
}

#[test]
fn geometry_slice_at_peak() {
    let out = qshare(&["geometry", "slice", "--n", "3", "--yt", "2", "--seed", "11", "--format", "structured"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let exact = v["exact"].as_f64().unwrap();
    assert!((exact - 3f64.sqrt() / 2.0).abs() < 1e-15);
    let mc = v["monte_carlo"]["hyperarea"].as_f64().unwrap();
    let se = v["monte_carlo"]["standard_error"].as_f64().unwrap();
    assert!((mc - exact).abs() <= 1e-12 || (mc - exact).abs() <= 3.0 * se);

    let off_peak = qshare(&["geometry", "slice", "--n", "3", "--yt", "1.2", "--seed", "11", "--format", "structured"]);
    let v = json(&off_peak);
    let (exact, mc, se) = (
        v["exact"].as_f64().unwrap(),
        v["monte_carlo"]["hyperarea"].as_f64().unwrap(),
        v["monte_carlo"]["standard_error"].as_f64().unwrap(),
    );
    assert!(se > 0.0 && (mc - exact).abs() <= 3.0 * se);
}

#[test]
fn figure_datasets() {
    let dir = tempfile::tempdir().unwrap();
    let fig1 = dir.path().join("fig1.csv");
    let out = qshare(&["figures", "fig1", "--seed", "3", "-o", fig1.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("seed=3"));
    let (header, rows) = parse_csv(&std::fs::read_to_string(&fig1).unwrap());
    assert_eq!(header, ["state_id", "y1", "upper_raw", "upper_clamped", "lower"]);
    assert_eq!(rows.len(), 100);
    assert!(rows.iter().all(|r| r[4] <= r[1] + 1e-9 && r[1] <= r[3] + 1e-9));

    let args = ["figures", "fig4", "--grid", "61", "--samples", "20000", "--seed", "3"];
    let first = run_to_file(dir.path(), "fig4a.csv", &args, "0");
    let second = run_to_file(dir.path(), "fig4b.csv", &args, "0");
    assert_eq!(first, second);
    let (header, rows) = parse_csv(&String::from_utf8(first).unwrap());
    assert_eq!(header, ["y_total", "a_exact", "a_mc", "mc_std_error"]);
    assert_eq!(rows.len(), 61);
    let peak = rows.iter().max_by(|a, b| a[1].total_cmp(&b[1])).unwrap();
    assert!((peak[0] - 2.0).abs() < 1e-12);
}
