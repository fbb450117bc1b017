use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minmax-hrde"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = p(dir, name);
    fs::write(&path, text).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn analyze_exit_codes_follow_the_verdict() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", "1\n");
    let out = p(&dir, "r.json");
    let stable = run(&["analyze", "--matrix", &a, "--alpha", "0.3", "--gamma", "0.1", "--out", &out]);
    assert_eq!(stable.status.code(), Some(0), "{}", stdout(&stable));
    assert!(stdout(&stable).contains("verdict: stable"));

    let unstable = run(&["analyze", "--matrix", &a, "--alpha", "0.01", "--gamma", "0.1", "--out", &out]);
    assert_eq!(unstable.status.code(), Some(2));

    let rect = write(&dir, "rect.csv", "1,0,0\n0,1,0\n");
    let marginal = run(&["analyze", "--matrix", &rect, "--alpha", "0.3", "--gamma", "0.1", "--out", &out]);
    assert_eq!(marginal.status.code(), Some(3));
}

#[test]
fn analyze_report_has_the_documented_keys() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", "1\n");
    let out = p(&dir, "r.json");
    run(&["analyze", "--matrix", &a, "--alpha", "0.3", "--gamma", "0.1", "--out", &out]);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        [
            "abscissa",
            "alpha",
            "beta",
            "d1",
            "d2",
            "eig_c",
            "eig_d",
            "exact_boundary_margin",
            "gamma",
            "hurwitz",
            "pairing_residual",
            "sufficient"
        ]
    );
    assert_eq!(v["beta"], 20.0);
    // μ = -αβ ∓ iβ = -6 ∓ 20i
    let mus: Vec<(f64, f64)> = v["eig_d"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| (m[0].as_f64().unwrap(), m[1].as_f64().unwrap().abs()))
        .collect();
    for (re, im) in mus {
        assert!((re + 6.0).abs() < 1e-12 && (im - 20.0).abs() < 1e-12);
    }
}

#[test]
fn gaussian_game_from_seed_is_stable_and_reproducible() {
    let dir = TempDir::new().unwrap();
    let m1 = p(&dir, "m1.csv");
    let m2 = p(&dir, "m2.csv");
    for m in [&m1, &m2] {
        let o = run(&["gen-matrix", "--kind", "gaussian", "--d1", "4", "--d2", "4", "--seed", "7", "--out", m]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(fs::read(&m1).unwrap(), fs::read(&m2).unwrap());
    let out = p(&dir, "r.json");
    let o = run(&["analyze", "--matrix", &m1, "--alpha", "0.5", "--gamma", "0.1", "--out", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(v["abscissa"].as_f64().unwrap() < 0.0);
}

#[test]
fn gen_matrix_kinds_round_trip() {
    let dir = TempDir::new().unwrap();
    let out = p(&dir, "m.csv");
    let o = run(&["gen-matrix", "--kind", "diag", "--d1", "2", "--d2", "3", "--out", &out]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&out).unwrap(), "1,0,0\n0,2,0\n");
    let bad = run(&["gen-matrix", "--kind", "rotation", "--d1", "3", "--d2", "3", "--out", &out]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn simulate_is_deterministic_and_reports_status() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", "1,0.5\n-0.3,2\n");
    let run_once = |method: &str, name: &str| {
        let out = p(&dir, name);
        let o = run(&[
            "simulate", "--matrix", &a, "--method", method, "--alpha", "0.3", "--gamma", "0.1", "--seed", "3",
            "--t-max", "5", "--stride", "10", "--out", &out,
        ]);
        (o, fs::read(&out).unwrap())
    };
    for method in ["mpm", "eg", "ogda", "hrde"] {
        let (o1, b1) = run_once(method, "t1.csv");
        let (o2, b2) = run_once(method, "t2.csv");
        assert_eq!(o1.status.code(), Some(0), "{method}: {}", stdout(&o1));
        assert_eq!(b1, b2, "{method}");
        assert_eq!(o1.stdout, o2.stdout);
    }
    let (hrde, bytes) = run_once("hrde", "h.csv");
    let text = String::from_utf8(bytes).unwrap();
    assert!(text.starts_with("t,dist,z_0,z_1,z_2,z_3,w_0,w_1,w_2,w_3\n"));
    assert!(stdout(&hrde).contains("status: completed"));
}

#[test]
fn simulate_gda_diverges() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", "1\n");
    let z0 = write(&dir, "z0.csv", "1,0\n");
    let out = p(&dir, "t.csv");
    let o = run(&[
        "simulate", "--matrix", &a, "--method", "gda", "--gamma", "0.5", "--z0", &z0, "--max-iters", "1000",
        "--out", &out,
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stdout(&o).contains("status: diverged"));

    let budget = run(&[
        "simulate", "--matrix", &a, "--method", "mpm", "--alpha", "0.3", "--gamma", "0.1", "--z0", &z0,
        "--max-iters", "10", "--out", &out,
    ]);
    assert_eq!(budget.status.code(), Some(3));
}

#[test]
fn bad_input_exits_one() {
    let dir = TempDir::new().unwrap();
    let out = p(&dir, "r.json");
    let missing = dir.path().join("nope.csv");
    let o = run(&["analyze", "--matrix", &missing.to_string_lossy(), "--alpha", "1", "--gamma", "0.1", "--out", &out]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&o.stderr).is_empty());
    assert!(!Path::new(&out).exists());

    let a = write(&dir, "a.csv", "1\n");
    let neg = run(&["analyze", "--matrix", &a, "--alpha=-1", "--gamma", "0.1", "--out", &out]);
    assert_eq!(neg.status.code(), Some(1));
    let ragged = write(&dir, "r.csv", "1,2\n3\n");
    let o = run(&["analyze", "--matrix", &ragged, "--alpha", "1", "--gamma", "0.1", "--out", &out]);
    assert_eq!(o.status.code(), Some(1));
    let big_step = run(&[
        "simulate", "--matrix", &a, "--method", "hrde", "--alpha", "0.3", "--gamma", "0.1", "--h", "0.1",
        "--out", &out,
    ]);
    assert_eq!(big_step.status.code(), Some(1));
}

#[test]
fn scan_writes_grid_in_order() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", "1\n");
    let out = p(&dir, "s.csv");
    let o = run(&["scan", "--matrix", &a, "--alpha-range", "0.01:0.5:50", "--gamma-range", "0.1:1:10", "--out", &out]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 501);
    assert!(rows[1].starts_with("0.10000000000000001,0.01,"));
    assert!(stdout(&o).contains("sufficient but not stable: 0"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["analyze", "--alpha", "1"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
