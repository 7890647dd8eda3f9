use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn smalldev(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smalldev"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const BM_CONFIG: &str = r#"
n_samples = 20000
[target]
specs = [{ kind = "brownian" }]
grid = 1024
[eps]
min = 0.35
max = 0.6
count = 6
spacing = "linear"
[law]
name = "brownian"
"#;

#[test]
fn constants_rows_for_iterated_bm() {
    let dir = TempDir::new().unwrap();
    let o = smalldev(&["constants", "--iterated-bm", "5"], dir.path());
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let rows: Vec<Vec<&str>> = out.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(
        rows[0].join(","),
        "n,hurst,tau_exact,tau,recurrence_constant,law_constant"
    );
    assert_eq!(rows[1][2], "2");
    assert_eq!(rows[1][4].parse::<f64>().unwrap(), 1.0);
    assert_eq!(rows[5][2], "32/31");
}

#[test]
fn constants_fbm_at_one_half_match_iterated_bm() {
    let dir = TempDir::new().unwrap();
    let bm = stdout(&smalldev(&["constants", "--iterated-bm", "2"], dir.path()));
    let fbm = stdout(&smalldev(&["constants", "--fbm", "0.5,1/2"], dir.path()));
    let last = |s: &str| -> (String, f64) {
        let r: Vec<String> = s.lines().last().unwrap().split(',').map(String::from).collect();
        (r[2].clone(), r[5].parse().unwrap())
    };
    let (tb, cb) = last(&bm);
    let (tf, cf) = last(&fbm);
    assert_eq!(tb, tf);
    assert!((cb / cf - 1.0).abs() < 1e-12);
}

#[test]
fn constants_missing_c_of_h_is_named() {
    let dir = TempDir::new().unwrap();
    let o = smalldev(&["constants", "--fbm", "0.3,0.5"], dir.path());
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("H = 0.3"), "{}", stderr(&o));

    fs::write(dir.path().join("c.toml"), "c_of_h = [{ hurst = 0.3, c = 2.0 }]\n").unwrap();
    let o = smalldev(
        &[
            "constants",
            "--fbm",
            "0.3,0.5",
            "--c-of-h",
            "c.toml",
            "--format",
            "json",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows[0]["tau_exact"], "10/3");
    assert_eq!(rows[1]["tau_exact"], "20/13");
}

#[test]
fn estimate_passes_true_law_and_fails_wrong_one() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("bm.toml"), BM_CONFIG).unwrap();
    let o = smalldev(&["estimate", "bm.toml", "--seed", "11", "--out-dir", "ok"], dir.path());
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    let csv = fs::read_to_string(dir.path().join("ok/estimate_curve.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "eps,p_hat,ci_low,ci_high,n_samples,grid,norm"
    );
    assert_eq!(csv.lines().count(), 7);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("ok/estimate_verdict.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert!(dir.path().join("ok/estimate.svg").exists());

    let wrong = BM_CONFIG.replace(
        "name = \"brownian\"",
        "name = \"explicit\"\nexponent = 3.0\nconstant = 1.2",
    );
    fs::write(dir.path().join("wrong.toml"), wrong).unwrap();
    let o = smalldev(
        &["estimate", "wrong.toml", "--seed", "11", "--out-dir", "bad"],
        dir.path(),
    );
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("verdict: FAIL"));
}

#[test]
fn estimate_reports_malformed_config_and_missing_seed() {
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("m.toml"),
        "n_samples = 1000\n[target]\nspecs = [{ kind = \"levy\" }]\n",
    )
    .unwrap();
    let o = smalldev(&["estimate", "m.toml", "--seed", "1"], dir.path());
    assert_eq!(code(&o), 1);
    let err = stderr(&o);
    assert!(err.contains("m.toml") && err.contains("line 3"), "{err}");

    fs::write(dir.path().join("bm.toml"), BM_CONFIG).unwrap();
    let o = smalldev(&["estimate", "bm.toml"], dir.path());
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("--seed"));
}

#[test]
fn estimate_accepts_json_config() {
    let dir = TempDir::new().unwrap();
    let cfg = r#"{
        "n_samples": 2000,
        "target": { "specs": [{ "kind": "brownian" }, { "kind": "brownian" }], "grid": 129, "grid_outer_per_unit": 256 },
        "eps": { "values": [1.0, 0.8, 0.6] },
        "refine": false,
        "svg": false
    }"#;
    fs::write(dir.path().join("chain.json"), cfg).unwrap();
    let o = smalldev(
        &["estimate", "chain.json", "--seed", "5", "--format", "json"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let curve: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("estimate_curve.json")).unwrap()).unwrap();
    assert_eq!(curve["n_samples"], 2000);
    assert!(!dir.path().join("estimate.svg").exists());
}

#[test]
fn outputs_are_byte_identical_across_threads_and_reruns() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("bm.toml"), BM_CONFIG.replace("20000", "3000")).unwrap();
    let run = |threads: &str, out: &str| {
        let o = smalldev(
            &[
                "estimate",
                "bm.toml",
                "--seed",
                "9",
                "--threads",
                threads,
                "--out-dir",
                out,
            ],
            dir.path(),
        );
        assert!(code(&o) == 0 || code(&o) == 2);
        let e = smalldev(
            &[
                "entropy",
                "--covering",
                "--seed",
                "9",
                "--samples",
                "2000",
                "--delta",
                "1",
                "--threads",
                threads,
                "--out-dir",
                out,
            ],
            dir.path(),
        );
        assert_eq!(code(&e), 0);
        ["estimate_curve.csv", "estimate_verdict.json", "covering.csv"]
            .map(|f| fs::read(dir.path().join(out).join(f)).unwrap())
    };
    let a = run("1", "a");
    assert_eq!(a, run("3", "b"));
    assert_eq!(a, run("1", "c"));
}

#[test]
fn entropy_profile_respects_bound() {
    let dir = TempDir::new().unwrap();
    let o = smalldev(&["entropy", "--profile", "--eps", "0.1", "--seed", "4"], dir.path());
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(dir.path().join("profile.csv")).unwrap();
    let row: Vec<f64> = csv
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert!(row[1] >= 1.0 && row[1] <= row[2]);
}

#[test]
fn entropy_lacey_reports_slope() {
    let dir = TempDir::new().unwrap();
    let o = smalldev(
        &[
            "entropy",
            "--lacey",
            "--alpha",
            "2",
            "--samples",
            "3000",
            "--grid",
            "1024",
            "--seed",
            "4",
        ],
        dir.path(),
    );
    assert!(code(&o) == 0 || code(&o) == 2, "{}", stderr(&o));
    assert!(stdout(&o).contains("slope"));
    let csv = fs::read_to_string(dir.path().join("lacey.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "u,p_hat,ci_low,ci_high");
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("lacey_report.json")).unwrap()).unwrap();
    assert!(report["result"]["slope"].as_f64().unwrap() > 0.0);
}

#[test]
fn entropy_alpha_time_verdict_targets_four_thirds() {
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("at.toml"),
        "study = \"alpha_time\"\nn_samples = 3000\ngrid = 257\ngrid_outer_per_unit = 1024\n[eps]\nvalues = [0.8, 0.7, 0.6, 0.5, 0.45]\n",
    )
    .unwrap();
    let o = smalldev(
        &[
            "entropy", "--config", "at.toml", "--alpha", "2", "--beta", "2", "--seed", "4",
        ],
        dir.path(),
    );
    assert!(code(&o) == 0 || code(&o) == 2, "{}", stderr(&o));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("alpha_time_report.json")).unwrap()).unwrap();
    let predicted = report["report"]["predicted_exponent"].as_f64().unwrap();
    assert!((predicted - 4.0 / 3.0).abs() < 1e-12);
    assert!(report["report"]["verdict"]["fit"]["exponent_hat"].is_number());
}

#[test]
fn entropy_requires_a_study() {
    let dir = TempDir::new().unwrap();
    let o = smalldev(&["entropy", "--seed", "1"], dir.path());
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("choose a study"));
}

#[test]
fn simulate_dumps_deterministic_path() {
    let dir = TempDir::new().unwrap();
    let a = stdout(&smalldev(
        &["simulate", "--process", "stable:1.5", "--points", "65", "--seed", "3"],
        dir.path(),
    ));
    let b = stdout(&smalldev(
        &["simulate", "--process", "stable:1.5", "--points", "65", "--seed", "3"],
        dir.path(),
    ));
    assert_eq!(a, b);
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], "t,x");
    assert_eq!(lines.len(), 66);
    assert_eq!(lines[1], "0,0");
    let o = smalldev(
        &["simulate", "--process", "bm,bm", "--points", "33", "--out-dir", "p"],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    assert!(dir.path().join("p/path.csv").exists());
    assert_eq!(code(&smalldev(&["simulate", "--process", "fbm:2"], dir.path())), 1);
}
