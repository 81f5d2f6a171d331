use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_barrier-occ"))
        .args(args)
        .env_remove("BARRIER_OCC_SEED")
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn gamma_cdf_at_zero_start() {
    let csv = stdout(&["cdf-gamma", "--y", "0"]);
    assert!(csv.starts_with("x,cdf\n"));
    assert_eq!(csv.lines().count(), 401);
    assert!(csv.lines().any(|l| l == "0.25,0.5"));
}

#[test]
fn q_prints_both_methods() {
    let text = stdout(&["q", "--y", "0", "--t", "2", "--u", "1"]);
    assert_eq!(text, "method,value\nintegral,0.5\nclosed,0.5\ndifference,0\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["cdf-g"]).status.code(), Some(2));
    assert_eq!(run(&["q", "--y", "1", "--t", "1"]).status.code(), Some(2));
    assert_eq!(run(&["cdf-g", "--y", "1", "--c", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn budget_rescales_laws() {
    for cmd in ["cdf-g", "cdf-gamma"] {
        let scaled = rows(&stdout(&[cmd, "--y", "1", "--c", "4"]));
        let unit = rows(&stdout(&[cmd, "--y", "0.5"]));
        for (a, b) in scaled.iter().zip(&unit) {
            assert!((a[0] - 4.0 * b[0]).abs() <= 1e-10 * a[0]);
            assert!((a[1] - b[1]).abs() <= 1e-10);
        }
    }
}

#[test]
fn budget_rescales_limit_paths() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let a_s = a.to_str().unwrap();
    let b_s = b.to_str().unwrap();
    stdout(&[
        "sample-x", "--y", "1", "--c", "4", "--T", "8", "--step", "0.0625", "--seed", "3", "--out", a_s,
    ]);
    stdout(&[
        "sample-x", "--y", "0.5", "--T", "2", "--step", "0.015625", "--seed", "3", "--out", b_s,
    ]);
    let pa = rows(&std::fs::read_to_string(&a).unwrap());
    let pb = rows(&std::fs::read_to_string(&b).unwrap());
    assert_eq!(pa.len(), pb.len());
    for (ra, rb) in pa.iter().zip(&pb) {
        assert!((ra[0] - 4.0 * rb[0]).abs() <= 1e-10 * ra[0].max(1.0));
        assert!((ra[1] - 2.0 * rb[1]).abs() <= 1e-10 * ra[1].abs().max(1.0));
    }
    let side = |p: &Path| -> serde_json::Value {
        let mut s = p.as_os_str().to_owned();
        s.push(".json");
        serde_json::from_str(&std::fs::read_to_string(s).unwrap()).unwrap()
    };
    let ga = side(&a)["draws"][0]["g"].as_f64().unwrap();
    let gb = side(&b)["draws"][0]["g"].as_f64().unwrap();
    assert!((ga - 4.0 * gb).abs() <= 1e-10 * ga.max(1.0));
}

#[test]
fn conditioned_paths_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cbm.csv");
    let o = out.to_str().unwrap();
    stdout(&[
        "sample-cbm",
        "--y",
        "0",
        "--T",
        "4",
        "--n",
        "3",
        "--seed",
        "9",
        "--out",
        o,
    ]);
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("cbm.csv.json")).unwrap()).unwrap();
    let draws = meta["draws"].as_array().unwrap();
    assert_eq!(draws.len(), 3);
    for (i, d) in draws.iter().enumerate() {
        assert!(d["Gamma_T"].as_f64().unwrap() <= 1.0);
        let path = rows(&std::fs::read_to_string(dir.path().join(format!("cbm_{i}.csv"))).unwrap());
        assert_eq!(path[0], vec![0.0, 0.0]);
        assert_eq!(path.last().unwrap()[0], 4.0);
    }
}

#[test]
fn seed_falls_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let with = |seed_env: Option<&str>, seed_flag: Option<&str>, name: &str| {
        let out = dir.path().join(name);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_barrier-occ"));
        cmd.args(["sample-x", "--y", "0", "--T", "1", "--out", out.to_str().unwrap()]);
        cmd.env_remove("BARRIER_OCC_SEED");
        if let Some(s) = seed_env {
            cmd.env("BARRIER_OCC_SEED", s);
        }
        if let Some(s) = seed_flag {
            cmd.args(["--seed", s]);
        }
        assert!(cmd.status().unwrap().success());
        std::fs::read_to_string(out).unwrap()
    };
    assert_eq!(with(Some("11"), None, "a.csv"), with(None, Some("11"), "b.csv"));
    assert_ne!(with(Some("11"), None, "c.csv"), with(None, Some("12"), "d.csv"));
}

#[test]
fn figure_has_all_curves() {
    let csv = stdout(&["figure1"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("law,y,x,cdf"));
    assert_eq!(csv.lines().count(), 1 + 2 * 5 * 400);
    for y in ["-2", "-1", "0", "1", "2"] {
        for law in ["g", "gamma"] {
            let prefix = format!("{law},{y},");
            assert_eq!(csv.lines().filter(|l| l.starts_with(&prefix)).count(), 400);
        }
    }
}
