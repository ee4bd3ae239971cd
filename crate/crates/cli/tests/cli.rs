use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hurwitz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hurwitz"))
        .args(args)
        .env_remove("HURWITZ_CACHE")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn eval_zeta_two() {
    let v = json_of(&hurwitz(&["eval", "--sigma", "2", "--t", "0", "--alpha", "1/1", "--f", "1", "--q", "1"]));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["config"]["command"], "eval");
    let re = v["result"]["value_re"].as_f64().unwrap();
    assert!((re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-10);
    assert!(v["result"]["error_bound"].as_f64().unwrap() < 1e-10);
}

#[test]
fn eval_fifty_digits() {
    let v = json_of(&hurwitz(&["eval", "--sigma", "2", "--alpha", "1", "--digits", "50"]));
    let text = v["result"]["value_text"][0].as_str().unwrap();
    assert!(text.starts_with("1.64493406684822643647241516664602518921894990"), "{text}");
}

#[test]
fn classify_one_third() {
    let v = json_of(&hurwitz(&["classify", "--alpha", "1/3", "--f", "1", "--q", "1"]));
    let r = &v["result"];
    assert_eq!(r["verdict"], "infinitely_many_zeros");
    assert_eq!(r["statement"], "infinitely many zeros in sigma > 1");
    assert_eq!(r["certificate"]["proof_kind"], "residue_obstruction");
}

#[test]
fn classify_polynomial_zeros() {
    let v = json_of(&hurwitz(&["classify", "--alpha", "1", "--f", "1,-2", "--q", "2", "--t-max", "10"]));
    assert_eq!(v["result"]["verdict"], "zeros_from_polynomial");
    assert_eq!(v["result"]["polynomial_scan"]["zeros"].as_array().unwrap().len(), 3);
}

#[test]
fn density_small_window() {
    let v = json_of(&hurwitz(&[
        "density", "--minpoly", "1,2,-1", "--interval", "0.4,0.5", "--q", "1", "--theta", "0.1", "--N", "100",
    ]));
    let rep = &v["result"]["reports"][0];
    assert_eq!(rep["window"]["M"], 10);
    let eligible: Vec<u64> = rep["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| !e["private_ideal"].is_null())
        .map(|e| e["n"].as_u64().unwrap())
        .collect();
    for n in [101, 103, 107] {
        assert!(eligible.contains(&n), "{n} missing from {eligible:?}");
    }
    assert!(!eligible.contains(&102));
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let csv = dir.path().join(format!("{name}.csv"));
        let o = hurwitz(&[
            "density", "--minpoly", "1,2,-1", "--interval", "0.4,0.5", "--q", "2", "--theta", "0.05", "--N",
            "3000,5000", "--seed", "9", "--output", out.to_str().unwrap(), "--csv", csv.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        (std::fs::read(out).unwrap(), std::fs::read(csv).unwrap())
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn exit_codes() {
    let o = hurwitz(&["eval", "--sigma", "2", "--bogus", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--bogus"));
    let o = hurwitz(&["eval", "--sigma", "1", "--alpha", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hurwitz(&["classify", "--alpha", "0.3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hurwitz(&["eval", "--sigma", "2", "--alpha", "1", "--csv", "x.csv"]);
    assert_eq!(o.status.code(), Some(1));
    let o = hurwitz(&["eval", "--sigma", "2", "--alpha", "1/3", "--minpoly", "1,2,-1", "--interval", "0.4,0.5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn thin_class_exits_two_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    let o = hurwitz(&["construct-phi", "--profile", "desk", "--n1", "20", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let v = read_json(&out);
    assert!(v["result"]["report"]["halted"].as_str().unwrap().contains("private prime"));
}

#[test]
fn verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.json");
    let o = hurwitz(&[
        "factor-ideals", "--minpoly", "1,2,-1", "--interval", "0.4,0.5", "--range", "1..500", "--output",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let o = hurwitz(&["verify", out.to_str().unwrap()]);
    let v = json_of(&o);
    assert_eq!(v["result"]["rows_checked"], 5);
    assert_eq!(v["result"]["ok"], true);

    // corrupt every row; the sample must notice
    let mut rep = read_json(&out);
    for row in rep["result"]["rows"].as_array_mut().unwrap() {
        row["residual"] = Value::String("3".into());
    }
    std::fs::write(&out, serde_json::to_string(&rep).unwrap()).unwrap();
    let o = hurwitz(&["verify", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_flag_on_zeros() {
    let o = hurwitz(&[
        "zeros", "--alpha", "1", "--f", "1,-2", "--q", "2", "--rect", "1.3,1.9,0,30", "--grid", "1x4", "--verify",
    ]);
    let v = json_of(&o);
    assert_eq!(v["result"]["total_winding"], 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("0 mismatches"));
}

#[test]
fn cache_from_env_and_flag() {
    let dir = tempfile::tempdir().unwrap();
    let env_path = dir.path().join("env.csv");
    let flag_path = dir.path().join("flag.csv");
    let args = ["factor-ideals", "--minpoly", "1,2,-1", "--interval", "0.4,0.5", "--range", "100..120"];
    let o = Command::new(env!("CARGO_BIN_EXE_hurwitz"))
        .args(args)
        .env("HURWITZ_CACHE", &env_path)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&env_path).unwrap().lines().count() > 10);

    let o = Command::new(env!("CARGO_BIN_EXE_hurwitz"))
        .args(args)
        .args(["--cache", flag_path.to_str().unwrap()])
        .env("HURWITZ_CACHE", dir.path().join("other.csv"))
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(flag_path.exists());
    assert!(!dir.path().join("other.csv").exists());
}
