use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn qd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qd")).args(args).env_remove("QD_TOLERANCE").output().expect("qd runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = qd(&full);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn group_reports() {
    let s3 = json(&["group", "--builtin", "s3"]);
    let sizes: Vec<u64> = s3["classes"].as_array().unwrap().iter().map(|c| c["size"].as_u64().unwrap()).collect();
    assert_eq!(sizes, [1, 2, 3]);
    assert_eq!(s3["character_table"].as_array().unwrap().len(), 3);

    let z2 = json(&["group", "--builtin", "z2"]);
    assert!(z2["classes"].as_array().unwrap().iter().all(|c| c["size"] == 1));
    assert_eq!(z2["classes"].as_array().unwrap().len(), 2);

    let q8 = json(&["group", "--file", &fixture("q8.json")]);
    assert_eq!(q8["order"], 8);
    assert_eq!(q8["classes"].as_array().unwrap().len(), 5);

    let text = String::from_utf8(qd(&["group", "--builtin", "s3"]).stdout).unwrap();
    assert!(text.contains("C_x") && text.contains("order 6"));
}

#[test]
fn anyon_tables() {
    let s3 = json(&["anyons", "--builtin", "s3"]);
    let rows = s3.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    let h = &rows[7];
    assert_eq!((h["label"].as_str(), h["class"].as_str(), h["irrep"].as_str()), (Some("H"), Some("C_y"), Some("wbar")));
    assert_eq!((h["quantum_dimension"].as_u64(), h["type"].as_str()), (Some(2), Some("dyon")));

    let z2 = json(&["anyons", "--builtin", "z2"]);
    assert_eq!(z2.as_array().unwrap().len(), 4);
    assert!(z2.as_array().unwrap().iter().all(|r| r["quantum_dimension"] == 1));
    let z3 = json(&["anyons", "--builtin", "z3"]);
    assert_eq!(z3.as_array().unwrap().len(), 9);
    assert!(z3.as_array().unwrap().iter().all(|r| r["quantum_dimension"] == 1));
}

#[test]
fn verify_suites() {
    let s3 = json(&["verify", "--builtin", "s3"]);
    assert_eq!(s3["passed"], true);
    for check in s3["checks"].as_array().unwrap() {
        assert!(check["max_deviation"].as_f64().unwrap() < 1e-10, "{check}");
    }

    let z2 = json(&["verify", "--builtin", "z2"]);
    assert_eq!(z2["passed"], true);
    let comm = z2["checks"].as_array().unwrap().iter().find(|c| c["name"] == "commutation").unwrap();
    assert_eq!(comm["max_deviation"].as_f64(), Some(0.0));

    let got = json(&["verify", "--builtin", "s3", "--check", "got-swap"]);
    let checks = got["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["details"].as_array().unwrap().len(), 9);
}

#[test]
fn spectra() {
    let z2 = json(&["spectrum", "--builtin", "z2", "--torus", "2x2", "--kitaev"]);
    assert_eq!(z2["spectrum"]["ground_degeneracy"], 4);
    assert_eq!(z2["spectrum"]["dim"], 256);

    let zeros = json(&["spectrum", "--builtin", "s3", "--site", "--couplings", &fixture("s3_zeros.json")]);
    let levels = zeros["spectrum"]["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 1);
    assert_eq!(levels[0]["eigenvalue"].as_f64(), Some(0.0));
    assert_eq!(levels[0]["multiplicity"], 46656);

    let refined = json(&["spectrum", "--builtin", "s3", "--site", "--couplings", &fixture("s3_couplings.json")]);
    let energies: Vec<i64> = refined["spectrum"]["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["eigenvalue"].as_f64().unwrap().round() as i64)
        .collect();
    assert_eq!(energies, (0..8).collect::<Vec<_>>());

    let lowk = json(&["spectrum", "--builtin", "z2", "--torus", "2x3", "--kitaev", "--mode", "lowk", "--k", "4"]);
    assert_eq!(lowk["spectrum"]["ground_degeneracy"], 4);
    assert_eq!(lowk["spectrum"]["truncated"], true);
}

#[test]
fn diagrams() {
    let d = json(&["diagram", "--builtin", "s3", "--couplings", &fixture("s3_couplings.json")]);
    let cells = d["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 9);
    assert_eq!(cells.iter().map(|c| c["dim"].as_u64().unwrap()).sum::<u64>(), 36);
    assert!(cells.iter().all(|c| c["energy"].is_number() && !c["anyons"].as_array().unwrap().is_empty()));

    let dot = String::from_utf8(qd(&["diagram", "--builtin", "s3", "--format", "dot"]).stdout).unwrap();
    assert!(dot.starts_with("digraph") || dot.starts_with("graph"));
}

#[test]
fn json_is_deterministic() {
    for args in [["anyons", "--builtin", "d4"], ["diagram", "--builtin", "s3"]] {
        assert_eq!(json(&args), json(&args));
        let a = qd(&[args[0], args[1], args[2], "--format", "json"]).stdout;
        let b = qd(&[args[0], args[1], args[2], "--format", "json"]).stdout;
        assert_eq!(a, b);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(code(&qd(&["group", "--builtin", "x7"])), 2);
    assert_eq!(code(&qd(&["group"])), 2);
    assert_eq!(code(&qd(&["group", "--builtin", "s3", "--file", &fixture("q8.json")])), 2);
    assert_eq!(code(&qd(&["group", "--file", "/nonexistent/q8.json"])), 2);
    assert_eq!(code(&qd(&["anyons", "--builtin", "s3", "--format", "dot"])), 2);
    assert_eq!(code(&qd(&["diagram", "--builtin", "s3", "--couplings", &fixture("s3_incomplete.json")])), 2);
    assert_eq!(code(&qd(&["verify", "--builtin", "s3", "--check", "nope"])), 2);
    assert_eq!(code(&qd(&["verify", "--builtin", "s3", "--tolerance", "0.5"])), 2);
    assert_eq!(code(&qd(&["verify", "--builtin", "s4"])), 3);
    assert_eq!(code(&qd(&["spectrum", "--builtin", "s3", "--torus", "2x2", "--kitaev"])), 3);

    let env = Command::new(env!("CARGO_BIN_EXE_qd"))
        .args(["verify", "--builtin", "z2", "--check", "character-table"])
        .env("QD_TOLERANCE", "0")
        .output()
        .unwrap();
    assert_eq!(code(&env), 2);

    // traces carry rounding error, so a vanishing tolerance fails the check
    let strict = qd(&["verify", "--builtin", "s3", "--check", "trace-formulas", "--tolerance", "1e-300"]);
    assert_eq!(code(&strict), 1);
    assert!(String::from_utf8_lossy(&strict.stdout).contains("FAIL"));
}
