use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mees_core::fixtures::{fixture, FixtureName, TwoQubitParams};
use mees_core::linalg::{verify_unitary, ComplexMatrix};
use serde_json::Value;

const SYSTEM: &str = "0,2,4;0,1,6,9";

fn mees(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mees")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn field(text: &str, key: &str) -> f64 {
    let prefix = format!("{key} = ");
    text.lines().find_map(|l| l.strip_prefix(&prefix)).unwrap_or_else(|| panic!("{key} missing")).parse().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&mees(&["--help"])), 0);
    assert_eq!(code(&mees(&["--version"])), 0);
    assert_eq!(code(&mees(&["scan", "--help"])), 0);
    assert_eq!(code(&mees(&[])), 64);
    assert_eq!(code(&mees(&["--spectra", SYSTEM])), 64);
    assert_eq!(code(&mees(&["--spectra", SYSTEM, "--entanglement", "0"])), 2);
    assert_eq!(code(&mees(&["--spectra", SYSTEM, "--entanglement", "2"])), 2);
    assert_eq!(code(&mees(&["--spectra", "0,0,1;0,1", "--entanglement", "0.2"])), 2);
    assert_eq!(code(&mees(&["hamiltonian", "--spectra", SYSTEM, "--approach", "bogus", "--weights", "1,0,0"])), 64);
    assert_eq!(code(&mees(&["hamiltonian", "--spectra", SYSTEM, "--approach", "simple"])), 64);
    assert_eq!(code(&mees(&["hamiltonian", "--spectra", SYSTEM, "--approach", "mssg-b", "--weights", "1,0,0"])), 2);
    assert_eq!(code(&mees(&["scan", "--spectra", SYSTEM, "--approach", ""])), 64);
    assert_eq!(code(&mees(&["frobnicate"])), 64);
    assert_eq!(code(&mees(&["montecarlo", "--spectra", SYSTEM, "--approach", "mssg-a", "--measure", "haar-full"])), 2);
}

#[test]
fn mees_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = mees(&["--spectra", SYSTEM, "--entanglement", "0.549", "--out-dir", d]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!((field(&text, "entanglement") - 0.549).abs() < 1e-12);
    let v = read_json(&dir.path().join("mees.json"));
    let w: Vec<f64> = serde_json::from_value(v["state"]["weights"].clone()).unwrap();
    assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    let h: f64 = -w.iter().map(|p| p * p.ln()).sum::<f64>();
    assert!((h - 0.549).abs() < 1e-10);
    assert_eq!(v["beta_g"].as_f64().unwrap(), field(&text, "beta_g"));
    assert_eq!(v["config"]["entanglement"].as_f64().unwrap(), 0.549);

    let back = mees(&["mees", "--spectra", SYSTEM, "--beta-g", &format!("{:.16e}", field(&text, "beta_g"))]);
    assert!((field(&stdout(&back), "entanglement") - 0.549).abs() < 1e-12);
}

#[test]
fn system_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("system.json");
    fs::write(&file, r#"{"spectrum_a": [0, 2, 4], "spectrum_b": [0, 1, 6, 9]}"#).unwrap();
    let a = mees(&["--system-file", file.to_str().unwrap(), "--beta-g", "0.7"]);
    let b = mees(&["--spectra", SYSTEM, "--beta-g", "0.7"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(code(&mees(&["--system-file", "/nonexistent/system.json", "--beta-g", "0.7"])), 2);
    assert_eq!(code(&mees(&["--spectra", SYSTEM, "--system-file", file.to_str().unwrap(), "--beta-g", "1"])), 64);
}

#[test]
fn synth_matches_two_qubit_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let p = TwoQubitParams::new(1.0, 1.3, 0.7, 0.4, -1.1).unwrap();
    for (op, name) in [("US", FixtureName::Us), ("UA", FixtureName::UaTilde), ("UB", FixtureName::UbTilde)] {
        let out = mees(&[
            "synth", "--spectra", "-0.5,0.5;-0.65,0.65", "--weights", "0.7,0.3", "--phases", "0.4,-1.1",
            "--operator", op, "--out-dir", d,
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        assert!(field(&stdout(&out), "fidelity") > 1.0 - 1e-12);
        let v = read_json(&dir.path().join("unitary.json"));
        let u: ComplexMatrix = serde_json::from_value(v["unitary"].clone()).unwrap();
        assert!(verify_unitary(&u).max() < 1e-12);
        assert!(u.max_abs_diff(&fixture(name, &p, 0.0)) < 1e-12, "{op}");
        assert_eq!(v["operator"], op);
        assert!(v["gate_plan"]["factors"].as_array().unwrap().len() >= 2);
    }
}

#[test]
fn synth_random_targets() {
    for measure in ["haar-schmidt", "haar-full"] {
        let out = mees(&["synth", "--spectra", SYSTEM, "--random-target", "17", "--measure", measure]);
        assert_eq!(code(&out), 0);
        assert!(field(&stdout(&out), "fidelity") > 1.0 - 1e-10);
    }
    let out = mees(&["synth", "--spectra", SYSTEM, "--random-target", "17", "--measure", "haar-full", "--operator", "UA"]);
    assert_eq!(code(&out), 2);
    let out = mees(&["synth", "--spectra", SYSTEM, "--weights", "1,0,0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(field(&stdout(&out), "unitarity_deviation"), 0.0);
}

#[test]
fn hamiltonian_reports_agree() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    for approach in ["simple", "modified-simple", "global-unitary", "mssg-a", "mssg-b"] {
        let out = mees(&["hamiltonian", "--spectra", SYSTEM, "--approach", approach, "--entanglement", "0.6", "--out-dir", d]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let text = stdout(&out);
        assert!((field(&text, "eta") - field(&text, "eta_closed_form")).abs() < 1e-10);
        assert!(field(&text, "ground_state_fidelity") > 1.0 - 1e-9);
        let v = read_json(&dir.path().join("hamiltonian.json"));
        let h: ComplexMatrix = serde_json::from_value(v["interaction"].clone()).unwrap();
        assert!(h.hermiticity_deviation() < 1e-12);
        assert_eq!(v["approach"], approach);
        assert_eq!(v["first_principles"]["eta"].as_f64().unwrap(), field(&text, "eta"));
    }
}

#[test]
fn scan_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = mees(&["scan", "--spectra", SYSTEM, "--check", "--out-dir", d]);
    assert_eq!(code(&out), 0);
    let csv = fs::read_to_string(dir.path().join("scan.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 201);
    assert_eq!(lines[0].split(',').count(), 11);
    let xs: Vec<f64> = lines[1..].iter().map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert!(xs.windows(2).all(|w| w[0] < w[1]) && xs[0] > 0.0 && xs[199] < 1.0);
    let side = read_json(&dir.path().join("scan.json"));
    assert_eq!(side["points"], 200);
    assert_eq!(side["failures"].as_array().unwrap().len(), 0);

    let out = mees(&["scan", "--spectra", SYSTEM, "--approach", "mssg-a,mssg-b", "--points", "10"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "e_norm,mssg-a_eta,mssg-a_e_exp_norm,mssg-b_eta,mssg-b_e_exp_norm");
    assert_eq!(text.lines().count(), 11);
}

fn histogram_total(path: &Path) -> u64 {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "# x_norm,y_norm,count");
    lines.map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap()).sum()
}

#[test]
fn montecarlo_outputs_are_deterministic_and_consistent() {
    let runs: Vec<tempfile::TempDir> = ["1", "3"]
        .into_iter()
        .map(|workers| {
            let dir = tempfile::tempdir().unwrap();
            let out = mees(&[
                "montecarlo", "--spectra", SYSTEM, "--approach", "global-unitary", "--seed", "5", "--count", "3000",
                "--bins", "40x30", "--workers", workers, "--curve-points", "25", "--out-dir",
                dir.path().to_str().unwrap(),
            ]);
            assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
            dir
        })
        .collect();
    for file in ["global_unitary_efficiency.csv", "global_unitary_expense.csv", "global_unitary_mees.csv"] {
        let a = fs::read(runs[0].path().join(file)).unwrap();
        let b = fs::read(runs[1].path().join(file)).unwrap();
        assert_eq!(a, b, "{file}");
    }
    let dir = runs[0].path();
    for stem in ["global_unitary_efficiency", "global_unitary_expense"] {
        let side = read_json(&dir.join(format!("{stem}.json")));
        let total = histogram_total(&dir.join(format!("{stem}.csv")));
        assert_eq!(total + side["skipped"].as_u64().unwrap(), side["count"].as_u64().unwrap());
        assert_eq!(side["bins_x"], 40);
        assert_eq!(side["bins_y"], 30);
        assert_eq!(side["approach"], "global-unitary");
        assert_eq!(side["seed"], 5);
        assert_eq!(side["config"]["sampler"]["measure"], "haar-full");
        let rows = fs::read_to_string(dir.join(format!("{stem}.csv"))).unwrap().lines().count();
        assert_eq!(rows, 1 + 40 * 30);
    }
    let side = read_json(&dir.join("global_unitary_expense.json"));
    assert!((side["y_norm"].as_f64().unwrap() - 26.0).abs() < 1e-12);
    assert!((side["x_norm"].as_f64().unwrap() - 3f64.ln()).abs() < 1e-15);
    let curve = fs::read_to_string(dir.join("global_unitary_mees.csv")).unwrap();
    assert_eq!(curve.lines().count(), 26);
}
