//! End-to-end checks of the `amf` binary: output shapes and exit codes.

use std::process::{Command, Output};

fn amf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amf")).args(args).output().expect("run amf")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn weyl_element_and_omega() {
    let o = amf(&["weyl", "--type", "C", "--rank", "2", "--element", "s0s1s0"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("s0s1s0: length 3"));

    let o = amf(&["weyl", "--type", "C", "--rank", "2", "--omega"]);
    assert!(stdout(&o).contains("Omega is trivial"));

    let o = amf(&["weyl", "--type", "A", "--rank", "2", "--format", "json"]);
    assert!(o.status.success());
    serde_json::from_str::<serde_json::Value>(&stdout(&o)).unwrap();
}

#[test]
fn invalid_inputs_exit_with_code_two() {
    assert_eq!(amf(&["weyl", "--type", "Q", "--rank", "2"]).status.code(), Some(2));
    assert_eq!(amf(&["weyl", "--type", "C"]).status.code(), Some(2));
    assert_eq!(amf(&["weyl", "--type", "C", "--rank", "2", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(amf(&["hecke", "--disc", "3", "--n", "2", "--primes", "3"]).status.code(), Some(2));
    assert_eq!(amf(&["hecke", "--disc", "6", "--n", "2", "--primes", "5"]).status.code(), Some(2));
    assert_eq!(amf(&["bench", "--disc", "3", "--n", "2", "--prime", "2", "--modes", "foo"]).status.code(), Some(2));
    assert_eq!(amf(&["--workers", "0", "weyl", "--type", "C", "--rank", "2"]).status.code(), Some(2));
}

#[test]
fn class_bound_exits_with_code_three() {
    let o = amf(&["genus", "--disc", "7", "--n", "2", "--class-bound", "1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn eichler_elements() {
    let o = amf(&["eichler", "--type", "C", "--rank", "2", "--pair", "1,2"]);
    assert_eq!(stdout(&o).trim(), "nu_{1,2} = (q^3 + q^2 + q + 1)·1 + [s0]");

    let o = amf(&["eichler", "--type", "C", "--rank", "2", "--pair", "1,2", "--eval-q", "2"]);
    assert_eq!(stdout(&o).trim(), "nu_{1,2} = 15·1 + [s0]");

    let o = amf(&["eichler", "--type", "G", "--rank", "2", "--generators"]);
    assert!(stdout(&o).contains("generators: w1"));
}

#[test]
fn hecke_output_is_stable_under_caching() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let out = dir.path().join("h.json");
    let args = |o: &str| {
        amf(&["hecke", "--disc", "3", "--n", "2", "--primes", "2", "--cache-dir", cache, "--format", "json", "--out", o])
    };
    assert!(args(out.to_str().unwrap()).status.success());
    let cold = std::fs::read_to_string(&out).unwrap();
    let warm_path = dir.path().join("h2.json");
    assert!(args(warm_path.to_str().unwrap()).status.success());
    assert_eq!(cold, std::fs::read_to_string(&warm_path).unwrap());

    let v: serde_json::Value = serde_json::from_str(&cold).unwrap();
    assert_eq!(v["class_number"], 1);
    assert!(v["eigenvalues"].as_array().unwrap().len() >= 2);

    let text = stdout(&amf(&["hecke", "--disc", "3", "--n", "2", "--primes", "2"]));
    assert!(text.contains("h_2(s0)"));
}

#[test]
fn bench_csv_reports_lattice_counts() {
    let o = amf(&["bench", "--disc", "3", "--n", "2", "--prime", "2", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("mode,prime,lattice_evals,wall_ms"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][..3], &["eichler", "2", "30"]);
    assert_eq!(&rows[1][..3], &["direct", "2", "150"]);
}
