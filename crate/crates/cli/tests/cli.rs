//! End-to-end checks of the compiled binary: argument parsing, config
//! loading, artifact placement, and the documented exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dilatia(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dilatia"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

#[test]
fn prep_with_config_file_writes_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    fs::write(&config, r#"{"n_states": 4, "shots": [256], "seed": 5}"#).unwrap();
    let out = dilatia(
        &["prep", "--config", "run.json", "--out", "artifacts"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = fs::read_to_string(dir.path().join("artifacts/table1.csv")).unwrap();
    assert!(table.contains("# seed = 5"));
    assert!(table.contains("# n_states = 4"));
    assert!(table.starts_with("# experiment = prep"));
    assert_eq!(table.lines().filter(|l| !l.starts_with('#')).count(), 2);
}

#[test]
fn dephasing_and_damping_write_their_figures() {
    let dir = tempfile::tempdir().unwrap();
    let out = dilatia(&["dephasing", "--out", "deph"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for file in ["deph/dephasing.csv", "deph/fig3_coherence.svg", "deph/fig4_bloch.svg"] {
        assert!(dir.path().join(file).exists(), "{file} missing");
    }

    let out = dilatia(
        &["damping", "--out", "damp", "--shots", "512"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for file in ["damp/damping.csv", "damp/fig5_damping.svg"] {
        assert!(dir.path().join(file).exists(), "{file} missing");
    }
}

#[test]
fn decompose_prints_the_report_and_writes_qasm() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("op.txt"), "0.8 0.5+0.1j\n").unwrap();
    let out = dilatia(
        &["decompose", "--input", "op.txt", "--qasm", "--epsilon", "0.01"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("singular values:"));
    assert!(stdout.contains("dilated diagonal gates (exact):"));
    assert!(stdout.contains("epsilon = 0.01"));
    let qasm = fs::read_to_string(dir.path().join("op.qasm")).unwrap();
    assert!(qasm.starts_with("OPENQASM 2.0;"));
}

#[test]
fn malformed_config_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.json"), "{not json").unwrap();
    let out = dilatia(&["prep", "--config", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    let out = dilatia(&["damping", "--shots", "0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn conflicting_sampling_flags_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dilatia(&["prep", "--shots", "64", "--exact"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn contraction_violation_exits_with_code_4_unless_rescaled() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("big.txt"), "2.0 0.1\n").unwrap();
    let out = dilatia(&["decompose", "--input", "big.txt"], dir.path());
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("contraction"));

    let out = dilatia(
        &["decompose", "--input", "big.txt", "--rescale"],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("rescaled: yes"));
}

#[test]
fn parse_errors_exit_with_code_2_and_name_the_location() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("junk.txt"), "1 2\n3 oops\n").unwrap();
    let out = dilatia(&["decompose", "--input", "junk.txt"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "stderr: {stderr}");
}

#[test]
fn binary_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for run in ["a", "b"] {
        let out = dilatia(
            &["damping", "--shots", "256", "--out", run],
            dir.path(),
        );
        assert!(out.status.success());
    }
    let first = fs::read(dir.path().join("a/damping.csv")).unwrap();
    let second = fs::read(dir.path().join("b/damping.csv")).unwrap();
    assert_eq!(first, second);
}
