//! End-to-end tests of the `povsim` binary: subcommands, exit codes, file
//! schemas, config-file precedence and byte determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn povsim(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_povsim"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary must spawn")
}

fn temp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("povsim_cli_e2e").join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn run_writes_all_artifacts() {
    let dir = temp_dir("run_artifacts");
    let out = povsim(
        &["run", "--n", "400", "--runs", "2", "--out", "artifacts"],
        &dir,
    );
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let artifacts = dir.join("artifacts");
    let results = fs::read_to_string(artifacts.join("results.csv")).unwrap();
    assert!(results.starts_with(
        "seed,acc_mrf,tn_mrf,fp_mrf,fn_mrf,tp_mrf,acc_af,tn_af,fp_af,fn_af,tp_af\n0,"
    ));
    assert_eq!(results.lines().count(), 3);
    let disagreements = fs::read_to_string(artifacts.join("disagreements.csv")).unwrap();
    assert!(disagreements
        .starts_with("ID,Z,X1,X2,X3,X4,X5,X6,X7,X8,X9,X10,mrf_pred,af_pred"));
    for (idx, row) in disagreements.lines().skip(1).enumerate() {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 14, "row {row:?}");
        assert_eq!(fields[0], (idx + 1).to_string(), "IDs number from 1");
        assert_ne!(fields[12], fields[13], "rows must be disagreements");
        assert!(fields[1..].iter().all(|f| *f == "0" || *f == "1"));
    }
    assert!(artifacts.join("ppv_npv.svg").exists());
    let sidecar = fs::read_to_string(artifacts.join("ppv_npv.csv")).unwrap();
    assert_eq!(sidecar.lines().count(), 1 + 2 * 2, "one row per run per method");
    assert!(fs::read_to_string(artifacts.join("summary.txt"))
        .unwrap()
        .contains("mean accuracy (mrf)"));
    assert!(stdout(&out).contains("completed 2 run(s)"));
}

#[test]
fn run_is_byte_deterministic() {
    let dir = temp_dir("run_determinism");
    let args = ["run", "--n", "600", "--runs", "3", "--out"];
    let out_a = povsim(&[&args[..], &["a"]].concat(), &dir);
    let out_b = povsim(&[&args[..], &["b"]].concat(), &dir);
    assert!(out_a.status.success() && out_b.status.success());
    for file in ["results.csv", "disagreements.csv", "ppv_npv.svg", "ppv_npv.csv", "summary.txt"] {
        assert_eq!(
            fs::read(dir.join("a").join(file)).unwrap(),
            fs::read(dir.join("b").join(file)).unwrap(),
            "{file} differs between identical invocations"
        );
    }
}

#[test]
fn gen_then_classify_round_trip() {
    let dir = temp_dir("gen_classify");
    let out = povsim(
        &["gen", "--n", "2000", "--seed", "5", "--out", "pop.csv"],
        &dir,
    );
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let pop = fs::read_to_string(dir.join("pop.csv")).unwrap();
    assert!(pop.starts_with("id,Z,X1,"));
    assert_eq!(pop.lines().count(), 2001);

    let out = povsim(
        &["classify", "--input", "pop.csv", "--out", "preds.csv"],
        &dir,
    );
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("records: 2000  train: 1500  test: 500"), "{text}");
    assert!(text.contains("agreement:"), "{text}");
    let preds = fs::read_to_string(dir.join("preds.csv")).unwrap();
    assert!(preds.starts_with("ID,Z,X1"));
    assert_eq!(preds.lines().count(), 501);
}

#[test]
fn gen_is_deterministic_per_seed_and_run_index() {
    let dir = temp_dir("gen_determinism");
    povsim(&["gen", "--n", "300", "--out", "a.csv"], &dir);
    povsim(&["gen", "--n", "300", "--out", "b.csv"], &dir);
    povsim(&["gen", "--n", "300", "--run-index", "1", "--out", "c.csv"], &dir);
    let a = fs::read(dir.join("a.csv")).unwrap();
    let b = fs::read(dir.join("b.csv")).unwrap();
    let c = fs::read(dir.join("c.csv")).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c, "different run indices must give different populations");
}

#[test]
fn config_file_sets_values_and_flags_override() {
    let dir = temp_dir("config_file");
    fs::write(
        dir.join("lab.conf"),
        "# smoke settings\nn = 500\nruns = 2\nmatch-prob = 0\n",
    )
    .unwrap();
    let out = povsim(
        &["run", "--config", "lab.conf", "--runs", "1", "--out", "out"],
        &dir,
    );
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("completed 1 run(s)"));
    let results = fs::read_to_string(dir.join("out/results.csv")).unwrap();
    assert_eq!(results.lines().count(), 2, "config file n/runs applied");
}

#[test]
fn usage_errors_exit_2() {
    let dir = temp_dir("usage_errors");
    for args in [
        &["run", "--bogus", "1"][..],
        &["frobnicate"][..],
        &["run", "--p-poor", "1.5"][..],
        &["run", "--n", "abc"][..],
        &["run", "--config", "missing.conf"][..],
        &["classify"][..],
        &[][..],
    ] {
        let out = povsim(args, &dir);
        assert_eq!(
            out.status.code(),
            Some(2),
            "args {args:?}, stderr: {}",
            stderr(&out)
        );
        assert!(!stderr(&out).is_empty(), "diagnostic expected for {args:?}");
    }
}

#[test]
fn runtime_errors_exit_1() {
    let dir = temp_dir("runtime_errors");
    // Valid flags, but the input file does not exist.
    fs::write(dir.join("empty.csv"), "id,Z,X1,X2\n").unwrap();
    let out = povsim(&["classify", "--input", "nope.csv"], &dir);
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr(&out));
    let out = povsim(&["classify", "--input", "empty.csv"], &dir);
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr(&out));
}

#[test]
fn help_prints_usage_and_exits_0() {
    let dir = temp_dir("help");
    let out = povsim(&["--help"], &dir);
    assert!(out.status.success());
    let text = stdout(&out);
    for needle in ["povsim run", "povsim gen", "povsim classify", "--match-prob"] {
        assert!(text.contains(needle), "usage is missing {needle:?}");
    }
}
