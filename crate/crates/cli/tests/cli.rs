//! End-to-end command-line tests: pipeline smoke, exit codes, and
//! reproduction of a run from its own output header.

use std::collections::HashMap;
use std::path::Path;
use std::process::{Command, Output};

fn opswtw(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opswtw"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = opswtw(args, dir);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn generate_solve_score_pipeline_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    ok(
        &["generate", "--out", "inst", "--sizes", "20", "--count", "1", "--w", "60", "--seed", "7"],
        root,
    );
    let inst = "inst/instance_n0020_s00000007.txt";
    ok(
        &["solve", "--instance", inst, "--solver", "random", "--seed", "1", "--out", "tour.txt"],
        root,
    );
    let stdout = ok(
        &["score", "--track", "1", "--submission", "tour.txt", "--instances", inst, "--samples", "500", "--seed", "2"],
        root,
    );
    assert!(stdout.starts_with("score = "), "{stdout}");
}

#[test]
fn immediate_return_submission_scores_zero() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    ok(
        &["generate", "--out", "inst", "--sizes", "10", "--count", "1", "--w", "40", "--seed", "3"],
        root,
    );
    let inst = "inst/instance_n0010_s00000003.txt";
    let tour: Vec<String> = std::iter::once(1)
        .chain(1..=10)
        .map(|v| v.to_string())
        .collect();
    std::fs::write(root.join("idle.txt"), tour.join(" ") + "\n").unwrap();
    let stdout = ok(
        &["score", "--track", "1", "--submission", "idle.txt", "--instances", inst, "--samples", "200", "--seed", "0"],
        root,
    );
    assert_eq!(stdout.trim(), "score = 0.0000000000");
}

#[test]
fn validation_errors_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    ok(
        &["generate", "--out", "inst", "--sizes", "10", "--count", "1", "--w", "40", "--seed", "3"],
        root,
    );
    let inst = "inst/instance_n0010_s00000003.txt";
    std::fs::write(root.join("short.txt"), "1 2 3\n").unwrap();
    let out = opswtw(
        &["score", "--track", "1", "--submission", "short.txt", "--instances", inst, "--samples", "10", "--seed", "0"],
        root,
    );
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));

    // oracle rejects instances beyond its enumeration limit
    let out = opswtw(
        &["oracle", "--instance", inst, "--fidelity", "10", "--seed", "0"],
        root,
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn io_errors_exit_with_code_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = opswtw(
        &["evaluate", "--instance", "missing.txt", "--tours", "also-missing.txt", "--samples", "10", "--seed", "0"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

/// Outputs carry their resolved configuration; rebuilding the command from
/// that header reproduces the output exactly.
#[test]
fn rerunning_from_the_output_header_reproduces_the_output() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    ok(
        &["generate", "--out", "inst", "--sizes", "12", "--count", "1", "--w", "60", "--seed", "9"],
        root,
    );
    let inst = "inst/instance_n0012_s00000009.txt";
    ok(
        &["solve", "--instance", inst, "--solver", "random", "--seed", "21", "--out", "tour.txt"],
        root,
    );
    let first = std::fs::read_to_string(root.join("tour.txt")).unwrap();

    // parse the header back into key-value pairs
    let mut header = HashMap::new();
    for line in first.lines().filter(|l| l.starts_with("# ")) {
        if let Some((key, value)) = line.trim_start_matches("# ").split_once(" = ") {
            header.insert(key.to_string(), value.to_string());
        }
    }
    assert_eq!(header.get("solver").map(String::as_str), Some("random"));

    let config = format!(
        "random_budget = {}\nrandom_fidelity = {}\n",
        header["random_budget"], header["random_fidelity"]
    );
    std::fs::write(root.join("rerun.cfg"), config).unwrap();
    ok(
        &[
            "solve",
            "--instance",
            &header["instance"],
            "--solver",
            &header["solver"],
            "--seed",
            &header["seed"],
            "--config",
            "rerun.cfg",
            "--out",
            "tour2.txt",
        ],
        root,
    );
    let second = std::fs::read_to_string(root.join("tour2.txt")).unwrap();
    assert_eq!(first, second);
}

#[test]
fn solve_writes_run_logs() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    ok(
        &["generate", "--out", "inst", "--sizes", "6", "--count", "1", "--w", "40", "--seed", "2"],
        root,
    );
    let inst = "inst/instance_n0006_s00000002.txt";
    std::fs::write(
        root.join("fast.cfg"),
        "max_iterations = 20\nsims_per_iteration = 50\nga_population = 30\nga_generations = 2\nga_evals = 30\nga_parents = 8\nga_elites = 2\n",
    )
    .unwrap();
    ok(
        &["solve", "--instance", inst, "--solver", "iterative", "--seed", "4", "--config", "fast.cfg", "--out", "tour.txt", "--log", "run.csv"],
        root,
    );
    let log = std::fs::read_to_string(root.join("run.csv")).unwrap();
    let mut lines = log.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(
        lines.next(),
        Some("instance_id,iter,max_route_size,surrogate_value,upper_bound,feasible_fraction,best_mean")
    );
    assert!(lines.next().is_some(), "log body empty:\n{log}");
}
