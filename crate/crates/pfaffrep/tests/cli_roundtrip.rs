//! End-to-end checks of the `pfaffrep` binary: every subcommand, the JSON
//! round trip between `build` and `verify`, exit codes, determinism of
//! stdout, and the solution cache.

use std::path::Path;
use std::process::{Command, Output};

const FERMAT: &str = "x^5 + y^5 + z^5";

/// Run the binary with a clean environment: no inherited cache directory.
fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pfaffrep"))
        .args(args)
        .env_remove("PFAFFREP_CACHE")
        .output()
        .expect("binary runs")
}

fn run_with_cache(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pfaffrep"))
        .args(args)
        .env("PFAFFREP_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn help_and_version_exit_zero() {
    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    for subcommand in ["template", "solve", "build", "verify", "sweep"] {
        assert!(stdout(&help).contains(subcommand), "help lists {subcommand}");
    }
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn template_renders_in_all_formats() {
    let text = run(&["template", "--degree", "5"]);
    assert_eq!(text.status.code(), Some(0));
    assert!(stdout(&text).contains("matrix: 10x10"));

    let json = run(&["template", "--degree", "5", "--format", "json"]);
    assert_eq!(json.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&json)).expect("valid JSON");
    assert_eq!(parsed["degree"], 5);

    let latex = run(&["template", "--degree", "5", "--format", "latex"]);
    assert_eq!(latex.status.code(), Some(0));
    assert!(stdout(&latex).contains("\\begin{array}"));
}

#[test]
fn solve_reports_the_degree_five_shape() {
    // Bare `solve` emits machine-readable JSON by default.
    let out = run(&["solve", "--degree", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let raw = stdout(&out);
    assert!(raw.contains("\"rank\": 18"));
    assert!(raw.contains("\"free_count\": 24"));
    let solution: serde_json::Value = serde_json::from_str(&raw).expect("valid JSON");
    assert_eq!(solution["certificate"]["rank"], 18);
    assert_eq!(solution["certificate"]["free_count"], 24);
    assert_eq!(solution["certificate"]["solvable_over_integers"], true);

    let text = run(&["solve", "--degree", "5", "--format", "text"]);
    assert_eq!(text.status.code(), Some(0));
    assert!(stdout(&text).contains("rank 18"));
}

#[test]
fn build_verify_round_trip() {
    let dir = tempfile::tempdir().expect("tempdir");
    let rep_path = dir.path().join("fermat.json");

    let build = run(&["build", "--degree", "5", "--poly", FERMAT]);
    assert_eq!(build.status.code(), Some(0), "stderr: {}", stderr(&build));
    std::fs::write(&rep_path, build.stdout).expect("write representation");

    let verify = run(&["verify", "--matrix", rep_path.to_str().unwrap(), "--poly", FERMAT]);
    assert_eq!(verify.status.code(), Some(0), "stderr: {}", stderr(&verify));
    assert!(stdout(&verify).contains("verified: the matrix in"));
}

#[test]
fn verify_rejects_the_wrong_form_with_a_witness() {
    let dir = tempfile::tempdir().expect("tempdir");
    let rep_path = dir.path().join("fermat.json");
    let build = run(&["build", "--degree", "5", "--poly", FERMAT]);
    assert_eq!(build.status.code(), Some(0));
    std::fs::write(&rep_path, build.stdout).expect("write representation");

    let wrong = "x^5 + y^5 + 2*z^5";
    let verify = run(&["verify", "--matrix", rep_path.to_str().unwrap(), "--poly", wrong]);
    assert_eq!(verify.status.code(), Some(1));
    assert_eq!(stdout(&verify).trim(), "NOT verified");
    assert!(
        stderr(&verify).contains("witness: coefficient of z^5 is 1, the form wants 2"),
        "stderr: {}",
        stderr(&verify)
    );
}

#[test]
fn usage_errors_exit_two() {
    // Degree below the supported range.
    let low = run(&["build", "--degree", "4", "--poly", "x^4 + y^4 + z^4"]);
    assert_eq!(low.status.code(), Some(2));
    assert!(stderr(&low).contains("degree 4 is unsupported"));

    // No polynomial given at all.
    let missing = run(&["build", "--degree", "5"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr(&missing).contains("--poly"));

    // Unknown flag: clap's own usage error.
    let unknown = run(&["solve", "--degree", "5", "--frobnicate"]);
    assert_eq!(unknown.status.code(), Some(2));

    // Sweep range starting below the supported degrees.
    let sweep = run(&["sweep", "--from", "4", "--to", "5"]);
    assert_eq!(sweep.status.code(), Some(2));

    // Degree beyond the verified cap needs the explicit override.
    let capped = run(&["solve", "--degree", "26"]);
    assert_eq!(capped.status.code(), Some(2));
    assert!(stderr(&capped).contains("exceeds the verified cap"));
}

#[test]
fn malformed_polynomials_exit_two() {
    let inhomogeneous = run(&["build", "--degree", "5", "--poly", "x^5 + y^3"]);
    assert_eq!(inhomogeneous.status.code(), Some(2));

    let garbage = run(&["build", "--degree", "5", "--poly", "x^5 + $"]);
    assert_eq!(garbage.status.code(), Some(2));

    let rational_over_z = run(&["build", "--degree", "5", "--poly", "1/2*x^5 + y^5 + z^5"]);
    assert_eq!(rational_over_z.status.code(), Some(2));
}

#[test]
fn repeat_invocations_are_byte_identical() {
    // Random free values are seeded, so the same seed gives the same bytes.
    let args = ["build", "--degree", "5", "--poly", FERMAT, "--free", "random:9"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);

    // Sweep JSON excludes wall-clock times; timings go to stderr.
    let args = ["sweep", "--from", "5", "--to", "6", "--samples", "1", "--seed", "3", "--format", "json"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(!stdout(&first).contains("wall_time_ms"));
    assert!(stderr(&first).contains("degree 5:"));
}

#[test]
fn build_over_a_residue_ring() {
    let out = run(&[
        "build", "--degree", "5", "--poly", "x^5 + 4*y^5 + z^5", "--ring", "mod:6", "--format", "text",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("pfaffian check: passed"));
}

#[test]
fn cache_env_var_is_honored() {
    let dir = tempfile::tempdir().expect("tempdir");

    let cold = run_with_cache(&["solve", "--degree", "5", "--format", "json"], dir.path());
    assert_eq!(cold.status.code(), Some(0), "stderr: {}", stderr(&cold));
    let cache_file = dir.path().join("solution_d05.json");
    assert!(cache_file.exists(), "solve populates the cache directory");

    // Warm run loads (and re-verifies) the cached solution; the output
    // must not depend on which path produced it.
    let warm = run_with_cache(&["solve", "--degree", "5", "--format", "json"], dir.path());
    assert_eq!(warm.status.code(), Some(0));
    assert_eq!(cold.stdout, warm.stdout);

    // A corrupted cache file is detected and transparently recomputed.
    std::fs::write(&cache_file, "{ not json").expect("corrupt the cache");
    let repaired = run_with_cache(&["build", "--degree", "5", "--poly", FERMAT], dir.path());
    assert_eq!(repaired.status.code(), Some(0), "stderr: {}", stderr(&repaired));
    let fresh = run(&["build", "--degree", "5", "--poly", FERMAT]);
    assert_eq!(repaired.stdout, fresh.stdout);
}

#[test]
fn sweep_text_table_is_deterministic() {
    let args = ["sweep", "--from", "5", "--to", "6", "--samples", "2", "--rings", "int,mod:6", "--seed", "11"];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr(&first));
    let table = stdout(&first);
    assert!(table.contains("4/4"), "table: {table}");
    assert!(table.contains("seed 11"));
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
}
