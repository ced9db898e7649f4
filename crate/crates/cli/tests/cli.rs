//! End-to-end tests of the `adl` binary: argument handling, exit codes,
//! and the exact shape of text and JSON output.

use std::io::Write;
use std::process::Command;

use tempfile::NamedTempFile;

/// Run the binary and return (exit code, stdout, stderr).
fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_adl"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("no signal"),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn temp_theory(src: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().expect("temp file");
    f.write_all(src.as_bytes()).expect("write");
    f
}

#[test]
fn check_reports_counts_and_succeeds() {
    let (code, stdout, stderr) = run(&["check", &fixture("guilty.adl")]);
    assert_eq!(code, 0, "stderr: {stderr}");
    assert!(stdout.trim_end().ends_with("guilty.adl: ok (2 facts, 4 rules, 1 priorities)"));

    // Multiple files, one line each, in argument order.
    let (code, stdout, _) = run(&["check", &fixture("empty.adl"), &fixture("team_chain.adl")]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].contains("empty.adl: ok (0 facts, 0 rules, 0 priorities)"));
    assert!(lines[1].contains("team_chain.adl: ok (0 facts, 8 rules, 3 priorities)"));
}

#[test]
fn check_rejects_invalid_theories_with_spans() {
    let f = temp_theory("r1: => p.\nr2: => ~p.\nr1 > r2.\nr2 > r1.\n");
    let path = f.path().display().to_string();
    let (code, _, stderr) = run(&["check", &path]);
    assert_eq!(code, 1);
    assert!(stderr.contains("semantic error"), "stderr: {stderr}");
    assert!(
        stderr.contains("superiority relation is cyclic: r1 > r2 > r1")
            || stderr.contains("superiority relation is cyclic: r2 > r1 > r2"),
        "stderr: {stderr}"
    );
    // Diagnostics carry file:line:column spans.
    assert!(stderr.contains(&format!("{path}:")), "stderr: {stderr}");
}

#[test]
fn missing_files_are_usage_errors() {
    let (code, _, stderr) = run(&["check", "/no/such/file.adl"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("error:"));

    // A mix of good and missing files still reports the good one but
    // keeps the usage exit code.
    let (code, stdout, _) = run(&["check", &fixture("guilty.adl"), "/no/such/file.adl"]);
    assert_eq!(code, 3);
    assert!(stdout.contains("guilty.adl: ok"));
}

#[test]
fn solve_prints_signed_conclusions() {
    let (code, stdout, _) = run(&["solve", &fixture("guilty.adl")]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert!(lines.contains(&"+D evidenceA"));
    assert!(lines.contains(&"+pa ~guilty"));
    assert!(lines.contains(&"-de ~guilty"));
    assert!(lines.contains(&"-de guilty"));
    // Without --undecided no question marks appear.
    assert!(!stdout.contains('?'));
}

#[test]
fn solve_json_is_machine_readable() {
    let (code, stdout, _) = run(&["solve", &fixture("guilty.adl"), "--format", "json"]);
    assert_eq!(code, 0);
    let records: serde_json::Value = serde_json::from_str(&stdout).expect("valid json");
    let records = records.as_array().expect("array");
    assert!(!records.is_empty());
    for r in records {
        assert!(r["literal"].is_string());
        assert!(r["tag"].is_string());
        assert!(["+", "-", "?"].contains(&r["verdict"].as_str().unwrap()));
    }

    let (code, stdout, _) = run(&["solve", &fixture("empty.adl"), "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim_end(), "[]");
}

#[test]
fn solve_surfaces_undecided_verdicts_on_request() {
    let (code, stdout, _) = run(&["solve", &fixture("self_attack.adl"), "--undecided"]);
    assert_eq!(code, 0);
    // The self-undercutting rule leaves p undecided under the blocking
    // regimes, which judge the attack by p's own provability; the
    // propagating regimes judge it by support and settle on refutation.
    let lines: Vec<&str> = stdout.lines().collect();
    assert!(lines.contains(&"?pa p"));
    assert!(lines.contains(&"?pa* p"));
    assert!(lines.contains(&"-de p"));
}

#[test]
fn wellfounded_semantics_decides_positive_loops() {
    // A premise that only supports itself: the completion is a tautology,
    // so the Kunen reading stays agnostic, while the well-founded reading
    // rejects the ungrounded loop.
    let f = temp_theory("r1: p => p.\n");
    let path = f.path().display().to_string();
    let (code, stdout, _) = run(&["solve", &path, "--undecided"]);
    assert_eq!(code, 0);
    assert!(stdout.lines().any(|l| l == "?pa p"), "stdout: {stdout}");
    let (code, stdout, _) = run(&["solve", &path, "--semantics", "wf"]);
    assert_eq!(code, 0);
    assert!(stdout.lines().any(|l| l == "-pa p"), "stdout: {stdout}");
}

#[test]
fn query_evaluates_expressions_under_a_context() {
    // Innocence holds under the blocking regime...
    let (code, stdout, _) =
        run(&["query", &fixture("guilty.adl"), "--context", "pa", "free ~guilty"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim_end(), "proved");
    // ...but not under propagation, where the ambiguity travels.
    let (code, stdout, _) =
        run(&["query", &fixture("guilty.adl"), "--context", "de", "free ~guilty"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim_end(), "refuted");
    // An explicitly pinned premise ignores the context.
    let (code, stdout, _) =
        run(&["query", &fixture("compensation.adl"), "--context", "pa", "[de] ~guilty"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim_end(), "refuted");
    // Support-mode query, bare-tag shorthand for the annotation.
    let (code, stdout, _) = run(&[
        "query",
        &fixture("team_chain.adl"),
        "--context",
        "pa",
        "--mode",
        "supported",
        "de q",
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim_end(), "refuted");
}

#[test]
fn query_warns_about_unknown_literals() {
    let (code, stdout, stderr) =
        run(&["query", &fixture("guilty.adl"), "--context", "pa", "zzz"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim_end(), "refuted");
    assert!(stderr.contains("`zzz` does not occur"), "stderr: {stderr}");
    // The fail form of an unprovable premise holds.
    let (code, stdout, stderr) =
        run(&["query", &fixture("guilty.adl"), "--context", "pa", "fail zzz"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim_end(), "proved");
    assert!(stderr.contains("does not occur"));
}

#[test]
fn query_rejects_malformed_expressions() {
    let (code, _, stderr) =
        run(&["query", &fixture("guilty.adl"), "--context", "pa", "fail ["]);
    assert_eq!(code, 3);
    assert!(!stderr.is_empty());
    let (code, _, stderr) =
        run(&["query", &fixture("guilty.adl"), "--context", "pa", "p q"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("expected end of expression"), "stderr: {stderr}");
}

#[test]
fn compare_runs_the_oracle_on_plain_files() {
    let (code, stdout, _) =
        run(&["compare", &fixture("guilty.adl"), &fixture("team_chain.adl")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("guilty.adl: 0 mismatches, 0 violations"));
    assert!(stdout.contains("total: 2 inputs, 0 mismatches, 0 violations"));
}

#[test]
fn compare_skips_the_oracle_for_annotated_files() {
    // compensation.adl pins a premise to [de], so the oracle leg does not
    // apply; the inclusion check still runs.
    let (code, stdout, _) = run(&["compare", &fixture("compensation.adl")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("oracle leg skipped (annotated), 0 violations"));

    let (code, _, stderr) =
        run(&["compare", &fixture("compensation.adl"), "--oracle"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("--oracle"), "stderr: {stderr}");
}

#[test]
fn compare_flags_strength_violations_with_exit_two() {
    // A free fail over a premise that team regimes prove and individual
    // regimes refute: provability of h then runs against the strength
    // order, which compare must report as violations.
    let f = temp_theory(
        "r1: => p.\nr2: => p.\nr3: => ~p.\nr4: => ~p.\n\
         r1 > r3.\nr2 > r4.\nr9: fail p => h.\n",
    );
    let path = f.path().display().to_string();
    let (code, stdout, _) = run(&["compare", &path]);
    assert_eq!(code, 2, "stdout: {stdout}");
    assert!(stdout.contains("oracle leg skipped"));
    assert!(stdout.contains("2 violations"), "stdout: {stdout}");
}

#[test]
fn compare_random_checks_generated_theories() {
    let (code, stdout, _) = run(&["compare", "--random", "5", "--seed", "11"]);
    assert_eq!(code, 0, "stdout: {stdout}");
    assert!(stdout.contains("total: 5 inputs, 0 mismatches, 0 violations"));
}

#[test]
fn compare_json_reports_schema_and_rows() {
    let (code, stdout, _) =
        run(&["compare", &fixture("guilty.adl"), "--format", "json"]);
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&stdout).expect("valid json");
    assert_eq!(report["schema"], 1);
    let rows = report["rows"].as_array().expect("rows");
    assert_eq!(rows.len(), 1);
    assert!(rows[0]["input"].as_str().unwrap().ends_with("guilty.adl"));
    assert_eq!(rows[0]["mismatches"], 0);
    assert_eq!(rows[0]["violations"], 0);
}

#[test]
fn bench_output_is_structurally_deterministic() {
    let args = ["bench", "--sizes", "100,400", "--seed", "3"];
    let (code, first, _) = run(&args);
    assert_eq!(code, 0);
    let (_, second, _) = run(&args);
    let structure = |s: &str| -> Vec<(String, String)> {
        s.lines()
            .skip(1)
            .map(|l| {
                let mut cols = l.split(',');
                (cols.next().unwrap().to_string(), cols.next().unwrap().to_string())
            })
            .collect()
    };
    assert!(first.starts_with("size,ground_symbols,millis\n"));
    assert_eq!(first.lines().count(), 3);
    // Sizes and ground symbol counts are seed-determined; only timings may
    // differ between runs.
    assert_eq!(structure(&first), structure(&second));

    let (code, stdout, _) = run(&["bench", "--sizes", "100", "--seed", "3", "--format", "json"]);
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&stdout).expect("valid json");
    assert_eq!(report["schema"], 1);
    assert!(report["rows"][0]["ground_symbols"].as_u64().unwrap() > 0);
}

#[test]
fn usage_errors_exit_three() {
    let (code, _, _) = run(&[]);
    assert_eq!(code, 3);
    let (code, _, stderr) = run(&["solve", &fixture("guilty.adl"), "--format", "yaml"]);
    assert_eq!(code, 3);
    assert!(!stderr.is_empty());
    let (code, stdout, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("Usage"));
    let (code, stdout, _) = run(&["--version"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("adl"));
}
