//! End-to-end tests of the `pid` binary: output determinism, exit codes,
//! file round-trips, and the negative controls of the counterexample
//! verification.

mod common;

use pid_cli::verify_counterexample_checks;
use pid_core::fixtures;
use pid_core::io::{parse_distribution, render_distribution};
use pid_core::{JointDistribution, SetPartition, SolverConfig};
use std::io::Write as _;
use std::process::{Command, Output};

fn pid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pid"))
        .args(args)
        .output()
        .expect("binary spawns")
}

fn pid_json(args: &[&str]) -> (serde_json::Value, i32) {
    let out = pid(args);
    let stdout = String::from_utf8(out.stdout).expect("stdout is UTF-8");
    let value = serde_json::from_str(&stdout)
        .unwrap_or_else(|e| panic!("stdout is JSON ({e}): {stdout}"));
    (value, out.status.code().expect("process exits"))
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let args = [
        "decompose",
        "--fixture",
        "counterexample",
        "--measure",
        "ext-broja",
        "--full-table",
    ];
    let first = pid(&args);
    let second = pid(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout, "runs must not differ");
    assert!(!first.stdout.is_empty());
}

#[test]
fn input_errors_exit_with_code_two() {
    let out = pid(&["decompose", "--dist", "/no/such/file", "--measure", "imin"]);
    assert_eq!(out.status.code(), Some(2));

    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "a b c 0.5").unwrap();
    writeln!(file, "a b c 0.5").unwrap();
    let out = pid(&[
        "decompose",
        "--dist",
        file.path().to_str().unwrap(),
        "--measure",
        "imin",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "error names the line: {stderr}");

    let out = pid(&["decompose", "--fixture", "nope", "--measure", "imin"]);
    assert_eq!(out.status.code(), Some(2));

    let out = pid(&["decompose", "--fixture", "and", "--measure", "bogus"]);
    assert_eq!(out.status.code(), Some(2));

    let out = pid(&["decompose", "--measure", "imin"]);
    assert_eq!(out.status.code(), Some(2), "a source is required");

    // Usage errors from the argument parser share the input exit code.
    let out = pid(&["table", "--bogus-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_flags_exactly_the_known_divergent_cell() {
    let (value, code) = pid_json(&["table"]);
    assert_eq!(code, 1, "the table command reports the known mismatch");
    assert_eq!(value["ok"], serde_json::json!(false));
    let mut mismatches = Vec::new();
    for row in value["rows"].as_array().unwrap() {
        for cell in row["cells"].as_array().unwrap() {
            if !cell["ok"].as_bool().unwrap() {
                mismatches.push((
                    row["name"].as_str().unwrap().to_string(),
                    cell["column"].as_str().unwrap().to_string(),
                ));
            }
        }
    }
    assert_eq!(
        mismatches,
        vec![("f1".to_string(), "ext-broja-si".to_string())],
        "exactly one cell diverges from the reference values"
    );
    // Spot-check a solver-backed cell against its closed form.
    let and_or = &value["rows"][1];
    assert_eq!(and_or["name"], serde_json::json!("and/or"));
    let si = and_or["cells"][2]["value"].as_f64().unwrap();
    assert!((si - 0.75 * (4.0f64 / 3.0).log2()).abs() < 1e-5);
}

#[test]
fn verify_counterexample_passes_end_to_end() {
    let (value, code) = pid_json(&["verify-counterexample"]);
    assert_eq!(code, 0);
    assert_eq!(value["ok"], serde_json::json!(true));
    let checks = value["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 8);
    for check in checks {
        assert_eq!(
            check["ok"],
            serde_json::json!(true),
            "check failed: {}",
            check["name"]
        );
    }
}

#[test]
fn file_input_round_trips_through_the_renderer() {
    let dist = fixtures::named("and").unwrap();
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(render_distribution(&dist, None).as_bytes())
        .unwrap();

    let (from_file, code_file) = pid_json(&[
        "decompose",
        "--dist",
        file.path().to_str().unwrap(),
        "--measure",
        "broja",
    ]);
    let (from_fixture, code_fixture) =
        pid_json(&["decompose", "--fixture", "and", "--measure", "broja"]);
    assert_eq!((code_file, code_fixture), (0, 0));

    // The canonical digest ignores the source, so both inputs hash alike.
    assert_eq!(
        from_file["input"]["digest"], from_fixture["input"]["digest"],
        "file and fixture describe the same distribution"
    );
    for field in ["si", "ui1", "ui2", "ci", "mi_s_x1x2"] {
        let a = from_file["decomposition"][field].as_f64().unwrap();
        let b = from_fixture["decomposition"][field].as_f64().unwrap();
        assert!((a - b).abs() <= 1e-15, "{field}: {a} vs {b}");
    }
}

#[test]
fn rational_probabilities_parse_exactly() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "# a fair XOR written with fractions").unwrap();
    writeln!(file, "0 0 0 1/4").unwrap();
    writeln!(file, "1 0 1 1/4").unwrap();
    writeln!(file, "1 1 0 1/4").unwrap();
    writeln!(file, "0 1 1 1/4").unwrap();
    let (value, code) = pid_json(&[
        "decompose",
        "--dist",
        file.path().to_str().unwrap(),
        "--measure",
        "imin",
    ]);
    assert_eq!(code, 0);
    let ci = value["decomposition"]["ci"].as_f64().unwrap();
    assert!((ci - 1.0).abs() < 1e-12, "XOR is one bit of synergy: {ci}");
}

#[test]
fn blackwell_flips_with_the_target_coarsening() {
    let (fine, code) = pid_json(&[
        "blackwell",
        "--fixture",
        "counterexample",
        "--direction",
        "1of2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(fine["verdict"]["status"], serde_json::json!("infeasible"));
    assert!(fine["verdict"]["phase1"].as_f64().unwrap() > 1e-6);

    let (coarse, code) = pid_json(&[
        "blackwell",
        "--fixture",
        "counterexample",
        "--target-map",
        "0,0,1",
        "--direction",
        "1of2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(coarse["verdict"]["status"], serde_json::json!("feasible"));
    assert!(coarse["verdict"]["max_residual"].as_f64().unwrap() <= 1e-9);

    let out = pid(&[
        "blackwell",
        "--fixture",
        "and",
        "--direction",
        "sideways",
    ]);
    assert_eq!(out.status.code(), Some(2), "unknown direction is an input error");
}

#[test]
fn nats_flag_rescales_information_quantities() {
    let (value, code) = pid_json(&["decompose", "--fixture", "copy", "--measure", "imin", "--nats"]);
    assert_eq!(code, 0);
    assert_eq!(value["units"], serde_json::json!("nats"));
    let si = value["decomposition"]["si"].as_f64().unwrap();
    assert!((si - std::f64::consts::LN_2).abs() < 1e-11, "si = {si}");
}

#[test]
fn plain_mode_prints_text_not_json() {
    let out = pid(&["decompose", "--fixture", "copy", "--measure", "imin", "--plain"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("shared"), "labels present: {text}");
    assert!(text.contains("ok: true"));
    assert!(serde_json::from_str::<serde_json::Value>(&text).is_err());
}

#[test]
fn timings_are_opt_in() {
    let (without, _) = pid_json(&["decompose", "--fixture", "copy", "--measure", "imin"]);
    assert!(without.get("elapsed_ms").is_none());
    let (with, _) = pid_json(&["decompose", "--fixture", "copy", "--measure", "imin", "--timings"]);
    assert!(with.get("elapsed_ms").is_some());
}

#[test]
fn solver_flags_are_echoed_in_the_report() {
    let (value, code) = pid_json(&[
        "decompose",
        "--fixture",
        "and",
        "--measure",
        "broja",
        "--tol",
        "1e-7",
        "--restarts",
        "3",
        "--seed",
        "9",
    ]);
    assert_eq!(code, 0);
    assert_eq!(value["config"]["objective_tolerance"].as_f64(), Some(1e-7));
    assert_eq!(value["config"]["restarts"].as_u64(), Some(3));
    assert_eq!(value["config"]["seed"].as_u64(), Some(9));
    assert_eq!(
        value["decomposition"]["diagnostics"]["restarts"].as_u64(),
        Some(3)
    );
}

#[test]
fn full_table_flag_controls_extraction_detail() {
    let (lean, _) = pid_json(&["extract", "--fixture", "copy", "--measure", "broja-si"]);
    assert!(lean["extraction"].get("table").is_none());
    let (full, _) = pid_json(&[
        "extract",
        "--fixture",
        "copy",
        "--measure",
        "broja-si",
        "--full-table",
    ]);
    let table = full["extraction"]["table"].as_array().unwrap();
    assert_eq!(table.len(), 15, "all partitions of a four-symbol target");
}

// ---------------------------------------------------------------------
// Negative controls for the counterexample verification: the checks must
// actually be able to fail.

#[test]
fn negative_control_identity_partition_fails_maximization() {
    let dist = fixtures::named("counterexample").unwrap();
    let rational = fixtures::named_rational("counterexample");
    let identity = SetPartition::identity(dist.sizes()[0]).unwrap();
    let checks = verify_counterexample_checks(
        &dist,
        rational.as_ref(),
        &identity,
        &SolverConfig::default(),
    )
    .unwrap();

    let by_name = |name: &str| {
        checks
            .iter()
            .find(|c| c.name == name)
            .unwrap_or_else(|| panic!("check {name} missing"))
    };
    // The identity coarsening trivially screens X1 off from the target...
    assert!(by_name("conditional-independence").ok);
    // ...but it does not produce a garbling and does not kill the unique
    // information, so it cannot solve the maximization.
    assert!(!by_name("quotient-garbling-feasible").ok);
    assert!(!by_name("quotient-unique-information-zero").ok);
    assert!(!by_name("partition-solves-maximization").ok);
}

#[test]
fn negative_control_corrupted_distribution_fails_some_check() {
    let original = fixtures::named("counterexample").unwrap();
    let mut pmf = original.pmf().to_vec();
    let donor = pmf.iter().position(|&p| p > 0.1).unwrap();
    let receiver = pmf.iter().rposition(|&p| p > 0.1).unwrap();
    assert_ne!(donor, receiver);
    pmf[donor] -= 0.05;
    pmf[receiver] += 0.05;
    let corrupted = JointDistribution::new(
        original.axis_names().to_vec(),
        original.sizes().to_vec(),
        pmf,
    )
    .unwrap();
    // Round-trip through the text format to get matching exact data.
    let parsed = parse_distribution(&render_distribution(&corrupted, None)).unwrap();

    let checks = verify_counterexample_checks(
        &parsed.joint,
        Some(&parsed.rational),
        &fixtures::counterexample_partition(),
        &SolverConfig::default(),
    )
    .unwrap();
    assert!(
        checks.iter().any(|c| !c.ok),
        "a perturbed joint must break at least one claim"
    );
}
