//! End-to-end tests of the mobius binary: exit codes, file formats,
//! and reproducibility of written outputs.

use std::path::Path;
use std::process::{Command, Output};

fn mobius(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mobius"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn sieve_dump_mu_has_ten_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = mobius(&["sieve", "--limit", "10", "--dump", "mu"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let stdout = stdout_of(&out);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "n,value");
    assert_eq!(lines.len(), 11);
    assert_eq!(lines[1], "1,1");
    assert_eq!(lines[4], "4,0");
    assert_eq!(lines[10], "10,1");
}

#[test]
fn transform_without_input_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = mobius(&["transform", "--op", "dirichlet"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = mobius(&["frobnicate"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sieve_over_ceiling_is_capacity_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = mobius(
        &["sieve", "--limit", "200000000", "--dump", "mu"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn transform_csv_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    // mu table -> dirichlet transform = delta_1
    let mu_csv = dir.path().join("mu.csv");
    let out = mobius(
        &[
            "sieve", "--limit", "50", "--dump", "mu", "--output", "mu.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let out = mobius(
        &[
            "transform",
            "--input",
            "mu.csv",
            "--op",
            "dirichlet",
            "--output",
            "delta.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let delta = std::fs::read_to_string(dir.path().join("delta.csv")).unwrap();
    let mut lines = delta.lines();
    assert_eq!(lines.next(), Some("n,value"));
    assert_eq!(lines.next(), Some("1,1"));
    assert!(lines.all(|l| l.ends_with(",0")));

    // and back: moebius transform of delta_1 recovers mu exactly
    let out = mobius(
        &[
            "transform",
            "--input",
            "delta.csv",
            "--op",
            "moebius",
            "--output",
            "mu2.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let a = std::fs::read_to_string(&mu_csv).unwrap();
    let b = std::fs::read_to_string(dir.path().join("mu2.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn transform_rejects_bad_op_and_bad_limit() {
    let dir = tempfile::tempdir().unwrap();
    mobius(
        &[
            "sieve", "--limit", "50", "--dump", "mu", "--output", "mu.csv",
        ],
        dir.path(),
    );
    let out = mobius(
        &["transform", "--input", "mu.csv", "--op", "squarewave"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let out = mobius(
        &[
            "transform",
            "--input",
            "mu.csv",
            "--op",
            "dirichlet",
            "--limit",
            "100",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn truncated_transform_op_parses_bound() {
    let dir = tempfile::tempdir().unwrap();
    // constant one function
    let ones: String = std::iter::once("n,value".to_string())
        .chain((1..=20).map(|n| format!("{n},1")))
        .collect::<Vec<_>>()
        .join("\n");
    std::fs::write(dir.path().join("one.csv"), ones + "\n").unwrap();
    let out = mobius(
        &[
            "transform",
            "--input",
            "one.csv",
            "--op",
            "trunc-dirichlet:2",
            "--output",
            "f2.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("f2.csv")).unwrap();
    // f_2(6) counts divisors 1 and 2
    assert!(text.lines().any(|l| l == "6,2"));
}

#[test]
fn density_multiples_csv_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = mobius(
        &[
            "density",
            "multiples",
            "--elements",
            "2,3",
            "--limit",
            "10000",
            "--checkpoint-min",
            "100",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let stdout = stdout_of(&out);
    assert!(stdout.lines().next().unwrap().starts_with("x,count,ratio"));
    // final ratio near 2/3
    assert!(stdout.contains("multiples density at 10000: 0.666"));
}

#[test]
fn density_prescribed_divisors_routes_agree_via_cli() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for route in ["empirical", "formula", "expansion"] {
        let out = mobius(
            &[
                "density",
                "prescribed-divisors",
                "--set-a",
                "2,3",
                "--set-s",
                "2",
                "--set-t",
                "2",
                "--route",
                route,
                "--limit",
                "20000",
            ],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(0), "route {route}");
        let body = stdout_of(&out);
        let csv: String = body
            .lines()
            .take_while(|l| !l.starts_with("prescribed"))
            .collect();
        outputs.push(csv);
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn density_argument_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = mobius(&["density", "landau", "--primes", "4"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = mobius(
        &[
            "density",
            "prescribed-divisors",
            "--set-a",
            "2",
            "--set-s",
            "3",
            "--limit",
            "1000",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn construct_prescribed_writes_pair_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = mobius(
        &[
            "construct",
            "prescribed",
            "--alpha",
            "0.6",
            "--beta",
            "0.7",
            "--tol",
            "0.01",
            "--limit",
            "50000",
            "--out-dir",
            "run",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let run = dir.path().join("run");
    for name in [
        "prescribed.f.csv",
        "prescribed.g.csv",
        "prescribed.report.json",
        "manifest.json",
    ] {
        assert!(run.join(name).exists(), "{name} missing");
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(run.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["params"]["alpha"], "0.6");
    assert!(manifest["version"].is_string());

    // round trip: the written g re-tabulates to the written f
    let out = mobius(
        &[
            "transform",
            "--input",
            "run/prescribed.g.csv",
            "--op",
            "dirichlet",
            "--output",
            "f_again.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let a = std::fs::read_to_string(run.join("prescribed.f.csv")).unwrap();
    let b = std::fs::read_to_string(dir.path().join("f_again.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn construct_greedy_thin_with_table_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("z.csv"), "x,z\n2,0.5\n").unwrap();
    let out = mobius(
        &[
            "construct",
            "greedy-thin",
            "--z",
            "table:z.csv",
            "--limit",
            "5000",
            "--out-dir",
            "gt",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("0 primes selected"));

    // malformed table -> parse error, exit 2
    std::fs::write(dir.path().join("bad.csv"), "x,z\n9,2.0\n2,0.5\n").unwrap();
    let out = mobius(
        &[
            "construct",
            "greedy-thin",
            "--z",
            "table:bad.csv",
            "--limit",
            "5000",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn experiment_run_writes_report_and_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = mobius(
        &[
            "experiment",
            "run",
            "theorem3",
            "--alpha",
            "0.6",
            "--beta",
            "0.7",
            "--limit",
            "100000",
            "--out-dir",
            "exp",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("theorem3: pass"));
    let report_path = dir.path().join("exp/theorem3.report.json");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["name"], "theorem3");
    assert_eq!(report["verdict"]["pass"], true);
    assert!(report["verdict"]["criteria"].as_array().unwrap().len() == 6);
    assert!(dir.path().join("exp/manifest.json").exists());
}

#[test]
fn experiment_rejects_tiny_limit() {
    let dir = tempfile::tempdir().unwrap();
    let out = mobius(
        &["experiment", "run", "theorem1", "--limit", "100"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn experiment_run_with_explicit_support_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.csv"), "n,value\n1,1\n2,-1\n").unwrap();
    let out = mobius(
        &[
            "experiment",
            "run",
            "theorem1",
            "--g",
            "explicit:g.csv",
            "--limit",
            "20000",
            "--out-dir",
            ".",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("theorem1.report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["verdict"]["pass"], true);
}

#[test]
fn sieve_dump_spf_and_primes() {
    let dir = tempfile::tempdir().unwrap();
    let out = mobius(&["sieve", "--limit", "12", "--dump", "spf"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let stdout = stdout_of(&out);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[1], "2,2");
    assert_eq!(lines[8], "9,3");
    assert_eq!(lines[11], "12,2");

    let out = mobius(&["sieve", "--limit", "12", "--dump", "primes"], dir.path());
    let stdout = stdout_of(&out);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(&lines[1..], &["1,2", "2,3", "3,5", "4,7", "5,11"]);
}

#[test]
fn kronecker_failed_verdict_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    // constant 1: G diverges, H(x)/x = 1
    let ones: String = std::iter::once("n,value".to_string())
        .chain((1..=2000).map(|n| format!("{n},1")))
        .collect::<Vec<_>>()
        .join("\n");
    std::fs::write(dir.path().join("one.csv"), ones + "\n").unwrap();
    let out = mobius(
        &[
            "density",
            "kronecker",
            "--input",
            "one.csv",
            "--limit",
            "2000",
            "--checkpoint-min",
            "100",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_of(&out).contains("verdict: false"));
}

#[test]
fn experiment_all_writes_six_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = mobius(
        &["experiment", "all", "--limit", "10000", "--out-dir", "."],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for name in [
        "theorem1",
        "theorem2",
        "theorem3",
        "prop_best",
        "primes_demo",
        "lemma_checks",
    ] {
        assert!(
            dir.path().join(format!("{name}.report.json")).exists(),
            "{name} report missing"
        );
    }
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn identical_runs_produce_identical_reports() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let args = [
        "experiment",
        "run",
        "lemma-checks",
        "--limit",
        "50000",
        "--out-dir",
        ".",
    ];
    // runtime_ms varies between runs; everything else must be identical
    let strip_runtime = |path: &Path| -> serde_json::Value {
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("runtime_ms");
        v
    };
    assert_eq!(mobius(&args, dir_a.path()).status.code(), Some(0));
    assert_eq!(mobius(&args, dir_b.path()).status.code(), Some(0));
    let a = strip_runtime(&dir_a.path().join("lemma_checks.report.json"));
    let b = strip_runtime(&dir_b.path().join("lemma_checks.report.json"));
    assert_eq!(a, b);
}
