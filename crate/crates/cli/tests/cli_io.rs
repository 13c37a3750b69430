//! File-format round trips, exit codes, and report determinism.

use std::path::{Path, PathBuf};
use std::process::Command;

use equilibrate::instances::{generate_instances, InstanceFamily};
use equilibrate_cli::format::{read_problem, write_problem, ProblemFile};
use equilibrate_cli::{run, CommandCfg, MetricMode, RunConfig};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn tmp_dir(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn config(command: CommandCfg, out: &Path, seed: u64) -> RunConfig {
    RunConfig { command, out_dir: out.to_path_buf(), seed, tol: 1e-8, k_max: 10_000 }
}

#[test]
fn problem_files_roundtrip_bit_exactly() {
    let dir = tmp_dir("roundtrip");
    for family in [InstanceFamily::LassoDense, InstanceFamily::LassoDiagonal, InstanceFamily::QuadraticPair] {
        for inst in generate_instances(family, 4, 2, 99).unwrap() {
            let path = dir.join(format!("{}.json", inst.id));
            write_problem(&path, &inst.spec).unwrap();
            let back = read_problem(&path).unwrap();
            assert_eq!(back.q_mat, inst.spec.q_mat);
            assert_eq!(back.q_vec, inst.spec.q_vec);
            assert_eq!(back.alpha, inst.spec.alpha);
            assert_eq!(back.f_mat, inst.spec.f_mat);
            assert_eq!(back.a_mat, inst.spec.a_mat);
            assert_eq!(back.b_mat, inst.spec.b_mat);
            assert_eq!(back.c_vec, inst.spec.c_vec);
        }
    }
}

#[test]
fn lasso_fixture_parses_and_solves_in_one_iteration_with_optimal_metric() {
    let out = tmp_dir("fixture_optimal");
    let cfg = config(
        CommandCfg::Solve { input: fixture("lasso1d.json"), mode: MetricMode::Optimal },
        &out,
        42,
    );
    let code = run(&cfg).unwrap();
    assert_eq!(code, 0);
    let solution: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("solution.json")).unwrap()).unwrap();
    assert_eq!(solution["iterations"], 1);
    assert!((solution["x"][0].as_f64().unwrap() - 2.0).abs() < 1e-8);
    assert!((solution["lambda"][0].as_f64().unwrap() - 1.0).abs() < 1e-8);
    // The selected metric is the ratio |x*|/|lambda*| = 2.
    assert!((solution["metric_m"][0].as_f64().unwrap() - 2.0).abs() < 1e-7);
    assert_eq!(solution["metric_provenance"][0], "ratio");
}

#[test]
fn classical_solve_writes_solution_and_trace() {
    let out = tmp_dir("fixture_classical");
    let cfg = config(
        CommandCfg::Solve { input: fixture("lasso1d.json"), mode: MetricMode::Gamma(1.0) },
        &out,
        42,
    );
    assert_eq!(run(&cfg).unwrap(), 0);
    let solution: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("solution.json")).unwrap()).unwrap();
    assert!((solution["x"][0].as_f64().unwrap() - 2.0).abs() < 1e-6);
    let trace = std::fs::read_to_string(out.join("trace.csv")).unwrap();
    assert!(trace.starts_with("k,step_norm,fix_distance,bound"));
    assert!(trace.lines().count() > 2);
}

#[test]
fn oneshot_reports_tiny_deviation() {
    let out = tmp_dir("fixture_oneshot");
    let cfg = config(CommandCfg::OneShot { input: fixture("lasso1d.json") }, &out, 42);
    assert_eq!(run(&cfg).unwrap(), 0);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("oneshot.json")).unwrap()).unwrap();
    assert!(report["deviation"].as_f64().unwrap() < 1e-8);
    assert_eq!(report["one_shot"]["iterations"], 1);
}

#[test]
fn malformed_input_exits_with_code_one_and_diagnostic() {
    let dir = tmp_dir("malformed");
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"n\": 1, \"p\": 1,\n \"Q\": [[1.0]\n").unwrap();
    let output = Command::new(env!("CARGO_BIN_EXE_equilibrate"))
        .args(["solve", "--input"])
        .arg(&bad)
        .args(["--out"])
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("line"), "stderr was: {stderr}");
}

#[test]
fn invalid_problem_exits_with_code_one() {
    let dir = tmp_dir("invalid");
    let bad = dir.join("rank_deficient.json");
    std::fs::write(
        &bad,
        r#"{"n":2,"p":2,"Q":[[1.0,0.0],[0.0,1.0]],"q":[0.0,0.0],"alpha":1.0,
           "F":[[1.0,1.0],[1.0,1.0]]}"#,
    )
    .unwrap();
    let output = Command::new(env!("CARGO_BIN_EXE_equilibrate"))
        .args(["solve", "--input"])
        .arg(&bad)
        .args(["--out"])
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("F"));
}

#[test]
fn exhausted_budget_exits_with_code_two() {
    let dir = tmp_dir("budget");
    let output = Command::new(env!("CARGO_BIN_EXE_equilibrate"))
        .args(["solve", "--input"])
        .arg(fixture("lasso1d.json"))
        .args(["--out"])
        .arg(dir.join("out"))
        .args(["--gamma", "100", "--kmax", "3"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn verify_command_passes_and_is_deterministic() {
    let out_a = tmp_dir("verify_a");
    let out_b = tmp_dir("verify_b");
    assert_eq!(run(&config(CommandCfg::Verify, &out_a, 42)).unwrap(), 0);
    assert_eq!(run(&config(CommandCfg::Verify, &out_b, 42)).unwrap(), 0);
    let a = std::fs::read(out_a.join("verify_matrix.csv")).unwrap();
    let b = std::fs::read(out_b.join("verify_matrix.csv")).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.lines().skip(1).all(|l| l.ends_with("true")), "{text}");
}

#[test]
fn compare_reports_are_deterministic() {
    let out_a = tmp_dir("compare_a");
    let out_b = tmp_dir("compare_b");
    let cmd = CommandCfg::Compare { input: None, family: InstanceFamily::LassoDense, n: 6, count: 3 };
    assert_eq!(run(&config(cmd.clone(), &out_a, 7)).unwrap(), 0);
    assert_eq!(run(&config(cmd, &out_b, 7)).unwrap(), 0);
    let a = std::fs::read(out_a.join("compare.csv")).unwrap();
    let b = std::fs::read(out_b.join("compare.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn compare_accepts_a_directory_of_problem_files() {
    let dir = tmp_dir("compare_dir");
    let gen = CommandCfg::Generate { family: InstanceFamily::LassoDense, n: 4, count: 2 };
    assert_eq!(run(&config(gen, &dir, 11)).unwrap(), 0);
    let out = dir.join("reports");
    let cmd = CommandCfg::Compare {
        input: Some(dir.clone()),
        family: InstanceFamily::LassoDense,
        n: 0,
        count: 0,
    };
    assert_eq!(run(&config(cmd, &out, 11)).unwrap(), 0);
    let table = std::fs::read_to_string(out.join("compare.csv")).unwrap();
    // Two instances, seven parametrizations each, plus the header.
    assert_eq!(table.lines().count(), 1 + 2 * 7);
    assert!(table.contains("lasso_dense-n4-s11-000"));
}

#[test]
fn generate_writes_deterministic_instance_files() {
    let out_a = tmp_dir("gen_a");
    let out_b = tmp_dir("gen_b");
    let cmd = CommandCfg::Generate { family: InstanceFamily::LassoDiagonal, n: 3, count: 3 };
    assert_eq!(run(&config(cmd.clone(), &out_a, 7)).unwrap(), 0);
    assert_eq!(run(&config(cmd, &out_b, 7)).unwrap(), 0);
    for idx in 0..3 {
        let name = format!("lasso_diagonal-n3-s7-{idx:03}.json");
        let a = std::fs::read(out_a.join(&name)).unwrap();
        let b = std::fs::read(out_b.join(&name)).unwrap();
        assert_eq!(a, b);
        // And each file is a valid, parseable problem.
        let file: ProblemFile = serde_json::from_slice(&a).unwrap();
        assert!(file.to_spec().unwrap().validate().is_valid());
    }
}

#[test]
fn metric_file_mode_drives_the_solver() {
    let dir = tmp_dir("metric_file");
    let metric_path = dir.join("metric.json");
    std::fs::write(&metric_path, r#"{"m": [2.0]}"#).unwrap();
    let cfg = config(
        CommandCfg::Solve {
            input: fixture("lasso1d.json"),
            mode: MetricMode::FromFile(metric_path),
        },
        &dir.join("out"),
        42,
    );
    assert_eq!(run(&cfg).unwrap(), 0);
    let solution: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("out").join("solution.json")).unwrap(),
    )
    .unwrap();
    // m = 2 is the optimal ratio for this fixture: one-iteration convergence.
    assert_eq!(solution["iterations"], 1);
}
