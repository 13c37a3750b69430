//! Library side of the command-line front end: configuration, dispatch, and
//! report emission. `main.rs` only parses arguments into a [`RunConfig`].
//!
//! Exit codes: 0 success, 1 validation failure, 2 non-convergence,
//! 3 verification failure.

pub mod compare;
pub mod format;
pub mod report;
pub mod verify;

use std::path::{Path, PathBuf};

use equilibrate::admm::{admm_classical, admm_equilibrate, AdmmConfig, AdmmState};
use equilibrate::instances::{generate_instances, InstanceFamily};
use equilibrate::metric::DEFAULT_EPS_FLOOR;
use equilibrate::metric_select::{estimate_reference, one_shot_solve, optimal_metric, reference_pair};
use equilibrate::{DiagonalMetric, ProblemSpec};

use crate::report::{OneShotFile, SolutionFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NON_CONVERGENCE: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

/// Step-size / metric selection mode of the `solve` command.
#[derive(Debug, Clone)]
pub enum MetricMode {
    /// Classical solver with a fixed scalar step.
    Gamma(f64),
    /// Metric solver with `M = I`.
    Identity,
    /// Closed-loop optimal metric from a baseline reference solve.
    Optimal,
    /// Metric vector (on the `m` scale) loaded from a JSON file.
    FromFile(PathBuf),
}

impl MetricMode {
    /// Parses `--metric identity|optimal|file:PATH`.
    pub fn parse(text: &str) -> anyhow::Result<MetricMode> {
        match text {
            "identity" => Ok(MetricMode::Identity),
            "optimal" => Ok(MetricMode::Optimal),
            other => match other.strip_prefix("file:") {
                Some(path) => Ok(MetricMode::FromFile(PathBuf::from(path))),
                None => anyhow::bail!("unknown metric mode {other:?}; expected identity, optimal, or file:PATH"),
            },
        }
    }
}

#[derive(Debug, Clone)]
pub enum CommandCfg {
    Solve { input: PathBuf, mode: MetricMode },
    OneShot { input: PathBuf },
    /// Without `input`, instances come from the seeded family generator;
    /// with it, every `*.json` problem in the directory is loaded.
    Compare { input: Option<PathBuf>, family: InstanceFamily, n: usize, count: usize },
    Verify,
    Bench { family: InstanceFamily, n: usize, count: usize },
    Generate { family: InstanceFamily, n: usize, count: usize },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandCfg,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub tol: f64,
    pub k_max: usize,
}

/// Runs one command, writes its report files under `out_dir`, and returns the
/// process exit code. Hard errors (I/O, malformed input, invalid problems)
/// surface as `Err` and exit with code 1 unless the cause is non-convergence.
pub fn run(cfg: &RunConfig) -> anyhow::Result<i32> {
    std::fs::create_dir_all(&cfg.out_dir)?;
    match &cfg.command {
        CommandCfg::Solve { input, mode } => run_solve(cfg, input, mode),
        CommandCfg::OneShot { input } => run_oneshot(cfg, input),
        CommandCfg::Compare { input, family, n, count } => {
            run_compare_cmd(cfg, input.as_deref(), *family, *n, *count)
        }
        CommandCfg::Verify => run_verify(cfg),
        CommandCfg::Bench { family, n, count } => run_bench(cfg, *family, *n, *count),
        CommandCfg::Generate { family, n, count } => run_generate(cfg, *family, *n, *count),
    }
}

fn load_validated(input: &Path) -> anyhow::Result<ProblemSpec> {
    let spec = format::read_problem(input)?;
    let report = spec.validate();
    if !report.is_valid() {
        anyhow::bail!("{}: {}", input.display(), report.summary());
    }
    Ok(spec)
}

/// Loads every `*.json` problem in a directory, sorted by file name.
fn load_instance_dir(dir: &Path) -> anyhow::Result<Vec<equilibrate::instances::Instance>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|e| e == "json").unwrap_or(false))
        .collect();
    paths.sort();
    if paths.is_empty() {
        anyhow::bail!("no .json problem files in {}", dir.display());
    }
    let mut instances = Vec::with_capacity(paths.len());
    for path in paths {
        let id = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
        instances.push(equilibrate::instances::Instance { id, spec: load_validated(&path)? });
    }
    Ok(instances)
}

fn run_solve(cfg: &RunConfig, input: &Path, mode: &MetricMode) -> anyhow::Result<i32> {
    let spec = load_validated(input)?;
    let init = AdmmState::zero(spec.n(), spec.m(), spec.p());
    let admm_cfg = AdmmConfig { k_max: cfg.k_max, tol: cfg.tol, record_trace: true };

    let (run, solution_file) = match mode {
        MetricMode::Gamma(gamma) => {
            let run = admm_classical(&spec, *gamma, &init, &admm_cfg)?;
            let file = SolutionFile::new(format!("classical(gamma={gamma})"), &run.solution);
            (run, file)
        }
        MetricMode::Identity => {
            let metric = DiagonalMetric::identity(spec.p());
            let run = admm_equilibrate(&spec, &metric, &init, &admm_cfg)?;
            let file = SolutionFile::new("equilibrate(identity)", &run.solution);
            (run, file)
        }
        MetricMode::Optimal => {
            let reference = estimate_reference(&spec)?;
            let (image, dual) = reference_pair(&spec, &reference)?;
            let choice = optimal_metric(&image, &dual, DEFAULT_EPS_FLOOR)?;
            let run = admm_equilibrate(&spec, &choice.metric, &init, &admm_cfg)?;
            let file =
                SolutionFile::new("equilibrate(optimal)", &run.solution).with_metric(&choice);
            (run, file)
        }
        MetricMode::FromFile(path) => {
            let m = format::read_metric(path)?;
            let metric = DiagonalMetric::new(m)?;
            let run = admm_equilibrate(&spec, &metric, &init, &admm_cfg)?;
            let file = SolutionFile::new(format!("equilibrate(file:{})", path.display()), &run.solution);
            (run, file)
        }
    };

    std::fs::write(
        cfg.out_dir.join("solution.json"),
        serde_json::to_string_pretty(&solution_file)?,
    )?;
    // With a converged run the last iterate serves as the fixed-point
    // reference, which fills the distance and bound columns.
    let trace_csv = if run.solution.converged && run.trace.len() > 1 {
        let reference = run.trace.last().unwrap().clone();
        let trace = run.trace.clone().with_reference(&reference);
        let dist0 = (&trace.points[0] - &reference).norm_squared();
        trace.to_csv(Some(dist0))
    } else {
        run.trace.to_csv(None)
    };
    std::fs::write(cfg.out_dir.join("trace.csv"), trace_csv)?;

    if run.solution.converged {
        println!(
            "solved in {} iterations, residual {:.3e}",
            run.solution.iterations, run.solution.residual
        );
        Ok(EXIT_OK)
    } else {
        eprintln!(
            "did not converge within {} iterations, residual {:.3e}",
            run.solution.iterations, run.solution.residual
        );
        Ok(EXIT_NON_CONVERGENCE)
    }
}

fn run_oneshot(cfg: &RunConfig, input: &Path) -> anyhow::Result<i32> {
    let spec = load_validated(input)?;
    let reference = estimate_reference(&spec)?;
    let (image, dual) = reference_pair(&spec, &reference)?;
    let choice = optimal_metric(&image, &dual, DEFAULT_EPS_FLOOR)?;
    let one = one_shot_solve(&spec, &choice.metric)?;
    let deviation = (&one.x - &reference.x).norm();

    let file = OneShotFile {
        reference: SolutionFile::new("classical(gamma=1) reference", &reference),
        one_shot: SolutionFile::new("one_shot(optimal)", &one).with_metric(&choice),
        deviation,
    };
    std::fs::write(cfg.out_dir.join("oneshot.json"), serde_json::to_string_pretty(&file)?)?;

    println!(
        "one-shot deviation {:.3e}, residual {:.3e}",
        deviation, one.residual
    );
    Ok(if one.converged { EXIT_OK } else { EXIT_NON_CONVERGENCE })
}

fn run_compare_cmd(
    cfg: &RunConfig,
    input: Option<&Path>,
    family: InstanceFamily,
    n: usize,
    count: usize,
) -> anyhow::Result<i32> {
    let instances = match input {
        Some(dir) => load_instance_dir(dir)?,
        None => generate_instances(family, n, count, cfg.seed)?,
    };
    let rows = compare::run_compare(&instances, &compare::DEFAULT_GAMMA_GRID, cfg.tol, cfg.k_max)?;
    std::fs::write(cfg.out_dir.join("compare.csv"), report::compare_csv(&rows))?;
    for (id, best_classical, optimal) in compare::iteration_summary(&rows) {
        println!("{id}: best classical {best_classical} iterations, optimal metric {optimal}");
    }
    Ok(EXIT_OK)
}

fn run_verify(cfg: &RunConfig) -> anyhow::Result<i32> {
    let rows = verify::run_battery(cfg.seed);
    std::fs::write(cfg.out_dir.join("verify_matrix.csv"), report::verify_csv(&rows))?;
    let mut all_pass = true;
    for row in &rows {
        println!(
            "{:28} {:5} instances  max dev {:9.3e}  tol {:7.1e}  {}",
            row.check,
            row.instances,
            row.max_deviation,
            row.tolerance,
            if row.pass { "pass" } else { "FAIL" }
        );
        all_pass &= row.pass;
    }
    Ok(if all_pass { EXIT_OK } else { EXIT_VERIFICATION })
}

fn run_bench(cfg: &RunConfig, family: InstanceFamily, n: usize, count: usize) -> anyhow::Result<i32> {
    let instances = generate_instances(family, n, count, cfg.seed)?;
    let admm_cfg = AdmmConfig { k_max: cfg.k_max, tol: cfg.tol, record_trace: false };
    let mut csv = String::from("instance,parametrization,iterations,residual,converged\n");
    let mut timings: Vec<(String, f64)> = Vec::new();

    let mut record = |id: &str,
                      tag: &str,
                      run: &equilibrate::admm::AdmmRun,
                      elapsed_ms: f64,
                      csv: &mut String| {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            id, tag, run.solution.iterations, run.solution.residual, run.solution.converged
        ));
        timings.push((tag.to_string(), elapsed_ms));
    };

    for inst in &instances {
        let spec = &inst.spec;
        let init = AdmmState::zero(spec.n(), spec.m(), spec.p());

        let start = std::time::Instant::now();
        let run = admm_classical(spec, 1.0, &init, &admm_cfg)?;
        record(&inst.id, "classical(gamma=1)", &run, start.elapsed().as_secs_f64() * 1e3, &mut csv);

        // The optimal-metric timing includes its reference solve.
        let start = std::time::Instant::now();
        let reference = estimate_reference(spec)?;
        let (image, dual) = reference_pair(spec, &reference)?;
        let choice = optimal_metric(&image, &dual, DEFAULT_EPS_FLOOR)?;
        let run = admm_equilibrate(spec, &choice.metric, &init, &admm_cfg)?;
        record(&inst.id, "equilibrate(optimal)", &run, start.elapsed().as_secs_f64() * 1e3, &mut csv);
    }
    // Timing summary goes to stdout only; the report file stays deterministic.
    std::fs::write(cfg.out_dir.join("bench.csv"), csv)?;
    let mut totals: std::collections::BTreeMap<String, (f64, usize)> = Default::default();
    for (tag, ms) in timings {
        let entry = totals.entry(tag).or_insert((0.0, 0));
        entry.0 += ms;
        entry.1 += 1;
    }
    for (tag, (total, runs)) in totals {
        println!("{tag}: {runs} runs, total {total:.1} ms, mean {:.2} ms", total / runs as f64);
    }
    Ok(EXIT_OK)
}

fn run_generate(cfg: &RunConfig, family: InstanceFamily, n: usize, count: usize) -> anyhow::Result<i32> {
    let instances = generate_instances(family, n, count, cfg.seed)?;
    for inst in &instances {
        let path = cfg.out_dir.join(format!("{}.json", inst.id));
        format::write_problem(&path, &inst.spec)?;
        println!("wrote {}", path.display());
    }
    Ok(EXIT_OK)
}

/// Maps an error to the exit code contract.
pub fn exit_code_for(err: &anyhow::Error) -> i32 {
    if let Some(core) = err.downcast_ref::<equilibrate::Error>() {
        if matches!(core, equilibrate::Error::NonConvergence { .. }) {
            return EXIT_NON_CONVERGENCE;
        }
    }
    EXIT_VALIDATION
}
