use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use equilibrate::instances::InstanceFamily;
use equilibrate_cli::{exit_code_for, run, CommandCfg, MetricMode, RunConfig};

#[derive(Parser)]
#[command(
    name = "equilibrate",
    about = "Metric-parametrized proximal solvers for l1-regularized quadratic problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Output directory for report files.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Seed for every random draw.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Relative optimality-residual tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Iteration budget per solve.
    #[arg(long, default_value_t = 10_000)]
    kmax: usize,
}

#[derive(Args)]
struct FamilyArgs {
    /// Instance family: lasso_dense, lasso_diagonal, or quadratic_pair.
    #[arg(long, default_value = "lasso_dense")]
    family: String,
    /// Problem dimension.
    #[arg(long, default_value_t = 20)]
    n: usize,
    /// Number of instances.
    #[arg(long, default_value_t = 20)]
    count: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem file with a chosen parametrization.
    Solve {
        /// Problem JSON file.
        #[arg(long)]
        input: PathBuf,
        /// Classical scalar step size (conflicts with --metric).
        #[arg(long, conflicts_with = "metric")]
        gamma: Option<f64>,
        /// Metric mode: identity, optimal, or file:PATH.
        #[arg(long)]
        metric: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Reference solve, optimal metric, and the single proximal evaluation.
    Oneshot {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Iteration-count table: classical step grid vs identity vs optimal metric.
    Compare {
        /// Directory of problem JSON files; defaults to the generated family.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Operator-identity battery on seeded random instances.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Timing and iteration statistics over a generated family.
    Bench {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Write reproducible problem files.
    Generate {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn parse_family(name: &str) -> anyhow::Result<InstanceFamily> {
    InstanceFamily::parse(name)
        .ok_or_else(|| anyhow::anyhow!("unknown family {name:?}; expected lasso_dense, lasso_diagonal, or quadratic_pair"))
}

fn build_config(cli: Cli) -> anyhow::Result<RunConfig> {
    let (command, common) = match cli.command {
        Command::Solve { input, gamma, metric, common } => {
            let mode = match (gamma, metric) {
                (Some(g), None) => MetricMode::Gamma(g),
                (None, Some(m)) => MetricMode::parse(&m)?,
                (None, None) => MetricMode::Gamma(1.0),
                (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
            };
            (CommandCfg::Solve { input, mode }, common)
        }
        Command::Oneshot { input, common } => (CommandCfg::OneShot { input }, common),
        Command::Compare { input, family, common } => (
            CommandCfg::Compare {
                input,
                family: parse_family(&family.family)?,
                n: family.n,
                count: family.count,
            },
            common,
        ),
        Command::Verify { common } => (CommandCfg::Verify, common),
        Command::Bench { family, common } => (
            CommandCfg::Bench {
                family: parse_family(&family.family)?,
                n: family.n,
                count: family.count,
            },
            common,
        ),
        Command::Generate { family, common } => (
            CommandCfg::Generate {
                family: parse_family(&family.family)?,
                n: family.n,
                count: family.count,
            },
            common,
        ),
    };
    Ok(RunConfig {
        command,
        out_dir: common.out,
        seed: common.seed,
        tol: common.tol,
        k_max: common.kmax,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match build_config(cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(equilibrate_cli::EXIT_VALIDATION as u8);
        }
    };
    match run(&cfg) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}
