//! `consult`: solve two-state investment problems with costly consultants
//! from JSON problem documents, and export plot-ready CSV data.

use clap::{Parser, Subcommand};
use consult_cli::commands::{self, SolveOpts, SolverChoice};
use consult_cli::document;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "consult")]
#[command(about = "Optimal consulting strategies for a two-state investment problem")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the problem and emit a value/policy CSV.
    Solve {
        /// Problem document (JSON).
        problem: PathBuf,
        /// Solver: exact lattice when the consultant set allows it, else grid.
        #[arg(long, value_enum, default_value_t)]
        solver: SolverChoice,
        /// Grid points, including both endpoints (grid solver).
        #[arg(long)]
        grid_size: Option<usize>,
        /// Sup-norm stopping tolerance (grid solver).
        #[arg(long)]
        tol: Option<f64>,
        /// Iteration cap (grid solver).
        #[arg(long)]
        max_iters: Option<usize>,
        /// Output path; stdout when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Print the stop thresholds p_L and p_R.
    Thresholds {
        problem: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        solver: SolverChoice,
        #[arg(long)]
        grid_size: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Solve at several costs and emit one value column per cost.
    Sweep {
        problem: PathBuf,
        /// Comma-separated consultation costs.
        #[arg(long, value_delimiter = ',', required = true)]
        costs: Vec<f64>,
        #[arg(long)]
        grid_size: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Emit the affine segments of the value function over the prior
    /// (rational-ratio consultant sets only).
    Piecewise {
        problem: PathBuf,
        /// Number of priors swept on [0.001, 0.999].
        #[arg(long, default_value_t = 2001)]
        sweep_points: usize,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Simulate the solved policy and print the report as JSON.
    Simulate {
        problem: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        runs: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Per-run consultation cap; defaults to ceil(50 / cost).
        #[arg(long)]
        max_steps: Option<u32>,
        #[arg(long, value_enum, default_value_t)]
        solver: SolverChoice,
        #[arg(long)]
        grid_size: Option<usize>,
    },
    /// Print the depth-limited expectimax value (independent of the solvers).
    Oracle {
        problem: PathBuf,
        /// Maximum number of consultations along any path (at most 8).
        #[arg(long)]
        horizon: u32,
    },
    /// Analyze the revealing consultant: ε, the cost threshold C below which
    /// every optimal strategy uses it, and an empirical verification.
    Revealer {
        problem: PathBuf,
        #[arg(long)]
        grid_size: Option<usize>,
    },
}

fn run(cli: Cli) -> Result<i32, document::CliError> {
    match cli.command {
        Command::Solve {
            problem,
            solver,
            grid_size,
            tol,
            max_iters,
            out,
        } => {
            let parsed = commands::parse_and_warn(&problem)?;
            let opts = SolveOpts {
                solver,
                grid_size,
                tol,
                max_iters,
            };
            commands::cmd_solve(&parsed, &opts, &out)
        }
        Command::Thresholds {
            problem,
            solver,
            grid_size,
            tol,
        } => {
            let parsed = commands::parse_and_warn(&problem)?;
            let opts = SolveOpts {
                solver,
                grid_size,
                tol,
                max_iters: None,
            };
            commands::cmd_thresholds(&parsed, &opts)
        }
        Command::Sweep {
            problem,
            costs,
            grid_size,
            tol,
            out,
        } => {
            let parsed = commands::parse_and_warn(&problem)?;
            let opts = SolveOpts {
                solver: SolverChoice::Grid,
                grid_size,
                tol,
                max_iters: None,
            };
            commands::cmd_sweep(&parsed, &costs, &opts, &out)
        }
        Command::Piecewise {
            problem,
            sweep_points,
            out,
        } => {
            let parsed = commands::parse_and_warn(&problem)?;
            commands::cmd_piecewise(&parsed, sweep_points, &out)
        }
        Command::Simulate {
            problem,
            runs,
            seed,
            max_steps,
            solver,
            grid_size,
        } => {
            let parsed = commands::parse_and_warn(&problem)?;
            let opts = SolveOpts {
                solver,
                grid_size,
                tol: None,
                max_iters: None,
            };
            commands::cmd_simulate(&parsed, runs, seed, max_steps, &opts)
        }
        Command::Oracle { problem, horizon } => {
            let parsed = commands::parse_and_warn(&problem)?;
            commands::cmd_oracle(&parsed, horizon)
        }
        Command::Revealer { problem, grid_size } => {
            let parsed = commands::parse_and_warn(&problem)?;
            commands::cmd_revealer(&parsed, grid_size)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        // Downstream closed the pipe; nothing went wrong on our side.
        Err(document::CliError::Output(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
