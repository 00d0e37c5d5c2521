//! Subcommand implementations. Every command returns a process exit code:
//! 0 on success, 2 on validation failure (mapped from errors in `main`),
//! 3 when a solver hit its iteration cap without converging.

use crate::document::{CliError, ParsedProblem};
use crate::export::{export_piecewise_csv, export_sweep_csv, export_value_csv, sig12};
use consult_core::grid::{solve_grid, thresholds, GridConfig, Solution};
use consult_core::lattice::{
    build_lattice, default_prior_sweep, detect_rational_ratio, piecewise_extract,
    solve_lattice, try_solve_lattice, DEFAULT_MAX_DENOMINATOR,
};
use consult_core::montecarlo::{decomposition_check, default_max_steps, simulate_policy};
use consult_core::theory::{brute_force_value, revealing_cost_threshold, verify_revealer_used};
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NON_CONVERGENCE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Default)]
pub enum SolverChoice {
    #[default]
    Auto,
    Grid,
    Lattice,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOpts {
    pub solver: SolverChoice,
    pub grid_size: Option<usize>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
}

impl SolveOpts {
    fn grid_config(&self, parsed: &ParsedProblem) -> GridConfig {
        let mut cfg = GridConfig::for_problem(&parsed.problem);
        if let Some(doc) = &parsed.document.solver {
            if let Some(n) = doc.grid_size {
                cfg.grid_size = n;
            }
            if let Some(tol) = doc.tol {
                cfg.tol = tol;
            }
            if let Some(iters) = doc.max_iters {
                cfg.max_iters = iters;
            }
        }
        if let Some(n) = self.grid_size {
            cfg.grid_size = n;
        }
        if let Some(tol) = self.tol {
            cfg.tol = tol;
        }
        if let Some(iters) = self.max_iters {
            cfg.max_iters = iters;
        }
        cfg
    }
}

/// Solve with the requested solver; `Auto` picks the exact lattice whenever
/// the consultant set has a detectable rational ratio.
pub fn solve(parsed: &ParsedProblem, opts: &SolveOpts) -> Result<Solution, CliError> {
    match opts.solver {
        SolverChoice::Grid => Ok(solve_grid(&parsed.problem, &opts.grid_config(parsed))?),
        SolverChoice::Lattice => {
            let spec = detect_rational_ratio(&parsed.problem.consultants, DEFAULT_MAX_DENOMINATOR)
                .ok_or_else(|| {
                    CliError::Usage(
                        "no rational ratio detected; rerun with --solver grid (or auto)".into(),
                    )
                })?;
            let lattice = build_lattice(&parsed.problem, &spec)?;
            Ok(solve_lattice(&parsed.problem, &lattice)?)
        }
        SolverChoice::Auto => match try_solve_lattice(&parsed.problem)? {
            Some(solution) => Ok(solution),
            None => Ok(solve_grid(&parsed.problem, &opts.grid_config(parsed))?),
        },
    }
}

fn open_output(out: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    match out {
        Some(path) => Ok(Box::new(std::fs::File::create(path)?)),
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

fn convergence_exit(solution: &Solution) -> i32 {
    if solution.meta.converged {
        EXIT_OK
    } else {
        eprintln!(
            "warning: solver hit the iteration cap ({} sweeps, last change {:.3e})",
            solution.meta.iterations, solution.meta.final_change
        );
        EXIT_NON_CONVERGENCE
    }
}

pub fn cmd_solve(
    parsed: &ParsedProblem,
    opts: &SolveOpts,
    out: &Option<PathBuf>,
) -> Result<i32, CliError> {
    let solution = solve(parsed, opts)?;
    export_value_csv(&solution, &mut open_output(out)?)?;
    Ok(convergence_exit(&solution))
}

pub fn cmd_thresholds(parsed: &ParsedProblem, opts: &SolveOpts) -> Result<i32, CliError> {
    let solution = solve(parsed, opts)?;
    let th = thresholds(&solution);
    println!("p_L = {}", th.p_l);
    println!("p_R = {}", th.p_r);
    Ok(convergence_exit(&solution))
}

pub fn cmd_sweep(
    parsed: &ParsedProblem,
    costs: &[f64],
    opts: &SolveOpts,
    out: &Option<PathBuf>,
) -> Result<i32, CliError> {
    if costs.is_empty() {
        return Err(CliError::Usage("--costs needs at least one value".into()));
    }
    let mut curves = Vec::with_capacity(costs.len());
    let mut grid: Option<Vec<f64>> = None;
    let mut exit = EXIT_OK;
    for &cost in costs {
        let mut at_cost = parsed.clone();
        at_cost.problem.cost = cost;
        at_cost.document.cost = cost;
        // A common belief grid keeps the columns comparable.
        let solution = solve_grid(&at_cost.problem, &opts.grid_config(&at_cost))?;
        exit = exit.max(convergence_exit(&solution));
        if grid.is_none() {
            grid = Some(solution.grid.clone());
        }
        curves.push(solution.values);
    }
    export_sweep_csv(&grid.unwrap(), costs, &curves, &mut open_output(out)?)?;
    Ok(exit)
}

pub fn cmd_piecewise(
    parsed: &ParsedProblem,
    sweep_points: usize,
    out: &Option<PathBuf>,
) -> Result<i32, CliError> {
    let spec = detect_rational_ratio(&parsed.problem.consultants, DEFAULT_MAX_DENOMINATOR)
        .ok_or_else(|| {
            CliError::Usage(
                "piecewise extraction needs a rational-ratio consultant set".into(),
            )
        })?;
    let pw = piecewise_extract(&parsed.problem, &spec, &default_prior_sweep(sweep_points))?;
    export_piecewise_csv(&pw, &mut open_output(out)?)?;
    Ok(EXIT_OK)
}

pub fn cmd_simulate(
    parsed: &ParsedProblem,
    runs: u64,
    seed: u64,
    max_steps: Option<u32>,
    opts: &SolveOpts,
) -> Result<i32, CliError> {
    let solution = solve(parsed, opts)?;
    let max_steps = max_steps.unwrap_or_else(|| default_max_steps(parsed.problem.cost));
    let report = simulate_policy(&parsed.problem, &solution, runs, seed, max_steps)?;
    let residual = decomposition_check(&report, &parsed.problem);
    println!("{}", serde_json::to_string_pretty(&report).expect("report is plain data"));
    eprintln!(
        "solver value at prior: {} (simulated mean {} ± {}); decomposition residual {:.3e}",
        sig12(solution.value_at(parsed.problem.prior)),
        sig12(report.mean_payoff),
        sig12(report.std_error),
        residual
    );
    Ok(convergence_exit(&solution))
}

pub fn cmd_oracle(parsed: &ParsedProblem, horizon: u32) -> Result<i32, CliError> {
    let (value, decisions) = brute_force_value(&parsed.problem, horizon)?;
    println!("value = {}", sig12(value));
    let formatted: Vec<String> = decisions.iter().map(|d| d.to_string()).collect();
    println!("optimal first decisions: {}", formatted.join("|"));
    Ok(EXIT_OK)
}

/// Threshold for the single revealing consultant to be part of every optimal
/// strategy: prints ε and C, then verifies the conclusion on solved policies
/// at three costs below C.
pub fn cmd_revealer(parsed: &ParsedProblem, grid_size: Option<usize>) -> Result<i32, CliError> {
    let revealing: Vec<&str> = parsed
        .problem
        .consultants
        .iter()
        .filter(|c| c.is_revealing())
        .map(|c| c.id())
        .collect();
    let j_star = match revealing.as_slice() {
        [single] => single.to_string(),
        [] => {
            return Err(CliError::Usage(
                "no revealing consultant in the problem".into(),
            ))
        }
        many => {
            return Err(CliError::Usage(format!(
                "expected exactly one revealing consultant, found {many:?}"
            )))
        }
    };
    let analysis = revealing_cost_threshold(&parsed.problem, &j_star)?;
    println!("revealer = {j_star}");
    println!("epsilon = {}", sig12(analysis.epsilon));
    println!("C = {}", sig12(analysis.cost_threshold));
    let grid_size = grid_size.unwrap_or(consult_core::DEFAULT_GRID_SIZE);
    let mut all_used = true;
    for frac in [0.9, 0.5, 0.25] {
        let c = analysis.cost_threshold.min(parsed.problem.payoffs.max_gain() * 0.999) * frac;
        if c < 1e-3 {
            println!("c = {}: skipped (too small to solve at desk scale)", sig12(c));
            continue;
        }
        let used = verify_revealer_used(&parsed.problem, &j_star, c, grid_size)?;
        all_used &= used;
        println!("c = {}: policy consults the revealer: {used}", sig12(c));
    }
    println!("verified: {}", if all_used { "yes" } else { "NO" });
    Ok(EXIT_OK)
}

pub fn parse_and_warn(path: &Path) -> Result<ParsedProblem, CliError> {
    let parsed = crate::document::parse_problem(path)?;
    for warning in &parsed.warnings {
        eprintln!("advisory: {warning}");
    }
    Ok(parsed)
}
