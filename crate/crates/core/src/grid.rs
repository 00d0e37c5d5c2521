//! Approximate value iteration on a discretized belief grid.
//!
//! The value function of an investment problem satisfies the undiscounted
//! Bellman recursion
//!
//!   V(p) = max( p·u_Rr, (1−p)·u_Ll, max_j Σ_s P_j(p,s)·V(post(p,s,j)) − c )
//!
//! This solver iterates that recursion on an evenly spaced belief grid,
//! starting from the stopping value. Posteriors that fall between grid points
//! are evaluated by linear interpolation; since the limit value is convex the
//! interpolation bias is one-sided (upward) and bounded by the grid modulus.
//! There is no discount factor: convergence comes from the positive per-step
//! cost, which makes long consultation paths unprofitable. Iterates are
//! pointwise nondecreasing, so the sweep stops when the sup-norm change drops
//! below `tol` (or at the iteration cap, in which case the solution is
//! flagged as non-converged).

use crate::model::{posterior, signal_prob, validate_problem, Decision, Payoffs, Problem, Violation};
use thiserror::Error;

/// Branches within this tolerance of the best one are recorded as ties.
pub const TIE_TOL: f64 = 1e-9;

/// Default number of grid points (including both endpoints).
pub const DEFAULT_GRID_SIZE: usize = 4001;

/// Default sup-norm stopping tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("invalid problem: {}", format_violations(.0))]
    InvalidProblem(Vec<Violation>),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Reject problems with hard violations; advisory findings pass through.
pub(crate) fn check_solvable(problem: &Problem) -> Result<(), SolveError> {
    let hard: Vec<Violation> = validate_problem(problem)
        .into_iter()
        .filter(|v| !v.code.is_advisory())
        .collect();
    if hard.is_empty() {
        Ok(())
    } else {
        Err(SolveError::InvalidProblem(hard))
    }
}

// ---------------------------------------------------------------------------
// Configuration and solution types
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct GridConfig {
    /// Number of equally spaced belief points, including 0 and 1.
    pub grid_size: usize,
    /// Sup-norm change below which iteration stops.
    pub tol: f64,
    /// Iteration cap; hitting it flags the solution as non-converged.
    pub max_iters: usize,
}

impl GridConfig {
    /// Defaults for a problem: 4001 points, tol 1e-10, and a cap that scales
    /// with 1/c (a per-step cost of c bounds how deep profitable consultation
    /// paths can go).
    pub fn for_problem(problem: &Problem) -> Self {
        GridConfig {
            grid_size: DEFAULT_GRID_SIZE,
            tol: DEFAULT_TOL,
            max_iters: default_max_iters(problem.cost),
        }
    }

    pub fn with_grid_size(mut self, grid_size: usize) -> Self {
        self.grid_size = grid_size;
        self
    }

    fn validate(&self) -> Result<(), SolveError> {
        if self.grid_size < 3 {
            return Err(SolveError::InvalidConfig(format!(
                "grid_size {} must be at least 3",
                self.grid_size
            )));
        }
        if !(self.tol > 0.0) {
            return Err(SolveError::InvalidConfig(format!("tol {} must be positive", self.tol)));
        }
        if self.max_iters == 0 {
            return Err(SolveError::InvalidConfig("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

/// `ceil(20 / cost)`, clamped to a sane range.
pub fn default_max_iters(cost: f64) -> usize {
    if !(cost > 0.0) {
        return 1_000_000;
    }
    ((20.0 / cost).ceil() as usize).clamp(1, 1_000_000)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Grid,
    Lattice,
}

#[derive(Debug, Clone)]
pub struct SolveMeta {
    pub iterations: usize,
    pub final_change: f64,
    pub converged: bool,
    pub kind: SolverKind,
}

/// A solved value function and Markov policy over a finite belief set.
///
/// `policy` holds the tie-broken decision at each point; `ties` keeps the
/// full set of branches within [`TIE_TOL`] of the optimum, in a stable order
/// (StopR, StopL, consultants in problem order).
#[derive(Debug, Clone)]
pub struct Solution {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub policy: Vec<Decision>,
    pub ties: Vec<Vec<Decision>>,
    pub meta: SolveMeta,
}

impl Solution {
    /// Value at an arbitrary belief: linear interpolation between adjacent
    /// stored points, exact at stored points.
    pub fn value_at(&self, p: f64) -> f64 {
        let (lo, w) = locate(&self.grid, p);
        if w == 0.0 {
            self.values[lo]
        } else {
            self.values[lo] * (1.0 - w) + self.values[lo + 1] * w
        }
    }

    /// Tie-broken decision at the stored point nearest to `p` (lower index on
    /// exact midpoints).
    pub fn decision_at(&self, p: f64) -> &Decision {
        &self.policy[self.nearest_index(p)]
    }

    pub fn nearest_index(&self, p: f64) -> usize {
        let (lo, w) = locate(&self.grid, p);
        if w > 0.5 {
            lo + 1
        } else {
            lo
        }
    }
}

/// Locate `p` in a sorted grid: index of the left neighbor plus the
/// interpolation weight toward the right neighbor.
fn locate(grid: &[f64], p: f64) -> (usize, f64) {
    let n = grid.len();
    if p <= grid[0] {
        return (0, 0.0);
    }
    if p >= grid[n - 1] {
        return (n - 1, 0.0);
    }
    // First index with grid[i] > p, so the containing cell is [i-1, i].
    let hi = grid.partition_point(|&x| x <= p);
    let lo = hi - 1;
    if grid[lo] == p {
        return (lo, 0.0);
    }
    let w = (p - grid[lo]) / (grid[hi] - grid[lo]);
    (lo, w)
}

/// Belief thresholds: `p_l` is the top of the initial stop-L region, `p_r`
/// the bottom of the final stop-R region.
#[derive(Debug, Clone, Copy)]
pub struct Thresholds {
    pub p_l: f64,
    pub p_r: f64,
}

// ---------------------------------------------------------------------------
// Bellman backup
// ---------------------------------------------------------------------------

/// Immediate stopping value `max(p·u_Rr, (1−p)·u_Ll)`.
pub fn stopping_value(p: f64, payoffs: &Payoffs) -> f64 {
    (p * payoffs.u_rr).max((1.0 - p) * payoffs.u_ll)
}

/// Per-branch scores of one Bellman backup at belief `p` against a value
/// table on `grid`.
#[derive(Debug, Clone)]
pub struct BranchValues {
    pub stop_r: f64,
    pub stop_l: f64,
    /// One consult score per consultant, in problem order; NaN-free: a
    /// consultant whose every signal is impossible at `p` scores `-inf`.
    pub consult: Vec<f64>,
}

impl BranchValues {
    pub fn best(&self) -> f64 {
        let mut best = self.stop_r.max(self.stop_l);
        for &v in &self.consult {
            best = best.max(v);
        }
        best
    }

    /// All branches within `tie_tol` of the best, in stable order.
    pub fn ties(&self, problem: &Problem, tie_tol: f64) -> Vec<Decision> {
        let best = self.best();
        let mut out = Vec::new();
        if best - self.stop_r <= tie_tol {
            out.push(Decision::StopR);
        }
        if best - self.stop_l <= tie_tol {
            out.push(Decision::StopL);
        }
        for (j, &v) in self.consult.iter().enumerate() {
            if best - v <= tie_tol {
                out.push(Decision::Consult(problem.consultants[j].id().to_string()));
            }
        }
        out
    }

    /// Deterministic tie-break: a stopping branch wins any tie it is part of
    /// (StopR first when both stops tie exactly); otherwise the first
    /// consultant in problem order.
    pub fn chosen(&self, problem: &Problem, tie_tol: f64) -> Decision {
        let best = self.best();
        let r_ties = best - self.stop_r <= tie_tol;
        let l_ties = best - self.stop_l <= tie_tol;
        match (r_ties, l_ties) {
            (true, true) => {
                if self.stop_l > self.stop_r {
                    return Decision::StopL;
                }
                return Decision::StopR;
            }
            (true, false) => return Decision::StopR,
            (false, true) => return Decision::StopL,
            (false, false) => {}
        }
        for (j, &v) in self.consult.iter().enumerate() {
            if best - v <= tie_tol {
                return Decision::Consult(problem.consultants[j].id().to_string());
            }
        }
        // Unreachable for finite branch values; fall back to the better stop.
        if self.stop_l > self.stop_r {
            Decision::StopL
        } else {
            Decision::StopR
        }
    }
}

/// Evaluate every branch of the Bellman recursion at `p` against `values`
/// (defined on `grid`, queried by linear interpolation).
pub fn backup_branches(grid: &[f64], values: &[f64], problem: &Problem, p: f64) -> BranchValues {
    let stop_r = p * problem.payoffs.u_rr;
    let stop_l = (1.0 - p) * problem.payoffs.u_ll;
    let consult = problem
        .consultants
        .iter()
        .map(|c| {
            let mut score = 0.0;
            let mut feasible = false;
            for s in 0..c.n_signals() {
                let prob = signal_prob(p, c, s);
                if prob <= 0.0 {
                    continue;
                }
                feasible = true;
                let post = posterior(p, c, s).expect("positive-probability signal");
                let (lo, w) = locate(grid, post);
                let v = if w == 0.0 {
                    values[lo]
                } else {
                    values[lo] * (1.0 - w) + values[lo + 1] * w
                };
                score += prob * v;
            }
            if feasible {
                score - problem.cost
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    BranchValues { stop_r, stop_l, consult }
}

/// One Bellman backup: the backed-up value at `p` and the optimal decision
/// set (every branch within [`TIE_TOL`] of the maximum).
pub fn bellman_backup(
    grid: &[f64],
    values: &[f64],
    problem: &Problem,
    p: f64,
) -> (f64, Vec<Decision>) {
    let branches = backup_branches(grid, values, problem, p);
    (branches.best(), branches.ties(problem, TIE_TOL))
}

// ---------------------------------------------------------------------------
// Solver
// ---------------------------------------------------------------------------

/// A precomputed transition: signal probability plus interpolation target of
/// the posterior. `prob == 0` marks an infeasible signal.
#[derive(Clone, Copy)]
struct Trans {
    prob: f64,
    lo: u32,
    w: f64,
}

/// Solve by value iteration on an evenly spaced belief grid.
pub fn solve_grid(problem: &Problem, cfg: &GridConfig) -> Result<Solution, SolveError> {
    check_solvable(problem)?;
    cfg.validate()?;

    let n = cfg.grid_size;
    let grid: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();

    // Transition cache: posteriors and signal probabilities never change
    // across sweeps, only the value table does.
    let sig_counts: Vec<usize> = problem.consultants.iter().map(|c| c.n_signals()).collect();
    let total_sigs: usize = sig_counts.iter().sum();
    let mut trans = vec![Trans { prob: 0.0, lo: 0, w: 0.0 }; n * total_sigs];
    for (i, &p) in grid.iter().enumerate() {
        let mut slot = i * total_sigs;
        for c in &problem.consultants {
            for s in 0..c.n_signals() {
                let prob = signal_prob(p, c, s);
                if prob > 0.0 {
                    let post = posterior(p, c, s).expect("positive-probability signal");
                    let (lo, w) = locate(&grid, post);
                    trans[slot] = Trans { prob, lo: lo as u32, w };
                }
                slot += 1;
            }
        }
    }

    let mut values: Vec<f64> = grid
        .iter()
        .map(|&p| stopping_value(p, &problem.payoffs))
        .collect();
    let mut next = values.clone();

    let backup_value = |values: &[f64], i: usize, p: f64| -> f64 {
        let mut best = (p * problem.payoffs.u_rr).max((1.0 - p) * problem.payoffs.u_ll);
        let mut slot = i * total_sigs;
        for &count in &sig_counts {
            let mut score = 0.0;
            let mut feasible = false;
            for t in &trans[slot..slot + count] {
                if t.prob > 0.0 {
                    feasible = true;
                    let lo = t.lo as usize;
                    let v = if t.w == 0.0 {
                        values[lo]
                    } else {
                        values[lo] * (1.0 - t.w) + values[lo + 1] * t.w
                    };
                    score += t.prob * v;
                }
            }
            if feasible {
                best = best.max(score - problem.cost);
            }
            slot += count;
        }
        best
    };

    let mut iterations = 0;
    let mut final_change = f64::INFINITY;
    let mut converged = false;
    while iterations < cfg.max_iters {
        iterations += 1;
        let mut change = 0.0_f64;
        for i in 0..n {
            let v = backup_value(&values, i, grid[i]);
            change = change.max((v - values[i]).abs());
            next[i] = v;
        }
        std::mem::swap(&mut values, &mut next);
        final_change = change;
        if change < cfg.tol {
            converged = true;
            break;
        }
    }

    // Policy extraction against the converged table. Uses the same transition
    // formulas as the sweeps, so branch scores match the stored values.
    let mut policy = Vec::with_capacity(n);
    let mut ties = Vec::with_capacity(n);
    for &p in &grid {
        let branches = backup_branches(&grid, &values, problem, p);
        policy.push(branches.chosen(problem, TIE_TOL));
        ties.push(branches.ties(problem, TIE_TOL));
    }

    Ok(Solution {
        grid,
        values,
        policy,
        ties,
        meta: SolveMeta {
            iterations,
            final_change,
            converged,
            kind: SolverKind::Grid,
        },
    })
}

/// Extract the stop thresholds from a solved policy: `p_l` is the last point
/// of the initial run whose tie set contains StopL, `p_r` symmetrically for
/// StopR from the right.
pub fn thresholds(solution: &Solution) -> Thresholds {
    let n = solution.grid.len();
    let mut i_l = 0;
    while i_l + 1 < n && solution.ties[i_l + 1].contains(&Decision::StopL) {
        i_l += 1;
    }
    let mut i_r = n - 1;
    while i_r > 0 && solution.ties[i_r - 1].contains(&Decision::StopR) {
        i_r -= 1;
    }
    Thresholds {
        p_l: solution.grid[i_l],
        p_r: solution.grid[i_r],
    }
}
