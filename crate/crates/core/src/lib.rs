//! Solvers for a two-state sequential investment problem with costly
//! consultants.
//!
//! An investor must pick one of two investments whose payoff depends on an
//! unknown binary state. At every stage she may instead pay a fixed cost to
//! query one of several consultants, each a signal experiment about the
//! state. The library computes optimal Markov strategies and value functions
//! over the belief simplex:
//!
//! - [`model`] — domain types and exact Bayesian belief arithmetic.
//! - [`grid`] — value iteration on a discretized belief grid, with policy
//!   extraction and stop-threshold detection.
//! - [`lattice`] — exact finite-state solving when the consultants' log
//!   likelihood ratios share a common quantum, plus piecewise-linear value
//!   extraction over the prior.
//! - [`theory`] — a brute-force expectimax oracle, revealing-consultant cost
//!   thresholds, and the three-signal `(q, t)` consultant family.
//! - [`montecarlo`] — seeded, reproducible policy simulation with a bilinear
//!   payoff decomposition.

pub mod grid;
pub mod lattice;
pub mod model;
pub mod montecarlo;
pub mod theory;

pub use grid::{
    bellman_backup, default_max_iters, solve_grid, stopping_value, thresholds, GridConfig,
    Solution, SolveError, SolveMeta, SolverKind, Thresholds, DEFAULT_GRID_SIZE, TIE_TOL,
};
pub use lattice::{
    build_lattice, detect_rational_ratio, piecewise_extract, solve_lattice, try_solve_lattice,
    Lattice, LatticeError, LatticeSpec, PiecewiseValue, Segment, SignalStep,
    DEFAULT_MAX_DENOMINATOR,
};
pub use model::{
    log_odds_update, posterior, posterior_after_repeats, signal_prob, validate_problem, Belief,
    Consultant, Decision, ModelError, Payoffs, Problem, Rational, State, Violation, ViolationCode,
};
pub use montecarlo::{
    decomposition_check, sample_trace, simulate_policy, BeliefPolicy, SimulationError,
    SimulationReport, SimulationTrace,
};
pub use theory::{
    brute_force_value, classify_half_policy, make_three_signal, make_three_signal_exact,
    nonreveal_upper_bound, qt_reduce, revealer_band, revealer_lower_bound,
    revealing_cost_threshold, verify_revealer_used, HalfPolicyClass, HalfPolicyReport,
    RevealerAnalysis, TheoryError, ThreeSignalParams,
};
