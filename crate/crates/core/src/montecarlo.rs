//! Seeded Monte Carlo simulation of belief policies.
//!
//! Each run draws a state from the prior, then repeatedly asks the policy for
//! a decision at the current belief, samples signals from the drawn state's
//! row, and tracks posteriors by Bayes rule until the policy stops (or the
//! step guard forces the better stopping action).
//!
//! Every run derives its own RNG stream from `(seed, run index)`, so reports
//! are bit-stable for a fixed seed regardless of execution order.
//!
//! Reporting uses the bilinear payoff accounting: with `P_r`, `P_l` the
//! conditional probabilities of picking the matching action and `E_r`, `E_l`
//! the conditional consultation counts, the mean payoff is
//!
//!   u_Rr·P_r·p0 + u_Ll·P_l·(1−p0) − (E_r·p0 + E_l·(1−p0))·c
//!
//! The report's `mean_payoff` is this stratified estimator (per-state sample
//! means reweighted by the prior), which makes the identity hold on the same
//! sample to float precision and keeps the conditional statistics reusable at
//! other priors.

use crate::grid::Solution;
use crate::model::{posterior, Decision, Problem, State};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimulationError {
    #[error("policy returned no decision at belief {0}")]
    UnmappedBelief(f64),

    #[error("policy consulted unknown consultant `{0}`")]
    UnknownConsultant(String),

    #[error("invalid simulation setup: {0}")]
    InvalidSetup(String),
}

/// A Markov policy over beliefs. `None` marks an unmapped belief, which the
/// simulator reports as an error.
pub trait BeliefPolicy {
    fn decide(&self, belief: f64) -> Option<Decision>;
}

impl<F> BeliefPolicy for F
where
    F: Fn(f64) -> Option<Decision>,
{
    fn decide(&self, belief: f64) -> Option<Decision> {
        self(belief)
    }
}

/// A solved value table acts as a policy through nearest-point lookup.
impl BeliefPolicy for Solution {
    fn decide(&self, belief: f64) -> Option<Decision> {
        Some(self.decision_at(belief).clone())
    }
}

/// Aggregate simulation statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub runs: u64,
    pub seed: u64,
    /// Stratified mean payoff (see module docs).
    pub mean_payoff: f64,
    /// Standard error of `mean_payoff`.
    pub std_error: f64,
    /// P(choose R | state r) and P(choose L | state l).
    pub p_r: f64,
    pub p_l: f64,
    /// Expected consultations conditional on each state.
    pub e_r: f64,
    pub e_l: f64,
    /// Runs that hit the step guard and were forced to stop.
    pub truncated_runs: u64,
}

/// One simulated history.
#[derive(Debug, Clone)]
pub struct SimulationTrace {
    pub state: State,
    pub steps: Vec<TraceStep>,
    pub terminal: Decision,
    pub total_cost: f64,
    pub truncated: bool,
}

#[derive(Debug, Clone)]
pub struct TraceStep {
    pub consultant_id: String,
    pub signal: String,
    pub posterior: f64,
}

/// Default step guard: `ceil(50/c)` leaves truncation probability negligible
/// even for consult-until-reveal policies.
pub fn default_max_steps(cost: f64) -> u32 {
    if cost > 0.0 {
        ((50.0 / cost).ceil() as u32).clamp(1, 10_000_000)
    } else {
        10_000_000
    }
}

struct RunOutcome {
    state: State,
    matched: bool,
    consults: u32,
    truncated: bool,
}

fn run_rng(seed: u64, run_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run_index);
    rng
}

fn sample_signal(consultant: &crate::model::Consultant, state: State, u: f64) -> usize {
    let row = consultant.row(state);
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (s, &prob) in row.iter().enumerate() {
        if prob > 0.0 {
            acc += prob;
            last_positive = s;
            if u < acc {
                return s;
            }
        }
    }
    last_positive
}

fn run_once(
    problem: &Problem,
    policy: &dyn BeliefPolicy,
    rng: &mut ChaCha8Rng,
    max_steps: u32,
    trace: Option<&mut SimulationTrace>,
) -> Result<RunOutcome, SimulationError> {
    let state = if rng.gen::<f64>() < problem.prior {
        State::R
    } else {
        State::L
    };
    let mut belief = problem.prior;
    let mut consults = 0u32;
    let mut truncated = false;
    let mut collected: Vec<TraceStep> = Vec::new();

    let terminal = loop {
        if consults >= max_steps {
            truncated = true;
            // Forced stop at the better action for the current belief.
            break if belief * problem.payoffs.u_rr >= (1.0 - belief) * problem.payoffs.u_ll {
                Decision::StopR
            } else {
                Decision::StopL
            };
        }
        let decision = policy
            .decide(belief)
            .ok_or(SimulationError::UnmappedBelief(belief))?;
        match decision {
            Decision::StopR => break Decision::StopR,
            Decision::StopL => break Decision::StopL,
            Decision::Consult(id) => {
                let (_, consultant) = problem
                    .consultant(&id)
                    .ok_or_else(|| SimulationError::UnknownConsultant(id.clone()))?;
                let u = rng.gen::<f64>();
                let signal = sample_signal(consultant, state, u);
                belief = posterior(belief, consultant, signal)
                    .expect("sampled signal has positive probability");
                consults += 1;
                if trace.is_some() {
                    collected.push(TraceStep {
                        consultant_id: id,
                        signal: consultant.signals()[signal].clone(),
                        posterior: belief,
                    });
                }
            }
        }
    };

    let matched = match (state, &terminal) {
        (State::R, Decision::StopR) => true,
        (State::L, Decision::StopL) => true,
        _ => false,
    };
    if let Some(t) = trace {
        t.state = state;
        t.steps = collected;
        t.terminal = terminal;
        t.total_cost = consults as f64 * problem.cost;
        t.truncated = truncated;
    }
    Ok(RunOutcome {
        state,
        matched,
        consults,
        truncated,
    })
}

/// Simulate `runs` independent histories of `policy` on `problem`.
///
/// Deterministic given `(seed, runs)`: run `i` draws from its own stream, so
/// the report does not depend on scheduling. Truncated runs (those that hit
/// `max_steps`) are forced to stop at the better action, counted normally and
/// tallied in `truncated_runs`.
pub fn simulate_policy(
    problem: &Problem,
    policy: &dyn BeliefPolicy,
    runs: u64,
    seed: u64,
    max_steps: u32,
) -> Result<SimulationReport, SimulationError> {
    if runs == 0 {
        return Err(SimulationError::InvalidSetup("runs must be positive".into()));
    }

    // Per-state tallies: count, matches, consults, and payoff moments.
    let mut n = [0u64; 2];
    let mut matches = [0u64; 2];
    let mut consults = [0f64; 2];
    let mut payoff_sum = [0f64; 2];
    let mut payoff_sq = [0f64; 2];
    let mut truncated_runs = 0u64;

    let gain = [problem.payoffs.u_rr, problem.payoffs.u_ll];
    for i in 0..runs {
        let mut rng = run_rng(seed, i);
        let outcome = run_once(problem, policy, &mut rng, max_steps, None)?;
        let side = match outcome.state {
            State::R => 0,
            State::L => 1,
        };
        n[side] += 1;
        matches[side] += outcome.matched as u64;
        consults[side] += outcome.consults as f64;
        let payoff = outcome.matched as u64 as f64 * gain[side]
            - outcome.consults as f64 * problem.cost;
        payoff_sum[side] += payoff;
        payoff_sq[side] += payoff * payoff;
        truncated_runs += outcome.truncated as u64;
    }

    let cond_mean = |side: usize| -> (f64, f64, f64) {
        if n[side] == 0 {
            return (0.0, 0.0, 0.0);
        }
        let count = n[side] as f64;
        let p = matches[side] as f64 / count;
        let e = consults[side] / count;
        let var = if n[side] > 1 {
            (payoff_sq[side] - payoff_sum[side] * payoff_sum[side] / count) / (count - 1.0)
        } else {
            0.0
        };
        (p, e, var.max(0.0))
    };
    let (p_r, e_r, var_r) = cond_mean(0);
    let (p_l, e_l, var_l) = cond_mean(1);

    let p0 = problem.prior;
    let mean_payoff = gain[0] * p_r * p0 + gain[1] * p_l * (1.0 - p0)
        - (e_r * p0 + e_l * (1.0 - p0)) * problem.cost;
    let var_term = |w: f64, var: f64, count: u64| -> f64 {
        if count > 0 {
            w * w * var / count as f64
        } else {
            0.0
        }
    };
    let std_error = (var_term(p0, var_r, n[0]) + var_term(1.0 - p0, var_l, n[1])).sqrt();

    Ok(SimulationReport {
        runs,
        seed,
        mean_payoff,
        std_error,
        p_r,
        p_l,
        e_r,
        e_l,
        truncated_runs,
    })
}

/// Replay a single run (the same stream `simulate_policy` would use for
/// `run_index`) and return its full trace.
pub fn sample_trace(
    problem: &Problem,
    policy: &dyn BeliefPolicy,
    seed: u64,
    run_index: u64,
    max_steps: u32,
) -> Result<SimulationTrace, SimulationError> {
    let mut trace = SimulationTrace {
        state: State::R,
        steps: Vec::new(),
        terminal: Decision::StopR,
        total_cost: 0.0,
        truncated: false,
    };
    let mut rng = run_rng(seed, run_index);
    run_once(problem, policy, &mut rng, max_steps, Some(&mut trace))?;
    Ok(trace)
}

/// Residual of the bilinear payoff identity on a report. Below 1e-12 for any
/// report produced by [`simulate_policy`].
pub fn decomposition_check(report: &SimulationReport, problem: &Problem) -> f64 {
    let p0 = problem.prior;
    let reconstructed = problem.payoffs.u_rr * report.p_r * p0
        + problem.payoffs.u_ll * report.p_l * (1.0 - p0)
        - (report.e_r * p0 + report.e_l * (1.0 - p0)) * problem.cost;
    (report.mean_payoff - reconstructed).abs()
}
