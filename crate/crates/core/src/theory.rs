//! Structural analysis: the brute-force expectimax oracle, guarantees for
//! revealing consultants, and the three-signal consultant family.
//!
//! A consultant is *revealing* when, in each state, it has positive
//! probability of sending a signal that can only occur in that state;
//! observing such a signal pins the belief to 0 or 1. Querying a revealer
//! until it reveals pays at least `p0·u_Rr + (1−p0)·u_Ll − c/ε`, where ε
//! bounds the per-query revelation probability from below (the revelation
//! time is dominated by a geometric distribution). Strategies that ignore the
//! revealer are capped by how far non-revealing signals can push the
//! posterior in `n` steps, net of `c·n`. Below the cost where the first bound
//! dominates the second, every optimal strategy must query the revealer at
//! least once; [`revealing_cost_threshold`] locates that cost and
//! [`verify_revealer_used`] checks the conclusion on a solved policy.
//!
//! The three-signal family (signals `r`, `l`, `null`, symmetric payoffs)
//! identifies a consultant with a pair `(q, t)`: it speaks with probability
//! `t` and, when speaking, matches the state with probability `q`. Since the
//! null signal moves nothing and payoffs are undiscounted, a `(q, t)`
//! consultant at cost `c` is equivalent to the `(q, 1)` estimator at cost
//! `c/t`.

use crate::grid::{solve_grid, stopping_value, GridConfig, Solution, SolveError};
use crate::lattice::try_solve_lattice;
use crate::model::{
    posterior, signal_prob, Consultant, Decision, Payoffs, Problem, Rational, State, SIGNAL_L,
    SIGNAL_NULL, SIGNAL_R,
};
use crate::{grid, lattice};
use thiserror::Error;

/// Tolerance for matching a solved value against a closed-form target
/// (exact-lattice values make this safe).
pub const BAND_TOL: f64 = 1e-7;

#[derive(Debug, Error)]
pub enum TheoryError {
    #[error(transparent)]
    Solve(#[from] SolveError),

    #[error(transparent)]
    Lattice(#[from] lattice::LatticeError),

    #[error("oracle guard: horizon {horizon} with {consultants} consultants and {signals} signals is too large (limits: 8, 3, 4)")]
    SizeGuard {
        horizon: u32,
        consultants: usize,
        signals: usize,
    },

    #[error("consultant `{0}` is not revealing in both states")]
    NotRevealing(String),

    #[error("consultant `{0}` is revealing but was passed as non-revealing")]
    RevealingInJMinus(String),

    #[error("unknown consultant id `{0}`")]
    UnknownConsultant(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

const ORACLE_MAX_HORIZON: u32 = 8;
const ORACLE_MAX_CONSULTANTS: usize = 3;
const ORACLE_MAX_SIGNALS: usize = 4;

/// Exact expectimax over every depth-limited strategy tree: at most `horizon`
/// consultations along any path, then a forced stop.
///
/// This is an independent check on the solvers: it never discretizes beliefs
/// and maximizes over all adaptive strategies up to the horizon. The result
/// is a lower bound on the true value, exact whenever some optimal strategy
/// consults at most `horizon` times along every path. Returns the root value
/// together with every first decision within a tie tolerance of it.
pub fn brute_force_value(
    problem: &Problem,
    horizon: u32,
) -> Result<(f64, Vec<Decision>), TheoryError> {
    let max_signals = problem
        .consultants
        .iter()
        .map(|c| c.n_signals())
        .max()
        .unwrap_or(0);
    if horizon > ORACLE_MAX_HORIZON
        || problem.consultants.len() > ORACLE_MAX_CONSULTANTS
        || max_signals > ORACLE_MAX_SIGNALS
    {
        return Err(TheoryError::SizeGuard {
            horizon,
            consultants: problem.consultants.len(),
            signals: max_signals,
        });
    }
    grid::check_solvable(problem)?;

    fn expectimax(problem: &Problem, p: f64, depth: u32) -> f64 {
        let stop = stopping_value(p, &problem.payoffs);
        if depth == 0 {
            return stop;
        }
        let mut best = stop;
        for c in &problem.consultants {
            let mut score = -problem.cost;
            let mut feasible = false;
            for s in 0..c.n_signals() {
                let prob = signal_prob(p, c, s);
                if prob <= 0.0 {
                    continue;
                }
                feasible = true;
                let post = posterior(p, c, s).expect("positive-probability signal");
                score += prob * expectimax(problem, post, depth - 1);
            }
            if feasible {
                best = best.max(score);
            }
        }
        best
    }

    let p = problem.prior;
    let stop_r = p * problem.payoffs.u_rr;
    let stop_l = (1.0 - p) * problem.payoffs.u_ll;
    let consult: Vec<f64> = problem
        .consultants
        .iter()
        .map(|c| {
            let mut score = -problem.cost;
            let mut feasible = false;
            if horizon > 0 {
                for s in 0..c.n_signals() {
                    let prob = signal_prob(p, c, s);
                    if prob <= 0.0 {
                        continue;
                    }
                    feasible = true;
                    let post = posterior(p, c, s).expect("positive-probability signal");
                    score += prob * expectimax(problem, post, horizon - 1);
                }
            }
            if feasible {
                score
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    let branches = grid::BranchValues {
        stop_r,
        stop_l,
        consult,
    };
    Ok((branches.best(), branches.ties(problem, grid::TIE_TOL)))
}

// ---------------------------------------------------------------------------
// Revealing-consultant bounds
// ---------------------------------------------------------------------------

/// The consult-until-reveal guarantee for one revealing consultant.
#[derive(Debug, Clone, Copy)]
pub struct RevealerBound {
    /// Lower bound, over states, of the probability of a revealing signal.
    pub epsilon: f64,
    /// `p0·u_Rr + (1−p0)·u_Ll`: the perfect-information stake.
    pub stake: f64,
}

impl RevealerBound {
    /// Guaranteed payoff of consult-until-reveal at cost `c`.
    pub fn at(&self, c: f64) -> f64 {
        self.stake - c / self.epsilon
    }
}

/// Payoff guarantee of querying `j_star` until it reveals the state, as an
/// affine function of the cost. Errors unless `j_star` has a revealing signal
/// for each state.
pub fn revealer_lower_bound(problem: &Problem, j_star: &str) -> Result<RevealerBound, TheoryError> {
    let (_, consultant) = problem
        .consultant(j_star)
        .ok_or_else(|| TheoryError::UnknownConsultant(j_star.to_string()))?;
    let eps_r = consultant.reveal_prob(State::R);
    let eps_l = consultant.reveal_prob(State::L);
    if eps_r <= 0.0 || eps_l <= 0.0 {
        return Err(TheoryError::NotRevealing(j_star.to_string()));
    }
    Ok(RevealerBound {
        epsilon: eps_r.min(eps_l),
        stake: problem.prior * problem.payoffs.u_rr
            + (1.0 - problem.prior) * problem.payoffs.u_ll,
    })
}

fn max_posterior_share(problem: &Problem, j_minus: &[&str]) -> Result<f64, TheoryError> {
    let mut q_max: f64 = 0.5;
    for id in j_minus {
        let (_, c) = problem
            .consultant(id)
            .ok_or_else(|| TheoryError::UnknownConsultant(id.to_string()))?;
        for s in 0..c.n_signals() {
            let a = c.prob(State::R, s);
            let b = c.prob(State::L, s);
            if a + b <= 0.0 {
                continue;
            }
            let share = a.max(b) / (a + b);
            if share >= 1.0 {
                return Err(TheoryError::RevealingInJMinus(id.to_string()));
            }
            q_max = q_max.max(share);
        }
    }
    Ok(q_max)
}

/// Extreme posteriors after `n` maximally informative non-revealing signals:
/// the highest and lowest beliefs reachable when every per-signal posterior
/// share is capped by `q`.
fn posterior_range(p0: f64, q: f64, n: u32) -> (f64, f64) {
    let qn = q.powi(n as i32);
    let rn = (1.0 - q).powi(n as i32);
    let hi = p0 * qn / (p0 * qn + (1.0 - p0) * rn);
    let lo = p0 * rn / (p0 * rn + (1.0 - p0) * qn);
    if hi.is_finite() && lo.is_finite() && qn > 0.0 {
        (lo, hi)
    } else {
        // Powers underflowed: the range is effectively {0, 1}.
        (0.0, 1.0)
    }
}

/// Upper bound on the payoff of strategies that consult only `j_minus`, in
/// the literal displayed form: the prior-weighted stake times the extreme
/// posterior, maximized over the number of consultations.
///
/// The n = 0 term is `max(p0²·u_Rr, (1−p0)²·u_Ll)`, which sits *below* the
/// immediate stopping value — this form is a conservative reading. Threshold
/// computation therefore uses [`no_revealer_value_bound`], which dominates
/// every revealer-avoiding strategy including immediate stopping.
pub fn nonreveal_upper_bound(
    problem: &Problem,
    j_minus: &[&str],
    c: f64,
) -> Result<f64, TheoryError> {
    let q = max_posterior_share(problem, j_minus)?;
    Ok(maximize_over_depth(problem, q, c, |p0, payoffs, lo, hi| {
        let term_r = p0 * payoffs.u_rr * hi;
        let term_l = (1.0 - p0) * payoffs.u_ll * (1.0 - lo);
        term_r.max(term_l)
    }))
}

/// Sound upper bound on every strategy that never consults the revealer.
///
/// After `n` non-revealing signals the posterior lies between the extremes of
/// [`posterior_range`], so the terminal gain is at most
/// `max(u_Rr·hi_n, u_Ll·(1−lo_n))` and the net payoff at most that minus
/// `c·n`; the n = 0 term is exactly the stopping value, so the bound also
/// dominates never consulting at all.
pub fn no_revealer_value_bound(
    problem: &Problem,
    j_minus: &[&str],
    c: f64,
) -> Result<f64, TheoryError> {
    let q = max_posterior_share(problem, j_minus)?;
    Ok(maximize_over_depth(problem, q, c, |_, payoffs, lo, hi| {
        let term_r = payoffs.u_rr * hi;
        let term_l = payoffs.u_ll * (1.0 - lo);
        term_r.max(term_l)
    }))
}

/// Maximize `term(n) − c·n` over n ≥ 0. Terms are bounded by the maximal
/// gain, so once `c·n` exceeds `u_max − best` no later term can win and the
/// scan stops.
fn maximize_over_depth(
    problem: &Problem,
    q: f64,
    c: f64,
    term: impl Fn(f64, &Payoffs, f64, f64) -> f64,
) -> f64 {
    let p0 = problem.prior;
    let u_max = problem.payoffs.max_gain();
    let hard_cap = if c > 0.0 {
        ((u_max / c).ceil() as u64).min(2_000_000)
    } else {
        2_000_000
    };
    let mut best = f64::NEG_INFINITY;
    let mut n: u64 = 0;
    while n <= hard_cap {
        let (lo, hi) = posterior_range(p0, q, n as u32);
        let value = term(p0, &problem.payoffs, lo, hi) - c * n as f64;
        best = best.max(value);
        n += 1;
        if c > 0.0 && c * n as f64 > u_max - best {
            break;
        }
    }
    best
}

/// Result of the threshold analysis for one revealing consultant.
#[derive(Debug, Clone)]
pub struct RevealerAnalysis {
    pub j_star: String,
    /// Per-query revelation probability bound.
    pub epsilon: f64,
    /// The perfect-information stake at the prior.
    pub stake: f64,
    /// Largest cost below which consult-until-reveal dominates every
    /// revealer-avoiding strategy.
    pub cost_threshold: f64,
    /// Maximal posterior share of the non-revealing consultants, when any.
    pub q_max: Option<f64>,
}

impl RevealerAnalysis {
    pub fn sigma_star_payoff(&self, c: f64) -> f64 {
        self.stake - c / self.epsilon
    }
}

/// Largest cost `C` such that for every `c ≤ C` the consult-until-reveal
/// guarantee of `j_star` dominates the sound bound on revealer-avoiding
/// strategies (which always include immediate stopping), found by a scan
/// plus bisection to 1e-9.
///
/// The conclusion — below `C` every optimal strategy queries `j_star` at
/// least once — can be checked on a solved policy with
/// [`verify_revealer_used`].
pub fn revealing_cost_threshold(
    problem: &Problem,
    j_star: &str,
) -> Result<RevealerAnalysis, TheoryError> {
    let bound = revealer_lower_bound(problem, j_star)?;
    let j_minus: Vec<&str> = problem
        .consultants
        .iter()
        .map(|c| c.id())
        .filter(|id| *id != j_star)
        .collect();
    for id in &j_minus {
        let (_, c) = problem.consultant(id).expect("listed above");
        if c.is_revealing() {
            return Err(TheoryError::RevealingInJMinus(id.to_string()));
        }
    }
    let u_max = problem.payoffs.max_gain();
    if j_minus.is_empty() {
        // The only revealer-avoiding strategy is stopping, so the threshold
        // solves σ*(c) = stopping value.
        let stop = stopping_value(problem.prior, &problem.payoffs);
        let threshold = (bound.epsilon * (bound.stake - stop)).min(u_max);
        return Ok(RevealerAnalysis {
            j_star: j_star.to_string(),
            epsilon: bound.epsilon,
            stake: bound.stake,
            cost_threshold: threshold,
            q_max: None,
        });
    }
    let q_max = max_posterior_share(problem, &j_minus)?;

    let margin = |c: f64| -> f64 {
        let cap = no_revealer_value_bound(problem, &j_minus, c).expect("validated consultants");
        bound.at(c) - cap
    };

    // Geometric scan for the first sign change, then bisection (absolute
    // 1e-9, relative for thresholds far below that scale — against a strong
    // competitor the crossover can be exponentially small yet positive).
    let c_min = u_max * 1e-14;
    let c_max = u_max * (1.0 - 1e-9);
    let steps = 900;
    let ratio = (c_max / c_min).powf(1.0 / steps as f64);
    let mut threshold = 0.0;
    if margin(c_min) >= 0.0 {
        let mut lo = c_min;
        let mut hi = c_max;
        let mut all_positive = true;
        let mut c = c_min;
        for _ in 0..steps {
            let next = (c * ratio).min(c_max);
            if margin(next) < 0.0 {
                lo = c;
                hi = next;
                all_positive = false;
                break;
            }
            c = next;
        }
        if all_positive {
            threshold = u_max;
        } else {
            while hi - lo > 1e-9 && hi - lo > lo * 1e-6 {
                let mid = 0.5 * (lo + hi);
                if margin(mid) >= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            threshold = lo;
        }
    }

    Ok(RevealerAnalysis {
        j_star: j_star.to_string(),
        epsilon: bound.epsilon,
        stake: bound.stake,
        cost_threshold: threshold,
        q_max: Some(q_max),
    })
}

/// Check, on a solved Markov policy, that `Consult(j_star)` is assigned to
/// some belief reachable from the prior with positive probability.
///
/// The reachable set is explored over the solution's stored beliefs (exact
/// for lattice solutions; nearest-point for grid solutions).
pub fn policy_reaches_consultant(problem: &Problem, solution: &Solution, j_star: &str) -> bool {
    let mut visited = vec![false; solution.grid.len()];
    let mut stack = vec![solution.nearest_index(problem.prior)];
    while let Some(i) = stack.pop() {
        if visited[i] {
            continue;
        }
        visited[i] = true;
        if let Decision::Consult(id) = &solution.policy[i] {
            if id == j_star {
                return true;
            }
            let Some((_, c)) = problem.consultant(id) else {
                continue;
            };
            let p = solution.grid[i];
            for s in 0..c.n_signals() {
                if signal_prob(p, c, s) > 0.0 {
                    let post = posterior(p, c, s).expect("positive-probability signal");
                    stack.push(solution.nearest_index(post));
                }
            }
        }
    }
    false
}

/// Solve the problem at cost `c` (exactly on the lattice when the consultant
/// set allows it, otherwise on a grid of `grid_size` points) and report
/// whether the policy reaches a `Consult(j_star)` decision.
pub fn verify_revealer_used(
    problem: &Problem,
    j_star: &str,
    c: f64,
    grid_size: usize,
) -> Result<bool, TheoryError> {
    let at_cost = problem.with_cost(c);
    let solution = match try_solve_lattice(&at_cost)? {
        Some(s) => s,
        None => {
            let cfg = GridConfig::for_problem(&at_cost).with_grid_size(grid_size);
            solve_grid(&at_cost, &cfg)?
        }
    };
    Ok(policy_reaches_consultant(&at_cost, &solution, j_star))
}

// ---------------------------------------------------------------------------
// Three-signal consultants
// ---------------------------------------------------------------------------

/// A three-signal consultant `(q, t)`: speaks with probability `t`, and a
/// spoken signal matches the state with probability `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeSignalParams {
    pub q: f64,
    pub t: f64,
}

impl ThreeSignalParams {
    pub fn new(q: f64, t: f64) -> Result<Self, TheoryError> {
        if !(q > 0.5 && q <= 1.0) {
            return Err(TheoryError::Precondition(format!(
                "three-signal q = {q} must lie in (0.5, 1]"
            )));
        }
        if !(t > 0.0 && t <= 1.0) {
            return Err(TheoryError::Precondition(format!(
                "three-signal t = {t} must lie in (0, 1]"
            )));
        }
        Ok(ThreeSignalParams { q, t })
    }

    pub fn is_estimator(&self) -> bool {
        self.t == 1.0
    }

    pub fn is_revealer(&self) -> bool {
        self.q == 1.0
    }
}

/// Build the `(q, t)` consultant over the canonical signals `r`, `l`, `null`:
/// match probability `q·t`, mismatch `(1−q)·t`, silence `1−t` in both states.
pub fn make_three_signal(id: &str, params: ThreeSignalParams) -> Consultant {
    let ThreeSignalParams { q, t } = params;
    Consultant::new(
        id,
        vec![SIGNAL_R.into(), SIGNAL_L.into(), SIGNAL_NULL.into()],
        vec![q * t, (1.0 - q) * t, 1.0 - t],
        vec![(1.0 - q) * t, q * t, 1.0 - t],
    )
    .expect("canonical three-signal shape")
}

/// Exact-rational variant of [`make_three_signal`], for problems that should
/// lattice-detect exactly.
pub fn make_three_signal_exact(id: &str, q: Rational, t: Rational) -> Consultant {
    let one = Rational::from_integer(1);
    let match_p = q * t;
    let mismatch_p = (one - q) * t;
    let null_p = one - t;
    Consultant::new_exact(
        id,
        vec![SIGNAL_R.into(), SIGNAL_L.into(), SIGNAL_NULL.into()],
        vec![match_p, mismatch_p, null_p],
        vec![mismatch_p, match_p, null_p],
    )
    .expect("canonical three-signal shape")
}

/// The silence-free reduction: a `(q, t)` consultant at cost `c` is
/// equivalent to the `(q, 1)` estimator at cost `c/t` (silence changes
/// neither the belief nor, undiscounted, the payoff).
pub fn qt_reduce(params: ThreeSignalParams, c: f64) -> (ThreeSignalParams, f64) {
    (
        ThreeSignalParams { q: params.q, t: 1.0 },
        c / params.t,
    )
}

/// The maximal interval of stored beliefs where the value equals the
/// consult-until-reveal payoff `1 − c/t`, or `None` when no point matches.
/// For a revealer in a symmetric problem this set is convex and symmetric
/// around 1/2.
pub fn revealer_band(solution: &Solution, t: f64, c: f64) -> Option<(f64, f64)> {
    let target = 1.0 - c / t;
    let mut best: Option<(usize, usize)> = None;
    let mut run_start: Option<usize> = None;
    for i in 0..=solution.grid.len() {
        let matches = i < solution.grid.len() && (solution.values[i] - target).abs() < BAND_TOL;
        match (matches, run_start) {
            (true, None) => run_start = Some(i),
            (false, Some(start)) => {
                let len = i - start;
                if best.map_or(true, |(s, e)| len > e - s + 1) {
                    best = Some((start, i - 1));
                }
                run_start = None;
            }
            _ => {}
        }
    }
    best.map(|(s, e)| (solution.grid[s], solution.grid[e]))
}

/// Classification of the optimal strategy at prior 1/2 in a symmetric
/// three-signal problem containing a revealer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfPolicyClass {
    /// Stopping immediately is optimal.
    NoConsult,
    /// Consulting only the revealer is optimal.
    OnlyRevealer,
    /// Consulting is optimal but some optimal strategy never uses the
    /// revealer.
    NeverRevealer,
}

#[derive(Debug, Clone)]
pub struct HalfPolicyReport {
    pub class: HalfPolicyClass,
    pub value_at_half: f64,
    /// `1 − c/t` for the best revealer in the problem.
    pub revealer_target: f64,
    /// For `NeverRevealer`: whether a tie resolution avoiding the revealer
    /// indeed never reaches it from the prior.
    pub revealer_avoidable: Option<bool>,
}

fn three_signal_shape(c: &Consultant) -> Option<ThreeSignalParams> {
    let r = c.signal_index(SIGNAL_R)?;
    let l = c.signal_index(SIGNAL_L)?;
    let null = c.signal_index(SIGNAL_NULL)?;
    if c.n_signals() != 3 {
        return None;
    }
    let m = c.prob(State::R, r);
    let x = c.prob(State::R, l);
    let n = c.prob(State::R, null);
    // Symmetry across states.
    if (c.prob(State::L, l) - m).abs() > 1e-12
        || (c.prob(State::L, r) - x).abs() > 1e-12
        || (c.prob(State::L, null) - n).abs() > 1e-12
    {
        return None;
    }
    let t = m + x;
    if t <= 0.0 {
        return None;
    }
    let q = m / t;
    ThreeSignalParams::new(q, t).ok()
}

/// Decide, at prior 1/2, which of the three optimal-strategy shapes holds:
/// no consulting, only the revealer, or never the revealer.
///
/// Requires a symmetric three-signal problem (unit payoffs both sides, every
/// consultant of `(q, t)` shape, at least one revealer) at prior 1/2. The
/// problem is solved exactly on the lattice when possible, otherwise on the
/// default grid.
pub fn classify_half_policy(problem: &Problem) -> Result<HalfPolicyReport, TheoryError> {
    if (problem.prior - 0.5).abs() > 1e-12 {
        return Err(TheoryError::Precondition(format!(
            "prior must be 1/2, got {}",
            problem.prior
        )));
    }
    if (problem.payoffs.u_rr - 1.0).abs() > 1e-12 || (problem.payoffs.u_ll - 1.0).abs() > 1e-12 {
        return Err(TheoryError::Precondition(
            "payoffs must be the symmetric unit payoffs".into(),
        ));
    }
    let mut best_revealer: Option<(String, f64)> = None;
    for c in &problem.consultants {
        let params = three_signal_shape(c).ok_or_else(|| {
            TheoryError::Precondition(format!(
                "consultant `{}` is not a symmetric three-signal consultant",
                c.id()
            ))
        })?;
        if params.is_revealer() {
            let better = best_revealer
                .as_ref()
                .map_or(true, |(_, t)| params.t > *t);
            if better {
                best_revealer = Some((c.id().to_string(), params.t));
            }
        }
    }
    let (revealer_id, t) = best_revealer.ok_or_else(|| {
        TheoryError::Precondition("the problem contains no revealer".into())
    })?;
    let target = 1.0 - problem.cost / t;

    let solution = match try_solve_lattice(problem)? {
        Some(s) => s,
        None => solve_grid(problem, &GridConfig::for_problem(problem))?,
    };
    let value = solution.value_at(0.5);

    if (value - 0.5).abs() < BAND_TOL {
        return Ok(HalfPolicyReport {
            class: HalfPolicyClass::NoConsult,
            value_at_half: value,
            revealer_target: target,
            revealer_avoidable: None,
        });
    }
    if (value - target).abs() < BAND_TOL {
        return Ok(HalfPolicyReport {
            class: HalfPolicyClass::OnlyRevealer,
            value_at_half: value,
            revealer_target: target,
            revealer_avoidable: None,
        });
    }

    // Re-resolve ties away from the revealer and check it is never reached.
    let mut avoiding = solution.clone();
    for (i, ties) in avoiding.ties.iter().enumerate() {
        if let Some(alt) = ties
            .iter()
            .find(|d| !matches!(d, Decision::Consult(id) if *id == revealer_id))
        {
            avoiding.policy[i] = alt.clone();
        }
    }
    let avoidable = !policy_reaches_consultant(problem, &avoiding, &revealer_id);
    Ok(HalfPolicyReport {
        class: HalfPolicyClass::NeverRevealer,
        value_at_half: value,
        revealer_target: target,
        revealer_avoidable: Some(avoidable),
    })
}
