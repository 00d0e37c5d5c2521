//! Exact dynamic programming for consultant sets with a rational ratio.
//!
//! When every finite nonzero log-likelihood ratio `ln(S_j(s|r)/S_j(s|l))` is
//! an integer multiple of a common quantum `Q`, the posterior can only move
//! along the log-odds lattice `logit(p0) + k·Q`. Beliefs outside the band
//! `[c/u_Rr, 1 − c/u_Ll]` are provably stopping (even perfect information
//! cannot repay one more consultation there), so the reachable consult states
//! form a finite set and the Bellman recursion can be solved on it directly,
//! with no interpolation. At a fixed cost the resulting value function is
//! piecewise linear in the prior; [`piecewise_extract`] recovers the segments
//! from a prior sweep.
//!
//! Detection is numeric by default: pairwise ratio ratios are run through a
//! continued-fraction expansion and accepted only when a convergent with a
//! bounded denominator reproduces the ratio to float precision. Problems
//! authored with exact rational likelihoods skip floats entirely: each ratio
//! is factored into primes and commensurability is decided on the exponent
//! vectors.

use crate::grid::{
    check_solvable, default_max_iters, stopping_value, BranchValues, Solution, SolveError,
    SolveMeta, SolverKind, TIE_TOL,
};
use crate::model::{expit, logit, signal_prob, Consultant, Decision, Problem};
use num::integer::{gcd, lcm};
use std::collections::BTreeMap;
use thiserror::Error;

/// Default denominator bound for continued-fraction detection.
pub const DEFAULT_MAX_DENOMINATOR: i64 = 1_000_000;

/// Sup-norm tolerance for value iteration on the finite lattice.
pub const LATTICE_TOL: f64 = 1e-13;

/// Residual bound for merging sweep points into one affine segment.
pub const PIECEWISE_AFFINE_TOL: f64 = 1e-8;

/// Default number of priors swept by [`piecewise_extract`] callers.
pub const DEFAULT_SWEEP_POINTS: usize = 2001;

/// Integer offsets are verified to reproduce their log-ratio within this
/// relative error.
pub const OFFSET_VERIFY_RTOL: f64 = 1e-9;

/// A convergent counts as exact only when it reproduces the float ratio to
/// this relative error: a few hundred ulps, far below any coincidental
/// approximation a bounded denominator can reach.
const CF_EXACT_RTOL: f64 = 1e-13;

/// Log-ratios below this magnitude are treated as uninformative (offset 0).
const LOG_RATIO_ZERO_TOL: f64 = 1e-12;

/// Largest admissible integer offset. A step of several thousand quanta would
/// mean thousands of consultations to undo one signal, far beyond anything
/// solvable here; rejecting it also screens out coincidental float matches.
pub const MAX_OFFSET: i64 = 4096;

const MAX_LATTICE_POINTS: i64 = 2_000_000;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error(transparent)]
    Solve(#[from] SolveError),

    #[error("lattice spec has no entry matching consultant `{0}`")]
    SpecMismatch(String),

    #[error("lattice would need more than {0} points; the quantum is too small for this cost")]
    BandTooLarge(i64),

    #[error("piecewise extraction needs at least 2 swept priors")]
    SweepTooSmall,
}

// ---------------------------------------------------------------------------
// Spec types
// ---------------------------------------------------------------------------

/// How one signal moves the belief along the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalStep {
    /// Shift by `k` quanta (0 for uninformative signals).
    Finite(i64),
    /// Pins the posterior to 1.
    RevealR,
    /// Pins the posterior to 0.
    RevealL,
    /// Zero probability in both states; never observed.
    Impossible,
}

#[derive(Debug, Clone)]
pub struct ConsultantSteps {
    pub consultant_id: String,
    pub steps: Vec<SignalStep>,
}

/// A detected common log-odds quantum with integer offsets per signal.
///
/// `quantum` is maximal: the gcd of the nonzero offsets is 1. When no signal
/// moves the belief at all (revealers and uninformative signals only) any
/// quantum works; the conventional value 1.0 is stored.
#[derive(Debug, Clone)]
pub struct LatticeSpec {
    pub quantum: f64,
    pub consultants: Vec<ConsultantSteps>,
}

impl LatticeSpec {
    pub fn steps_for(&self, consultant_id: &str) -> Option<&ConsultantSteps> {
        self.consultants
            .iter()
            .find(|c| c.consultant_id == consultant_id)
    }

    /// True when some signal actually shifts the belief by a finite amount.
    pub fn has_finite_moves(&self) -> bool {
        self.consultants
            .iter()
            .flat_map(|c| c.steps.iter())
            .any(|s| matches!(s, SignalStep::Finite(k) if *k != 0))
    }
}

// ---------------------------------------------------------------------------
// Detection
// ---------------------------------------------------------------------------

/// Detect whether a consultant set has a rational ratio, returning the
/// maximal quantum and integer offsets when it does.
///
/// Consultants carrying exact rational rows are detected exactly through
/// prime factorization; otherwise detection runs on floats via continued
/// fractions with denominators bounded by `max_denominator`. Absence is a
/// value, not an error.
pub fn detect_rational_ratio(
    consultants: &[Consultant],
    max_denominator: i64,
) -> Option<LatticeSpec> {
    if consultants.is_empty() {
        return None;
    }
    if consultants.iter().all(exact_rows_in_bounds) {
        detect_exact(consultants)
    } else {
        detect_float(consultants, max_denominator)
    }
}

/// The exact path factors ratio products of the row entries; keeping every
/// numerator and denominator within 1e6 bounds those products by 1e12, where
/// trial division up to 1e6 leaves at most a prime remainder. Larger (or
/// negative) rationals fall back to float detection.
fn exact_rows_in_bounds(consultant: &Consultant) -> bool {
    const MAX_PART: i64 = 1_000_000;
    match consultant.exact_rows() {
        None => false,
        Some((row_r, row_l)) => row_r.iter().chain(row_l).all(|x| {
            (0..=MAX_PART).contains(x.numer()) && (1..=MAX_PART).contains(x.denom())
        }),
    }
}

/// Classification shared by both detection paths: everything except the
/// finite nonzero ratios, which each path resolves its own way.
enum RawStep {
    Fixed(SignalStep),
    /// Index into the pending log-ratio list.
    Pending(usize),
}

fn classify_float(consultants: &[Consultant]) -> (Vec<Vec<RawStep>>, Vec<f64>) {
    let mut raw = Vec::with_capacity(consultants.len());
    let mut lambdas = Vec::new();
    for c in consultants {
        let mut steps = Vec::with_capacity(c.n_signals());
        for s in 0..c.n_signals() {
            let a = c.row(crate::model::State::R)[s];
            let b = c.row(crate::model::State::L)[s];
            let step = if a == 0.0 && b == 0.0 {
                RawStep::Fixed(SignalStep::Impossible)
            } else if b == 0.0 {
                RawStep::Fixed(SignalStep::RevealR)
            } else if a == 0.0 {
                RawStep::Fixed(SignalStep::RevealL)
            } else {
                let lambda = (a / b).ln();
                if lambda.abs() <= LOG_RATIO_ZERO_TOL {
                    RawStep::Fixed(SignalStep::Finite(0))
                } else {
                    lambdas.push(lambda);
                    RawStep::Pending(lambdas.len() - 1)
                }
            };
            steps.push(step);
        }
        raw.push(steps);
    }
    (raw, lambdas)
}

fn assemble_spec(
    consultants: &[Consultant],
    raw: Vec<Vec<RawStep>>,
    quantum: f64,
    offsets: &[i64],
) -> LatticeSpec {
    let steps = raw
        .into_iter()
        .zip(consultants)
        .map(|(row, c)| ConsultantSteps {
            consultant_id: c.id().to_string(),
            steps: row
                .into_iter()
                .map(|r| match r {
                    RawStep::Fixed(s) => s,
                    RawStep::Pending(i) => SignalStep::Finite(offsets[i]),
                })
                .collect(),
        })
        .collect();
    LatticeSpec {
        quantum,
        consultants: steps,
    }
}

fn detect_float(consultants: &[Consultant], max_denominator: i64) -> Option<LatticeSpec> {
    let (raw, lambdas) = classify_float(consultants);
    if lambdas.is_empty() {
        return Some(assemble_spec(consultants, raw, 1.0, &[]));
    }

    // Reference ratio: the largest magnitude, so every pairwise ratio lies in
    // [-1, 1] and its continued fraction starts tame.
    let lam_ref = lambdas
        .iter()
        .copied()
        .max_by(|a, b| a.abs().total_cmp(&b.abs()))
        .unwrap();

    let mut fractions = Vec::with_capacity(lambdas.len());
    for &lam in &lambdas {
        fractions.push(rationalize(lam / lam_ref, max_denominator)?);
    }

    let mut common_den: i128 = 1;
    for &(_, q) in &fractions {
        common_den = lcm(common_den, q as i128);
        if common_den > 1 << 40 {
            return None;
        }
    }
    let sign_ref: i128 = if lam_ref < 0.0 { -1 } else { 1 };
    let mut offsets_raw: Vec<i128> = fractions
        .iter()
        .map(|&(p, q)| sign_ref * p as i128 * (common_den / q as i128))
        .collect();
    let mut g: i128 = 0;
    for &k in &offsets_raw {
        g = gcd(g, k.abs());
    }
    if g == 0 {
        return None;
    }
    for k in &mut offsets_raw {
        *k /= g;
    }
    if offsets_raw.iter().any(|k| k.abs() > MAX_OFFSET as i128) {
        return None;
    }
    let offsets: Vec<i64> = offsets_raw.iter().map(|&k| k as i64).collect();
    let quantum = lam_ref.abs() * g as f64 / common_den as f64;

    // Every stored offset must reproduce its ratio.
    for (&lam, &k) in lambdas.iter().zip(&offsets) {
        if (k as f64 * quantum - lam).abs() > OFFSET_VERIFY_RTOL * lam.abs() {
            return None;
        }
    }

    Some(assemble_spec(consultants, raw, quantum, &offsets))
}

/// Continued-fraction expansion of `x`, accepted only when a convergent with
/// denominator ≤ `max_denominator` matches `x` to float precision.
fn rationalize(x: f64, max_denominator: i64) -> Option<(i64, i64)> {
    if !x.is_finite() {
        return None;
    }
    let neg = x < 0.0;
    let target = x.abs();
    let (mut h2, mut h1): (i64, i64) = (0, 1);
    let (mut k2, mut k1): (i64, i64) = (1, 0);
    let mut v = target;
    for _ in 0..64 {
        let a = v.floor();
        if !(0.0..=9.0e15).contains(&a) {
            return None;
        }
        let a = a as i64;
        let h0 = a.checked_mul(h1)?.checked_add(h2)?;
        let k0 = a.checked_mul(k1)?.checked_add(k2)?;
        if k0 > max_denominator {
            return None;
        }
        if (target - h0 as f64 / k0 as f64).abs() <= CF_EXACT_RTOL * target {
            return Some((if neg { -h0 } else { h0 }, k0));
        }
        let frac = v - a as f64;
        if frac < 1e-18 {
            return None;
        }
        v = 1.0 / frac;
        h2 = h1;
        h1 = h0;
        k2 = k1;
        k1 = k0;
    }
    None
}

/// Exact detection: each ratio is a positive rational, and the set is
/// commensurable in log iff the prime-exponent vectors of all ratios are
/// integer multiples of one primitive vector.
fn detect_exact(consultants: &[Consultant]) -> Option<LatticeSpec> {
    use num::Zero;

    let mut raw = Vec::with_capacity(consultants.len());
    let mut vectors: Vec<BTreeMap<u64, i64>> = Vec::new();
    for c in consultants {
        let (row_r, row_l) = c.exact_rows().expect("checked by caller");
        let mut steps = Vec::with_capacity(c.n_signals());
        for s in 0..c.n_signals() {
            let (a, b) = (row_r[s], row_l[s]);
            let step = if a.is_zero() && b.is_zero() {
                RawStep::Fixed(SignalStep::Impossible)
            } else if b.is_zero() {
                RawStep::Fixed(SignalStep::RevealR)
            } else if a.is_zero() {
                RawStep::Fixed(SignalStep::RevealL)
            } else if a == b {
                RawStep::Fixed(SignalStep::Finite(0))
            } else {
                // ratio = (a.numer·b.denom) / (a.denom·b.numer), both positive
                let num = (*a.numer() as i128 * *b.denom() as i128) as u64;
                let den = (*a.denom() as i128 * *b.numer() as i128) as u64;
                let mut vec = factor_exponents(num);
                for (prime, e) in factor_exponents(den) {
                    *vec.entry(prime).or_insert(0) -= e;
                }
                vec.retain(|_, e| *e != 0);
                if vec.is_empty() {
                    // num == den after reduction; uninformative
                    RawStep::Fixed(SignalStep::Finite(0))
                } else {
                    vectors.push(vec);
                    RawStep::Pending(vectors.len() - 1)
                }
            };
            steps.push(step);
        }
        raw.push(steps);
    }

    if vectors.is_empty() {
        return Some(assemble_spec(consultants, raw, 1.0, &[]));
    }

    // Primitive direction from the first vector.
    let mut content: i64 = 0;
    for &e in vectors[0].values() {
        content = gcd(content, e.abs());
    }
    let direction: BTreeMap<u64, i64> = vectors[0]
        .iter()
        .map(|(&p, &e)| (p, e / content))
        .collect();

    // Each vector must be an integer multiple of the direction.
    let (&probe_prime, &probe_exp) = direction.iter().next().unwrap();
    let mut multiples: Vec<i64> = Vec::with_capacity(vectors.len());
    for v in &vectors {
        let ve = *v.get(&probe_prime).unwrap_or(&0);
        if probe_exp == 0 || ve % probe_exp != 0 {
            return None;
        }
        let m = ve / probe_exp;
        if m == 0 {
            return None;
        }
        let mut primes: Vec<u64> = v.keys().chain(direction.keys()).copied().collect();
        primes.dedup();
        for p in primes {
            let lhs = *v.get(&p).unwrap_or(&0);
            let rhs = m.checked_mul(*direction.get(&p).unwrap_or(&0))?;
            if lhs != rhs {
                return None;
            }
        }
        multiples.push(m);
    }

    let mut d: i64 = 0;
    for &m in &multiples {
        d = gcd(d, m.abs());
    }
    let mut offsets: Vec<i64> = multiples.iter().map(|&m| m / d).collect();
    if offsets.iter().any(|k| k.abs() > MAX_OFFSET) {
        return None;
    }
    let mut quantum: f64 = d as f64
        * direction
            .iter()
            .map(|(&p, &e)| e as f64 * (p as f64).ln())
            .sum::<f64>();
    if quantum < 0.0 {
        quantum = -quantum;
        for k in &mut offsets {
            *k = -*k;
        }
    }

    Some(assemble_spec(consultants, raw, quantum, &offsets))
}

/// Prime-exponent map by trial division. Inputs come from reduced ratios of
/// bounded fractions (≤ 1e12), so any remainder after the sweep is prime.
fn factor_exponents(mut n: u64) -> BTreeMap<u64, i64> {
    let mut out = BTreeMap::new();
    let mut d: u64 = 2;
    while d <= 1_000_000 && d * d <= n {
        while n % d == 0 {
            *out.entry(d).or_insert(0) += 1;
            n /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

// ---------------------------------------------------------------------------
// Lattice construction
// ---------------------------------------------------------------------------

/// The finite state set of a rational-ratio problem: integer lattice indices
/// whose beliefs lie inside the consult-feasible band, anchored at the prior.
#[derive(Debug, Clone)]
pub struct Lattice {
    pub prior: f64,
    pub base_log_odds: f64,
    pub quantum: f64,
    /// `[c/u_Rr, 1 − c/u_Ll]`: outside it, stopping provably dominates.
    pub belief_band: (f64, f64),
    /// In-band indices, ascending. May be empty (then every belief,
    /// including the prior, is absorbing).
    pub indices: Vec<i64>,
    pub spec: LatticeSpec,
}

impl Lattice {
    /// Belief at lattice index `k`; index 0 is exactly the prior.
    pub fn belief(&self, k: i64) -> f64 {
        if k == 0 {
            self.prior
        } else {
            expit(self.base_log_odds + k as f64 * self.quantum)
        }
    }
}

/// Enumerate the in-band lattice for a problem whose consultants match
/// `spec`. Beliefs outside the band are absorbing with the stopping value: if
/// `(1−p)·u_Ll ≤ c` even perfect information cannot repay one consultation,
/// so StopR is optimal there, and symmetrically on the other side.
pub fn build_lattice(problem: &Problem, spec: &LatticeSpec) -> Result<Lattice, LatticeError> {
    check_solvable(problem)?;
    for c in &problem.consultants {
        match spec.steps_for(c.id()) {
            Some(steps) if steps.steps.len() == c.n_signals() => {}
            _ => return Err(LatticeError::SpecMismatch(c.id().to_string())),
        }
    }

    let band_lo = problem.cost / problem.payoffs.u_rr;
    let band_hi = 1.0 - problem.cost / problem.payoffs.u_ll;
    let base = logit(problem.prior);
    let quantum = spec.quantum;

    let mut indices = Vec::new();
    if band_lo <= band_hi && band_lo < 1.0 && band_hi > 0.0 && base.is_finite() {
        let lo_l = logit(band_lo.max(0.0));
        let hi_l = logit(band_hi.min(1.0));
        let k_min = ((lo_l - base) / quantum).floor() as i64 - 1;
        let k_max = ((hi_l - base) / quantum).ceil() as i64 + 1;
        if k_max - k_min > MAX_LATTICE_POINTS {
            return Err(LatticeError::BandTooLarge(MAX_LATTICE_POINTS));
        }
        for k in k_min..=k_max {
            let b = if k == 0 {
                problem.prior
            } else {
                expit(base + k as f64 * quantum)
            };
            if b >= band_lo && b <= band_hi {
                indices.push(k);
            }
        }
    }

    Ok(Lattice {
        prior: problem.prior,
        base_log_odds: base,
        quantum,
        belief_band: (band_lo, band_hi),
        indices,
        spec: spec.clone(),
    })
}

// ---------------------------------------------------------------------------
// Lattice solver
// ---------------------------------------------------------------------------

enum Target {
    /// Another in-band state.
    Interior(usize),
    /// Absorbing continuation with a fixed value.
    Fixed(f64),
}

/// Solve the Bellman recursion exactly on the finite lattice state set.
///
/// Value iteration starts from the stopping values (absorbing states fixed)
/// and runs to sup-norm [`LATTICE_TOL`]. The returned solution lists, in
/// belief order: the revealed beliefs 0 and 1, every in-band point, the prior
/// (even when absorbing), and every one-step overshoot target outside the
/// band, so downstream policy lookups cover all reachable beliefs.
pub fn solve_lattice(problem: &Problem, lattice: &Lattice) -> Result<Solution, LatticeError> {
    check_solvable(problem)?;
    let payoffs = &problem.payoffs;
    let n = lattice.indices.len();
    let pos_of: BTreeMap<i64, usize> = lattice
        .indices
        .iter()
        .enumerate()
        .map(|(i, &k)| (k, i))
        .collect();

    // Transition table per in-band state.
    struct Arm {
        prob: f64,
        target: Target,
    }
    let mut arms: Vec<Vec<Vec<Arm>>> = Vec::with_capacity(n); // [state][consultant] -> arms
    for &k in &lattice.indices {
        let p = lattice.belief(k);
        let mut per_state = Vec::with_capacity(problem.consultants.len());
        for c in &problem.consultants {
            let steps = &lattice.spec.steps_for(c.id()).expect("validated").steps;
            let mut list = Vec::new();
            for s in 0..c.n_signals() {
                let prob = signal_prob(p, c, s);
                if prob <= 0.0 {
                    continue;
                }
                let target = match steps[s] {
                    SignalStep::Impossible => continue,
                    SignalStep::RevealR => Target::Fixed(payoffs.u_rr),
                    SignalStep::RevealL => Target::Fixed(payoffs.u_ll),
                    SignalStep::Finite(o) => match pos_of.get(&(k + o)) {
                        Some(&idx) => Target::Interior(idx),
                        None => Target::Fixed(stopping_value(lattice.belief(k + o), payoffs)),
                    },
                };
                list.push(Arm { prob, target });
            }
            per_state.push(list);
        }
        arms.push(per_state);
    }

    let mut values: Vec<f64> = lattice
        .indices
        .iter()
        .map(|&k| stopping_value(lattice.belief(k), payoffs))
        .collect();
    let mut next = values.clone();
    let max_iters = default_max_iters(problem.cost);
    let mut iterations = 0;
    let mut final_change = 0.0;
    let mut converged = n == 0;
    while !converged && iterations < max_iters {
        iterations += 1;
        let mut change = 0.0_f64;
        for (i, &k) in lattice.indices.iter().enumerate() {
            let p = lattice.belief(k);
            let mut best = stopping_value(p, payoffs);
            for consultant_arms in &arms[i] {
                if consultant_arms.is_empty() {
                    continue;
                }
                let mut score = -problem.cost;
                for arm in consultant_arms {
                    let v = match arm.target {
                        Target::Interior(idx) => values[idx],
                        Target::Fixed(v) => v,
                    };
                    score += arm.prob * v;
                }
                best = best.max(score);
            }
            change = change.max((best - values[i]).abs());
            next[i] = best;
        }
        std::mem::swap(&mut values, &mut next);
        final_change = change;
        if change < LATTICE_TOL {
            converged = true;
        }
    }

    // Assemble display rows: absorbing edges, in-band points, the prior, and
    // one-step overshoots.
    struct Row {
        belief: f64,
        value: f64,
        policy: Decision,
        ties: Vec<Decision>,
    }
    let stop_row = |p: f64| -> Row {
        let branches = BranchValues {
            stop_r: p * payoffs.u_rr,
            stop_l: (1.0 - p) * payoffs.u_ll,
            consult: vec![],
        };
        Row {
            belief: p,
            value: branches.best(),
            policy: branches.chosen(problem, TIE_TOL),
            ties: branches.ties(problem, TIE_TOL),
        }
    };

    let mut rows: Vec<Row> = Vec::new();
    rows.push(stop_row(0.0));
    rows.push(stop_row(1.0));
    if n == 0 {
        rows.push(stop_row(problem.prior));
    } else {
        if pos_of.get(&0).is_none() {
            rows.push(stop_row(problem.prior));
        }
        let mut overshoots: Vec<i64> = Vec::new();
        for (i, &k) in lattice.indices.iter().enumerate() {
            // Final backup for ties against the converged table.
            let p = lattice.belief(k);
            let consult: Vec<f64> = arms[i]
                .iter()
                .map(|consultant_arms| {
                    if consultant_arms.is_empty() {
                        return f64::NEG_INFINITY;
                    }
                    let mut score = -problem.cost;
                    for arm in consultant_arms {
                        score += arm.prob
                            * match arm.target {
                                Target::Interior(idx) => values[idx],
                                Target::Fixed(v) => v,
                            };
                    }
                    score
                })
                .collect();
            let branches = BranchValues {
                stop_r: p * payoffs.u_rr,
                stop_l: (1.0 - p) * payoffs.u_ll,
                consult,
            };
            rows.push(Row {
                belief: p,
                value: branches.best(),
                policy: branches.chosen(problem, TIE_TOL),
                ties: branches.ties(problem, TIE_TOL),
            });
            // Collect out-of-band one-step targets.
            for (c, steps) in problem
                .consultants
                .iter()
                .zip(lattice.spec.consultants.iter())
            {
                for s in 0..c.n_signals() {
                    if let SignalStep::Finite(o) = steps.steps[s] {
                        if signal_prob(p, c, s) > 0.0 && pos_of.get(&(k + o)).is_none() {
                            overshoots.push(k + o);
                        }
                    }
                }
            }
        }
        overshoots.sort_unstable();
        overshoots.dedup();
        for k in overshoots {
            rows.push(stop_row(lattice.belief(k)));
        }
    }

    rows.sort_by(|a, b| a.belief.total_cmp(&b.belief));
    rows.dedup_by(|a, b| a.belief == b.belief);

    Ok(Solution {
        grid: rows.iter().map(|r| r.belief).collect(),
        values: rows.iter().map(|r| r.value).collect(),
        policy: rows.iter().map(|r| r.policy.clone()).collect(),
        ties: rows.into_iter().map(|r| r.ties).collect(),
        meta: SolveMeta {
            iterations,
            final_change,
            converged,
            kind: SolverKind::Lattice,
        },
    })
}

/// Convenience: detect, build and solve in one call. `None` when the
/// consultant set has no detectable rational ratio, and also when the
/// detected quantum is too fine for the cost band to stay finite at a
/// solvable size (the grid solver is the fallback in both cases).
pub fn try_solve_lattice(problem: &Problem) -> Result<Option<Solution>, LatticeError> {
    match detect_rational_ratio(&problem.consultants, DEFAULT_MAX_DENOMINATOR) {
        None => Ok(None),
        Some(spec) => match build_lattice(problem, &spec) {
            Err(LatticeError::BandTooLarge(_)) => Ok(None),
            Err(e) => Err(e),
            Ok(lattice) => solve_lattice(problem, &lattice).map(Some),
        },
    }
}

/// Exact value at one prior, via the lattice.
pub fn lattice_value_at_prior(problem: &Problem, spec: &LatticeSpec) -> Result<f64, LatticeError> {
    let lattice = build_lattice(problem, spec)?;
    let solution = solve_lattice(problem, &lattice)?;
    Ok(solution.value_at(problem.prior))
}

// ---------------------------------------------------------------------------
// Piecewise extraction
// ---------------------------------------------------------------------------

/// One affine segment of the value function in the prior.
#[derive(Debug, Clone, Copy)]
pub struct Segment {
    pub p_lo: f64,
    pub p_hi: f64,
    pub slope: f64,
    pub intercept: f64,
}

impl Segment {
    pub fn value_at(&self, p: f64) -> f64 {
        self.intercept + self.slope * p
    }
}

/// Piecewise-linear description of `p0 ↦ V(p0)` at fixed cost.
#[derive(Debug, Clone)]
pub struct PiecewiseValue {
    /// Interior junction priors between consecutive segments.
    pub breakpoints: Vec<f64>,
    pub segments: Vec<Segment>,
}

/// Evenly spaced priors on `[0.001, 0.999]`.
pub fn default_prior_sweep(points: usize) -> Vec<f64> {
    let n = points.max(2);
    (0..n)
        .map(|i| 0.001 + 0.998 * i as f64 / (n - 1) as f64)
        .collect()
}

/// Solve exactly at each swept prior and merge consecutive priors that are
/// affine within [`PIECEWISE_AFFINE_TOL`] into maximal segments.
///
/// A junction that falls strictly between two swept priors produces a
/// two-point transition run whose endpoints lie on the neighboring lines;
/// when those lines cross inside the run's span, the run is collapsed and
/// the crossing becomes the junction. This keeps the segment count equal to
/// the number of distinct affine pieces regardless of where samples land.
pub fn piecewise_extract(
    problem: &Problem,
    spec: &LatticeSpec,
    priors: &[f64],
) -> Result<PiecewiseValue, LatticeError> {
    if priors.len() < 2 {
        return Err(LatticeError::SweepTooSmall);
    }
    let mut values = Vec::with_capacity(priors.len());
    for &p in priors {
        values.push(lattice_value_at_prior(&problem.with_prior(p), spec)?);
    }

    let fits = |start: usize, end: usize| -> bool {
        let (x0, y0) = (priors[start], values[start]);
        let (x1, y1) = (priors[end], values[end]);
        let slope = (y1 - y0) / (x1 - x0);
        for j in start + 1..end {
            let fit = y0 + slope * (priors[j] - x0);
            if (values[j] - fit).abs() > PIECEWISE_AFFINE_TOL {
                return false;
            }
        }
        true
    };

    // Maximal affine index runs; consecutive runs share their junction index.
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    while start + 1 < priors.len() {
        let mut end = start + 1;
        while end + 1 < priors.len() && fits(start, end + 1) {
            end += 1;
        }
        runs.push((start, end));
        start = end;
    }

    let line = |run: (usize, usize)| -> (f64, f64) {
        let slope = (values[run.1] - values[run.0]) / (priors[run.1] - priors[run.0]);
        (slope, values[run.0] - slope * priors[run.0])
    };

    let mut segments: Vec<Segment> = Vec::new();
    let mut breakpoints = Vec::new();
    let mut p_lo = priors[runs[0].0];
    let mut idx = 0;
    while idx < runs.len() {
        let (slope, intercept) = line(runs[idx]);
        let mut p_hi = priors[runs[idx].1];
        let mut advance = 1;
        if idx + 2 < runs.len() {
            let bridge = runs[idx + 1];
            if bridge.1 == bridge.0 + 1 {
                let (s2, b2) = line(runs[idx + 2]);
                if (s2 - slope).abs() > 1e-12 {
                    let cross = (intercept - b2) / (s2 - slope);
                    if cross >= priors[bridge.0] && cross <= priors[bridge.1] {
                        p_hi = cross;
                        advance = 2;
                    }
                }
            }
        }
        segments.push(Segment {
            p_lo,
            p_hi,
            slope,
            intercept,
        });
        if idx + advance < runs.len() {
            breakpoints.push(p_hi);
        }
        p_lo = p_hi;
        idx += advance;
    }

    Ok(PiecewiseValue {
        breakpoints,
        segments,
    })
}
