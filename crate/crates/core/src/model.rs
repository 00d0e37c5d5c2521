//! Core domain types and exact Bayesian belief arithmetic for the two-state,
//! two-action investment problem.
//!
//! A problem has two states of nature (`r` and `l`), two terminal actions
//! (invest `R`, invest `L`), and a set of consultants. Consultant `j` is a
//! signal experiment: a row of probabilities `S_j(s|state)` over a common
//! signal alphabet, one row per state. Querying a consultant costs `c` and
//! updates the investor's belief `p = P(state = r)` by Bayes rule:
//!
//!   post(p, j, s) = p·S_j(s|r) / (p·S_j(s|r) + (1−p)·S_j(s|l))
//!
//! In log-odds, the update is additive: each signal adds
//! `ln(S_j(s|r)/S_j(s|l))` to `ln(p/(1−p))`. Revealing signals (zero
//! likelihood in one state) pin the posterior to exactly 0 or 1; those are
//! always computed through the ratio-free form above, never through log-odds,
//! so the absorbing beliefs stay exact.

use thiserror::Error;

/// Tolerance for probability identities: row sums, the posterior martingale,
/// belief/log-odds round-trips.
pub const PROB_TOL: f64 = 1e-12;

/// Canonical signal labels for the three-signal consultant family.
pub const SIGNAL_R: &str = "r";
pub const SIGNAL_L: &str = "l";
pub const SIGNAL_NULL: &str = "null";

/// The two states of nature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum State {
    /// State `r`: investment R pays off.
    R,
    /// State `l`: investment L pays off.
    L,
}

impl State {
    pub fn other(self) -> State {
        match self {
            State::R => State::L,
            State::L => State::R,
        }
    }
}

/// Errors from belief arithmetic and consultant construction.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("belief {0} is not a probability in [0, 1]")]
    BeliefOutOfRange(f64),

    #[error("consultant `{consultant}` has no signal with index {signal}")]
    SignalIndexOutOfRange { consultant: String, signal: usize },

    #[error("consultant `{consultant}` has no signal labeled `{label}`")]
    UnknownSignalLabel { consultant: String, label: String },

    #[error(
        "signal `{signal}` from consultant `{consultant}` has zero probability at belief {belief}"
    )]
    ZeroProbabilitySignal {
        consultant: String,
        signal: String,
        belief: f64,
    },

    #[error(
        "log-odds update is undefined at boundary beliefs or for revealing signals; \
         use the ratio-free posterior instead"
    )]
    InfiniteLogOddsStep,

    #[error("consultant `{consultant}`: signal list and probability rows must have equal nonzero length")]
    RowShapeMismatch { consultant: String },

    #[error("unknown consultant id `{0}`")]
    UnknownConsultant(String),
}

// ---------------------------------------------------------------------------
// Belief
// ---------------------------------------------------------------------------

/// A belief: the probability assigned to state `r`.
///
/// The log-odds view `ln(p/(1−p))` is ±∞ exactly at the absorbing beliefs
/// 1 and 0; conversions round-trip within [`PROB_TOL`] on the interior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Belief(f64);

impl Belief {
    pub fn new(p: f64) -> Result<Self, ModelError> {
        if p.is_finite() && (0.0..=1.0).contains(&p) {
            Ok(Belief(p))
        } else {
            Err(ModelError::BeliefOutOfRange(p))
        }
    }

    /// Build from log-odds; ±∞ map to the absorbing beliefs 1 and 0.
    pub fn from_log_odds(l: f64) -> Self {
        if l == f64::INFINITY {
            return Belief(1.0);
        }
        if l == f64::NEG_INFINITY {
            return Belief(0.0);
        }
        Belief(expit(l))
    }

    pub fn p(self) -> f64 {
        self.0
    }

    /// `ln(p/(1−p))`; −∞ at p = 0 and +∞ at p = 1.
    pub fn log_odds(self) -> f64 {
        logit(self.0)
    }
}

/// Numerically stable logistic function.
pub(crate) fn expit(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

pub(crate) fn logit(p: f64) -> f64 {
    if p <= 0.0 {
        f64::NEG_INFINITY
    } else if p >= 1.0 {
        f64::INFINITY
    } else {
        (p / (1.0 - p)).ln()
    }
}

// ---------------------------------------------------------------------------
// Consultant
// ---------------------------------------------------------------------------

/// An exact rational probability, kept alongside the float value when a
/// problem is authored with fraction likelihoods.
pub type Rational = num::rational::Ratio<i64>;

/// A consultant: one probability row over the signal alphabet per state.
#[derive(Debug, Clone)]
pub struct Consultant {
    id: String,
    signals: Vec<String>,
    probs_r: Vec<f64>,
    probs_l: Vec<f64>,
    exact_r: Option<Vec<Rational>>,
    exact_l: Option<Vec<Rational>>,
}

impl Consultant {
    /// Construct from float rows. Only the shape is enforced here; value
    /// invariants (row sums, ranges) are reported by [`validate_problem`] so
    /// that malformed inputs can be diagnosed rather than rejected blindly.
    pub fn new(
        id: impl Into<String>,
        signals: Vec<String>,
        probs_r: Vec<f64>,
        probs_l: Vec<f64>,
    ) -> Result<Self, ModelError> {
        let id = id.into();
        if signals.is_empty() || signals.len() != probs_r.len() || signals.len() != probs_l.len() {
            return Err(ModelError::RowShapeMismatch { consultant: id });
        }
        Ok(Consultant {
            id,
            signals,
            probs_r,
            probs_l,
            exact_r: None,
            exact_l: None,
        })
    }

    /// Construct from exact rational rows; float rows are derived. Problems
    /// built this way can be lattice-detected exactly.
    pub fn new_exact(
        id: impl Into<String>,
        signals: Vec<String>,
        exact_r: Vec<Rational>,
        exact_l: Vec<Rational>,
    ) -> Result<Self, ModelError> {
        let to_f64 = |row: &[Rational]| -> Vec<f64> {
            row.iter()
                .map(|x| *x.numer() as f64 / *x.denom() as f64)
                .collect()
        };
        let mut c = Consultant::new(id, signals, to_f64(&exact_r), to_f64(&exact_l))?;
        c.exact_r = Some(exact_r);
        c.exact_l = Some(exact_l);
        Ok(c)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn signals(&self) -> &[String] {
        &self.signals
    }

    pub fn n_signals(&self) -> usize {
        self.signals.len()
    }

    pub fn signal_index(&self, label: &str) -> Option<usize> {
        self.signals.iter().position(|s| s == label)
    }

    /// `S(signal | state)`.
    pub fn prob(&self, state: State, signal: usize) -> f64 {
        match state {
            State::R => self.probs_r[signal],
            State::L => self.probs_l[signal],
        }
    }

    pub fn row(&self, state: State) -> &[f64] {
        match state {
            State::R => &self.probs_r,
            State::L => &self.probs_l,
        }
    }

    /// Exact rational rows `(r, l)` when the consultant was authored with them.
    pub fn exact_rows(&self) -> Option<(&[Rational], &[Rational])> {
        match (&self.exact_r, &self.exact_l) {
            (Some(r), Some(l)) => Some((r, l)),
            _ => None,
        }
    }

    /// A signal is `r`-revealing when it can only occur in state `r`.
    pub fn is_r_revealing(&self, signal: usize) -> bool {
        self.probs_r[signal] > 0.0 && self.probs_l[signal] == 0.0
    }

    pub fn is_l_revealing(&self, signal: usize) -> bool {
        self.probs_l[signal] > 0.0 && self.probs_r[signal] == 0.0
    }

    /// Revealing consultants have a revealing signal for each state.
    pub fn is_revealing(&self) -> bool {
        self.reveal_prob(State::R) > 0.0 && self.reveal_prob(State::L) > 0.0
    }

    /// Total probability, in `state`, of sending a signal that reveals it.
    pub fn reveal_prob(&self, state: State) -> f64 {
        (0..self.n_signals())
            .filter(|&s| match state {
                State::R => self.is_r_revealing(s),
                State::L => self.is_l_revealing(s),
            })
            .map(|s| self.prob(state, s))
            .sum()
    }
}

// ---------------------------------------------------------------------------
// Payoffs / Problem / Decision
// ---------------------------------------------------------------------------

/// Terminal gains: `u(R,r)` and `u(L,l)`. The off-diagonal gains are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Payoffs {
    /// Gain of action R in state r.
    pub u_rr: f64,
    /// Gain of action L in state l.
    pub u_ll: f64,
}

impl Payoffs {
    pub fn symmetric() -> Self {
        Payoffs { u_rr: 1.0, u_ll: 1.0 }
    }

    pub fn max_gain(&self) -> f64 {
        self.u_rr.max(self.u_ll)
    }
}

/// A complete investment problem: prior, consultant set, per-query cost and
/// terminal payoffs.
#[derive(Debug, Clone)]
pub struct Problem {
    /// Prior probability of state `r`.
    pub prior: f64,
    pub consultants: Vec<Consultant>,
    /// Cost of one consultation.
    pub cost: f64,
    pub payoffs: Payoffs,
}

impl Problem {
    pub fn new(prior: f64, consultants: Vec<Consultant>, cost: f64, payoffs: Payoffs) -> Self {
        Problem {
            prior,
            consultants,
            cost,
            payoffs,
        }
    }

    pub fn consultant(&self, id: &str) -> Option<(usize, &Consultant)> {
        self.consultants
            .iter()
            .enumerate()
            .find(|(_, c)| c.id() == id)
    }

    /// Same problem with a different prior.
    pub fn with_prior(&self, prior: f64) -> Self {
        let mut p = self.clone();
        p.prior = prior;
        p
    }

    /// Same problem with a different consultation cost.
    pub fn with_cost(&self, cost: f64) -> Self {
        let mut p = self.clone();
        p.cost = cost;
        p
    }
}

/// A per-belief choice: stop with an investment, or query a consultant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Decision {
    StopR,
    StopL,
    Consult(String),
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Decision::StopR => write!(f, "stop:R"),
            Decision::StopL => write!(f, "stop:L"),
            Decision::Consult(id) => write!(f, "consult:{id}"),
        }
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Machine-readable validation findings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationCode {
    RowSum,
    EntryRange,
    PriorRange,
    CostNonpositive,
    /// `c ≥ max(u_Rr, u_Ll)`: legal but consulting is never worthwhile.
    CostExceedsMaxGain,
    PayoffNegative,
    PayoffNotNormalized,
    EmptyConsultants,
    DuplicateConsultantId,
}

impl ViolationCode {
    /// Advisory findings flag degenerate-but-solvable problems; everything
    /// else marks the problem as malformed.
    pub fn is_advisory(self) -> bool {
        matches!(self, ViolationCode::CostExceedsMaxGain)
    }
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub code: ViolationCode,
    /// What the finding refers to: a consultant id or a field name.
    pub subject: String,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.subject, self.message)
    }
}

/// Check every problem invariant and return the violations found. An empty
/// list certifies the problem is well-formed. Violations are data, not
/// failures: an out-of-range row is reported, never silently renormalized.
pub fn validate_problem(problem: &Problem) -> Vec<Violation> {
    let mut out = Vec::new();

    if !(problem.prior.is_finite() && (0.0..=1.0).contains(&problem.prior)) {
        out.push(Violation {
            code: ViolationCode::PriorRange,
            subject: "prior".into(),
            message: format!("prior {} is not a probability in [0, 1]", problem.prior),
        });
    }

    for (name, u) in [("u_Rr", problem.payoffs.u_rr), ("u_Ll", problem.payoffs.u_ll)] {
        if !(u.is_finite() && u >= 0.0) {
            out.push(Violation {
                code: ViolationCode::PayoffNegative,
                subject: name.into(),
                message: format!("payoff {name} = {u} must be finite and nonnegative"),
            });
        }
    }
    let max_gain = problem.payoffs.max_gain();
    if max_gain.is_finite() && (max_gain - 1.0).abs() > PROB_TOL {
        out.push(Violation {
            code: ViolationCode::PayoffNotNormalized,
            subject: "payoffs".into(),
            message: format!("max(u_Rr, u_Ll) = {max_gain}, expected the normalization max = 1"),
        });
    }

    if !(problem.cost.is_finite() && problem.cost > 0.0) {
        out.push(Violation {
            code: ViolationCode::CostNonpositive,
            subject: "cost".into(),
            message: format!("cost {} must be finite and positive", problem.cost),
        });
    } else if problem.cost >= max_gain {
        out.push(Violation {
            code: ViolationCode::CostExceedsMaxGain,
            subject: "cost".into(),
            message: format!(
                "cost {} is at least max(u_Rr, u_Ll) = {max_gain}; consulting can never pay off",
                problem.cost
            ),
        });
    }

    if problem.consultants.is_empty() {
        out.push(Violation {
            code: ViolationCode::EmptyConsultants,
            subject: "consultants".into(),
            message: "a problem needs at least one consultant".into(),
        });
    }
    for (i, c) in problem.consultants.iter().enumerate() {
        if problem.consultants[..i].iter().any(|d| d.id() == c.id()) {
            out.push(Violation {
                code: ViolationCode::DuplicateConsultantId,
                subject: c.id().to_string(),
                message: format!("consultant id `{}` appears more than once", c.id()),
            });
        }
        for state in [State::R, State::L] {
            let row = c.row(state);
            for (s, &x) in row.iter().enumerate() {
                if !(x.is_finite() && (0.0..=1.0).contains(&x)) {
                    out.push(Violation {
                        code: ViolationCode::EntryRange,
                        subject: c.id().to_string(),
                        message: format!(
                            "entry S({}|{:?}) = {x} is not a probability in [0, 1]",
                            c.signals()[s],
                            state
                        ),
                    });
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > PROB_TOL {
                out.push(Violation {
                    code: ViolationCode::RowSum,
                    subject: c.id().to_string(),
                    message: format!("row for state {state:?} sums to {sum}, expected 1"),
                });
            }
        }
    }

    out
}

// ---------------------------------------------------------------------------
// Belief updates
// ---------------------------------------------------------------------------

/// Probability of observing `signal` from `consultant` at belief `p`:
/// `p·S(s|r) + (1−p)·S(s|l)`. Over all signals the results sum to 1.
pub fn signal_prob(p: f64, consultant: &Consultant, signal: usize) -> f64 {
    p * consultant.probs_r[signal] + (1.0 - p) * consultant.probs_l[signal]
}

/// Bayes posterior after observing `signal` at belief `p`.
///
/// Revealing signals return exactly 1 or 0 with no division, so absorbing
/// beliefs are reached exactly. Errors when the signal cannot occur at `p`.
pub fn posterior(p: f64, consultant: &Consultant, signal: usize) -> Result<f64, ModelError> {
    let a = consultant.probs_r[signal];
    let b = consultant.probs_l[signal];
    let total = p * a + (1.0 - p) * b;
    if total <= 0.0 {
        return Err(ModelError::ZeroProbabilitySignal {
            consultant: consultant.id().to_string(),
            signal: consultant.signals()[signal].clone(),
            belief: p,
        });
    }
    if b == 0.0 {
        return Ok(1.0);
    }
    if a == 0.0 {
        return Ok(0.0);
    }
    Ok(p * a / total)
}

/// Posterior after receiving the same signal `n` times in a row.
///
/// Uses the closed form with the signal's state-conditional shares
/// `q(state|s) = S(s|state) / (S(s|r) + S(s|l))`, which equals iterating
/// [`posterior`] n times.
pub fn posterior_after_repeats(
    p: f64,
    consultant: &Consultant,
    signal: usize,
    n: u32,
) -> Result<f64, ModelError> {
    if n == 0 {
        return Ok(p);
    }
    let a = consultant.probs_r[signal];
    let b = consultant.probs_l[signal];
    let total = p * a + (1.0 - p) * b;
    if total <= 0.0 {
        return Err(ModelError::ZeroProbabilitySignal {
            consultant: consultant.id().to_string(),
            signal: consultant.signals()[signal].clone(),
            belief: p,
        });
    }
    // One revealing observation already pins the belief; repeats keep it there.
    if b == 0.0 {
        return Ok(1.0);
    }
    if a == 0.0 {
        return Ok(0.0);
    }
    let qr = a / (a + b);
    let ql = b / (a + b);
    let num = p * qr.powi(n as i32);
    let den = num + (1.0 - p) * ql.powi(n as i32);
    if den > 0.0 && den.is_finite() {
        Ok(num / den)
    } else {
        // Powers underflowed; fall back to additive log-odds, which cannot.
        let step = (a / b).ln();
        Ok(Belief::from_log_odds(logit(p) + n as f64 * step).p())
    }
}

/// Additive log-odds update: the belief whose log-odds is
/// `ln(p/(1−p)) + ln(S(s|r)/S(s|l))`.
///
/// Agrees with [`posterior`] within [`PROB_TOL`] on interior beliefs. Errors
/// at boundary beliefs and on revealing signals, where the step is infinite;
/// callers handle those through [`posterior`], which is exact there.
pub fn log_odds_update(p: f64, consultant: &Consultant, signal: usize) -> Result<f64, ModelError> {
    let a = consultant.probs_r[signal];
    let b = consultant.probs_l[signal];
    if !(0.0..1.0).contains(&p) || p == 0.0 || a == 0.0 || b == 0.0 {
        return Err(ModelError::InfiniteLogOddsStep);
    }
    Ok(Belief::from_log_odds(logit(p) + (a / b).ln()).p())
}
