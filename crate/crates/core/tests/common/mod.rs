//! Shared problem builders and seeded generators for the integration suites.

#![allow(dead_code)]

use consult_core::model::{Consultant, Payoffs, Problem};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn three_signal(id: &str, match_p: f64, mismatch_p: f64, null_p: f64) -> Consultant {
    Consultant::new(
        id,
        vec!["r".into(), "l".into(), "null".into()],
        vec![match_p, mismatch_p, null_p],
        vec![mismatch_p, match_p, null_p],
    )
    .unwrap()
}

/// The two-consultant benchmark with a sharp estimator and a sparse,
/// rarely-wrong consultant: at cost 0.01 its optimal policy has seven
/// decision regions with a central band where both consultants tie.
pub fn two_noisy_consultants() -> Problem {
    let c1 = three_signal("c1", 0.8, 0.2, 0.0);
    let c2 = three_signal("c2", 0.625, 0.035, 0.34);
    Problem::new(0.5, vec![c1, c2], 0.01, Payoffs::symmetric())
}

/// A q = 0.8 estimator next to a t = 0.05 revealer.
pub fn estimator_revealer_pair(cost: f64) -> Problem {
    let estimator = three_signal("c1", 0.8, 0.2, 0.0);
    let revealer = three_signal("c2", 0.05, 0.0, 0.95);
    Problem::new(0.5, vec![estimator, revealer], cost, Payoffs::symmetric())
}

/// A lone two-signal consultant whose log-likelihood ratios (ln 2 and −ln 3)
/// are incommensurable, so no lattice exists and the value function is
/// strictly convex between the thresholds.
pub fn asymmetric_binary(cost: f64) -> Problem {
    let c = Consultant::new(
        "c1",
        vec!["a".into(), "b".into()],
        vec![0.8, 0.2],
        vec![0.4, 0.6],
    )
    .unwrap();
    Problem::new(0.5, vec![c], cost, Payoffs::symmetric())
}

/// Exact q = 4/5 estimator at even odds.
pub fn fast_estimator(cost: f64) -> Problem {
    let c = consult_core::make_three_signal_exact(
        "j1",
        consult_core::Rational::new(4, 5),
        consult_core::Rational::new(1, 1),
    );
    Problem::new(0.5, vec![c], cost, Payoffs::symmetric())
}

/// Exact (q = 16/17, t = 17/50) consultant at even odds: one informative
/// signal moves the belief exactly as far as two signals of the fast
/// estimator.
pub fn slow_estimator(cost: f64) -> Problem {
    let c = consult_core::make_three_signal_exact(
        "j2",
        consult_core::Rational::new(16, 17),
        consult_core::Rational::new(17, 50),
    );
    Problem::new(0.5, vec![c], cost, Payoffs::symmetric())
}

/// A random probability row of `len` entries. With `zero_chance`, one entry
/// is zeroed before normalization, which creates revealing signals. Larger
/// `sharpness` skews the row toward one dominant entry, making the
/// consultant more informative.
pub fn random_row(rng: &mut ChaCha8Rng, len: usize, zero_chance: f64, sharpness: f64) -> Vec<f64> {
    loop {
        let mut row: Vec<f64> = (0..len)
            .map(|_| (-rng.gen::<f64>().ln()).powf(sharpness))
            .collect();
        if rng.gen::<f64>() < zero_chance {
            let idx = rng.gen_range(0..len);
            row[idx] = 0.0;
        }
        let total: f64 = row.iter().sum();
        if total > 1e-9 {
            for x in &mut row {
                *x /= total;
            }
            // Rescale the largest entry so the row sums to exactly 1 within
            // the validator's tolerance.
            let sum: f64 = row.iter().sum();
            let imax = row
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .unwrap()
                .0;
            row[imax] += 1.0 - sum;
            return row;
        }
    }
}

pub fn random_consultant(
    rng: &mut ChaCha8Rng,
    id: &str,
    n_signals: usize,
    zero_chance: f64,
    sharpness: f64,
) -> Consultant {
    let signals = (0..n_signals).map(|s| format!("s{s}")).collect();
    let probs_r = random_row(rng, n_signals, zero_chance, sharpness);
    let probs_l = random_row(rng, n_signals, zero_chance, sharpness);
    Consultant::new(id, signals, probs_r, probs_l).unwrap()
}

/// A generic random problem with unit payoffs.
pub fn random_problem(
    rng: &mut ChaCha8Rng,
    max_consultants: usize,
    max_signals: usize,
    cost_range: (f64, f64),
    sharpness: f64,
) -> Problem {
    let n_cons = rng.gen_range(1..=max_consultants);
    let consultants = (0..n_cons)
        .map(|j| {
            let n_signals = rng.gen_range(2..=max_signals);
            random_consultant(rng, &format!("c{j}"), n_signals, 0.2, sharpness)
        })
        .collect();
    let cost = rng.gen_range(cost_range.0..cost_range.1);
    let prior = rng.gen_range(0.05..0.95);
    Problem::new(prior, consultants, cost, Payoffs::symmetric())
}
