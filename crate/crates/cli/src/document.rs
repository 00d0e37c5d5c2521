//! The on-disk problem document: a small JSON schema holding the prior, the
//! cost, the payoffs, the signal alphabet, one probability-row pair per
//! consultant, and optional solver settings. Probability entries are numbers,
//! or fraction strings like `"16/17"` when the document sets `exact: true`
//! (exact documents feed the lattice detector with exact rationals).
//!
//! Unknown fields are rejected and valid documents round-trip losslessly.

use consult_core::model::{Consultant, Payoffs, Problem, Rational, Violation};
use consult_core::validate_problem;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("schema error in `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error("invalid problem: {}", format_violations(.0))]
    Validation(Vec<Violation>),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Solve(#[from] consult_core::SolveError),

    #[error(transparent)]
    Lattice(#[from] consult_core::LatticeError),

    #[error(transparent)]
    Theory(#[from] consult_core::TheoryError),

    #[error(transparent)]
    Simulation(#[from] consult_core::SimulationError),

    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl CliError {
    /// Process exit code: 2 for schema/validation problems, 1 otherwise.
    /// (Non-convergence exits 3, handled at the command layer.)
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema { .. } | CliError::Validation(_) | CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

// ---------------------------------------------------------------------------
// Schema
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub prior: f64,
    pub cost: f64,
    pub payoffs: PayoffsDoc,
    pub signals: Vec<String>,
    pub consultants: Vec<ConsultantDoc>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub exact: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverDoc>,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PayoffsDoc {
    #[serde(rename = "R_r")]
    pub r_r: f64,
    #[serde(rename = "L_l")]
    pub l_l: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConsultantDoc {
    pub id: String,
    pub probs: ProbRows,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbRows {
    pub r: Vec<ProbEntry>,
    pub l: Vec<ProbEntry>,
}

/// A probability entry: a plain number, or a fraction string for exact
/// documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProbEntry {
    Number(f64),
    Fraction(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
}

/// A parsed, validated document together with its runtime problem.
#[derive(Debug, Clone)]
pub struct ParsedProblem {
    pub document: ProblemDocument,
    pub problem: Problem,
    /// Advisory findings (the problem is still solvable).
    pub warnings: Vec<Violation>,
}

const MAX_FRACTION_PART: i64 = 1_000_000;

fn parse_fraction(text: &str, path: &str, consultant: &str) -> Result<Rational, CliError> {
    let schema = |message: String| CliError::Schema {
        path: path.to_string(),
        message,
    };
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let num: i64 = num.parse().map_err(|_| {
        schema(format!("consultant `{consultant}`: `{text}` is not a fraction of integers"))
    })?;
    let den: i64 = den.parse().map_err(|_| {
        schema(format!("consultant `{consultant}`: `{text}` is not a fraction of integers"))
    })?;
    if den <= 0 || num < 0 || num > MAX_FRACTION_PART || den > MAX_FRACTION_PART {
        return Err(schema(format!(
            "consultant `{consultant}`: fraction `{text}` must have parts in [0, {MAX_FRACTION_PART}] with a positive denominator"
        )));
    }
    Ok(Rational::new(num, den))
}

fn build_consultant(
    doc: &ConsultantDoc,
    signals: &[String],
    exact: bool,
    path: &str,
) -> Result<Consultant, CliError> {
    let schema = |message: String| CliError::Schema {
        path: path.to_string(),
        message,
    };
    for (name, row) in [("r", &doc.probs.r), ("l", &doc.probs.l)] {
        if row.len() != signals.len() {
            return Err(schema(format!(
                "consultant `{}`: probs row `{name}` has {} entries for {} signals",
                doc.id,
                row.len(),
                signals.len()
            )));
        }
    }
    if exact {
        let parse_row = |row: &[ProbEntry]| -> Result<Vec<Rational>, CliError> {
            row.iter()
                .map(|entry| match entry {
                    ProbEntry::Fraction(text) => parse_fraction(text, path, &doc.id),
                    ProbEntry::Number(x) => Err(schema(format!(
                        "consultant `{}`: exact documents need fraction strings, found the number {x}",
                        doc.id
                    ))),
                })
                .collect()
        };
        Consultant::new_exact(
            doc.id.clone(),
            signals.to_vec(),
            parse_row(&doc.probs.r)?,
            parse_row(&doc.probs.l)?,
        )
        .map_err(|e| schema(e.to_string()))
    } else {
        let parse_row = |row: &[ProbEntry]| -> Result<Vec<f64>, CliError> {
            row.iter()
                .map(|entry| match entry {
                    ProbEntry::Number(x) => Ok(*x),
                    ProbEntry::Fraction(text) => {
                        let ratio = parse_fraction(text, path, &doc.id)?;
                        Ok(*ratio.numer() as f64 / *ratio.denom() as f64)
                    }
                })
                .collect()
        };
        Consultant::new(
            doc.id.clone(),
            signals.to_vec(),
            parse_row(&doc.probs.r)?,
            parse_row(&doc.probs.l)?,
        )
        .map_err(|e| schema(e.to_string()))
    }
}

/// Convert a document into a runtime problem, enforcing every invariant.
pub fn document_to_problem(
    document: &ProblemDocument,
    path: &str,
) -> Result<ParsedProblem, CliError> {
    let consultants = document
        .consultants
        .iter()
        .map(|c| build_consultant(c, &document.signals, document.exact, path))
        .collect::<Result<Vec<_>, _>>()?;
    let problem = Problem::new(
        document.prior,
        consultants,
        document.cost,
        Payoffs {
            u_rr: document.payoffs.r_r,
            u_ll: document.payoffs.l_l,
        },
    );
    let (warnings, hard): (Vec<_>, Vec<_>) = validate_problem(&problem)
        .into_iter()
        .partition(|v| v.code.is_advisory());
    if !hard.is_empty() {
        return Err(CliError::Validation(hard));
    }
    Ok(ParsedProblem {
        document: document.clone(),
        problem,
        warnings,
    })
}

/// Read, parse and validate a problem document.
pub fn parse_problem(path: &Path) -> Result<ParsedProblem, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let document: ProblemDocument =
        serde_json::from_str(&text).map_err(|e| CliError::Schema {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
    document_to_problem(&document, &path.display().to_string())
}

/// Serialize a document back to JSON (the inverse of parsing).
pub fn serialize_document(document: &ProblemDocument) -> String {
    serde_json::to_string_pretty(document).expect("documents are plain data")
}
