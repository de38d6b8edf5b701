//! Empirical check of μ_G ≤ μ_MG.

use serde::{Deserialize, Serialize};

use crate::engines::Algorithm;

use super::{run_monte_carlo, AggregateRow, ExperimentConfig, HarnessError, Result};

/// A difference counts only beyond this many pooled standard errors.
pub const CONJECTURE_MARGIN_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// μ_MG exceeds μ_G by more than the margin.
    Consistent,
    /// The means are within the margin of each other.
    Inconclusive,
    /// μ_G exceeds μ_MG by more than the margin.
    Violation,
}

impl Verdict {
    pub fn describe(self) -> &'static str {
        match self {
            Verdict::Consistent => "consistent with conjecture",
            Verdict::Inconclusive => "inconclusive (margin)",
            Verdict::Violation => "violation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureCell {
    pub c: f64,
    pub kappa: f64,
    pub n: usize,
    pub mean_greedy: f64,
    pub stderr_greedy: f64,
    pub mean_modified: f64,
    pub stderr_modified: f64,
    /// `mean_modified - mean_greedy`.
    pub difference: f64,
    pub margin: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureReport {
    pub cells: Vec<ConjectureCell>,
}

impl ConjectureReport {
    pub fn violations(&self) -> usize {
        self.cells.iter().filter(|c| c.verdict == Verdict::Violation).count()
    }
}

pub fn check_conjecture(cfg: &ExperimentConfig) -> Result<ConjectureReport> {
    if !(cfg.algorithms.contains(&Algorithm::Greedy) && cfg.algorithms.contains(&Algorithm::Modified)) {
        return Err(HarnessError::Config("conjecture check needs both algorithms".into()));
    }
    let out = run_monte_carlo(cfg)?;
    Ok(conjecture_from_rows(&out.rows))
}

/// Pairs GREEDY and MODIFIED GREEDY rows of the same cell.
pub fn conjecture_from_rows(rows: &[AggregateRow]) -> ConjectureReport {
    let mut cells = Vec::new();
    for g in rows.iter().filter(|r| r.algorithm == Algorithm::Greedy) {
        let Some(mg) = rows.iter().find(|r| {
            r.algorithm == Algorithm::Modified && r.c == g.c && r.kappa == g.kappa && r.n == g.n
        }) else {
            continue;
        };
        let difference = mg.mean_mu_over_n - g.mean_mu_over_n;
        let margin = CONJECTURE_MARGIN_SIGMAS * (g.stderr.powi(2) + mg.stderr.powi(2)).sqrt();
        let verdict = if difference > margin {
            Verdict::Consistent
        } else if -difference > margin {
            Verdict::Violation
        } else {
            Verdict::Inconclusive
        };
        cells.push(ConjectureCell {
            c: g.c,
            kappa: g.kappa,
            n: g.n,
            mean_greedy: g.mean_mu_over_n,
            stderr_greedy: g.stderr,
            mean_modified: mg.mean_mu_over_n,
            stderr_modified: mg.stderr,
            difference,
            margin,
            verdict,
        });
    }
    ConjectureReport { cells }
}
