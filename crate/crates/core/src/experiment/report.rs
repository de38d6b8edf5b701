//! Theory and bracket reports, and the CSV/JSON row writer.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::asymptotics::{applicable_brackets, large_kappa_bracket, theorem1_prediction, BracketDetail, Regime, Theorem1Case};
use crate::ode::{integrate_greedy, modified_upper_bound, tau0_general_located, TheoryError, TheoryParams};

use super::{modified_theory, ExperimentConfig, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}

/// Writes `rows` as CSV with a header, or as a pretty-printed JSON array.
pub fn write_rows<R: Serialize, W: Write>(rows: &[R], format: OutputFormat, mut w: W) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut writer = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(w);
            for r in rows {
                writer.serialize(r)?;
            }
            writer.flush()?;
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

/// Theory-only predictions for one `(c, κ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryRow {
    pub c: f64,
    pub kappa: f64,
    /// First zero of the integrated GREEDY ODE; empty when the root sits
    /// within the domain guard of κ.
    pub tau0_greedy_ode: Option<f64>,
    /// Root of the closed form.
    pub tau0_greedy_closed: f64,
    /// Zero of the MODIFIED GREEDY vertex density.
    pub tau0_modified: f64,
    pub mu_modified: f64,
    /// `(c - 1 + e^{-c})/(2c - 1 + e^{-c})`, listed for κ ≥ 1/2.
    pub upper_bound: Option<f64>,
    pub case: Theorem1Case,
    pub case_mu_over_n: f64,
    pub bracket_regime: Option<Regime>,
    pub bracket_lower: Option<f64>,
    pub bracket_upper: Option<f64>,
    pub bracket_contains_root: Option<bool>,
    /// Case d only: `(c+1)` denominator form.
    pub leading_form: Option<f64>,
    /// Case d only: `(2c+1)` denominator form.
    pub two_c_form: Option<f64>,
}

pub fn theory_row(c: f64, kappa: f64, step: f64) -> Result<TheoryRow> {
    let p = TheoryParams::new(c, kappa)?;
    let tau0_greedy_ode = match integrate_greedy(&p, step) {
        Ok(t) => Some(t.tau0),
        Err(TheoryError::NoCrossing { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let root = tau0_general_located(&p)?;
    let mu_modified = modified_theory(&p, step)?;
    let pred = theorem1_prediction(&p)?;
    Ok(TheoryRow {
        c,
        kappa,
        tau0_greedy_ode,
        tau0_greedy_closed: root.tau,
        tau0_modified: 1.0 - mu_modified,
        mu_modified,
        upper_bound: (kappa >= 0.5).then(|| modified_upper_bound(c)),
        case: pred.case,
        case_mu_over_n: pred.mu_over_n,
        bracket_regime: pred.bracket.map(|b| b.regime),
        bracket_lower: pred.bracket.map(|b| b.lower),
        bracket_upper: pred.bracket.map(|b| b.upper),
        bracket_contains_root: pred.bracket.map(|b| b.contains(&root)),
        leading_form: pred.leading_form,
        two_c_form: pred.two_c_form,
    })
}

/// One [`TheoryRow`] per `(c, κ)` of `cfg`.
pub fn theory_report(cfg: &ExperimentConfig) -> Result<Vec<TheoryRow>> {
    let mut rows = Vec::new();
    for &c in &cfg.c_values {
        for &kappa in &cfg.kappa_values {
            rows.push(theory_row(c, kappa, cfg.ode_step)?);
        }
    }
    Ok(rows)
}

/// One asymptotic bracket against the numeric root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticsRow {
    pub c: f64,
    pub kappa: f64,
    pub regime: Regime,
    pub lower: f64,
    pub estimate: f64,
    pub upper: f64,
    pub tau0_exact: f64,
    pub contained: bool,
    /// False when the bracket is evaluated outside its stated conditions.
    #[serde(skip)]
    pub proven: bool,
}

/// Every applicable bracket for each `(c, κ)` of `cfg`. For κ > 1/2 the
/// large-kappa bracket is also reported when its conditions fail, marked
/// unproven.
pub fn asymptotics_report(cfg: &ExperimentConfig) -> Result<Vec<AsymptoticsRow>> {
    let mut rows = Vec::new();
    for &c in &cfg.c_values {
        for &kappa in &cfg.kappa_values {
            let p = TheoryParams::new(c, kappa)?;
            let mut brackets = applicable_brackets(&p);
            if !brackets.iter().any(|b| b.regime == Regime::LargeKappa) {
                brackets.extend(large_kappa_bracket(&p).ok());
            }
            if brackets.is_empty() {
                continue;
            }
            let root = tau0_general_located(&p)?;
            for b in brackets {
                let proven = match b.detail {
                    BracketDetail::LargeKappa { proven, .. } => proven,
                    _ => true,
                };
                rows.push(AsymptoticsRow {
                    c,
                    kappa,
                    regime: b.regime,
                    lower: b.lower,
                    estimate: b.estimate,
                    upper: b.upper,
                    tau0_exact: root.tau,
                    contained: b.contains(&root),
                    proven,
                });
            }
        }
    }
    Ok(rows)
}
