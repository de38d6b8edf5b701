//! Monte Carlo grids tying the engines to the theory.
//!
//! A cell is one `(c, κ, n)` triple; cells are numbered in the order
//! `c` (outer), `κ`, `n` (inner). Each repetition of a cell generates one
//! graph with `m = round(c n / 2)` edges and `q = round(κ n)` colors and runs
//! every requested algorithm on its own copy of it. Seeds come from
//! [`derive_seed`] with the cell index, the rep
//! index and a per-algorithm stream, so results do not depend on how work is
//! scheduled across threads.

mod conjecture;
mod report;
mod table;

use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colored_graph::{ColoredGraph, GraphError};
use crate::engines::{self, default_stride, Algorithm};
use crate::ode::{integrate_greedy, integrate_modified, tau0_general, TheoryError, TheoryParams, DEFAULT_STEP};
use crate::rng::{derive_seed, STREAM_GRAPH, STREAM_GREEDY, STREAM_MODIFIED};

pub use conjecture::{check_conjecture, conjecture_from_rows, ConjectureCell, ConjectureReport, Verdict, CONJECTURE_MARGIN_SIGMAS};
pub use report::{
    asymptotics_report, theory_report, theory_row, write_rows, AsymptoticsRow, OutputFormat, TheoryRow,
};
pub use table::{reproduce_paper_table, reproduce_paper_table_with_step, Convention, PaperTable, TableRow, PAPER_TABLE, TABLE_GREEDY_TOLERANCE};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub c_values: Vec<f64>,
    pub kappa_values: Vec<f64>,
    pub n_values: Vec<usize>,
    pub reps: usize,
    pub master_seed: u64,
    pub ode_step: f64,
    pub algorithms: Vec<Algorithm>,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    /// Trajectory sampling stride; `None` uses `max(1, round(n/1000))`.
    pub sample_stride: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            c_values: vec![1.0],
            kappa_values: vec![0.5],
            n_values: vec![10_000],
            reps: 20,
            master_seed: 1,
            ode_step: DEFAULT_STEP,
            algorithms: Algorithm::ALL.to_vec(),
            output_format: OutputFormat::Csv,
            output_path: None,
            sample_stride: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if self.reps == 0 {
            return bad("reps must be at least 1".into());
        }
        if self.c_values.is_empty() || self.kappa_values.is_empty() || self.n_values.is_empty() {
            return bad("c, kappa and n lists must be non-empty".into());
        }
        if let Some(c) = self.c_values.iter().find(|c| !(**c > 0.0 && c.is_finite())) {
            return bad(format!("c = {c} must be positive"));
        }
        if let Some(k) = self.kappa_values.iter().find(|k| !(**k > 0.0 && k.is_finite())) {
            return bad(format!("kappa = {k} must be positive"));
        }
        if let Some(n) = self.n_values.iter().find(|n| **n < 100) {
            return bad(format!("n = {n} is below 100"));
        }
        if self.algorithms.is_empty() {
            return bad("no algorithm selected".into());
        }
        if !(self.ode_step > 0.0) {
            return bad(format!("ode step {} must be positive", self.ode_step));
        }
        Ok(())
    }

    /// Cells in index order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &c in &self.c_values {
            for &kappa in &self.kappa_values {
                for &n in &self.n_values {
                    out.push(Cell { index: out.len() as u64, c, kappa, n });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub index: u64,
    pub c: f64,
    pub kappa: f64,
    pub n: usize,
}

impl Cell {
    pub fn m(&self) -> usize {
        edge_count(self.c, self.n)
    }

    pub fn q(&self) -> usize {
        color_count(self.kappa, self.n)
    }
}

/// `round(c n / 2)`.
pub fn edge_count(c: f64, n: usize) -> usize {
    (c * n as f64 / 2.0).round() as usize
}

/// `round(κ n)`.
pub fn color_count(kappa: f64, n: usize) -> usize {
    (kappa * n as f64).round() as usize
}

fn stream_of(alg: Algorithm) -> u64 {
    match alg {
        Algorithm::Greedy => STREAM_GREEDY,
        Algorithm::Modified => STREAM_MODIFIED,
    }
}

/// One simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub cell: u64,
    pub rep: u64,
    pub c: f64,
    pub kappa: f64,
    pub n: usize,
    pub m: usize,
    pub q: usize,
    pub algorithm: Algorithm,
    pub graph_seed: u64,
    pub run_seed: u64,
    pub mu: usize,
    pub mu_over_n: f64,
    pub steps_total: usize,
    pub isolated_deletions: usize,
}

/// Aggregate over the reps of one `(c, κ, n, algorithm)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub c: f64,
    pub kappa: f64,
    pub n: usize,
    pub algorithm: Algorithm,
    pub reps: usize,
    pub mean_mu_over_n: f64,
    pub stderr: f64,
    pub theory_mu_over_n: Option<f64>,
    pub abs_deviation: Option<f64>,
    #[serde(skip)]
    pub std_dev: f64,
    #[serde(skip)]
    pub runtime_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloOutput {
    pub rows: Vec<AggregateRow>,
    pub runs: Vec<RunRecord>,
}

/// GREEDY prediction: first zero of the integrated ODE, or the closed-form
/// root when integration cannot reach it (the root can sit within the
/// domain guard of κ).
pub fn greedy_theory(p: &TheoryParams<f64>, step: f64) -> Result<f64, TheoryError> {
    match integrate_greedy(p, step) {
        Ok(t) => Ok(t.tau0),
        Err(TheoryError::NoCrossing { .. }) => tau0_general(p),
        Err(e) => Err(e),
    }
}

/// MODIFIED GREEDY prediction `1 - τ₀`.
pub fn modified_theory(p: &TheoryParams<f64>, step: f64) -> Result<f64, TheoryError> {
    integrate_modified(p, step).map(|s| s.mu_over_n)
}

pub fn theory_for(alg: Algorithm, p: &TheoryParams<f64>, step: f64) -> Result<f64, TheoryError> {
    match alg {
        Algorithm::Greedy => greedy_theory(p, step),
        Algorithm::Modified => modified_theory(p, step),
    }
}

/// Mean, sample standard deviation and standard error.
pub fn mean_sd_stderr(xs: &[f64]) -> (f64, f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    if xs.len() < 2 {
        return (mean, 0.0, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    let sd = var.sqrt();
    (mean, sd, sd / k.sqrt())
}

fn run_rep(cfg: &ExperimentConfig, cell: &Cell, rep: u64) -> Result<Vec<RunRecord>> {
    let graph_seed = derive_seed(cfg.master_seed, cell.index, rep, STREAM_GRAPH);
    let (m, q) = (cell.m(), cell.q());
    let g0 = ColoredGraph::generate(cell.n, m, q, graph_seed)?;
    let stride = cfg.sample_stride.unwrap_or_else(|| default_stride(cell.n));
    let mut out = Vec::with_capacity(cfg.algorithms.len());
    for &alg in &cfg.algorithms {
        let run_seed = derive_seed(cfg.master_seed, cell.index, rep, stream_of(alg));
        let mut g = g0.clone();
        let r = engines::run(alg, &mut g, run_seed, stride);
        out.push(RunRecord {
            cell: cell.index,
            rep,
            c: cell.c,
            kappa: cell.kappa,
            n: cell.n,
            m,
            q,
            algorithm: alg,
            graph_seed,
            run_seed,
            mu: r.mu,
            mu_over_n: r.mu_over_n(),
            steps_total: r.steps_total,
            isolated_deletions: r.isolated_deletions,
        });
    }
    Ok(out)
}

/// Runs every cell of `cfg`.
pub fn run_monte_carlo(cfg: &ExperimentConfig) -> Result<MonteCarloOutput> {
    run_monte_carlo_with(cfg, |_| Ok(()))
}

/// As [`run_monte_carlo`], handing each aggregate row to `on_row` as soon
/// as its cell completes.
pub fn run_monte_carlo_with<F>(cfg: &ExperimentConfig, mut on_row: F) -> Result<MonteCarloOutput>
where
    F: FnMut(&AggregateRow) -> Result<()>,
{
    cfg.validate()?;
    let mut theory_cache: HashMap<(u64, u64, Algorithm), Option<f64>> = HashMap::new();
    let mut rows = Vec::new();
    let mut runs = Vec::new();
    for cell in cfg.cells() {
        let started = Instant::now();
        let per_rep: Vec<Vec<RunRecord>> = (0..cfg.reps as u64)
            .into_par_iter()
            .map(|rep| run_rep(cfg, &cell, rep))
            .collect::<Result<_>>()?;
        let elapsed = started.elapsed().as_secs_f64();
        let cell_runs: Vec<RunRecord> = per_rep.into_iter().flatten().collect();
        for &alg in &cfg.algorithms {
            let xs: Vec<f64> = cell_runs
                .iter()
                .filter(|r| r.algorithm == alg)
                .map(|r| r.mu_over_n)
                .collect();
            let (mean, sd, se) = mean_sd_stderr(&xs);
            let theory = *theory_cache
                .entry((cell.c.to_bits(), cell.kappa.to_bits(), alg))
                .or_insert_with(|| {
                    TheoryParams::new(cell.c, cell.kappa)
                        .and_then(|p| theory_for(alg, &p, cfg.ode_step))
                        .ok()
                });
            let row = AggregateRow {
                c: cell.c,
                kappa: cell.kappa,
                n: cell.n,
                algorithm: alg,
                reps: xs.len(),
                mean_mu_over_n: mean,
                stderr: se,
                theory_mu_over_n: theory,
                abs_deviation: theory.map(|t| (mean - t).abs()),
                std_dev: sd,
                runtime_seconds: elapsed,
            };
            on_row(&row)?;
            rows.push(row);
        }
        runs.extend(cell_runs);
    }
    Ok(MonteCarloOutput { rows, runs })
}

/// Streams rows to `w` as CSV, flushing after each one.
pub fn csv_row_sink<W: Write>(w: W) -> impl FnMut(&AggregateRow) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    move |row| {
        writer.serialize(row)?;
        writer.flush()?;
        Ok(())
    }
}
