use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rainbow_core::experiment::{
    asymptotics_report, check_conjecture, csv_row_sink, reproduce_paper_table_with_step, run_monte_carlo,
    run_monte_carlo_with, theory_report, write_rows, Convention, ExperimentConfig, OutputFormat, Verdict,
    TABLE_GREEDY_TOLERANCE,
};
use rainbow_core::ode::{integrate_greedy, integrate_modified, modified_upper_bound, write_curve_csv, DEFAULT_STEP};
use rainbow_core::{Algorithm, TheoryParams};

/// Simulation-vs-theory tolerance used by `simulate --check`.
const SIM_TOLERANCE: f64 = 0.01;
/// Slack on the MODIFIED GREEDY upper bound used by `simulate --check`.
const BOUND_SLACK: f64 = 0.005;
/// Table tolerance for the MODIFIED GREEDY column.
const TABLE_MODIFIED_TOLERANCE: f64 = 0.01;

#[derive(Parser)]
#[command(name = "rainbow", version, about = "Rainbow greedy matchings on random colored graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo runs of GREEDY and MODIFIED GREEDY against theory.
    Simulate(Common),
    /// Theory-only predictions per (c, kappa).
    Theory {
        #[command(flatten)]
        common: Common,
        /// Write GREEDY M(tau) and MODIFIED N(tau) curves into this directory.
        #[arg(long)]
        curves: Option<PathBuf>,
    },
    /// The kappa = 1/2 comparison table.
    Table(Common),
    /// Asymptotic brackets against the numeric GREEDY root.
    Asymptotics(Common),
    /// Empirical comparison of the two algorithms.
    Conjecture(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoChoice {
    Greedy,
    Modified,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatChoice {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Average degrees, comma separated.
    #[arg(long = "c", value_delimiter = ',', default_value = "1")]
    c: Vec<f64>,
    /// Color densities q/n, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    kappa: Vec<f64>,
    /// Vertex counts, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "10000")]
    n: Vec<usize>,
    /// Repetitions per cell.
    #[arg(long, default_value_t = 20)]
    reps: usize,
    /// Master seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// ODE step size.
    #[arg(long, default_value_t = DEFAULT_STEP)]
    step: f64,
    #[arg(long, value_enum, default_value = "both")]
    algo: AlgoChoice,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatChoice,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Engine trajectory sampling stride; default max(1, round(n/1000)).
    #[arg(long)]
    stride: Option<usize>,
    /// Exit nonzero when a check fails.
    #[arg(long)]
    check: bool,
}

impl Common {
    fn config(&self) -> ExperimentConfig {
        let algorithms = match self.algo {
            AlgoChoice::Greedy => vec![Algorithm::Greedy],
            AlgoChoice::Modified => vec![Algorithm::Modified],
            AlgoChoice::Both => Algorithm::ALL.to_vec(),
        };
        ExperimentConfig {
            c_values: self.c.clone(),
            kappa_values: self.kappa.clone(),
            n_values: self.n.clone(),
            reps: self.reps,
            master_seed: self.seed,
            ode_step: self.step,
            algorithms,
            output_format: match self.format {
                FormatChoice::Csv => OutputFormat::Csv,
                FormatChoice::Json => OutputFormat::Json,
            },
            output_path: self.out.clone(),
            sample_stride: self.stride,
        }
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit<R: Serialize>(rows: &[R], cfg: &ExperimentConfig) -> Result<()> {
    let mut w = open_output(cfg.output_path.as_deref())?;
    write_rows(rows, cfg.output_format, &mut w)?;
    w.flush()?;
    Ok(())
}

/// Prints a check line to stderr and returns whether it passed.
fn report(ok: bool, what: &str) -> bool {
    eprintln!("{} {what}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn simulate(args: &Common) -> Result<bool> {
    let cfg = args.config();
    let out = if cfg.output_format == OutputFormat::Csv {
        // Rows are written as each cell finishes so interrupted runs keep them.
        let w = open_output(cfg.output_path.as_deref())?;
        run_monte_carlo_with(&cfg, csv_row_sink(w))?
    } else {
        let out = run_monte_carlo(&cfg)?;
        emit(&out.rows, &cfg)?;
        out
    };
    let mut ok = true;
    if args.check {
        for r in &out.rows {
            let label = format!("c={} kappa={} n={} {}", r.c, r.kappa, r.n, r.algorithm);
            ok &= match r.abs_deviation {
                Some(d) => report(d <= SIM_TOLERANCE, &format!("{label}: |mean - theory| = {d:.5}")),
                None => report(false, &format!("{label}: no theory value")),
            };
            if r.algorithm == Algorithm::Modified && r.kappa >= 0.5 {
                let bound = modified_upper_bound(r.c);
                ok &= report(
                    r.mean_mu_over_n <= bound + BOUND_SLACK,
                    &format!("{label}: mean {:.5} vs bound {bound:.5}", r.mean_mu_over_n),
                );
            }
        }
    }
    Ok(ok)
}

fn write_curves(dir: &Path, cfg: &ExperimentConfig) -> Result<()> {
    fs::create_dir_all(dir)?;
    for &c in &cfg.c_values {
        for &kappa in &cfg.kappa_values {
            let p = TheoryParams::new(c, kappa)?;
            let tag = format!("c{c}_k{kappa}");
            if let Ok(t) = integrate_greedy(&p, cfg.ode_step) {
                write_curve_csv(t.curve(), BufWriter::new(File::create(dir.join(format!("greedy_{tag}.csv")))?))?;
            }
            let s = integrate_modified(&p, cfg.ode_step)?;
            write_curve_csv(
                s.trajectory.curve(),
                BufWriter::new(File::create(dir.join(format!("modified_{tag}.csv")))?),
            )?;
        }
    }
    Ok(())
}

fn theory(args: &Common, curves: Option<&Path>) -> Result<bool> {
    let cfg = args.config();
    let rows = theory_report(&cfg)?;
    emit(&rows, &cfg)?;
    if let Some(dir) = curves {
        write_curves(dir, &cfg)?;
    }
    let mut ok = true;
    if args.check {
        for r in &rows {
            if let Some(contains) = r.bracket_contains_root {
                ok &= report(contains, &format!("c={} kappa={}: bracket contains root", r.c, r.kappa));
            }
        }
    }
    Ok(ok)
}

fn table(args: &Common) -> Result<bool> {
    let cfg = args.config();
    let t = reproduce_paper_table_with_step(cfg.ode_step)?;
    emit(&t.rows, &cfg)?;
    eprintln!("GREEDY column matches {}", t.greedy_convention.describe());
    let mut ok = true;
    if args.check {
        ok &= report(
            t.greedy_convention != Convention::Neither,
            &format!("GREEDY within {TABLE_GREEDY_TOLERANCE} for some convention"),
        );
        for r in &t.rows {
            ok &= report(
                r.delta_modified.abs() <= TABLE_MODIFIED_TOLERANCE,
                &format!("c={}: MODIFIED delta {:+.4}", r.c, r.delta_modified),
            );
        }
    }
    Ok(ok)
}

fn asymptotics(args: &Common) -> Result<bool> {
    let cfg = args.config();
    let rows = asymptotics_report(&cfg)?;
    emit(&rows, &cfg)?;
    let mut ok = true;
    if args.check {
        for r in &rows {
            ok &= report(r.contained, &format!("c={} kappa={} {}: contains root", r.c, r.kappa, r.regime));
        }
    }
    Ok(ok)
}

fn conjecture(args: &Common) -> Result<bool> {
    let mut cfg = args.config();
    cfg.algorithms = Algorithm::ALL.to_vec();
    let rep = check_conjecture(&cfg)?;
    emit(&rep.cells, &cfg)?;
    for c in &rep.cells {
        eprintln!("c={} kappa={} n={}: {}", c.c, c.kappa, c.n, c.verdict.describe());
    }
    let violations = rep.cells.iter().filter(|c| c.verdict == Verdict::Violation).count();
    Ok(!args.check || report(violations == 0, &format!("{violations} violations")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Theory { common, curves } => theory(common, curves.as_deref()),
        Command::Table(a) => table(a),
        Command::Asymptotics(a) => asymptotics(a),
        Command::Conjecture(a) => conjecture(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
