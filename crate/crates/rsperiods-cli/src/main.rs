//! `rsperiods`: verify local Rankin–Selberg zeta integrals and assemble the
//! global period constants, emitting a deterministic JSON report.

mod checks;
mod config;

use std::collections::HashSet;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use rayon::prelude::*;

use checks::{compute_global_records, verify_case, Outcome, Record, Report};
use config::{Config, LocalCase, SweepSpec};
use rsperiods::chars::{antinorm, sweep_cases};
use rsperiods::global::{GlobalFormSpec, LocalDatum};
use rsperiods::zeta::RatioStatus;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Run every check (optimal closed form, newform value, ratio) on each
    /// configured [local] case.
    VerifyLocal,
    /// Only the three-way ratio comparison on each [local] case.
    ComputeAlpha,
    /// Assemble the global constants from [global] plus the [local] cases.
    ComputeGlobal,
    /// Generate a tiered case sweep and run every local check on it.
    Sweep,
}

impl Mode {
    fn as_str(self) -> &'static str {
        match self {
            Mode::VerifyLocal => "verify-local",
            Mode::ComputeAlpha => "compute-alpha",
            Mode::ComputeGlobal => "compute-global",
            Mode::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "rsperiods", version, about)]
struct Cli {
    /// Path to the configuration file.
    #[arg(long)]
    config: PathBuf,

    /// What to run.
    #[arg(long, value_enum)]
    mode: Mode,

    /// Series truncation degree (default: 4 * o(xi) + 12 per case).
    #[arg(long)]
    nmax: Option<i64>,

    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Treat known internal discrepancies as failures.
    #[arg(long)]
    strict: bool,

    /// Worker threads for the sweep (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

const EXIT_MISMATCH: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

fn config_failure(errors: &[String]) -> ExitCode {
    for e in errors {
        eprintln!("config error: {e}");
    }
    ExitCode::from(EXIT_CONFIG)
}

/// Default truncation degree for one case, deep enough to pin down the
/// rational function behind the series.
fn case_n_max(case: &LocalCase, override_n: Option<i64>) -> i64 {
    if let Some(n) = override_n {
        return n;
    }
    let o_xi = antinorm(&case.alg, &case.chi)
        .map(|xi| xi.o_xi as i64)
        .unwrap_or(0);
    4 * o_xi + 12
}

fn run_locals(locals: &[LocalCase], cli: &Cli, alpha_only: bool) -> Vec<Record> {
    let mut records: Vec<Record> = locals
        .par_iter()
        .flat_map_iter(|c| {
            let n_max = case_n_max(c, cli.nmax);
            if alpha_only {
                vec![checks::check_alpha(&c.label, &c.alg, &c.chi, n_max)]
            } else if c.newform {
                verify_case(&c.label, &c.alg, &c.chi, n_max)
            } else {
                // Newform side tiered out of the sweep at desk scale:
                // only the optimal-form comparison runs.
                vec![checks::check_opt_closed(&c.label, &c.alg, &c.chi, n_max)]
            }
        })
        .collect();
    records.sort_by(|a, b| a.check.cmp(&b.check));
    records
}

fn run(cli: &Cli) -> ExitCode {
    let started = Instant::now();
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            return config_failure(&[format!("cannot read {}: {e}", cli.config.display())]);
        }
    };
    let precision = cli.nmax.unwrap_or(24) + 6;
    let cfg: Config = match config::parse_config(&text, precision) {
        Ok(c) => c,
        Err(errors) => return config_failure(&errors),
    };
    let mut labels = HashSet::new();
    for c in &cfg.locals {
        if !labels.insert(c.label.clone()) {
            return config_failure(&[format!("duplicate local label `{}`", c.label)]);
        }
    }

    let records = match cli.mode {
        Mode::VerifyLocal | Mode::ComputeAlpha => {
            if cfg.locals.is_empty() {
                return config_failure(&[format!(
                    "mode {} needs at least one [local] section",
                    cli.mode.as_str()
                )]);
            }
            run_locals(&cfg.locals, cli, cli.mode == Mode::ComputeAlpha)
        }
        Mode::ComputeGlobal => {
            let Some(g) = cfg.global else {
                return config_failure(&["mode compute-global needs a [global] section".into()]);
            };
            if cfg.locals.is_empty() {
                return config_failure(&[
                    "mode compute-global needs [local] sections for the primes of the level"
                        .into(),
                ]);
            }
            let form = GlobalFormSpec {
                level: g.level,
                locals: cfg
                    .locals
                    .iter()
                    .map(|c| LocalDatum {
                        p: c.alg.p,
                        alg: c.alg.clone(),
                        chi: c.chi.clone(),
                    })
                    .collect(),
                disc: g.disc,
                w_k: g.w_k,
                cond: g.cond,
            };
            if let Err(e) = form.validate() {
                return config_failure(&[e.to_string()]);
            }
            let n_max = cli.nmax.unwrap_or_else(|| {
                cfg.locals
                    .iter()
                    .map(|c| case_n_max(c, None))
                    .max()
                    .unwrap_or(12)
            });
            let mut records = compute_global_records(&form, n_max);
            records.sort_by(|a, b| a.check.cmp(&b.check));
            records
        }
        Mode::Sweep => {
            let spec = cfg.sweep.unwrap_or(SweepSpec {
                primes: vec![3, 5, 7],
                max_order: 12,
            });
            let cases = match sweep_cases(&spec.primes, spec.max_order, precision) {
                Ok(cs) => cs,
                Err(e) => return config_failure(&[e.to_string()]),
            };
            let locals: Vec<LocalCase> = cases
                .into_iter()
                .map(|c| LocalCase {
                    label: c.label,
                    alg: c.alg,
                    chi: c.chi,
                    newform: c.newform,
                })
                .collect();
            run_locals(&locals, cli, false)
        }
    };

    let report = Report {
        format: "rsperiods-report-v1",
        mode: cli.mode.as_str().to_string(),
        records,
    };
    let mut body = serde_json::to_string_pretty(&report).expect("report serialization");
    body.push('\n');
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                return config_failure(&[format!("cannot write {}: {e}", path.display())]);
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(body.as_bytes()).is_err() {
                return ExitCode::from(EXIT_CONFIG);
            }
        }
    }

    let mut outcome = Outcome::default();
    outcome.absorb(&report.records);
    eprintln!(
        "{} records ({} mismatch, {} known-discrepancy, {} resource) in {:.1}s",
        report.records.len(),
        outcome.mismatches,
        outcome.discrepancies,
        outcome.resource_violations,
        started.elapsed().as_secs_f64()
    );
    if outcome.resource_violations > 0 {
        return ExitCode::from(EXIT_RESOURCE);
    }
    let hard = outcome.mismatches - count_resource_mismatches(&report.records);
    let failing = hard + if cli.strict { outcome.discrepancies } else { 0 };
    if failing > 0 {
        return ExitCode::from(EXIT_MISMATCH);
    }
    ExitCode::SUCCESS
}

/// Resource-cap records are reported with mismatch status but map to exit 3,
/// which takes precedence, so exclude them from the exit-1 count.
fn count_resource_mismatches(records: &[Record]) -> usize {
    records
        .iter()
        .filter(|r| {
            r.status == RatioStatus::Mismatch
                && r.note.as_deref().is_some_and(|n| n.starts_with("resource cap"))
        })
        .count()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .is_err()
        {
            eprintln!("warning: could not configure {jobs} worker threads");
        }
    }
    run(&cli)
}
