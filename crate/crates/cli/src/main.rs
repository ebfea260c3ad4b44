//! `phasefront` command line: admissibility checks, runs, convergence
//! ladders and oracle sweeps.
//!
//! Exit status: 0 pass, 1 inadmissible data or violated check, 2 usage or
//! parse error, 3 internal failure.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use phasefront::config::{Config, Prepared, Table};
use phasefront::oracle::{run_suite, SweepReport, SUITES};
use phasefront::params::{AdmissibilityReport, ParameterSet};
use phasefront::tracker::{l1_distance, run_scheme, MonitorMode, RhoAttempt, RunStats, SchemeOutcome};
use phasefront::Error;
use rayon::prelude::*;
use serde::Serialize;

use output::{Provenance, TableWriter};

#[derive(Parser, Debug)]
#[command(name = "phasefront", version, about = "Front tracking across a stationary phase interface")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// TOML configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides PHASEFRONT_OUT and the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for random initial data.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the initial data against the admissibility threshold.
    Check {
        #[command(flatten)]
        common: Common,
    },
    /// Run the scheme and write events, timeline, functionals and a summary.
    Run {
        #[command(flatten)]
        common: Common,
        /// Run inadmissible data with monitors in warn-only mode.
        #[arg(long)]
        force: bool,
    },
    /// Run a ladder of refinements and compare the profiles.
    Converge {
        #[command(flatten)]
        common: Common,
        /// Strictly increasing list of refinement indices, e.g. 4,8,16.
        #[arg(long, value_delimiter = ',', required = true)]
        nu: Vec<u32>,
        #[arg(long)]
        force: bool,
    },
    /// Run oracle sweeps.
    Verify {
        /// One of lemma53, identities, pseudo-estimates, schochet,
        /// k-threshold, or all.
        #[arg(default_value = "all")]
        suite: String,
        /// Points per grid axis.
        #[arg(long, default_value_t = 50)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Negative(String),
    Usage(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Negative(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure::Internal(format!("i/o error: {e}"))
}

fn from_core(e: Error) -> Failure {
    match e {
        Error::Config(_) | Error::InvalidData(_) => Failure::Usage(e.to_string()),
        Error::Monitor { .. } | Error::EventBudget(_) | Error::Infeasible { .. } => Failure::Negative(e.to_string()),
        other => Failure::Internal(other.to_string()),
    }
}

struct Loaded {
    config: Config,
    prov: Provenance,
}

fn load(common: &Common) -> Result<Loaded, Failure> {
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", common.config.display())))?;
    let mut config =
        Config::from_toml_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", common.config.display())))?;
    if let Some(seed) = common.seed {
        config.set_seed(seed);
    }
    let prov = Provenance { config_sha256: output::sha256_hex(text.as_bytes()), seed: config.seed() };
    Ok(Loaded { config, prov })
}

fn out_dir(flag: &Option<PathBuf>, config: Option<&Config>) -> PathBuf {
    if let Some(p) = flag {
        return p.clone();
    }
    if let Some(p) = std::env::var_os("PHASEFRONT_OUT") {
        return PathBuf::from(p);
    }
    PathBuf::from(config.map_or("phasefront-out", |c| c.output.dir.as_str()))
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn cmd_check(common: &Common) -> Result<(), Failure> {
    let Loaded { config, prov } = load(common)?;
    let prep = config.prepare(MonitorMode::Strict).map_err(from_core)?;
    let report = &prep.admissibility;
    let mut w = TableWriter::new(&out_dir(&common.out, Some(&config)), prov).map_err(io)?;
    w.json("admissibility.json", report).map_err(io)?;
    print_json(report);
    if report.admissible {
        Ok(())
    } else {
        Err(Failure::Negative(format!(
            "inadmissible: combined variation {:.6} exceeds the threshold {:.6} (margin {:.6})",
            report.combined, report.threshold, report.margin
        )))
    }
}

/// Parameters for a run; inadmissible data falls back to a best-effort set
/// only when forced.
fn parameters(prep: &Prepared, force: bool) -> Result<ParameterSet, Failure> {
    match (&prep.params, prep.admissibility.admissible) {
        (Ok(p), true) => Ok(*p),
        (_, _) if force => Ok(ParameterSet::best_effort(&prep.phases, prep.admissibility.combined)),
        (Err(e), _) => Err(Failure::Negative(format!("{e}; use --force to run anyway"))),
        (Ok(_), false) => Err(Failure::Negative(format!(
            "inadmissible data (margin {:.6}); use --force to run anyway",
            prep.admissibility.margin
        ))),
    }
}

#[derive(Serialize)]
struct RunSummary<'a> {
    version: &'a str,
    config_sha256: &'a str,
    seed: Option<u64>,
    forced: bool,
    admissibility: &'a AdmissibilityReport,
    data_error: f64,
    parameters: ParameterSet,
    nu: u32,
    eta: f64,
    rho: f64,
    cutoff_order: u32,
    low_order_fronts: usize,
    rho_attempts: &'a [RhoAttempt],
    composite_bound: f64,
    stats: &'a RunStats,
    violations: usize,
    first_violations: Vec<String>,
    artifacts: Vec<String>,
}

fn write_run(dir: &Path, prov: &Provenance, config: &Config, prep: &Prepared, params: ParameterSet, outcome: &SchemeOutcome, forced: bool) -> Result<(), Failure> {
    let traj = &outcome.trajectory;
    let mut w = TableWriter::new(dir, prov.clone()).map_err(io)?;
    for table in &config.output.tables {
        match table {
            Table::Events => w.table(table.file_name(), output::EVENTS_HEADER, output::events_rows(traj)),
            Table::Timeline => w.table(table.file_name(), output::TIMELINE_HEADER, output::timeline_rows(traj)),
            Table::Functionals => w.table(table.file_name(), output::FUNCTIONALS_HEADER, output::functionals_rows(traj)),
            Table::Profiles => w.table(table.file_name(), output::PROFILES_HEADER, output::profile_rows(&traj.profiles)),
        }
        .map_err(io)?;
    }
    let mut artifacts: Vec<String> = w.written.iter().map(|p| p.display().to_string()).collect();
    artifacts.push(dir.join("summary.json").display().to_string());
    let summary = RunSummary {
        version: output::VERSION,
        config_sha256: &prov.config_sha256,
        seed: prov.seed,
        forced,
        admissibility: &prep.admissibility,
        data_error: prep.data_error,
        parameters: params,
        nu: outcome.nu,
        eta: outcome.eta,
        rho: outcome.rho,
        cutoff_order: outcome.cutoff_order,
        low_order_fronts: outcome.low_order_fronts,
        rho_attempts: &outcome.attempts,
        composite_bound: 1.0 / outcome.nu as f64,
        stats: &traj.stats,
        violations: traj.violations.len(),
        first_violations: traj
            .violations
            .iter()
            .take(10)
            .map(|v| format!("event {} t={:.6e}: {} (order {}) {:.6e} vs {:.6e}", v.event, v.time, v.check.law, v.check.order, v.check.lhs, v.check.rhs))
            .collect(),
        artifacts,
    };
    w.json("summary.json", &summary).map_err(io)?;
    Ok(())
}

fn cmd_run(common: &Common, force: bool) -> Result<(), Failure> {
    let Loaded { config, prov } = load(common)?;
    let monitor = if force { MonitorMode::Warn } else { MonitorMode::Strict };
    let prep = config.prepare(monitor).map_err(from_core)?;
    let params = parameters(&prep, force)?;
    let outcome = match run_scheme(&prep.profile, &prep.phases, &params, &prep.settings) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("run failed: {e}");
            return Err(from_core(e));
        }
    };
    let dir = out_dir(&common.out, Some(&config));
    write_run(&dir, &prov, &config, &prep, params, &outcome, force)?;
    let s = &outcome.trajectory.stats;
    println!(
        "events {} | t {} | F(0+) {:.6e} -> F {:.6e} | max |composite| {:.3e} | sup TV {:.6e} | violations {} | out {}",
        s.events,
        s.final_time,
        s.f_initial,
        s.f_final,
        s.max_composite_abs,
        s.sup_tv,
        outcome.trajectory.violations.len(),
        dir.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct Rung {
    nu: u32,
    ok: bool,
    error: Option<String>,
    eta: Option<f64>,
    rho: Option<f64>,
    events: Option<usize>,
    max_composite_abs: Option<f64>,
    composite_bound: f64,
    within_bound: bool,
}

#[derive(Serialize)]
struct Distance {
    t: f64,
    nu_coarse: u32,
    nu_fine: u32,
    l1: f64,
}

#[derive(Serialize)]
struct Ladder {
    version: &'static str,
    config_sha256: String,
    seed: Option<u64>,
    sample_times: Vec<f64>,
    rungs: Vec<Rung>,
    distances: Vec<Distance>,
    /// Successive distances decrease at every sample time.
    distances_decreasing: bool,
    degenerate: bool,
}

fn cmd_converge(common: &Common, nus: &[u32], force: bool) -> Result<(), Failure> {
    if nus.is_empty() || nus.windows(2).any(|w| w[0] >= w[1]) || nus[0] == 0 {
        return Err(Failure::Usage("--nu must be a strictly increasing list of positive integers".into()));
    }
    let Loaded { mut config, prov } = load(common)?;
    if config.scheme.sample_times.is_empty() {
        config.scheme.sample_times = vec![config.scheme.t_max];
    }
    let monitor = if force { MonitorMode::Warn } else { MonitorMode::Strict };
    let outcomes: Vec<Result<SchemeOutcome, Failure>> = nus
        .par_iter()
        .map(|&nu| {
            let prep = config.prepare_for(nu, monitor).map_err(from_core)?;
            let params = parameters(&prep, force)?;
            run_scheme(&prep.profile, &prep.phases, &params, &prep.settings).map_err(from_core)
        })
        .collect();

    let rungs: Vec<Rung> = nus
        .iter()
        .zip(&outcomes)
        .map(|(&nu, o)| {
            let bound = 1.0 / nu as f64;
            match o {
                Ok(o) => Rung {
                    nu,
                    ok: true,
                    error: None,
                    eta: Some(o.eta),
                    rho: Some(o.rho),
                    events: Some(o.trajectory.stats.events),
                    max_composite_abs: Some(o.trajectory.stats.max_composite_abs),
                    composite_bound: bound,
                    within_bound: o.trajectory.stats.max_composite_abs <= bound,
                },
                Err(e) => Rung {
                    nu,
                    ok: false,
                    error: Some(match e {
                        Failure::Negative(m) | Failure::Usage(m) | Failure::Internal(m) => m.clone(),
                    }),
                    eta: None,
                    rho: None,
                    events: None,
                    max_composite_abs: None,
                    composite_bound: bound,
                    within_bound: false,
                },
            }
        })
        .collect();

    let mut distances = Vec::new();
    for (i, pair) in outcomes.windows(2).enumerate() {
        if let (Ok(a), Ok(b)) = (&pair[0], &pair[1]) {
            for (p, q) in a.trajectory.profiles.iter().zip(&b.trajectory.profiles) {
                distances.push(Distance { t: p.t, nu_coarse: nus[i], nu_fine: nus[i + 1], l1: l1_distance(p, q) });
            }
        }
    }
    let distances_decreasing = config.scheme.sample_times.iter().all(|&t| {
        let seq: Vec<f64> = distances.iter().filter(|d| d.t == t).map(|d| d.l1).collect();
        seq.windows(2).all(|w| w[1] <= w[0])
    });
    let ladder = Ladder {
        version: output::VERSION,
        config_sha256: prov.config_sha256.clone(),
        seed: prov.seed,
        sample_times: config.scheme.sample_times.clone(),
        degenerate: nus.len() == 1,
        rungs,
        distances,
        distances_decreasing,
    };

    let dir = out_dir(&common.out, Some(&config));
    let mut w = TableWriter::new(&dir, prov).map_err(io)?;
    w.table(
        "ladder.csv",
        &["nu", "ok", "eta", "rho", "events", "max_composite_abs", "composite_bound", "within_bound"],
        ladder.rungs.iter().map(|r| {
            let opt = |x: Option<f64>| x.map(output::num).unwrap_or_default();
            vec![
                r.nu.to_string(),
                r.ok.to_string(),
                opt(r.eta),
                opt(r.rho),
                r.events.map(|e| e.to_string()).unwrap_or_default(),
                opt(r.max_composite_abs),
                output::num(r.composite_bound),
                r.within_bound.to_string(),
            ]
        }),
    )
    .map_err(io)?;
    w.json("converge.json", &ladder).map_err(io)?;
    print_json(&ladder);

    let failed: Vec<String> = ladder
        .rungs
        .iter()
        .filter(|r| !r.ok || !r.within_bound)
        .map(|r| format!("nu={}: {}", r.nu, r.error.clone().unwrap_or_else(|| "composite bound exceeded".into())))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Negative(failed.join("; ")))
    }
}

fn cmd_verify(suite: &str, grid: usize, out: &Option<PathBuf>) -> Result<(), Failure> {
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&suite) {
        vec![suite]
    } else {
        return Err(Failure::Usage(format!("unknown suite {suite:?}; expected one of {} or all", SUITES.join(", "))));
    };
    if grid < 2 {
        return Err(Failure::Usage("--grid must be at least 2".into()));
    }
    let results: Vec<Result<Vec<SweepReport>, Error>> = names.par_iter().map(|n| run_suite(n, grid)).collect();
    let mut reports = Vec::new();
    for r in results {
        reports.extend(r.map_err(|e| Failure::Internal(e.to_string()))?);
    }
    for r in &reports {
        eprintln!(
            "{} {:<18} {:<50} cases {:>7} max {:.3e} tol {:.1e}",
            if r.passed { "PASS" } else { "FAIL" },
            r.suite,
            r.check,
            r.cases,
            r.max_violation,
            r.tolerance
        );
    }
    if out.is_some() || std::env::var_os("PHASEFRONT_OUT").is_some() {
        let prov = Provenance { config_sha256: output::sha256_hex(format!("verify {suite} {grid}").as_bytes()), seed: None };
        TableWriter::new(&out_dir(out, None), prov).map_err(io)?.json("verify.json", &reports).map_err(io)?;
    }
    print_json(&reports);
    let failed = reports.iter().filter(|r| !r.passed).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Negative(format!("{failed} sweep(s) failed")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check { common } => cmd_check(common),
        Command::Run { common, force } => cmd_run(common, *force),
        Command::Converge { common, nu, force } => cmd_converge(common, nu, *force),
        Command::Verify { suite, grid, out } => cmd_verify(suite, *grid, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Negative(m) | Failure::Usage(m) | Failure::Internal(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn core_errors_map_to_exit_codes() {
        assert_eq!(from_core(Error::Config("x".into())).code(), 2);
        assert_eq!(from_core(Error::Infeasible { lower: 0.0, upper: 1.0 }).code(), 1);
        assert_eq!(from_core(Error::Domain { what: "v", value: -1.0 }).code(), 3);
    }

    #[test]
    fn out_flag_wins() {
        let p = PathBuf::from("here");
        assert_eq!(out_dir(&Some(p.clone()), None), p);
    }
}
