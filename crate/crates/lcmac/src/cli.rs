//! Command-line front end: one subcommand per experiment kind, flat-file
//! configs, CSV output to a file or stdout.
//!
//! Exit codes: 0 on success, 1 on runtime failure (I/O, solver
//! non-convergence in `model` mode), 2 on usage errors (bad flags, malformed
//! config or grid).

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::config::Config;
use crate::experiment::{
    self, baseline_rows, compare_rows, model_rows, sim_rows, sweep_rows, LoadGrid,
};

#[derive(Parser)]
#[command(
    name = "lcmac",
    version,
    about = "Contention-resolution MAC: analytical model, simulator, baseline"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the analytical fixed-point model.
    Model(RunArgs),
    /// Run the event simulator.
    Sim(RunArgs),
    /// Run the request/grant baseline MAC.
    Baseline(RunArgs),
    /// Run model and simulator on the same loads and report agreement.
    Verify(RunArgs),
    /// Sweep offered load, pairing model and simulator per point.
    Sweep(RunArgs),
    /// Sweep offered load with the baseline alongside model and simulator.
    Compare(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Flat key=value config file; defaults apply when omitted.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Number of simulation seeds (`5` runs seeds 0..5) or an explicit
    /// comma-separated list (`3,7,11`).
    #[arg(long, value_name = "N-or-list", default_value = "5")]
    seeds: String,

    /// Simulated time per run, in seconds.
    #[arg(long, value_name = "SECONDS", default_value_t = 20.0)]
    duration: f64,

    /// Write CSV here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Offered-load grid START:STOP:STEP in bits/second; a single point at
    /// the config's load when omitted.
    #[arg(long = "sweep-load", value_name = "START:STOP:STEP")]
    sweep_load: Option<String>,
}

const EXIT_OK: i32 = 0;
const EXIT_RUNTIME: i32 = 1;
const EXIT_USAGE: i32 = 2;

/// Parse arguments from the process environment and run. Returns the exit
/// code for `std::process::exit`.
pub fn run() -> i32 {
    let _ = env_logger::Builder::from_default_env().try_init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            EXIT_RUNTIME
        }
    }
}

enum CliError {
    Usage(String),
    Runtime(String),
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let (Command::Model(args)
    | Command::Sim(args)
    | Command::Baseline(args)
    | Command::Verify(args)
    | Command::Sweep(args)
    | Command::Compare(args)) = &cli.command;

    let cfg = match &args.config {
        Some(path) => Config::load(path).map_err(|e| CliError::Usage(e.to_string()))?,
        None => Config::default(),
    };
    let seeds = parse_seeds(&args.seeds).map_err(CliError::Usage)?;
    if args.duration <= 0.0 || !args.duration.is_finite() {
        return Err(CliError::Usage(format!(
            "--duration must be a positive number of seconds, got {}",
            args.duration
        )));
    }
    let grid = match &args.sweep_load {
        Some(spec) => LoadGrid::parse(spec).map_err(CliError::Usage)?,
        None => {
            let topo = cfg.topology().map_err(|e| CliError::Usage(e.to_string()))?;
            LoadGrid::single(topo.offered_bps())
        }
    };

    let map_cfg = |e: crate::config::ConfigError| CliError::Usage(e.to_string());
    let (csv, summary) = match &cli.command {
        Command::Model(_) => {
            let rows = model_rows(&cfg, &grid).map_err(map_cfg)?;
            // Instability is a valid, converged answer; a solver that ran out
            // of iterations is a runtime failure.
            if let Some(r) = rows.iter().find(|r| !r.converged) {
                return Err(CliError::Runtime(format!(
                    "fixed-point solver did not converge at offered={:.3e} bps \
                     (residual {:.3e} after {} iterations)",
                    r.offered_bps, r.residual, r.iterations
                )));
            }
            let unstable = rows.iter().filter(|r| !r.stable).count();
            let summary = format!(
                "model: {} load(s), {} flagged unstable",
                rows.len(),
                unstable
            );
            (experiment::model_csv(&rows), summary)
        }
        Command::Sim(_) => {
            let rows = sim_rows(&cfg, &grid, &seeds, args.duration).map_err(map_cfg)?;
            let summary = format!(
                "sim: {} load(s) x {} seed(s), {:.1}s each",
                rows.len(),
                seeds.len(),
                args.duration
            );
            (experiment::sim_csv(&rows, "sim"), summary)
        }
        Command::Baseline(_) => {
            let rows = baseline_rows(&cfg, &grid, &seeds, args.duration).map_err(map_cfg)?;
            let summary = format!(
                "baseline: {} load(s) x {} seed(s), {:.1}s each",
                rows.len(),
                seeds.len(),
                args.duration
            );
            (experiment::sim_csv(&rows, "baseline"), summary)
        }
        Command::Verify(_) => {
            let rows = sweep_rows(&cfg, &grid, &seeds, args.duration).map_err(map_cfg)?;
            let mut worst: Option<(f64, f64)> = None;
            for r in rows.iter().filter(|r| r.stable && r.model_delay_s > 0.0) {
                let rel = (r.sim_delay_mean_s - r.model_delay_s).abs() / r.model_delay_s;
                if worst.is_none_or(|(w, _)| rel > w) {
                    worst = Some((rel, r.offered_bps));
                }
            }
            let summary = match worst {
                Some((rel, at)) => format!(
                    "verify: {} load(s); worst relative delay error {:.2}% at {:.3e} bps",
                    rows.len(),
                    rel * 100.0,
                    at
                ),
                None => format!("verify: {} load(s); no stable points to compare", rows.len()),
            };
            (experiment::sweep_csv(&rows), summary)
        }
        Command::Sweep(_) => {
            let rows = sweep_rows(&cfg, &grid, &seeds, args.duration).map_err(map_cfg)?;
            let summary = format!(
                "sweep: {} load(s) x {} seed(s), {:.1}s each",
                rows.len(),
                seeds.len(),
                args.duration
            );
            (experiment::sweep_csv(&rows), summary)
        }
        Command::Compare(_) => {
            let rows = compare_rows(&cfg, &grid, &seeds, args.duration).map_err(map_cfg)?;
            let summary = format!(
                "compare: {} load(s) x {} seed(s), {:.1}s each",
                rows.len(),
                seeds.len(),
                args.duration
            );
            (experiment::compare_csv(&rows), summary)
        }
    };

    match &args.out {
        Some(path) => {
            std::fs::write(path, &csv)
                .map_err(|e| CliError::Runtime(format!("writing {}: {e}", path.display())))?;
            eprintln!("{summary}");
            eprintln!("wrote {} row(s) to {}", csv.lines().count() - 1, path.display());
        }
        None => {
            print!("{csv}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}

/// `--seeds` accepts a count (`5` means seeds 0..5) or an explicit list
/// (`3,7,11`).
fn parse_seeds(text: &str) -> Result<Vec<u64>, String> {
    let text = text.trim();
    if text.contains(',') {
        let seeds: Result<Vec<u64>, _> = text
            .split(',')
            .map(|s| s.trim().parse::<u64>().map_err(|_| s.to_string()))
            .collect();
        let seeds = seeds.map_err(|bad| format!("bad seed `{bad}` in --seeds list"))?;
        if seeds.is_empty() {
            return Err("--seeds list is empty".into());
        }
        Ok(seeds)
    } else {
        let n: u64 = text
            .parse()
            .map_err(|_| format!("--seeds expects a count or comma-separated list, got `{text}`"))?;
        if n == 0 {
            return Err("--seeds count must be at least 1".into());
        }
        Ok((0..n).collect())
    }
}
