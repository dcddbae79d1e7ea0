//! Check the analytical model against the simulator: sweep a load grid,
//! print model and simulated delays side by side with the relative error,
//! and summarize the worst disagreement over the loads the model calls
//! stable.
//!
//! Usage: `cargo run --release --example verify_model [START:STOP:STEP]
//! [SEEDS] [DURATION_S] [CONFIG]` (defaults 1e5:1e6:1e5, 5 seeds, 60 s).

use lcmac::experiment::{sweep_rows, LoadGrid};
use lcmac::Config;

fn main() {
    let mut args = std::env::args().skip(1);
    let grid = match args.next().as_deref() {
        Some(s) => LoadGrid::parse(s).expect("grid must be START:STOP:STEP"),
        None => LoadGrid::parse("1e5:1e6:1e5").unwrap(),
    };
    let n_seeds: u64 = args
        .next()
        .map(|s| s.parse().expect("seed count must be an integer"))
        .unwrap_or(5);
    let duration: f64 = args
        .next()
        .map(|s| s.parse().expect("duration must be seconds"))
        .unwrap_or(60.0);
    let cfg = match args.next() {
        Some(path) => Config::load(path).expect("config file must parse"),
        None => Config::default(),
    };
    let seeds: Vec<u64> = (0..n_seeds).collect();

    let rows = sweep_rows(&cfg, &grid, &seeds, duration).expect("config must be valid");

    println!(
        "{:>12} {:>13} {:>13} {:>12} {:>9} {:>7}",
        "offered_bps", "model_delay_s", "sim_delay_s", "sim_ci95_s", "rel_err", "stable"
    );
    let mut worst: f64 = 0.0;
    for r in &rows {
        let err = (r.sim_delay_mean_s - r.model_delay_s) / r.model_delay_s;
        if r.stable {
            worst = worst.max(err.abs());
        }
        println!(
            "{:>12.3e} {:>13.6} {:>13.6} {:>12.2e} {:>8.2}% {:>7}",
            r.offered_bps,
            r.model_delay_s,
            r.sim_delay_mean_s,
            r.sim_delay_ci95_s,
            err * 100.0,
            r.stable,
        );
    }
    println!(
        "worst relative delay error over stable loads: {:.2}% \
         ({} seeds x {:.0} s per load)",
        worst * 100.0,
        n_seeds,
        duration
    );
}
