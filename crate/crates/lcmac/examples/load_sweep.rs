//! Sweep offered load on the simulator and locate the maximum sustainable
//! throughput: the highest load whose mean delay stays below the mean
//! message interval `1 / lambda_k` (one packet per station per delay — the
//! point where queues start outpacing service).
//!
//! Usage: `cargo run --release --example load_sweep [START:STOP:STEP]
//! [SEEDS] [DURATION_S] [CONFIG]` (defaults 16e6:23e6:1e6, 3 seeds, 30 s,
//! and a 315-station five-group topology when no config is given).

use lcmac::experiment::{max_throughput, message_interval_threshold, sim_rows, LoadGrid};
use lcmac::Config;

/// 315 stations in five 63-station groups, each on its own block of 7 of
/// the 35 channels.
const DENSE: &str = "n_stations = 315\n\
                     n_channels = 35\n\
                     channels_per_station = 7\n\
                     payload_bits = 2400\n\
                     epsilon_s = 5e-6\n";

fn main() {
    let mut args = std::env::args().skip(1);
    let grid = match args.next().as_deref() {
        Some(s) => LoadGrid::parse(s).expect("grid must be START:STOP:STEP"),
        None => LoadGrid::parse("16e6:23e6:1e6").unwrap(),
    };
    let n_seeds: u64 = args
        .next()
        .map(|s| s.parse().expect("seed count must be an integer"))
        .unwrap_or(3);
    let duration: f64 = args
        .next()
        .map(|s| s.parse().expect("duration must be seconds"))
        .unwrap_or(30.0);
    let cfg = match args.next() {
        Some(path) => Config::load(path).expect("config file must parse"),
        None => Config::parse(DENSE).unwrap(),
    };
    let seeds: Vec<u64> = (0..n_seeds).collect();

    let rows = sim_rows(&cfg, &grid, &seeds, duration).expect("config must be valid");
    let threshold = message_interval_threshold(cfg.n_stations, cfg.payload_bits);

    println!(
        "{:>12} {:>12} {:>12} {:>15} {:>6}",
        "offered_bps", "delay_s", "threshold_s", "throughput_bps", "meets"
    );
    for r in &rows {
        let t = threshold(r.offered_bps);
        println!(
            "{:>12.3e} {:>12.6} {:>12.6} {:>15.4e} {:>6}",
            r.offered_bps,
            r.delay_mean_s,
            t,
            r.throughput_bps,
            r.delay_mean_s <= t,
        );
    }

    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.offered_bps, r.delay_mean_s)).collect();
    let max = max_throughput(&points, threshold);
    println!("max sustainable throughput: {:.4e} bps", max.offered_bps);
    if let Some(w) = max.warning {
        println!("  note: {w:?} — widen the grid to bracket the crossing");
    }
}
