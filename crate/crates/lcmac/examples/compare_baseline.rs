//! Head-to-head of the contention protocol and the request/grant baseline
//! under identical traffic: per-load delays and throughputs, the maximum
//! sustainable throughput of each (delay kept under the mean message
//! interval), and the improvement ratio.
//!
//! The two schemes fall over at different loads, so they get separate grids:
//! sweep each around its own knee or the crossing degenerates to a grid
//! endpoint.
//!
//! Usage: `cargo run --release --example compare_baseline [PROTO_GRID]
//! [BASE_GRID] [SEEDS] [DURATION_S]` (defaults 16e6:23e6:1e6,
//! 12e6:17e6:1e6, 3 seeds, 30 s).

use lcmac::experiment::{
    baseline_rows, max_throughput, message_interval_threshold, sim_rows, LoadGrid, SimRow,
};
use lcmac::Config;

/// 315 stations in five 63-station groups, each on its own block of 7 of
/// the 35 channels.
const DENSE: &str = "n_stations = 315\n\
                     n_channels = 35\n\
                     channels_per_station = 7\n\
                     payload_bits = 2400\n\
                     epsilon_s = 5e-6\n";

fn print_rows(label: &str, rows: &[SimRow], threshold: &impl Fn(f64) -> f64) {
    println!("{label}:");
    println!(
        "  {:>12} {:>12} {:>12} {:>15} {:>6}",
        "offered_bps", "delay_s", "threshold_s", "throughput_bps", "meets"
    );
    for r in rows {
        let t = threshold(r.offered_bps);
        println!(
            "  {:>12.3e} {:>12.6} {:>12.6} {:>15.4e} {:>6}",
            r.offered_bps,
            r.delay_mean_s,
            t,
            r.throughput_bps,
            r.delay_mean_s <= t,
        );
    }
}

fn crossing(rows: &[SimRow], threshold: &impl Fn(f64) -> f64) -> f64 {
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.offered_bps, r.delay_mean_s)).collect();
    let max = max_throughput(&points, threshold);
    if let Some(w) = max.warning {
        println!("  note: {w:?} — widen the grid to bracket the crossing");
    }
    max.offered_bps
}

fn main() {
    let mut args = std::env::args().skip(1);
    let proto_grid = match args.next().as_deref() {
        Some(s) => LoadGrid::parse(s).expect("grid must be START:STOP:STEP"),
        None => LoadGrid::parse("16e6:23e6:1e6").unwrap(),
    };
    let base_grid = match args.next().as_deref() {
        Some(s) => LoadGrid::parse(s).expect("grid must be START:STOP:STEP"),
        None => LoadGrid::parse("12e6:17e6:1e6").unwrap(),
    };
    let n_seeds: u64 = args
        .next()
        .map(|s| s.parse().expect("seed count must be an integer"))
        .unwrap_or(3);
    let duration: f64 = args
        .next()
        .map(|s| s.parse().expect("duration must be seconds"))
        .unwrap_or(30.0);
    let cfg = Config::parse(DENSE).unwrap();
    let seeds: Vec<u64> = (0..n_seeds).collect();

    let proto = sim_rows(&cfg, &proto_grid, &seeds, duration).expect("config must be valid");
    let base = baseline_rows(&cfg, &base_grid, &seeds, duration).expect("config must be valid");
    let threshold = message_interval_threshold(cfg.n_stations, cfg.payload_bits);

    print_rows("contention protocol", &proto, &threshold);
    print_rows("request/grant baseline", &base, &threshold);

    let proto_max = crossing(&proto, &threshold);
    let base_max = crossing(&base, &threshold);
    println!("protocol max throughput:  {proto_max:.4e} bps");
    println!("baseline max throughput:  {base_max:.4e} bps");
    println!("improvement ratio:        {:.3}", proto_max / base_max);
}
