//! Run one frame-level simulation and print throughput, delay, and
//! per-station contention outcomes.
//!
//! Usage: `cargo run --example run_sim [OFFERED_BPS] [DURATION_S] [CONFIG]`
//! (defaults: 1e6 bits/second offered for 30 seconds on the default config).

use lcmac::experiment::arrivals_for;
use lcmac::sim::run_simulation;
use lcmac::Config;

fn main() {
    let mut args = std::env::args().skip(1);
    let offered: f64 = args
        .next()
        .map(|s| s.parse().expect("OFFERED_BPS must be a number"))
        .unwrap_or(1e6);
    let duration: f64 = args
        .next()
        .map(|s| s.parse().expect("DURATION_S must be a number"))
        .unwrap_or(30.0);
    let cfg = match args.next() {
        Some(path) => Config::load(path).expect("config file must parse"),
        None => Config::default(),
    };

    let topo = cfg
        .topology()
        .expect("config topology is valid")
        .with_offered_bps(offered);
    let seed = 1;
    let arrivals = arrivals_for(&topo, duration, seed);
    let m = run_simulation(&cfg.system, &topo, &arrivals, seed, duration);

    println!("frames simulated     {}", m.frames);
    println!("packets generated    {}", m.generated_packets);
    println!("packets delivered    {}", m.delivered_packets);
    println!("throughput           {:.4e} bps", m.throughput_bps);
    println!("mean delay           {:.6} s", m.mean_delay_s);
    println!("collisions           {}", m.collisions);
    println!("unresolved ties      {}", m.unresolved);
    println!("queued at end        {} packets", m.queued_end_packets);
    if m.short_duration_warning {
        eprintln!("warning: fewer than 100 frames; statistics are unreliable");
    }

    println!("\nper-station primary win rates (reuse wins listed separately):");
    for k in 0..topo.allowed.len() {
        let attempts: u64 = m.attempts[k].iter().sum();
        let wins: u64 = m.wins[k].iter().sum();
        let reuse: u64 = m.reuse_wins[k].iter().sum();
        let rate = if attempts > 0 {
            wins as f64 / attempts as f64
        } else {
            f64::NAN
        };
        println!("  station {k:>3}: {wins:>8} / {attempts:<8} = {rate:.4}  (+{reuse} reuse)");
    }
}
