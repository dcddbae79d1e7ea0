//! Generate Poisson arrivals for each device profile, show their empirical
//! rates, and demonstrate the trace round trip: export to a CSV file, read
//! it back, and feed the loaded trace to the simulator.
//!
//! Usage: `cargo run --example traffic_trace [DURATION_S] [SEED]`
//! (defaults 30 s, seed 7).

use lcmac::sim::run_simulation;
use lcmac::traffic::{export_trace, generate_arrivals, load_trace, TrafficProfile};
use lcmac::Config;

fn main() {
    let mut args = std::env::args().skip(1);
    let duration: f64 = args
        .next()
        .map(|s| s.parse().expect("duration must be seconds"))
        .unwrap_or(30.0);
    let seed: u64 = args
        .next()
        .map(|s| s.parse().expect("seed must be an integer"))
        .unwrap_or(7);

    println!("device profiles at 20 packets/s over {duration} s:");
    println!(
        "{:>12} {:>8} {:>10} {:>12}",
        "class", "packets", "rate_pps", "mean_bits"
    );
    for name in ["hvalv", "substation", "der", "switch"] {
        let profile = TrafficProfile::named(name, 20.0).unwrap();
        let arrivals = generate_arrivals(&profile, duration, seed);
        let mean = arrivals.iter().map(|a| a.payload_bits as f64).sum::<f64>()
            / arrivals.len() as f64;
        println!(
            "{:>12} {:>8} {:>10.2} {:>12.1}",
            name,
            arrivals.len(),
            arrivals.len() as f64 / duration,
            mean
        );
    }

    // Round trip one trace through the file format.
    let profile = TrafficProfile::fixed(2400, 50.0);
    let arrivals = generate_arrivals(&profile, duration, seed);
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("station0.csv");
    export_trace(&arrivals, &path).expect("trace export");
    let loaded = load_trace(&path).expect("trace import");
    assert_eq!(arrivals, loaded, "round trip must be lossless");
    println!(
        "\nexported and re-imported {} arrivals via {} losslessly",
        loaded.len(),
        path.display()
    );

    // Drive a single-station run from the loaded trace.
    let cfg = Config::default();
    let topo = lcmac::ChannelTopology {
        n_channels: 1,
        allowed: vec![vec![0]],
        lambda: vec![50.0],
        payload_bits: 2400.0,
    };
    let m = run_simulation(&cfg.system, &topo, &[loaded], seed, duration);
    println!(
        "trace-driven run: {} packets delivered, mean delay {:.6} s",
        m.delivered_packets, m.mean_delay_s
    );
}
