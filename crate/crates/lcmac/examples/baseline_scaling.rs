//! Show how the request/grant baseline's saturated efficiency falls as the
//! station population grows: more stations mean a longer request-contention
//! storm before the grant pipeline fills, so a fixed-length run delivers a
//! smaller fraction of the channel capacity.
//!
//! Usage: `cargo run --release --example baseline_scaling \
//!     [PAYLOAD_BITS] [LOAD_FACTOR] [DURATION_S] [SEED]`
//! (defaults: 4000-bit payloads, 1.3x capacity offered, 8 seconds, seed 7).

use lcmac::experiment::baseline_saturated_efficiency;
use lcmac::Config;

fn main() {
    let mut args = std::env::args().skip(1);
    let payload: u64 = args
        .next()
        .map(|s| s.parse().expect("PAYLOAD_BITS must be an integer"))
        .unwrap_or(4_000);
    let load_factor: f64 = args
        .next()
        .map(|s| s.parse().expect("LOAD_FACTOR must be a number"))
        .unwrap_or(1.3);
    let duration: f64 = args
        .next()
        .map(|s| s.parse().expect("DURATION_S must be a number"))
        .unwrap_or(8.0);
    let seed: u64 = args
        .next()
        .map(|s| s.parse().expect("SEED must be an integer"))
        .unwrap_or(7);

    let cfg = Config::default();
    println!(
        "payload {payload} bits, offered {load_factor}x capacity, {duration} s runs, seed {seed}"
    );
    println!("{:>10} {:>12}", "stations", "efficiency");
    for n in [50, 333, 666, 1000] {
        let eff = baseline_saturated_efficiency(&cfg, n, payload, load_factor, duration, seed);
        println!("{n:>10} {eff:>12.4}");
    }
}
