//! Solve the analytical fixed point across a small load grid and print
//! per-load diagnostics: success probability, access delay, contention load
//! (the stability margin), and mean end-to-end delay.
//!
//! Usage: `cargo run --example solve_model [START:STOP:STEP] [CONFIG]`
//! (grid in bits/second, default 0.2e6:2.0e6:0.2e6; optional flat key=value
//! config file).

use lcmac::experiment::LoadGrid;
use lcmac::model::solve_fixed_point;
use lcmac::Config;

fn main() {
    let mut args = std::env::args().skip(1);
    let grid = match args.next().as_deref() {
        Some(s) => LoadGrid::parse(s).expect("grid must be START:STOP:STEP"),
        None => LoadGrid::parse("0.2e6:2.0e6:0.2e6").unwrap(),
    };
    let cfg = match args.next() {
        Some(path) => Config::load(path).expect("config file must parse"),
        None => Config::default(),
    };
    let base = cfg.topology().expect("default topology is valid");

    println!(
        "{:>12} {:>8} {:>10} {:>10} {:>10} {:>12} {:>8}",
        "offered_bps", "P_succ", "delta_ac_s", "lambda*D", "margin", "mean_delay_s", "stable"
    );
    for &offered in grid.points() {
        let topo = base.with_offered_bps(offered);
        let sol = solve_fixed_point(&cfg.system, &topo);
        let st = &sol.state;

        // Station 0 is representative: the default topology is homogeneous.
        let p = st.overall_success(0, topo.allowed[0][0]);
        let delta = st.access_delay(0);
        let contention = topo.lambda[0] * delta;

        println!(
            "{:>12.3e} {:>8.4} {:>10.6} {:>10.4} {:>9.1}% {:>12.6} {:>8}",
            offered,
            p,
            delta,
            contention,
            (1.0 - contention) * 100.0,
            st.mean_delay(),
            sol.stable_all(),
        );
        if !sol.converged {
            eprintln!(
                "  warning: solver stopped at residual {:.3e} after {} iterations",
                sol.residual, sol.iterations
            );
        }
    }
}
