//! Experiment orchestration: offered-load sweeps, model-vs-simulation
//! verification, baseline comparison, confidence intervals and CSV output.
//!
//! All run plans are deterministic: seeds are explicit, parallel runs only
//! differ in where they execute, and floats are printed with a fixed format,
//! so re-running a plan reproduces its CSV byte for byte.

use rayon::prelude::*;

use crate::baseline::run_baseline;
use crate::config::{Config, ConfigError};
use crate::model::solve_fixed_point;
use crate::sim::{derive_seed, run_simulation};
use crate::traffic::{generate_arrivals, Arrival, TrafficProfile};

/// Offered-load grid for sweeps, parsed from `START:STOP:STEP` (bits/second).
#[derive(Debug, Clone, PartialEq)]
pub struct LoadGrid(Vec<f64>);

impl LoadGrid {
    /// Parse `START:STOP:STEP`. The grid is `START, START+STEP, ...` up to
    /// and including `STOP` (within a small tolerance); it must be nonempty
    /// and strictly increasing, so `STEP > 0` and `0 < START <= STOP`.
    pub fn parse(text: &str) -> Result<LoadGrid, String> {
        let parts: Vec<&str> = text.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(format!("expected START:STOP:STEP, got `{text}`"));
        };
        let parse = |name: &str, s: &str| -> Result<f64, String> {
            s.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad {name} `{s}` in load grid"))
        };
        let start = parse("START", start)?;
        let stop = parse("STOP", stop)?;
        let step = parse("STEP", step)?;
        if start <= 0.0 || !start.is_finite() {
            return Err(format!("grid START must be positive, got {start}"));
        }
        if step <= 0.0 || !step.is_finite() {
            return Err(format!("grid STEP must be positive, got {step}"));
        }
        if stop < start {
            return Err(format!("empty grid: STOP {stop} below START {start}"));
        }
        let mut points = Vec::new();
        let mut i = 0u32;
        loop {
            let v = start + step * i as f64;
            if v > stop * (1.0 + 1e-9) {
                break;
            }
            points.push(v);
            i += 1;
        }
        Ok(LoadGrid(points))
    }

    /// Single-point grid.
    pub fn single(offered_bps: f64) -> LoadGrid {
        LoadGrid(vec![offered_bps])
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }
}

/// Mean and 95% confidence half-width over independent replicates, using
/// Student-t quantiles. A single replicate has no interval (half-width 0).
pub fn mean_ci95(samples: &[f64]) -> (f64, f64) {
    assert!(!samples.is_empty(), "need at least one sample");
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    let t = t_quantile_975(samples.len() - 1);
    (mean, t * (var / n).sqrt())
}

/// Two-sided 95% Student-t quantile by degrees of freedom (asymptotic 1.96
/// past 30).
fn t_quantile_975(df: usize) -> f64 {
    const TABLE: [f64; 30] = [
        12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228, 2.201, 2.179,
        2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
        2.060, 2.056, 2.052, 2.048, 2.045, 2.042,
    ];
    if df == 0 {
        f64::INFINITY
    } else if df <= TABLE.len() {
        TABLE[df - 1]
    } else {
        1.960
    }
}

/// Poisson arrival lists for every station of a topology, on RNG streams
/// disjoint from the simulator's per-station streams.
pub fn arrivals_for(
    topo: &crate::config::ChannelTopology,
    duration: f64,
    seed: u64,
) -> Vec<Vec<Arrival>> {
    let payload = topo.payload_bits.round() as u64;
    topo.lambda
        .iter()
        .enumerate()
        .map(|(k, &lambda)| {
            let profile = TrafficProfile::fixed(payload.max(1), lambda);
            generate_arrivals(&profile, duration, derive_seed(seed, (1 << 32) + k as u64))
        })
        .collect()
}

/// One model evaluation at an offered load.
#[derive(Debug, Clone)]
pub struct ModelRow {
    pub offered_bps: f64,
    pub model_delay_s: f64,
    /// Solver converged and every station with traffic is stable.
    pub stable: bool,
    /// Solver reached the residual tolerance (instability is still a valid,
    /// converged answer; this is false only when iteration ran out).
    pub converged: bool,
    /// Iterations used and final residual, for diagnostics.
    pub iterations: u32,
    pub residual: f64,
}

/// Seed-aggregated simulation results at an offered load.
#[derive(Debug, Clone)]
pub struct SimRow {
    pub offered_bps: f64,
    pub delay_mean_s: f64,
    pub delay_ci95_s: f64,
    pub throughput_bps: f64,
}

/// Paired model/simulation results (the verification and sweep experiments).
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub offered_bps: f64,
    pub model_delay_s: f64,
    pub sim_delay_mean_s: f64,
    pub sim_delay_ci95_s: f64,
    pub sim_throughput_bps: f64,
    pub stable: bool,
}

/// Sweep row extended with the request/grant baseline under identical
/// traffic.
#[derive(Debug, Clone)]
pub struct CompareRow {
    pub sweep: SweepRow,
    pub baseline_delay_mean_s: f64,
    pub baseline_delay_ci95_s: f64,
    pub baseline_throughput_bps: f64,
}

/// Evaluate the analytical model across a load grid.
pub fn model_rows(cfg: &Config, grid: &LoadGrid) -> Result<Vec<ModelRow>, ConfigError> {
    let base = cfg.topology()?;
    Ok(grid
        .points()
        .par_iter()
        .map(|&offered| {
            let topo = base.with_offered_bps(offered);
            let sol = solve_fixed_point(&cfg.system, &topo);
            ModelRow {
                offered_bps: offered,
                model_delay_s: sol.state.mean_delay(),
                stable: sol.stable_all(),
                converged: sol.converged,
                iterations: sol.iterations,
                residual: sol.residual,
            }
        })
        .collect())
}

/// Simulate across a load grid, averaging per-run mean delays and
/// throughput over the seeds.
pub fn sim_rows(
    cfg: &Config,
    grid: &LoadGrid,
    seeds: &[u64],
    duration: f64,
) -> Result<Vec<SimRow>, ConfigError> {
    assert!(!seeds.is_empty(), "need at least one seed");
    let base = cfg.topology()?;
    Ok(grid
        .points()
        .par_iter()
        .map(|&offered| {
            let topo = base.with_offered_bps(offered);
            let runs: Vec<(f64, f64)> = seeds
                .par_iter()
                .map(|&seed| {
                    let arrivals = arrivals_for(&topo, duration, seed);
                    let m = run_simulation(&cfg.system, &topo, &arrivals, seed, duration);
                    (m.mean_delay_s, m.throughput_bps)
                })
                .collect();
            let (delay_mean_s, delay_ci95_s) =
                mean_ci95(&runs.iter().map(|r| r.0).collect::<Vec<_>>());
            let (throughput_bps, _) = mean_ci95(&runs.iter().map(|r| r.1).collect::<Vec<_>>());
            SimRow {
                offered_bps: offered,
                delay_mean_s,
                delay_ci95_s,
                throughput_bps,
            }
        })
        .collect())
}

/// Run the request/grant baseline across a load grid under the same traffic
/// the simulator would see.
pub fn baseline_rows(
    cfg: &Config,
    grid: &LoadGrid,
    seeds: &[u64],
    duration: f64,
) -> Result<Vec<SimRow>, ConfigError> {
    assert!(!seeds.is_empty(), "need at least one seed");
    let base = cfg.topology()?;
    Ok(grid
        .points()
        .par_iter()
        .map(|&offered| {
            let topo = base.with_offered_bps(offered);
            let runs: Vec<(f64, f64)> = seeds
                .par_iter()
                .map(|&seed| {
                    let arrivals = arrivals_for(&topo, duration, seed);
                    let m =
                        run_baseline(&cfg.baseline, &cfg.system, &topo, &arrivals, seed, duration);
                    (m.mean_delay_s, m.throughput_bps)
                })
                .collect();
            let (delay_mean_s, delay_ci95_s) =
                mean_ci95(&runs.iter().map(|r| r.0).collect::<Vec<_>>());
            let (throughput_bps, _) = mean_ci95(&runs.iter().map(|r| r.1).collect::<Vec<_>>());
            SimRow {
                offered_bps: offered,
                delay_mean_s,
                delay_ci95_s,
                throughput_bps,
            }
        })
        .collect())
}

/// Model and simulation, paired per load (verification / sweep experiment).
pub fn sweep_rows(
    cfg: &Config,
    grid: &LoadGrid,
    seeds: &[u64],
    duration: f64,
) -> Result<Vec<SweepRow>, ConfigError> {
    let model = model_rows(cfg, grid)?;
    let sim = sim_rows(cfg, grid, seeds, duration)?;
    Ok(model
        .into_iter()
        .zip(sim)
        .map(|(m, s)| SweepRow {
            offered_bps: m.offered_bps,
            model_delay_s: m.model_delay_s,
            sim_delay_mean_s: s.delay_mean_s,
            sim_delay_ci95_s: s.delay_ci95_s,
            sim_throughput_bps: s.throughput_bps,
            stable: m.stable,
        })
        .collect())
}

/// Sweep plus the baseline under identical traffic (comparison experiment).
pub fn compare_rows(
    cfg: &Config,
    grid: &LoadGrid,
    seeds: &[u64],
    duration: f64,
) -> Result<Vec<CompareRow>, ConfigError> {
    let sweep = sweep_rows(cfg, grid, seeds, duration)?;
    let base = baseline_rows(cfg, grid, seeds, duration)?;
    Ok(sweep
        .into_iter()
        .zip(base)
        .map(|(sweep, b)| CompareRow {
            sweep,
            baseline_delay_mean_s: b.delay_mean_s,
            baseline_delay_ci95_s: b.delay_ci95_s,
            baseline_throughput_bps: b.throughput_bps,
        })
        .collect())
}

/// Saturated efficiency of the baseline: fraction of the upstream capacity
/// delivered as payload when every station offers `load_factor / n` of the
/// capacity (aggregate `load_factor` times capacity) for `duration` seconds
/// from a cold start.
pub fn baseline_saturated_efficiency(
    cfg: &Config,
    n_stations: usize,
    payload_bits: u64,
    load_factor: f64,
    duration: f64,
    seed: u64,
) -> f64 {
    let lambda = load_factor * cfg.baseline.capacity_bps / (n_stations as f64 * payload_bits as f64);
    let topo = crate::config::ChannelTopology {
        n_channels: 1,
        allowed: vec![vec![0]; n_stations],
        lambda: vec![lambda; n_stations],
        payload_bits: payload_bits as f64,
    };
    let arrivals = arrivals_for(&topo, duration, seed);
    let m = run_baseline(&cfg.baseline, &cfg.system, &topo, &arrivals, seed, duration);
    m.throughput_bps / cfg.baseline.capacity_bps
}

/// Where a delay-threshold scan ended up relative to the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdWarning {
    /// No grid point met the threshold; the reported value is 0.
    NeverMet,
    /// Every grid point met the threshold; the reported value is the top of
    /// the grid and the true maximum may lie beyond it.
    NeverViolated,
}

/// Result of [`max_throughput`].
#[derive(Debug, Clone, Copy)]
pub struct MaxThroughput {
    pub offered_bps: f64,
    pub warning: Option<ThresholdWarning>,
}

/// Largest offered load whose mean delay stays within the per-load threshold
/// (`NaN` delays count as violations). `points` are `(offered_bps, delay_s)`
/// sweep results; `threshold(offered)` gives the acceptable delay there.
pub fn max_throughput<F: Fn(f64) -> f64>(points: &[(f64, f64)], threshold: F) -> MaxThroughput {
    assert!(!points.is_empty(), "need at least one sweep point");
    let mut best: Option<f64> = None;
    let mut any_violation = false;
    for &(offered, delay) in points {
        if delay <= threshold(offered) {
            best = Some(best.map_or(offered, |b: f64| b.max(offered)));
        } else {
            any_violation = true;
        }
    }
    match best {
        None => MaxThroughput {
            offered_bps: 0.0,
            warning: Some(ThresholdWarning::NeverMet),
        },
        Some(b) => MaxThroughput {
            offered_bps: b,
            warning: (!any_violation).then_some(ThresholdWarning::NeverViolated),
        },
    }
}

/// Per-load delay threshold "one message interval": `1 / lambda_k` where
/// `lambda_k` is the per-station packet rate at that offered load.
pub fn message_interval_threshold(n_stations: usize, payload_bits: f64) -> impl Fn(f64) -> f64 {
    move |offered: f64| n_stations as f64 * payload_bits / offered
}

/// Fixed float formatting for CSV: 9 significant digits, so identical runs
/// produce identical bytes.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.8e}")
}

/// CSV with the paired model/simulation schema.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(
        "offered_bps,model_delay_s,sim_delay_mean_s,sim_delay_ci95_s,sim_throughput_bps,stable\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_float(r.offered_bps),
            fmt_float(r.model_delay_s),
            fmt_float(r.sim_delay_mean_s),
            fmt_float(r.sim_delay_ci95_s),
            fmt_float(r.sim_throughput_bps),
            r.stable
        ));
    }
    out
}

/// CSV with the comparison schema: sweep columns plus the baseline's.
pub fn compare_csv(rows: &[CompareRow]) -> String {
    let mut out = String::from(
        "offered_bps,model_delay_s,sim_delay_mean_s,sim_delay_ci95_s,sim_throughput_bps,stable,\
         baseline_delay_mean_s,baseline_delay_ci95_s,baseline_throughput_bps\n",
    );
    for r in rows {
        let s = &r.sweep;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            fmt_float(s.offered_bps),
            fmt_float(s.model_delay_s),
            fmt_float(s.sim_delay_mean_s),
            fmt_float(s.sim_delay_ci95_s),
            fmt_float(s.sim_throughput_bps),
            s.stable,
            fmt_float(r.baseline_delay_mean_s),
            fmt_float(r.baseline_delay_ci95_s),
            fmt_float(r.baseline_throughput_bps),
        ));
    }
    out
}

/// CSV for model-only runs.
pub fn model_csv(rows: &[ModelRow]) -> String {
    let mut out = String::from("offered_bps,model_delay_s,stable\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_float(r.offered_bps),
            fmt_float(r.model_delay_s),
            r.stable
        ));
    }
    out
}

/// CSV for simulation-only and baseline-only runs.
pub fn sim_csv(rows: &[SimRow], prefix: &str) -> String {
    let mut out = format!(
        "offered_bps,{prefix}_delay_mean_s,{prefix}_delay_ci95_s,{prefix}_throughput_bps\n"
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_float(r.offered_bps),
            fmt_float(r.delay_mean_s),
            fmt_float(r.delay_ci95_s),
            fmt_float(r.throughput_bps),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parses_inclusive_range() {
        let g = LoadGrid::parse("1e6:3e6:1e6").unwrap();
        assert_eq!(g.points().len(), 3);
        assert!((g.points()[2] - 3e6).abs() < 1.0);
    }

    #[test]
    fn grid_rejects_malformed_specs() {
        assert!(LoadGrid::parse("1e6:3e6").is_err());
        assert!(LoadGrid::parse("0:3e6:1e6").is_err());
        assert!(LoadGrid::parse("1e6:3e6:0").is_err());
        assert!(LoadGrid::parse("3e6:1e6:1e6").is_err());
        assert!(LoadGrid::parse("a:b:c").is_err());
    }

    #[test]
    fn grid_handles_fractional_steps_to_the_endpoint() {
        let g = LoadGrid::parse("0.5e6:1.0e6:0.1e6").unwrap();
        assert_eq!(g.points().len(), 6);
    }

    #[test]
    fn ci_matches_hand_computation() {
        // Samples {1, 3}: mean 2, s = sqrt(2), half-width t * s / sqrt(2)
        // with t(df=1) = 12.706 gives exactly 12.706.
        let (mean, half) = mean_ci95(&[1.0, 3.0]);
        assert!((mean - 2.0).abs() < 1e-12);
        assert!((half - 12.706).abs() < 1e-9);
        // Single sample: no interval.
        assert_eq!(mean_ci95(&[5.0]), (5.0, 0.0));
    }

    #[test]
    fn max_throughput_scans_and_warns() {
        let threshold = |_: f64| 0.01;
        let mt = max_throughput(&[(1e6, 0.005), (2e6, 0.008), (3e6, 0.02)], threshold);
        assert_eq!(mt.offered_bps, 2e6);
        assert!(mt.warning.is_none());

        let mt = max_throughput(&[(1e6, 0.02), (2e6, 0.03)], threshold);
        assert_eq!(mt.offered_bps, 0.0);
        assert_eq!(mt.warning, Some(ThresholdWarning::NeverMet));

        let mt = max_throughput(&[(1e6, 0.001), (2e6, 0.002)], threshold);
        assert_eq!(mt.offered_bps, 2e6);
        assert_eq!(mt.warning, Some(ThresholdWarning::NeverViolated));

        // NaN delays (no deliveries) violate the threshold.
        let mt = max_throughput(&[(1e6, f64::NAN), (2e6, 0.001)], threshold);
        assert_eq!(mt.offered_bps, 2e6);
        assert!(mt.warning.is_none());
    }

    #[test]
    fn float_format_is_nine_significant_digits() {
        assert_eq!(fmt_float(1.0), "1.00000000e0");
        assert_eq!(fmt_float(0.00123456789), "1.23456789e-3");
        assert_eq!(fmt_float(f64::INFINITY), "inf");
        assert_eq!(fmt_float(f64::NAN), "NaN");
    }

    #[test]
    fn csv_schemas_are_stable() {
        let rows = vec![SweepRow {
            offered_bps: 1e6,
            model_delay_s: 0.005,
            sim_delay_mean_s: 0.0051,
            sim_delay_ci95_s: 0.0001,
            sim_throughput_bps: 0.99e6,
            stable: true,
        }];
        let csv = sweep_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "offered_bps,model_delay_s,sim_delay_mean_s,sim_delay_ci95_s,sim_throughput_bps,stable"
        );
        assert_eq!(
            lines.next().unwrap(),
            "1.00000000e6,5.00000000e-3,5.10000000e-3,1.00000000e-4,9.90000000e5,true"
        );
    }

    #[test]
    fn sweep_pipeline_runs_end_to_end() {
        let cfg = Config::default();
        let grid = LoadGrid::parse("0.5e6:1.0e6:0.5e6").unwrap();
        let rows = sweep_rows(&cfg, &grid, &[0, 1], 2.0).unwrap();
        assert_eq!(rows.len(), 2);
        for r in &rows {
            assert!(r.stable, "default config should be stable at light load");
            assert!(r.model_delay_s > 0.0);
            assert!(r.sim_delay_mean_s > 0.0);
            assert!(r.sim_throughput_bps > 0.0);
        }
        // Identical inputs give byte-identical CSV.
        let again = sweep_rows(&cfg, &grid, &[0, 1], 2.0).unwrap();
        assert_eq!(sweep_csv(&rows), sweep_csv(&again));
    }
}
