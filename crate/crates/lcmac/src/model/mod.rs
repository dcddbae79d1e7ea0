//! Analytical fixed-point performance model.
//!
//! For every station/channel pair the model tracks the probability of having
//! a frame waiting at frame start (`q`), the per-attempt success probability
//! (`p_succ`), the per-stage contention outcome probabilities, and the
//! useful payload capacity left after contention overhead. These quantities
//! depend on each other circularly, so the model iterates them to a fixed
//! point and then derives access delays, M/M/m queueing delays and a
//! per-station stability verdict.
//!
//! Stations with identical arrival rate and allowed-channel set behave
//! identically, so the solver stores state per equivalence class rather than
//! per station; dense homogeneous populations cost the same as small ones.

pub mod erlang;
mod game;

use crate::config::{ChannelTopology, SystemConfig};
use game::Competitor;

const RESIDUAL_TOL: f64 = 1e-8;
const MAX_ITERATIONS: u32 = 10_000;
const DAMPING: f64 = 0.5;

/// Probability that a station has a frame waiting for a channel at frame
/// start: `min(1, (1 - e^(-delta * t_frame)) / p_succ)`.
///
/// The ratio can exceed 1 when attempts fail often; it is clamped because a
/// probability cannot, and the caller treats the clamp as saturation.
/// `p_succ = 0` (a starved station) also reports 1.
pub fn queue_probability(delta: f64, t_frame: f64, p_succ: f64) -> f64 {
    debug_assert!(delta >= 0.0 && t_frame > 0.0);
    if p_succ <= 0.0 {
        return 1.0;
    }
    let arrival = -(-delta * t_frame).exp_m1();
    (arrival / p_succ).min(1.0)
}

/// Channel attempt rate of a station: arrivals are spread evenly over its
/// allowed channels and each packet needs `ceil(payload / useful)` frame
/// wins to get through.
pub fn traffic_rate(lambda: f64, n_allowed: usize, payload_bits: f64, useful: f64) -> f64 {
    assert!(n_allowed >= 1, "station must have at least one channel");
    assert!(
        useful > 0.0,
        "no useful capacity left: contention overhead exceeds the subframe"
    );
    lambda / n_allowed as f64 * (payload_bits / useful).ceil()
}

/// Average payload bits left in an upstream subframe after the expected
/// contention overhead, clamped at zero:
/// `sigma * (1 - sum_s theta(s) * stage_duration / t_up)`.
pub fn useful_bits(cfg: &SystemConfig, theta: &[f64]) -> f64 {
    let overhead: f64 = theta.iter().sum::<f64>() * cfg.stage_s() / cfg.upstream_s;
    (cfg.channel_bits as f64 * (1.0 - overhead)).max(0.0)
}

/// Stage-0 backoff-value distribution over `0..=beta`.
///
/// With probability `q * p_succ` the station transmitted successfully last
/// frame and is in post-backoff, drawing uniformly from the upper half
/// window `[(beta+1)/2 ..= beta]`; otherwise it draws uniformly from the
/// full window. Sums to 1 exactly.
pub fn stage0_distribution(beta: u32, q: f64, p_succ: f64) -> Vec<f64> {
    let w = beta as usize + 1;
    let half = w / 2;
    let post = q * p_succ;
    let base = (1.0 - post) / w as f64;
    let mut dist = vec![base; w];
    for v in dist.iter_mut().skip(half) {
        *v += post / half as f64;
    }
    dist
}

/// Arrival-rate-weighted mean of per-station values; `NaN` when no station
/// carries traffic (the mean is undefined there).
pub fn lambda_weighted_mean(lambda: &[f64], values: &[f64]) -> f64 {
    debug_assert_eq!(lambda.len(), values.len());
    let total: f64 = lambda.iter().sum();
    if total == 0.0 {
        return f64::NAN;
    }
    lambda
        .iter()
        .zip(values)
        .map(|(&l, &v)| l * v)
        .sum::<f64>()
        / total
}

/// Stations grouped into equivalence classes of identical arrival rate and
/// allowed-channel set.
struct StationClasses {
    /// Representative member ids per class; all state is stored per class.
    members: Vec<Vec<usize>>,
    /// Allowed channels per class (identical across its members).
    allowed: Vec<Vec<usize>>,
    /// Arrival rate per class.
    lambda: Vec<f64>,
    /// station id -> class index
    station_class: Vec<usize>,
}

impl StationClasses {
    fn build(topo: &ChannelTopology, group: bool) -> StationClasses {
        let n = topo.n_stations();
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut allowed: Vec<Vec<usize>> = Vec::new();
        let mut lambda: Vec<f64> = Vec::new();
        let mut station_class = Vec::with_capacity(n);
        for k in 0..n {
            let found = if group {
                (0..allowed.len()).find(|&i| {
                    lambda[i].to_bits() == topo.lambda[k].to_bits() && allowed[i] == topo.allowed[k]
                })
            } else {
                None
            };
            match found {
                Some(i) => {
                    members[i].push(k);
                    station_class.push(i);
                }
                None => {
                    station_class.push(allowed.len());
                    members.push(vec![k]);
                    allowed.push(topo.allowed[k].clone());
                    lambda.push(topo.lambda[k]);
                }
            }
        }
        StationClasses {
            members,
            allowed,
            lambda,
            station_class,
        }
    }

    fn len(&self) -> usize {
        self.members.len()
    }

    fn slot_of(&self, class: usize, channel: usize) -> usize {
        self.allowed[class].binary_search(&channel).unwrap_or_else(|_| {
            panic!(
                "station {} is not allowed on channel {channel}",
                self.members[class][0]
            )
        })
    }
}

/// Full model state for one configuration: per class and allowed-channel
/// slot. Either an intermediate iterate of the fixed-point solver or a state
/// constructed from assumed values for direct evaluation.
pub struct ModelState {
    cfg: SystemConfig,
    topo: ChannelTopology,
    classes: StationClasses,
    /// Waiting probability per (class, slot).
    q: Vec<Vec<f64>>,
    /// Success probability the stage-0 distributions were built from.
    p_used: Vec<Vec<f64>>,
    /// Overall per-attempt success probability (contention game times error
    /// factors) evaluated at this state.
    p_game: Vec<Vec<f64>>,
    /// Normalized stage-0 backoff distributions.
    stage0: Vec<Vec<Vec<f64>>>,
    /// Joint per-stage win probabilities of the pure contention game.
    stage_win: Vec<Vec<Vec<f64>>>,
    /// Stage-reach probabilities; `theta[..][..][0] = 1`.
    theta: Vec<Vec<Vec<f64>>>,
    /// Joint tie-for-minimum probabilities per stage.
    tie: Vec<Vec<Vec<f64>>>,
    /// Useful payload bits per win.
    useful: Vec<Vec<f64>>,
    /// Channel attempt rate.
    delta: Vec<Vec<f64>>,
    /// Waiting probability hit its clamp (or capacity vanished).
    saturated: Vec<Vec<bool>>,
    /// useful_bits clamped to zero.
    clamped: Vec<Vec<bool>>,
}

impl ModelState {
    fn new(cfg: &SystemConfig, topo: &ChannelTopology, group: bool) -> ModelState {
        let classes = StationClasses::build(topo, group);
        let stages = cfg.stage_max as usize + 1;
        let widths: Vec<usize> = classes.allowed.iter().map(|a| a.len()).collect();
        let shape_f = |v: f64| -> Vec<Vec<f64>> { widths.iter().map(|&w| vec![v; w]).collect() };
        let shape_b =
            || -> Vec<Vec<bool>> { widths.iter().map(|&w| vec![false; w]).collect() };
        let shape_rows = |len: usize| -> Vec<Vec<Vec<f64>>> {
            widths.iter().map(|&w| vec![vec![0.0; len]; w]).collect()
        };
        let mut theta = shape_rows(stages);
        for rows in theta.iter_mut() {
            for row in rows.iter_mut() {
                row[0] = 1.0;
            }
        }
        ModelState {
            cfg: cfg.clone(),
            topo: topo.clone(),
            classes,
            q: shape_f(1.0),
            p_used: shape_f(1.0),
            p_game: shape_f(1.0),
            stage0: shape_rows(cfg.backoff_max as usize + 1),
            stage_win: shape_rows(stages),
            theta,
            tie: shape_rows(stages),
            useful: shape_f(0.0),
            delta: shape_f(0.0),
            saturated: shape_b(),
            clamped: shape_b(),
        }
    }

    /// Build a state from externally assumed waiting and success
    /// probabilities (one value per station) and evaluate the contention
    /// game there, without running the fixed point. Used to check the model
    /// against enumeration oracles at arbitrary operating points.
    pub fn with_assumed(
        cfg: &SystemConfig,
        topo: &ChannelTopology,
        q: &[f64],
        p_succ: &[f64],
    ) -> ModelState {
        assert_eq!(q.len(), topo.n_stations());
        assert_eq!(p_succ.len(), topo.n_stations());
        let mut st = ModelState::new(cfg, topo, false);
        for k in 0..topo.n_stations() {
            for slot in 0..st.classes.allowed[k].len() {
                st.q[k][slot] = q[k];
                st.p_used[k][slot] = p_succ[k];
            }
        }
        st.refresh_stage0();
        let p = st.run_games();
        st.p_game = p;
        st.refresh_support();
        st
    }

    /// Rebuild every stage-0 distribution from the current `q`/`p_used`.
    fn refresh_stage0(&mut self) {
        for k in 0..self.classes.len() {
            for slot in 0..self.classes.allowed[k].len() {
                self.stage0[k][slot] =
                    stage0_distribution(self.cfg.backoff_max, self.q[k][slot], self.p_used[k][slot]);
            }
        }
    }

    /// Run the contention game on every (class, slot), store the per-stage
    /// outcome arrays, and return the implied overall success probabilities
    /// (game wins times bit-error and correlation-error factors).
    fn run_games(&mut self) -> Vec<Vec<f64>> {
        let err = (1.0 - self.cfg.bit_error).powi(self.cfg.channel_bits as i32)
            * (1.0 - self.cfg.corr_error).powi(2);
        let mut proposals: Vec<Vec<f64>> = Vec::with_capacity(self.classes.len());
        let mut outcomes: Vec<Vec<game::GameOutcome>> = Vec::with_capacity(self.classes.len());
        for k in 0..self.classes.len() {
            let mut row_p = Vec::with_capacity(self.classes.allowed[k].len());
            let mut row_o = Vec::with_capacity(self.classes.allowed[k].len());
            for (slot, &c) in self.classes.allowed[k].iter().enumerate() {
                let mut comps = Vec::new();
                for l in 0..self.classes.len() {
                    if let Ok(sl) = self.classes.allowed[l].binary_search(&c) {
                        let n = self.classes.members[l].len() - usize::from(l == k);
                        if n > 0 {
                            comps.push(Competitor {
                                activity: self.q[l][sl],
                                stage0: &self.stage0[l][sl],
                                count: n,
                            });
                        }
                    }
                }
                let out = game::resolve(
                    self.cfg.backoff_max,
                    self.cfg.stage_max,
                    &self.stage0[k][slot],
                    &comps,
                );
                row_p.push(err * out.stage_win.iter().sum::<f64>());
                row_o.push(out);
            }
            proposals.push(row_p);
            outcomes.push(row_o);
        }
        for (k, row) in outcomes.into_iter().enumerate() {
            for (slot, out) in row.into_iter().enumerate() {
                self.stage_win[k][slot] = out.stage_win;
                self.theta[k][slot] = out.theta;
                self.tie[k][slot] = out.tie;
            }
        }
        proposals
    }

    /// Recompute useful capacity and attempt rates from the current stage
    /// probabilities.
    fn refresh_support(&mut self) {
        for k in 0..self.classes.len() {
            let n_allowed = self.classes.allowed[k].len();
            for slot in 0..n_allowed {
                let u = useful_bits(&self.cfg, &self.theta[k][slot]);
                self.useful[k][slot] = u;
                self.clamped[k][slot] = u <= 0.0;
                self.delta[k][slot] = if u > 0.0 {
                    traffic_rate(
                        self.classes.lambda[k],
                        n_allowed,
                        self.topo.payload_bits,
                        u,
                    )
                } else {
                    f64::INFINITY
                };
            }
        }
    }

    fn pair(&self, k: usize, c: usize) -> (usize, usize) {
        assert!(k < self.topo.n_stations(), "station {k} out of range");
        let class = self.classes.station_class[k];
        (class, self.classes.slot_of(class, c))
    }

    /// Waiting probability `q` for station `k` on channel `c`.
    pub fn q(&self, k: usize, c: usize) -> f64 {
        let (class, slot) = self.pair(k, c);
        self.q[class][slot]
    }

    /// Overall per-attempt success probability for station `k` on channel
    /// `c`: bit-error factor times correlation factor times the summed
    /// per-stage contention wins.
    pub fn overall_success(&self, k: usize, c: usize) -> f64 {
        let (class, slot) = self.pair(k, c);
        self.p_game[class][slot]
    }

    /// Probability of winning exactly at stage `s`, including the
    /// correlation-error factor (but not the bit-error factor, which applies
    /// once per attempt).
    pub fn stage_success(&self, k: usize, c: usize, s: u32) -> f64 {
        let (class, slot) = self.pair(k, c);
        self.stage_win[class][slot][s as usize] * (1.0 - self.cfg.corr_error).powi(2)
    }

    /// Probability of reaching stage `s`; `theta(k, c, 0) = 1`.
    pub fn theta(&self, k: usize, c: usize, s: u32) -> f64 {
        let (class, slot) = self.pair(k, c);
        self.theta[class][slot][s as usize]
    }

    /// Probability of tying for the minimum at stage `s`, conditioned on
    /// reaching stage `s` (0 when the stage is unreachable).
    pub fn tie_probability(&self, k: usize, c: usize, s: u32) -> f64 {
        let (class, slot) = self.pair(k, c);
        let reach = self.theta[class][slot][s as usize];
        if reach == 0.0 {
            0.0
        } else {
            self.tie[class][slot][s as usize] / reach
        }
    }

    /// Backoff-value distribution at stage `s`, weighted so it sums to
    /// `theta(k, c, s)`: the stage-0 distribution sums to 1, later stages
    /// are uniform fresh draws.
    pub fn backoff_dist(&self, k: usize, c: usize, s: u32) -> Vec<f64> {
        let (class, slot) = self.pair(k, c);
        if s == 0 {
            return self.stage0[class][slot].clone();
        }
        let w = self.cfg.backoff_max as usize + 1;
        vec![self.theta[class][slot][s as usize] / w as f64; w]
    }

    /// Useful payload bits per win on channel `c`.
    pub fn useful_bits_for(&self, k: usize, c: usize) -> f64 {
        let (class, slot) = self.pair(k, c);
        self.useful[class][slot]
    }

    /// Channel attempt rate (attempts/second) of station `k` on channel `c`.
    pub fn delta(&self, k: usize, c: usize) -> f64 {
        let (class, slot) = self.pair(k, c);
        self.delta[class][slot]
    }

    /// Whether the model classified this pair as saturated (waiting
    /// probability clamped at 1, or no useful capacity).
    pub fn saturated(&self, k: usize, c: usize) -> bool {
        let (class, slot) = self.pair(k, c);
        self.saturated[class][slot]
    }

    /// Whether useful capacity was clamped to zero.
    pub fn useful_clamped(&self, k: usize, c: usize) -> bool {
        let (class, slot) = self.pair(k, c);
        self.clamped[class][slot]
    }

    /// Mean frames-to-success delay of station `k` on channel `c`:
    /// `t_frame / p_succ`; infinite when the station is starved.
    pub fn access_delay_channel(&self, k: usize, c: usize) -> f64 {
        let p = self.overall_success(k, c);
        if p > 0.0 {
            self.cfg.frame_s / p
        } else {
            f64::INFINITY
        }
    }

    /// Access delay averaged over the station's allowed channels.
    pub fn access_delay(&self, k: usize) -> f64 {
        let class = self.classes.station_class[k];
        let chans = &self.classes.allowed[class];
        chans
            .iter()
            .map(|&c| self.access_delay_channel(k, c))
            .sum::<f64>()
            / chans.len() as f64
    }

    /// Total (queueing + service) delay of station `k`, modeling its allowed
    /// channels as an M/M/m system with service rate `1 / access_delay`.
    /// Infinite when the station is unstable.
    pub fn total_delay(&self, k: usize) -> f64 {
        let class = self.classes.station_class[k];
        let m = self.classes.allowed[class].len() as u32;
        let ac = self.access_delay(k);
        if !ac.is_finite() || ac <= 0.0 {
            return f64::INFINITY;
        }
        erlang::mm_m_sojourn(m, self.classes.lambda[class], 1.0 / ac)
    }

    /// Station `k` is stable iff `lambda_k * access_delay_k < 1`.
    pub fn stable(&self, k: usize) -> bool {
        let class = self.classes.station_class[k];
        self.classes.lambda[class] * self.access_delay(k) < 1.0
    }

    /// Arrival-weighted mean of the per-station total delays; `NaN` when no
    /// station carries traffic.
    pub fn mean_delay(&self) -> f64 {
        let lambda = &self.topo.lambda;
        let delays: Vec<f64> = (0..self.topo.n_stations())
            .map(|k| self.total_delay(k))
            .collect();
        lambda_weighted_mean(lambda, &delays)
    }

    pub fn system(&self) -> &SystemConfig {
        &self.cfg
    }

    pub fn topology(&self) -> &ChannelTopology {
        &self.topo
    }
}

/// Converged (or capped) output of [`solve_fixed_point`].
pub struct FixedPointSolution {
    pub state: ModelState,
    /// Update rounds performed, including the one that detected convergence.
    pub iterations: u32,
    pub converged: bool,
    /// Largest undamped component change seen in the final round.
    pub residual: f64,
}

impl FixedPointSolution {
    /// True iff every station with traffic is stable and the solver
    /// converged.
    pub fn stable_all(&self) -> bool {
        self.converged
            && (0..self.state.topo.n_stations())
                .all(|k| self.state.topo.lambda[k] == 0.0 || self.state.stable(k))
    }
}

/// Iterate the model to its fixed point.
///
/// Starting from `q = 1`, `p_succ = 1`, each round (1) refreshes useful
/// capacity, attempt rates and waiting probabilities from the current stage
/// probabilities, (2) rebuilds the stage-0 distributions, and (3) replays
/// the contention game to update success and stage probabilities. Updates to
/// `q` and `p_succ` take full steps while they move monotonically and are
/// damped by 0.5 as soon as their direction reverses, which settles the
/// oscillation that plain iteration exhibits in saturated symmetric
/// configurations. Convergence is declared when the largest undamped change
/// drops below 1e-8.
///
/// Panics if any state component turns non-finite, naming the offending
/// station/channel pair. A run that hits the 10,000-round cap returns with
/// `converged = false` and the last residual.
pub fn solve_fixed_point(cfg: &SystemConfig, topo: &ChannelTopology) -> FixedPointSolution {
    let mut st = ModelState::new(cfg, topo, true);
    let n_classes = st.classes.len();
    let zero_rows = || -> Vec<Vec<f64>> {
        (0..n_classes)
            .map(|k| vec![0.0; st.classes.allowed[k].len()])
            .collect()
    };
    let mut prev_dq = zero_rows();
    let mut prev_dp = zero_rows();

    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    let mut converged = false;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        residual = 0.0;

        // Waiting probabilities from the current stage/success state.
        st.refresh_support();
        for (k, prev_row) in prev_dq.iter_mut().enumerate() {
            for (slot, prev) in prev_row.iter_mut().enumerate() {
                let p = st.p_used[k][slot];
                let (q_prop, sat) = if st.clamped[k][slot] || p <= 0.0 {
                    (1.0, true)
                } else {
                    let raw = -(-st.delta[k][slot] * cfg.frame_s).exp_m1() / p;
                    (raw.min(1.0), raw >= 1.0)
                };
                st.saturated[k][slot] = sat;
                let d = q_prop - st.q[k][slot];
                residual = residual.max(d.abs());
                let step = if d * *prev < 0.0 { DAMPING } else { 1.0 };
                *prev = d;
                st.q[k][slot] += step * d;
            }
        }

        // Contention game at the new waiting probabilities.
        st.refresh_stage0();
        let proposals = st.run_games();
        for (k, prev_row) in prev_dp.iter_mut().enumerate() {
            for (slot, prev) in prev_row.iter_mut().enumerate() {
                let d = proposals[k][slot] - st.p_used[k][slot];
                residual = residual.max(d.abs());
                let step = if d * *prev < 0.0 { DAMPING } else { 1.0 };
                *prev = d;
                st.p_used[k][slot] += step * d;
                st.p_game[k][slot] = proposals[k][slot];
                let bad = !st.q[k][slot].is_finite() || !st.p_used[k][slot].is_finite();
                if bad {
                    panic!(
                        "fixed point diverged to a non-finite value at station {} channel {}",
                        st.classes.members[k][0],
                        st.classes.allowed[k][slot]
                    );
                }
            }
        }

        if residual < RESIDUAL_TOL {
            converged = true;
            break;
        }
    }

    // Align the derived quantities with the final stage probabilities.
    st.refresh_support();
    for k in 0..n_classes {
        for slot in 0..st.classes.allowed[k].len() {
            if st.p_game[k][slot] <= 0.0 {
                st.saturated[k][slot] = true;
            }
        }
    }

    FixedPointSolution {
        state: st,
        iterations,
        converged,
        residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clean_cfg() -> SystemConfig {
        SystemConfig::default()
    }

    fn single_channel_topo(n: usize, lambda: f64) -> ChannelTopology {
        ChannelTopology {
            n_channels: 1,
            allowed: vec![vec![0]; n],
            lambda: vec![lambda; n],
            payload_bits: 2400.0,
        }
    }

    #[test]
    fn queue_probability_examples() {
        assert_eq!(queue_probability(0.0, 0.005, 1.0), 0.0);
        let p = queue_probability(100.0, 0.005, 1.0);
        assert!((p - (1.0 - (-0.5f64).exp())).abs() < 1e-12);
        // Clamp: raw value 1.967 collapses to 1.
        assert_eq!(queue_probability(100.0, 0.005, 0.2), 1.0);
        assert_eq!(queue_probability(5.0, 0.005, 0.0), 1.0);
    }

    #[test]
    fn traffic_rate_examples() {
        assert_eq!(traffic_rate(0.0, 7, 2400.0, 3000.0), 0.0);
        assert!((traffic_rate(10.0, 7, 2400.0, 3000.0) - 10.0 / 7.0).abs() < 1e-12);
        assert!((traffic_rate(10.0, 7, 2400.0, 2000.0) - 20.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    #[should_panic(expected = "useful")]
    fn traffic_rate_rejects_zero_capacity() {
        traffic_rate(1.0, 1, 2400.0, 0.0);
    }

    #[test]
    fn useful_bits_examples() {
        let cfg = clean_cfg();
        // One stage of 13 slots at 10us inside a 2.5ms subframe.
        let mut theta = vec![0.0; 16];
        theta[0] = 1.0;
        assert!((useful_bits(&cfg, &theta) - 3185.28).abs() < 1e-9);

        let mut zero_overhead = cfg.clone();
        zero_overhead.slot_s = 0.0; // bypass validation deliberately
        assert_eq!(useful_bits(&zero_overhead, &theta), 3360.0);

        // All 16 stages always happening exceeds the subframe: clamped.
        let always = vec![1.0; 16];
        let mut slow = cfg;
        slow.slot_s = 15e-6;
        assert_eq!(useful_bits(&slow, &always), 0.0);
    }

    #[test]
    fn stage0_distribution_examples() {
        // No traffic ever queued: plain uniform.
        let d = stage0_distribution(7, 0.0, 0.8);
        assert!(d.iter().all(|&p| (p - 0.125).abs() < 1e-15));
        // Always queued, always winning: all mass in the upper half.
        let d = stage0_distribution(7, 1.0, 1.0);
        assert!(d[..4].iter().all(|&p| p == 0.0));
        assert!(d[4..].iter().all(|&p| (p - 0.25).abs() < 1e-15));
        // Normalization holds across a parameter grid.
        for beta in [1, 3, 7, 15] {
            for q in [0.0, 0.3, 0.9, 1.0] {
                for p in [0.0, 0.4, 1.0] {
                    let sum: f64 = stage0_distribution(beta, q, p).iter().sum();
                    assert!((sum - 1.0).abs() < 1e-12, "beta={beta} q={q} p={p}");
                }
            }
        }
    }

    #[test]
    fn lambda_weighted_mean_examples() {
        let m = lambda_weighted_mean(&[1.0, 3.0], &[0.004, 0.008]);
        assert!((m - 0.007).abs() < 1e-12);
        // Zero-rate stations contribute no weight.
        let m = lambda_weighted_mean(&[1.0, 0.0], &[0.004, 123.0]);
        assert!((m - 0.004).abs() < 1e-12);
        assert!(lambda_weighted_mean(&[0.0, 0.0], &[1.0, 2.0]).is_nan());
    }

    #[test]
    fn assumed_state_tie_and_stage_success_examples() {
        let mut cfg = clean_cfg();
        cfg.backoff_max = 1;
        // q = 1, p_used = 0 gives plain uniform draws over {0, 1}.
        let topo = single_channel_topo(2, 0.0);
        let st = ModelState::with_assumed(&cfg, &topo, &[1.0; 2], &[0.0; 2]);
        assert!((st.tie_probability(0, 0, 0) - 0.5).abs() < 1e-12);
        assert!((st.stage_success(0, 0, 0) - 0.25).abs() < 1e-12);

        let topo3 = single_channel_topo(3, 0.0);
        let st3 = ModelState::with_assumed(&cfg, &topo3, &[1.0; 3], &[0.0; 3]);
        assert!((st3.tie_probability(0, 0, 0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_station_error_factors() {
        let mut cfg = clean_cfg();
        cfg.corr_error = 0.1;
        let topo = single_channel_topo(1, 0.0);
        let st = ModelState::with_assumed(&cfg, &topo, &[1.0], &[1.0]);
        assert!((st.stage_success(0, 0, 0) - 0.81).abs() < 1e-12);

        let mut cfg2 = clean_cfg();
        cfg2.bit_error = 1e-5;
        let st2 = ModelState::with_assumed(&cfg2, &topo, &[1.0], &[1.0]);
        let expect = (1.0f64 - 1e-5).powi(3360);
        assert!((st2.overall_success(0, 0) - expect).abs() < 1e-15);
        assert!((expect - 0.9670).abs() < 2e-4);
    }

    #[test]
    fn zero_traffic_converges_immediately() {
        let cfg = clean_cfg();
        let topo = ChannelTopology::grouped(4, 2, 2, 0.0, 2400.0).unwrap();
        let sol = solve_fixed_point(&cfg, &topo);
        assert!(sol.converged);
        assert!(sol.iterations <= 2, "took {} iterations", sol.iterations);
        for k in 0..4 {
            for c in 0..2 {
                assert_eq!(sol.state.q(k, c), 0.0);
                assert_eq!(sol.state.overall_success(k, c), 1.0);
            }
        }
    }

    #[test]
    fn lone_station_gets_the_frame_rate() {
        let cfg = clean_cfg();
        let topo = single_channel_topo(1, 10.0);
        let sol = solve_fixed_point(&cfg, &topo);
        assert!(sol.converged);
        assert!((sol.state.overall_success(0, 0) - 1.0).abs() < 1e-12);
        assert!((sol.state.access_delay(0) - cfg.frame_s).abs() < 1e-12);
        assert!(sol.state.stable(0));
    }

    #[test]
    fn saturated_pair_splits_the_channel() {
        let mut cfg = clean_cfg();
        cfg.backoff_max = 1;
        let topo = single_channel_topo(2, 1e9);
        let sol = solve_fixed_point(&cfg, &topo);
        assert!(sol.converged);
        for k in 0..2 {
            assert!((sol.state.overall_success(k, 0) - 0.5).abs() < 1e-3);
            assert!(sol.state.saturated(k, 0));
            assert!(!sol.state.stable(k));
        }
    }

    #[test]
    fn access_delay_examples() {
        let cfg = clean_cfg();
        let topo = single_channel_topo(1, 10.0);
        let sol = solve_fixed_point(&cfg, &topo);
        // P_succ = 1 on the only channel.
        assert!((sol.state.access_delay_channel(0, 0) - 0.005).abs() < 1e-12);
    }

    #[test]
    fn stability_threshold_examples() {
        // lambda * delay = 0.5 -> stable; 1.25 -> unstable.
        let cfg = clean_cfg();
        let topo = single_channel_topo(1, 100.0);
        let sol = solve_fixed_point(&cfg, &topo);
        assert!(sol.state.stable(0));
        let topo = single_channel_topo(1, 250.0);
        let sol = solve_fixed_point(&cfg, &topo);
        assert!(!sol.state.stable(0));
    }

    #[test]
    fn homogeneous_stations_share_outputs() {
        let cfg = clean_cfg();
        let topo = ChannelTopology::grouped(6, 3, 3, 40.0, 2400.0).unwrap();
        let sol = solve_fixed_point(&cfg, &topo);
        assert!(sol.converged);
        let base = sol.state.overall_success(0, 0);
        for k in 1..6 {
            assert!((sol.state.overall_success(k, 0) - base).abs() < 1e-12);
            assert!((sol.state.total_delay(k) - sol.state.total_delay(0)).abs() < 1e-12);
        }
    }

    #[test]
    fn error_rates_never_help() {
        let base_cfg = clean_cfg();
        let topo = ChannelTopology::grouped(4, 2, 2, 50.0, 2400.0).unwrap();
        let base = solve_fixed_point(&base_cfg, &topo);
        for (p_bit, p_corr) in [(1e-5, 0.0), (0.0, 0.05), (1e-4, 0.1)] {
            let mut cfg = base_cfg.clone();
            cfg.bit_error = p_bit;
            cfg.corr_error = p_corr;
            let sol = solve_fixed_point(&cfg, &topo);
            for k in 0..4 {
                for &c in &topo.allowed[k] {
                    assert!(
                        sol.state.overall_success(k, c)
                            <= base.state.overall_success(k, c) + 1e-9,
                        "p_bit={p_bit} p_corr={p_corr}"
                    );
                }
            }
        }
    }

    #[test]
    fn converged_solution_is_a_fixed_point() {
        let cfg = clean_cfg();
        let topo = ChannelTopology::grouped(10, 7, 7, 80.0, 2400.0).unwrap();
        let sol = solve_fixed_point(&cfg, &topo);
        assert!(sol.converged);
        assert!(sol.residual < 1e-8);
        // Re-evaluating the game at the converged state must reproduce the
        // stored success probabilities.
        let mut st = sol.state;
        let replay = st.run_games();
        for (k, row) in replay.iter().enumerate() {
            for (slot, &p) in row.iter().enumerate() {
                assert!((p - st.p_game[k][slot]).abs() < 1e-7);
            }
        }
    }
}
