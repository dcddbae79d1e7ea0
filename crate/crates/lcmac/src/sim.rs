//! Slot-accurate discrete-event simulator of the contention MAC.
//!
//! Time advances frame by frame. At each frame start, every station holding
//! at least one queued packet picks one of its allowed channels uniformly at
//! random and joins that channel's contention. Contention proceeds in
//! stages: all contenders draw backoff numbers, the unique minimum wins,
//! tied minima advance to the next stage, and a tie persisting past the
//! maximum stage wastes the frame for everyone on the channel. A winner
//! transmits from its queue until the upstream subframe budget runs out,
//! then hands leftover capacity to the stations that lost its final stage
//! via a channel-reuse preamble, which restarts contention at that stage.
//!
//! Two error processes are injected: each transmission of `b` bits is
//! corrupted with probability `1 - (1 - p_bit)^b`, and at every uniquely won
//! stage each losing station independently misdetects the winner's preamble
//! with probability `p_corr` and transmits anyway, destroying the frame for
//! all involved.
//!
//! Runs are deterministic: every station owns a counter-based RNG stream
//! derived from the run seed, and all iteration orders are fixed.

use std::collections::VecDeque;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{ChannelTopology, SystemConfig};
use crate::traffic::Arrival;

/// Stable mix of a base seed and a stream index, used to give every station
/// (and every per-station concern) an independent deterministic RNG stream.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// How one channel's frame ended, from the frame-start contention's point
/// of view (reuse rounds are tallied separately).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelOutcome {
    /// Nobody contended.
    Idle,
    /// A unique winner emerged at `stage` and transmitted.
    Won { station: usize, stage: u32 },
    /// A misdetected preamble made a loser transmit over the winner.
    Collision,
    /// Ties persisted past the maximum stage.
    Unresolved,
}

/// Per-frame, per-channel record for debugging and invariant checks.
#[derive(Debug, Clone)]
pub struct FrameRecord {
    pub frame: u64,
    pub channel: usize,
    pub outcome: ChannelOutcome,
    /// Mini-slots spent on contention stages and preambles.
    pub slots_consumed: u32,
    /// Uncorrupted payload bits put on the air this frame.
    pub payload_bits: u64,
    /// Channel-reuse handoffs that took place after the first win.
    pub reuse_events: u32,
}

/// Aggregate results of one simulation run.
#[derive(Debug, Clone)]
pub struct SimMetrics {
    /// Simulated time (whole frames) in seconds.
    pub duration_s: f64,
    pub frames: u64,
    /// Packets that entered a queue during the run.
    pub generated_packets: u64,
    pub delivered_packets: u64,
    /// Payload bits of fully delivered packets.
    pub delivered_bits: u64,
    /// `delivered_bits / duration_s`.
    pub throughput_bps: f64,
    /// Arrival-to-delivery delay, averaged over delivered packets; `NaN`
    /// when nothing was delivered.
    pub mean_delay_s: f64,
    /// Per-station sum of delay samples and sample counts.
    pub delay_sum_s: Vec<f64>,
    pub delay_count: Vec<u64>,
    /// Misdetection collisions (a loser transmitting over the winner).
    pub collisions: u64,
    /// Contentions that tied past the maximum stage.
    pub unresolved: u64,
    /// Wins by the stage at which the winner emerged, reuse rounds included.
    pub stage_wins: Vec<u64>,
    /// Packets (and their remaining bits) still queued when the run ended.
    pub queued_end_packets: u64,
    pub queued_end_bits: u64,
    /// Padding lost to grant quantization; always 0 here, filled by the
    /// request/grant baseline which shares this metrics type.
    pub wasted_bits: u64,
    /// Frame-start contention attempts per station and channel.
    pub attempts: Vec<Vec<u64>>,
    /// Frames whose primary contention the station won and transmitted
    /// uncorrupted, per station and channel.
    pub wins: Vec<Vec<u64>>,
    /// Additional wins taken in channel-reuse rounds after the primary
    /// winner finished early, per station and channel.
    pub reuse_wins: Vec<Vec<u64>>,
    /// Set when the run was shorter than 100 frames.
    pub short_duration_warning: bool,
}

impl SimMetrics {
    /// Fraction of station `k`'s frame-start attempts on channel `c` whose
    /// primary contention it won; `NaN` with no attempts. Reuse wins are
    /// excluded: this is the per-frame game success the analytical model
    /// predicts, while reuse is extra capacity on top of it.
    pub fn success_rate(&self, k: usize, c: usize) -> f64 {
        let attempts = self.attempts[k][c];
        if attempts == 0 {
            f64::NAN
        } else {
            self.wins[k][c] as f64 / attempts as f64
        }
    }
}

struct Packet {
    arrival_s: f64,
    bits: u64,
    remaining: u64,
}

struct Station {
    queue: VecDeque<Packet>,
    next_arrival: usize,
    /// Won in the previous frame; restricts this frame's stage-0 draw to the
    /// upper half window. Refreshed at every frame start.
    post_backoff: bool,
    rng: ChaCha8Rng,
}

/// Run the simulator; see the module docs for the protocol mechanics.
///
/// `arrivals` holds each station's packet arrivals sorted by time; a packet
/// becomes eligible at the first frame boundary after it arrives. The run
/// covers `floor(duration / t_frame)` whole frames.
pub fn run_simulation(
    cfg: &SystemConfig,
    topo: &ChannelTopology,
    arrivals: &[Vec<Arrival>],
    seed: u64,
    duration: f64,
) -> SimMetrics {
    run_simulation_logged(cfg, topo, arrivals, seed, duration, |_| {})
}

/// [`run_simulation`] with a per-frame, per-channel record callback.
pub fn run_simulation_logged(
    cfg: &SystemConfig,
    topo: &ChannelTopology,
    arrivals: &[Vec<Arrival>],
    seed: u64,
    duration: f64,
    mut log: impl FnMut(&FrameRecord),
) -> SimMetrics {
    assert_eq!(arrivals.len(), topo.n_stations(), "one arrival list per station");
    for list in arrivals {
        debug_assert!(list.windows(2).all(|w| w[0].time_s <= w[1].time_s));
    }

    let n = topo.n_stations();
    let frames = (duration / cfg.frame_s).floor() as u64;
    let mut stations: Vec<Station> = (0..n)
        .map(|k| Station {
            queue: VecDeque::new(),
            next_arrival: 0,
            post_backoff: false,
            rng: ChaCha8Rng::seed_from_u64(derive_seed(seed, k as u64)),
        })
        .collect();

    let mut m = SimMetrics {
        duration_s: frames as f64 * cfg.frame_s,
        frames,
        generated_packets: 0,
        delivered_packets: 0,
        delivered_bits: 0,
        throughput_bps: 0.0,
        mean_delay_s: f64::NAN,
        delay_sum_s: vec![0.0; n],
        delay_count: vec![0; n],
        collisions: 0,
        unresolved: 0,
        stage_wins: vec![0; cfg.stage_max as usize + 1],
        queued_end_packets: 0,
        queued_end_bits: 0,
        wasted_bits: 0,
        attempts: vec![vec![0; topo.n_channels]; n],
        wins: vec![vec![0; topo.n_channels]; n],
        reuse_wins: vec![vec![0; topo.n_channels]; n],
        short_duration_warning: frames < 100,
    };

    let mut contenders: Vec<Vec<usize>> = vec![Vec::new(); topo.n_channels];
    let mut draws_upper: Vec<bool> = vec![false; n];

    for frame in 0..frames {
        let t0 = frame as f64 * cfg.frame_s;

        // Admit packets that arrived strictly before this frame boundary and
        // refresh the one-frame post-backoff window.
        for (k, st) in stations.iter_mut().enumerate() {
            let list = &arrivals[k];
            while st.next_arrival < list.len() && list[st.next_arrival].time_s < t0 {
                let a = list[st.next_arrival];
                assert!(a.payload_bits > 0, "packets must carry at least one bit");
                st.queue.push_back(Packet {
                    arrival_s: a.time_s,
                    bits: a.payload_bits,
                    remaining: a.payload_bits,
                });
                st.next_arrival += 1;
                m.generated_packets += 1;
            }
            draws_upper[k] = st.post_backoff;
            st.post_backoff = false;
        }

        // Channel election.
        for list in contenders.iter_mut() {
            list.clear();
        }
        for k in 0..n {
            if stations[k].queue.is_empty() {
                continue;
            }
            let allowed = &topo.allowed[k];
            let c = allowed[stations[k].rng.random_range(0..allowed.len())];
            contenders[c].push(k);
            m.attempts[k][c] += 1;
        }

        for (c, channel_contenders) in contenders.iter().enumerate() {
            let record = resolve_channel(
                cfg,
                &mut stations,
                channel_contenders,
                &draws_upper,
                frame,
                c,
                t0,
                &mut m,
            );
            debug_assert!(record.slots_consumed as f64 * cfg.slot_s <= cfg.upstream_s + 1e-12);
            debug_assert!(record.payload_bits <= cfg.channel_bits);
            log(&record);
        }
    }

    for st in &stations {
        m.queued_end_packets += st.queue.len() as u64;
        m.queued_end_bits += st.queue.iter().map(|p| p.remaining).sum::<u64>();
    }
    if m.duration_s > 0.0 {
        m.throughput_bps = m.delivered_bits as f64 / m.duration_s;
    }
    let samples: u64 = m.delay_count.iter().sum();
    if samples > 0 {
        m.mean_delay_s = m.delay_sum_s.iter().sum::<f64>() / samples as f64;
    }
    m
}

/// Resolve one channel for one frame: stage contention, transmission,
/// misdetection collisions and channel-reuse handoffs.
#[allow(clippy::too_many_arguments)]
fn resolve_channel(
    cfg: &SystemConfig,
    stations: &mut [Station],
    frame_contenders: &[usize],
    draws_upper: &[bool],
    frame: u64,
    channel: usize,
    t0: f64,
    m: &mut SimMetrics,
) -> FrameRecord {
    let mut record = FrameRecord {
        frame,
        channel,
        outcome: ChannelOutcome::Idle,
        slots_consumed: 0,
        payload_bits: 0,
        reuse_events: 0,
    };
    if frame_contenders.is_empty() {
        return record;
    }

    let w = cfg.backoff_max + 1;
    let half = w / 2;
    let stage_cost = cfg.stage_slots() as f64 * cfg.slot_s;
    let preamble_cost = cfg.preamble_slots as f64 * cfg.slot_s;
    let bit_time = cfg.upstream_s / cfg.channel_bits as f64;

    let mut budget_s = cfg.upstream_s;
    let mut active: Vec<usize> = frame_contenders.to_vec();
    let mut stage: u32 = 0;
    let mut first_round = true;
    let mut prior_winners: Vec<usize> = Vec::new();
    let mut draws: Vec<u32> = Vec::new();

    'rounds: loop {
        // One contention round: stages `stage..=stage_max` among `active`.
        let winner = loop {
            if !first_round && budget_s < stage_cost {
                // A reuse round ran out of subframe; remainder is wasted.
                break 'rounds;
            }
            debug_assert!(budget_s >= stage_cost - 1e-12);
            budget_s -= stage_cost;
            record.slots_consumed += cfg.stage_slots();

            draws.clear();
            for &k in active.iter() {
                let upper = stage == 0 && first_round && draws_upper[k];
                let lo = if upper { half } else { 0 };
                draws.push(stations[k].rng.random_range(lo..w));
            }
            let min = *draws.iter().min().expect("contenders nonempty");
            let holders: Vec<usize> = active
                .iter()
                .zip(&draws)
                .filter(|&(_, &d)| d == min)
                .map(|(&k, _)| k)
                .collect();

            if holders.len() == 1 {
                // Losers of this stage may misdetect the winner's preamble
                // and transmit anyway, destroying the frame on this channel.
                let mut misdetected = false;
                for (&k, &d) in active.iter().zip(&draws) {
                    if d != min && stations[k].rng.random::<f64>() < cfg.corr_error {
                        misdetected = true;
                    }
                }
                if misdetected {
                    m.collisions += 1;
                    if first_round {
                        record.outcome = ChannelOutcome::Collision;
                    }
                    break 'rounds;
                }
                break holders[0];
            }

            if stage == cfg.stage_max {
                m.unresolved += 1;
                if first_round {
                    record.outcome = ChannelOutcome::Unresolved;
                }
                break 'rounds;
            }
            active = holders;
            stage += 1;
        };

        // Transmission: drain the winner's queue until the budget runs out
        // or a corrupted transmission forces a retry in a later frame.
        let mut transmitted = false;
        let mut clean = true;
        loop {
            let available = ((budget_s / bit_time).floor()).max(0.0) as u64;
            if available == 0 {
                break;
            }
            let Some(head) = stations[winner].queue.front_mut() else {
                break;
            };
            let bits = head.remaining.min(available);
            budget_s -= bits as f64 * bit_time;
            transmitted = true;
            let ok = (1.0 - cfg.bit_error).powi(bits as i32);
            if stations[winner].rng.random::<f64>() >= ok {
                clean = false;
                break;
            }
            record.payload_bits += bits;
            head.remaining -= bits;
            if head.remaining == 0 {
                let delay = t0 + cfg.upstream_s - head.arrival_s;
                m.delay_sum_s[winner] += delay;
                m.delay_count[winner] += 1;
                m.delivered_packets += 1;
                m.delivered_bits += head.bits;
                stations[winner].queue.pop_front();
            } else {
                break; // budget cut the packet mid-way; it continues later
            }
        }

        if transmitted && clean {
            stations[winner].post_backoff = true;
            if first_round {
                m.wins[winner][channel] += 1;
            } else {
                m.reuse_wins[winner][channel] += 1;
            }
            m.stage_wins[stage as usize] += 1;
        }
        if first_round {
            record.outcome = ChannelOutcome::Won {
                station: winner,
                stage,
            };
        }
        prior_winners.push(winner);

        // Channel reuse: offer the remainder to this stage's losers.
        let next: Vec<usize> = active
            .iter()
            .copied()
            .filter(|&k| {
                k != winner && !prior_winners.contains(&k) && !stations[k].queue.is_empty()
            })
            .collect();
        if next.is_empty() || budget_s < preamble_cost + stage_cost + bit_time {
            break;
        }
        budget_s -= preamble_cost;
        record.slots_consumed += cfg.preamble_slots;
        record.reuse_events += 1;
        active = next;
        first_round = false;
        continue 'rounds;
    }

    record
}
