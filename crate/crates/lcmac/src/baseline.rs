//! Simplified request/grant reference MAC.
//!
//! Stations ask the base station for upstream capacity by transmitting a
//! bandwidth request in one of a handful of per-frame contention slots; two
//! requests in the same slot collide and back off binary-exponentially, the
//! backoff counted in contention-slot opportunities across frames. A
//! successful request covers the station's whole backlog at that moment and
//! joins a FIFO at the base station, which grants capacity in whole
//! subchannels — so every packet pays ceil(len / subchannel) subchannels and
//! the padding is lost. Each station keeps at most one request outstanding.
//!
//! This is a deliberately small abstraction of a standards-based reservation
//! MAC: it reproduces the two effects the comparison cares about (request
//! contention that degrades with population size, and grant quantization
//! waste) without modeling OFDMA maps, ranging or service classes.

use std::collections::VecDeque;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{BaselineConfig, ChannelTopology, SystemConfig};
use crate::sim::{derive_seed, SimMetrics};
use crate::traffic::Arrival;

/// Padding bits lost when a payload is carried in whole grant quanta:
/// `ceil(payload / quantum) * quantum - payload`; zero payload wastes
/// nothing.
pub fn subchannel_waste(payload_bits: u64, quantum_bits: u64) -> u64 {
    assert!(quantum_bits > 0, "grant quantum must be positive");
    if payload_bits == 0 {
        return 0;
    }
    payload_bits.div_ceil(quantum_bits) * quantum_bits - payload_bits
}

struct PendingPacket {
    arrival_s: f64,
    bits: u64,
    subchannels: u64,
}

struct Request {
    station: usize,
    packets: VecDeque<PendingPacket>,
    /// Subchannels already granted towards the head packet.
    head_filled: u64,
}

/// Convert a station's unrequested backlog into request entries, computing
/// each packet's whole-subchannel grant size.
fn drain_queue(queue: &mut VecDeque<(f64, u64)>, quantum: u64) -> VecDeque<PendingPacket> {
    queue
        .drain(..)
        .map(|(arrival_s, bits)| PendingPacket {
            arrival_s,
            bits,
            subchannels: bits.div_ceil(quantum),
        })
        .collect()
}

struct Node {
    /// Packets not yet covered by any request.
    queue: VecDeque<(f64, u64)>,
    next_arrival: usize,
    outstanding: bool,
    /// Current backoff window in contention slots.
    cw: u32,
    /// Contention-slot opportunities to sit out before this request is
    /// transmitted; consumed at `contention_slots` per frame, and the
    /// remainder selects the transmit slot.
    defer: u32,
    /// A backoff value has been drawn for the request currently being sent.
    armed: bool,
    /// The base station polls this station until this frame index; packets
    /// arriving while polled are requested without contention.
    poll_until: u64,
    rng: ChaCha8Rng,
}

/// Run the request/grant baseline over `floor(duration / t_frame)` frames.
///
/// Within each frame the base station first serves its grant FIFO with the
/// frame's subchannel budget (deliveries are stamped at frame end), then
/// collects the frame's new bandwidth requests; a fresh request is therefore
/// servable from the next frame onward. Deterministic per seed; shares
/// [`SimMetrics`] with the contention simulator, with request-slot
/// statistics under channel index 0.
pub fn run_baseline(
    bcfg: &BaselineConfig,
    cfg: &SystemConfig,
    topo: &ChannelTopology,
    arrivals: &[Vec<Arrival>],
    seed: u64,
    duration: f64,
) -> SimMetrics {
    assert_eq!(arrivals.len(), topo.n_stations(), "one arrival list per station");
    let n = topo.n_stations();
    let frames = (duration / cfg.frame_s).floor() as u64;
    let quantum = bcfg.subchannel_bits();
    let per_frame = (bcfg.capacity_bps * cfg.frame_s / quantum as f64).floor() as u64;
    assert!(per_frame >= 1, "capacity must fit at least one subchannel per frame");

    let mut nodes: Vec<Node> = (0..n)
        .map(|k| Node {
            queue: VecDeque::new(),
            next_arrival: 0,
            outstanding: false,
            cw: bcfg.cw_min,
            defer: 0,
            armed: false,
            poll_until: 0,
            rng: ChaCha8Rng::seed_from_u64(derive_seed(seed, k as u64)),
        })
        .collect();
    let mut fifo: VecDeque<Request> = VecDeque::new();

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
        stage_wins: Vec::new(),
        queued_end_packets: 0,
        queued_end_bits: 0,
        wasted_bits: 0,
        attempts: vec![vec![0; 1]; n],
        wins: vec![vec![0; 1]; n],
        reuse_wins: vec![vec![0; 1]; n],
        short_duration_warning: frames < 100,
    };

    let mut slot_picks: Vec<Vec<usize>> = vec![Vec::new(); bcfg.contention_slots as usize];

    for frame in 0..frames {
        let t0 = frame as f64 * cfg.frame_s;
        let t_end = t0 + cfg.frame_s;

        for (k, node) in nodes.iter_mut().enumerate() {
            let list = &arrivals[k];
            while node.next_arrival < list.len() && list[node.next_arrival].time_s < t0 {
                let a = list[node.next_arrival];
                assert!(a.payload_bits > 0, "packets must carry at least one bit");
                node.queue.push_back((a.time_s, a.payload_bits));
                node.next_arrival += 1;
                m.generated_packets += 1;
            }
        }

        // Grant phase: serve the FIFO with this frame's subchannels.
        let mut budget = per_frame;
        while budget > 0 {
            let Some(req) = fifo.front_mut() else {
                break;
            };
            let head = req.packets.front_mut().expect("requests are never empty");
            let need = head.subchannels - req.head_filled;
            let take = need.min(budget);
            req.head_filled += take;
            budget -= take;
            if req.head_filled == head.subchannels {
                m.delay_sum_s[req.station] += t_end - head.arrival_s;
                m.delay_count[req.station] += 1;
                m.delivered_packets += 1;
                m.delivered_bits += head.bits;
                m.wasted_bits += head.subchannels * quantum - head.bits;
                req.packets.pop_front();
                req.head_filled = 0;
                if req.packets.is_empty() {
                    let station = req.station;
                    fifo.pop_front();
                    // A station served this frame piggybacks its next request
                    // on the granted burst: backlog that arrived since the
                    // last request re-enters the FIFO without contention.
                    // Contention is only for stations going idle -> active.
                    let node = &mut nodes[station];
                    if node.queue.is_empty() {
                        node.outstanding = false;
                        node.poll_until = frame + bcfg.poll_grace_frames as u64;
                    } else {
                        let packets = drain_queue(&mut node.queue, quantum);
                        fifo.push_back(Request {
                            station,
                            packets,
                            head_filled: 0,
                        });
                        m.reuse_wins[station][0] += 1;
                    }
                }
            }
        }

        // Request phase: stations with unrequested backlog contend for a
        // request slot; these requests join the FIFO for the next frame.
        for list in slot_picks.iter_mut() {
            list.clear();
        }
        for (k, node) in nodes.iter_mut().enumerate() {
            if node.outstanding || node.queue.is_empty() {
                continue;
            }
            if frame < node.poll_until {
                // Recently active station: its request rides a unicast poll
                // instead of a contention slot.
                let packets = drain_queue(&mut node.queue, quantum);
                fifo.push_back(Request {
                    station: k,
                    packets,
                    head_filled: 0,
                });
                node.outstanding = true;
                node.armed = false;
                m.reuse_wins[k][0] += 1;
                continue;
            }
            if !node.armed {
                // Fresh request: the window restarts at its minimum.
                node.cw = bcfg.cw_min;
                node.defer = node.rng.random_range(0..node.cw);
                node.armed = true;
            }
            if node.defer >= bcfg.contention_slots {
                node.defer -= bcfg.contention_slots;
                continue;
            }
            slot_picks[node.defer as usize].push(k);
            m.attempts[k][0] += 1;
        }
        for picks in slot_picks.iter() {
            match picks.as_slice() {
                [] => {}
                &[k] => {
                    let node = &mut nodes[k];
                    let packets = drain_queue(&mut node.queue, quantum);
                    fifo.push_back(Request {
                        station: k,
                        packets,
                        head_filled: 0,
                    });
                    node.outstanding = true;
                    node.armed = false;
                    m.wins[k][0] += 1;
                }
                many => {
                    for &k in many {
                        let node = &mut nodes[k];
                        m.collisions += 1;
                        node.cw = (node.cw * 2).min(bcfg.cw_max);
                        node.defer = node.rng.random_range(0..node.cw);
                    }
                }
            }
        }
    }

    for node in &nodes {
        m.queued_end_packets += node.queue.len() as u64;
        m.queued_end_bits += node.queue.iter().map(|&(_, b)| b).sum::<u64>();
    }
    for req in &fifo {
        m.queued_end_packets += req.packets.len() as u64;
        m.queued_end_bits += req.packets.iter().map(|p| p.bits).sum::<u64>();
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
