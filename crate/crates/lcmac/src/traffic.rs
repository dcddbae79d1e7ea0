//! Station traffic: Poisson arrivals with payload lengths from smart-grid
//! device profiles, plus trace import/export for trace-driven runs.

use std::io::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Uniform};
use thiserror::Error;

use crate::config::TrafficClass;

/// One packet arrival: when it entered the station's queue and how big it is.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arrival {
    pub time_s: f64,
    pub payload_bits: u64,
}

/// Payload-length distribution of a profile.
#[derive(Debug, Clone, PartialEq)]
pub enum LengthDist {
    /// Every packet carries exactly this many bits.
    Constant(u64),
    /// Lengths drawn uniformly from an observed sample set.
    Empirical(Vec<u64>),
}

/// Arrival process of one station: rate plus payload-length distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct TrafficProfile {
    pub class: TrafficClass,
    /// Packet arrivals per second.
    pub lambda: f64,
    pub length: LengthDist,
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("cannot access trace file: {0}")]
    Io(#[from] std::io::Error),
    #[error("trace line {line}: {message}")]
    Line { line: usize, message: String },
}

impl TrafficProfile {
    /// Profile for a named device class at the given arrival rate. `Fixed`
    /// requires an explicit payload; use [`TrafficProfile::fixed`] for it.
    pub fn for_class(class: TrafficClass, lambda: f64) -> TrafficProfile {
        let bits = class
            .payload_bits()
            .expect("fixed profiles need an explicit payload; use TrafficProfile::fixed");
        TrafficProfile {
            class,
            lambda,
            length: LengthDist::Constant(bits as u64),
        }
    }

    /// Profile with a caller-chosen constant payload.
    pub fn fixed(payload_bits: u64, lambda: f64) -> TrafficProfile {
        assert!(payload_bits > 0, "payload must be at least one bit");
        TrafficProfile {
            class: TrafficClass::Fixed,
            lambda,
            length: LengthDist::Constant(payload_bits),
        }
    }

    /// Profile resolved from a class name, with the valid names listed in
    /// the error. `fixed` is rejected here because it carries no payload.
    pub fn named(name: &str, lambda: f64) -> Result<TrafficProfile, String> {
        match TrafficClass::parse(name) {
            Some(TrafficClass::Fixed) | None => Err(format!(
                "unknown traffic class `{name}`; expected one of hvalv, substation, der, switch \
                 (or construct a fixed profile with an explicit payload)"
            )),
            Some(class) => Ok(TrafficProfile::for_class(class, lambda)),
        }
    }

    /// Mean payload length in bits.
    pub fn mean_payload_bits(&self) -> f64 {
        match &self.length {
            LengthDist::Constant(bits) => *bits as f64,
            LengthDist::Empirical(samples) => {
                samples.iter().map(|&b| b as f64).sum::<f64>() / samples.len() as f64
            }
        }
    }
}

/// Generate the station's arrivals over `[0, duration)`: exponential
/// inter-arrival times at the profile rate, payloads from its length
/// distribution. Deterministic per seed; an empty list for `lambda = 0`.
pub fn generate_arrivals(profile: &TrafficProfile, duration: f64, seed: u64) -> Vec<Arrival> {
    assert!(duration > 0.0, "duration must be positive");
    if profile.lambda <= 0.0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let exp = Exp::new(profile.lambda).expect("positive rate");
    let picker = match &profile.length {
        LengthDist::Constant(_) => None,
        LengthDist::Empirical(samples) => {
            assert!(!samples.is_empty(), "empirical length set must be nonempty");
            Some(Uniform::new(0, samples.len()).expect("nonempty range"))
        }
    };
    let mut arrivals = Vec::new();
    let mut t = 0.0;
    loop {
        t += exp.sample(&mut rng);
        if t >= duration {
            return arrivals;
        }
        let payload_bits = match (&profile.length, &picker) {
            (LengthDist::Constant(bits), _) => *bits,
            (LengthDist::Empirical(samples), Some(u)) => samples[u.sample(&mut rng)],
            _ => unreachable!(),
        };
        arrivals.push(Arrival {
            time_s: t,
            payload_bits,
        });
    }
}

/// Read a trace of `arrival_seconds,payload_bits` lines.
pub fn load_trace(path: &Path) -> Result<Vec<Arrival>, TraceError> {
    let text = std::fs::read_to_string(path)?;
    let mut arrivals = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let (t, bits) = trimmed.split_once(',').ok_or_else(|| TraceError::Line {
            line,
            message: format!("expected `arrival_seconds,payload_bits`, got `{trimmed}`"),
        })?;
        let time_s: f64 = t.trim().parse().map_err(|_| TraceError::Line {
            line,
            message: format!("bad arrival time `{t}`"),
        })?;
        let payload_bits: u64 = bits.trim().parse().map_err(|_| TraceError::Line {
            line,
            message: format!("bad payload length `{bits}`"),
        })?;
        if !time_s.is_finite() || time_s < 0.0 {
            return Err(TraceError::Line {
                line,
                message: format!("arrival time must be finite and non-negative, got {time_s}"),
            });
        }
        if payload_bits == 0 {
            return Err(TraceError::Line {
                line,
                message: "payload must be at least one bit".into(),
            });
        }
        arrivals.push(Arrival {
            time_s,
            payload_bits,
        });
    }
    Ok(arrivals)
}

/// Write a trace in the format [`load_trace`] reads. Float formatting uses
/// the shortest exact representation, so a round trip reproduces the list
/// bit for bit.
pub fn export_trace(arrivals: &[Arrival], path: &Path) -> Result<(), TraceError> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    for a in arrivals {
        writeln!(out, "{},{}", a.time_s, a.payload_bits)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_payloads_match_profiles() {
        assert_eq!(
            TrafficProfile::for_class(TrafficClass::HvaLv, 1.0).mean_payload_bits(),
            4000.0
        );
        assert_eq!(
            TrafficProfile::for_class(TrafficClass::Switch, 1.0).mean_payload_bits(),
            800.0
        );
        assert_eq!(TrafficProfile::fixed(2400, 1.0).mean_payload_bits(), 2400.0);
    }

    #[test]
    fn unknown_class_lists_valid_names() {
        let err = TrafficProfile::named("meter", 1.0).unwrap_err();
        assert!(err.contains("hvalv") && err.contains("switch"), "{err}");
    }

    #[test]
    fn zero_rate_generates_nothing() {
        let p = TrafficProfile::fixed(2400, 0.0);
        assert!(generate_arrivals(&p, 100.0, 7).is_empty());
    }

    #[test]
    fn arrival_count_tracks_rate() {
        // lambda * duration = 10_000; the count must land within 3 sigma.
        let p = TrafficProfile::fixed(2400, 100.0);
        let arrivals = generate_arrivals(&p, 100.0, 42);
        let n = arrivals.len() as f64;
        assert!((n - 10_000.0).abs() < 300.0, "count {n}");
        assert!(arrivals.windows(2).all(|w| w[0].time_s <= w[1].time_s));
        assert!(arrivals.iter().all(|a| a.payload_bits == 2400));
    }

    #[test]
    fn long_run_rate_and_mean_converge() {
        let p = TrafficProfile {
            class: TrafficClass::Fixed,
            lambda: 2000.0,
            length: LengthDist::Empirical(vec![800, 1600, 4000]),
        };
        let duration = 50.0;
        let arrivals = generate_arrivals(&p, duration, 3);
        let rate = arrivals.len() as f64 / duration;
        assert!((rate - 2000.0).abs() / 2000.0 < 0.02, "rate {rate}");
        let mean = arrivals.iter().map(|a| a.payload_bits as f64).sum::<f64>()
            / arrivals.len() as f64;
        let expect = p.mean_payload_bits();
        assert!((mean - expect).abs() / expect < 0.02, "mean {mean}");
    }

    #[test]
    fn generation_is_deterministic_per_seed() {
        let p = TrafficProfile::for_class(TrafficClass::Der, 50.0);
        let a = generate_arrivals(&p, 10.0, 9);
        let b = generate_arrivals(&p, 10.0, 9);
        let c = generate_arrivals(&p, 10.0, 10);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn trace_round_trip_is_lossless() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trace.csv");
        let p = TrafficProfile::fixed(4000, 200.0);
        let arrivals = generate_arrivals(&p, 5.0, 11);
        assert!(arrivals.len() > 500);
        export_trace(&arrivals, &path).unwrap();
        let loaded = load_trace(&path).unwrap();
        assert_eq!(arrivals, loaded);
    }

    #[test]
    fn empty_trace_loads_empty() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        std::fs::write(&path, "").unwrap();
        assert!(load_trace(&path).unwrap().is_empty());
    }

    #[test]
    fn single_record_parses() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("one.csv");
        std::fs::write(&path, "0.001,4000\n").unwrap();
        let arrivals = load_trace(&path).unwrap();
        assert_eq!(
            arrivals,
            vec![Arrival {
                time_s: 0.001,
                payload_bits: 4000
            }]
        );
    }

    #[test]
    fn malformed_line_reports_its_number() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "0.001,4000\nnot-a-record\n").unwrap();
        let err = load_trace(&path).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }
}
