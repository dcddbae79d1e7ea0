//! Static configuration: protocol timing, channel topology, traffic load and
//! baseline parameters, plus the flat `key = value` config-file format used
//! by the CLI.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("unknown config key `{key}`")]
    UnknownKey { key: String },
    #[error("config key `{key}`: {message}")]
    Value { key: String, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Protocol and frame-timing parameters shared by the model and the
/// simulator.
///
/// Backoff numbers are drawn from `[0..=backoff_max]`; one contention stage
/// occupies `backoff_max + 1 + preamble_slots` mini-slots of `slot_s` seconds
/// each inside the upstream subframe.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Largest backoff number a station may draw (window is `0..=backoff_max`).
    pub backoff_max: u32,
    /// Highest tie-break stage; an unresolved tie past this stage is a
    /// collision and everyone retries next frame.
    pub stage_max: u32,
    /// Mini-slot duration in seconds.
    pub slot_s: f64,
    /// Length of the speculative preamble in mini-slots.
    pub preamble_slots: u32,
    /// Full frame duration in seconds (upstream + downstream).
    pub frame_s: f64,
    /// Upstream subframe duration in seconds.
    pub upstream_s: f64,
    /// Downstream subframe duration in seconds.
    pub downstream_s: f64,
    /// Payload capacity of one channel's upstream subframe, in bits.
    pub channel_bits: u64,
    /// Independent bit-error probability on the air interface.
    pub bit_error: f64,
    /// Probability that a station's preamble correlation errs at one stage.
    pub corr_error: f64,
    /// Cell radius in km (documentation only; `slot_s` must already cover
    /// the round-trip propagation).
    pub distance_km: f64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        SystemConfig {
            backoff_max: 7,
            stage_max: 15,
            slot_s: 10e-6,
            preamble_slots: 5,
            frame_s: 0.005,
            upstream_s: 0.0025,
            downstream_s: 0.0025,
            channel_bits: 3360,
            bit_error: 0.0,
            corr_error: 0.0,
            distance_km: 1.0,
        }
    }
}

impl SystemConfig {
    /// Duration of one contention stage in seconds: the full backoff window
    /// plus the speculative preamble.
    pub fn stage_s(&self) -> f64 {
        (self.backoff_max as f64 + 1.0 + self.preamble_slots as f64) * self.slot_s
    }

    /// Mini-slots consumed by one contention stage.
    pub fn stage_slots(&self) -> u32 {
        self.backoff_max + 1 + self.preamble_slots
    }

    /// Upstream payload bit-rate of one channel while transmitting.
    pub fn channel_rate_bps(&self) -> f64 {
        self.channel_bits as f64 / self.upstream_s
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let err = |m: String| Err(ConfigError::Invalid(m));
        if self.backoff_max < 1 {
            return err("beta must be >= 1".into());
        }
        if !(self.backoff_max + 1).is_multiple_of(2) {
            return err(format!(
                "beta + 1 must be even so the post-backoff window [(beta+1)/2 ..= beta] \
                 is well formed (got beta = {})",
                self.backoff_max
            ));
        }
        if self.slot_s <= 0.0 || !self.slot_s.is_finite() {
            return err("epsilon_s must be positive".into());
        }
        if self.frame_s <= 0.0 || self.upstream_s <= 0.0 || self.downstream_s <= 0.0 {
            return err("frame durations must be positive".into());
        }
        if (self.upstream_s + self.downstream_s - self.frame_s).abs() > 1e-12 {
            return err(format!(
                "t_frame_s must equal t_up_s + t_down_s ({} != {} + {})",
                self.frame_s, self.upstream_s, self.downstream_s
            ));
        }
        if self.channel_bits == 0 {
            return err("sigma_bits must be positive".into());
        }
        for (name, p) in [("p_bit", self.bit_error), ("p_corr", self.corr_error)] {
            if !(0.0..=1.0).contains(&p) {
                return err(format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        // A full multi-stage resolution must always fit inside the upstream
        // subframe, otherwise contention could never complete.
        let worst = self.stage_s() * (self.stage_max as f64 + 1.0);
        if worst >= self.upstream_s {
            return err(format!(
                "(beta+1+preamble)*epsilon*(s_max+1) = {worst:.6} s does not fit in \
                 the upstream subframe ({} s)",
                self.upstream_s
            ));
        }
        Ok(())
    }
}

/// Which stations may use which channels, and how much traffic each offers.
///
/// `allowed[k]` is the ordered list of channel ids station `k` may contend
/// on; `lambda[k]` is its packet arrival rate in packets/second and
/// `payload_bits` the mean payload length used for load accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelTopology {
    pub n_channels: usize,
    pub allowed: Vec<Vec<usize>>,
    pub lambda: Vec<f64>,
    pub payload_bits: f64,
}

impl ChannelTopology {
    pub fn n_stations(&self) -> usize {
        self.allowed.len()
    }

    /// Block assignment: the channel space is split into
    /// `n_channels / per_station` groups of `per_station` channels and
    /// stations are dealt round-robin across the groups, so every group ends
    /// up with an (almost) equal share of the stations.
    pub fn grouped(
        n_stations: usize,
        n_channels: usize,
        per_station: usize,
        lambda: f64,
        payload_bits: f64,
    ) -> Result<Self, ConfigError> {
        if per_station == 0 || n_channels == 0 || per_station > n_channels {
            return Err(ConfigError::Invalid(format!(
                "need 1 <= channels_per_station ({per_station}) <= n_channels ({n_channels})"
            )));
        }
        if !n_channels.is_multiple_of(per_station) {
            return Err(ConfigError::Invalid(format!(
                "channels_per_station ({per_station}) must divide n_channels ({n_channels})"
            )));
        }
        let n_groups = n_channels / per_station;
        let allowed = (0..n_stations)
            .map(|k| {
                let g = k % n_groups;
                (g * per_station..(g + 1) * per_station).collect()
            })
            .collect();
        let topo = ChannelTopology {
            n_channels,
            allowed,
            lambda: vec![lambda; n_stations],
            payload_bits,
        };
        topo.validate()?;
        Ok(topo)
    }

    /// Aggregate offered load in bits/second (`sum_k lambda_k * payload`).
    pub fn offered_bps(&self) -> f64 {
        self.lambda.iter().sum::<f64>() * self.payload_bits
    }

    /// Same topology with every station's arrival rate scaled so the
    /// aggregate offered load equals `offered_bps`.
    pub fn with_offered_bps(&self, offered_bps: f64) -> Self {
        let n = self.n_stations() as f64;
        let per_station = offered_bps / (n * self.payload_bits);
        let mut t = self.clone();
        t.lambda = vec![per_station; self.n_stations()];
        t
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let err = |m: String| Err(ConfigError::Invalid(m));
        if self.allowed.is_empty() {
            return err("topology needs at least one station".into());
        }
        if self.lambda.len() != self.allowed.len() {
            return err("lambda and allowed-channel lists disagree on station count".into());
        }
        if self.payload_bits <= 0.0 || !self.payload_bits.is_finite() {
            return err("payload_bits must be positive".into());
        }
        for (k, chans) in self.allowed.iter().enumerate() {
            if chans.is_empty() {
                return err(format!("station {k} has no allowed channels"));
            }
            let mut prev: Option<usize> = None;
            for &c in chans {
                if c >= self.n_channels {
                    return err(format!(
                        "station {k} references channel {c} outside 0..{}",
                        self.n_channels
                    ));
                }
                if prev.is_some_and(|p| p >= c) {
                    return err(format!(
                        "station {k}: allowed channels must be strictly increasing"
                    ));
                }
                prev = Some(c);
            }
        }
        for (k, &l) in self.lambda.iter().enumerate() {
            if l < 0.0 || !l.is_finite() {
                return err(format!("station {k} has invalid lambda {l}"));
            }
        }
        Ok(())
    }
}

/// Parameters of the request/grant reference system the new MAC is compared
/// against.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineConfig {
    /// Bandwidth-request contention slots per frame.
    pub contention_slots: u32,
    /// Initial binary-exponential-backoff window (contention slots).
    pub cw_min: u32,
    /// Backoff window cap.
    pub cw_max: u32,
    /// Grant quantum: one whole subchannel in bytes.
    pub subchannel_bytes: u32,
    /// Upstream capacity in bits/second.
    pub capacity_bps: f64,
    /// After a station's backlog fully drains, the base station keeps polling
    /// it for this many frames; packets arriving within the window are
    /// requested without contention, as in standards that unicast-poll
    /// recently active stations. 0 disables polling.
    pub poll_grace_frames: u32,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        BaselineConfig {
            contention_slots: 16,
            cw_min: 8,
            // 64 frames' worth of slot opportunities: wide enough that a
            // cold-start storm of ~1000 stations still resolves.
            cw_max: 1024,
            subchannel_bytes: 420,
            capacity_bps: 23.5e6,
            poll_grace_frames: 40,
        }
    }
}

impl BaselineConfig {
    pub fn subchannel_bits(&self) -> u64 {
        self.subchannel_bytes as u64 * 8
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.contention_slots == 0 {
            return Err(ConfigError::Invalid("contention_slots must be >= 1".into()));
        }
        if self.cw_min == 0 || self.cw_max < self.cw_min {
            return Err(ConfigError::Invalid(format!(
                "need 1 <= cw_min <= cw_max, got {}..{}",
                self.cw_min, self.cw_max
            )));
        }
        if self.subchannel_bytes == 0 {
            return Err(ConfigError::Invalid("subchannel_bytes must be >= 1".into()));
        }
        if self.capacity_bps.is_nan() || self.capacity_bps <= 0.0 {
            return Err(ConfigError::Invalid("capacity_bps must be positive".into()));
        }
        Ok(())
    }
}

/// Traffic classes with the payload sizes of the smart-grid device types the
/// system is dimensioned for, plus `Fixed` for experiments that pin the
/// payload explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrafficClass {
    /// High/low-voltage measurement node: 500-byte reports.
    HvaLv,
    /// Substation aggregation point: 5000-byte reports.
    Substation,
    /// Distributed energy resource: 224-byte reports.
    Der,
    /// Remote switch/recloser: 100-byte reports.
    Switch,
    /// Payload set explicitly via `payload_bits`.
    Fixed,
}

impl TrafficClass {
    pub const ALL: [(&'static str, TrafficClass); 5] = [
        ("hvalv", TrafficClass::HvaLv),
        ("substation", TrafficClass::Substation),
        ("der", TrafficClass::Der),
        ("switch", TrafficClass::Switch),
        ("fixed", TrafficClass::Fixed),
    ];

    pub fn parse(s: &str) -> Option<TrafficClass> {
        Self::ALL
            .iter()
            .find(|(name, _)| *name == s)
            .map(|&(_, c)| c)
    }

    pub fn name(self) -> &'static str {
        Self::ALL.iter().find(|(_, c)| *c == self).unwrap().0
    }

    /// Mean payload in bits for the class, or `None` for `Fixed`.
    pub fn payload_bits(self) -> Option<f64> {
        match self {
            TrafficClass::HvaLv => Some(500.0 * 8.0),
            TrafficClass::Substation => Some(5000.0 * 8.0),
            TrafficClass::Der => Some(224.0 * 8.0),
            TrafficClass::Switch => Some(100.0 * 8.0),
            TrafficClass::Fixed => None,
        }
    }
}

/// How the offered load is specified in a config file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LoadSpec {
    /// Aggregate bits/second split evenly over the stations.
    OfferedBps(f64),
    /// Packets/second per station.
    PerStation(f64),
}

/// Everything a run needs: protocol timing, station population, traffic and
/// baseline parameters. Produced from a flat `key = value` file.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub system: SystemConfig,
    pub n_stations: usize,
    pub n_channels: usize,
    pub channels_per_station: usize,
    pub traffic_class: TrafficClass,
    pub payload_bits: f64,
    pub load: LoadSpec,
    pub baseline: BaselineConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            system: SystemConfig::default(),
            n_stations: 10,
            n_channels: 7,
            channels_per_station: 7,
            traffic_class: TrafficClass::Fixed,
            payload_bits: 2400.0,
            load: LoadSpec::OfferedBps(1e6),
            baseline: BaselineConfig::default(),
        }
    }
}

impl Config {
    pub fn load(path: impl AsRef<Path>) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path)?;
        Config::parse(&text)
    }

    /// Parse the flat config format: one `key = value` per line, `#` starts
    /// a comment, unknown keys are rejected with the offending name.
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let mut seen: BTreeMap<String, String> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if stripped.is_empty() {
                continue;
            }
            let Some((key, value)) = stripped.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line,
                    text: stripped.to_string(),
                });
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if seen.insert(key.clone(), value).is_some() {
                return Err(ConfigError::Duplicate { line, key });
            }
        }
        Config::from_map(seen)
    }

    fn from_map(mut map: BTreeMap<String, String>) -> Result<Config, ConfigError> {
        fn take<T: std::str::FromStr>(
            map: &mut BTreeMap<String, String>,
            key: &str,
            default: T,
        ) -> Result<T, ConfigError> {
            match map.remove(key) {
                None => Ok(default),
                Some(v) => v.parse().map_err(|_| ConfigError::Value {
                    key: key.to_string(),
                    message: format!("cannot parse `{v}`"),
                }),
            }
        }

        let d = Config::default();
        let system = SystemConfig {
            backoff_max: take(&mut map, "beta", d.system.backoff_max)?,
            stage_max: take(&mut map, "s_max", d.system.stage_max)?,
            slot_s: take(&mut map, "epsilon_s", d.system.slot_s)?,
            preamble_slots: take(&mut map, "preamble_slots", d.system.preamble_slots)?,
            frame_s: take(&mut map, "t_frame_s", d.system.frame_s)?,
            upstream_s: take(&mut map, "t_up_s", d.system.upstream_s)?,
            downstream_s: take(&mut map, "t_down_s", d.system.downstream_s)?,
            channel_bits: take(&mut map, "sigma_bits", d.system.channel_bits)?,
            bit_error: take(&mut map, "p_bit", d.system.bit_error)?,
            corr_error: take(&mut map, "p_corr", d.system.corr_error)?,
            distance_km: take(&mut map, "distance_km", d.system.distance_km)?,
        };

        let n_stations = take(&mut map, "n_stations", d.n_stations)?;
        let n_channels = take(&mut map, "n_channels", d.n_channels)?;
        let channels_per_station =
            take(&mut map, "channels_per_station", d.channels_per_station)?;

        let traffic_class = match map.remove("profile") {
            None => d.traffic_class,
            Some(v) => TrafficClass::parse(&v).ok_or_else(|| ConfigError::Value {
                key: "profile".into(),
                message: format!(
                    "unknown profile `{v}`; expected one of {}",
                    TrafficClass::ALL
                        .iter()
                        .map(|(n, _)| *n)
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
            })?,
        };
        let payload_bits = match traffic_class.payload_bits() {
            Some(bits) => {
                if map.remove("payload_bits").is_some() {
                    return Err(ConfigError::Value {
                        key: "payload_bits".into(),
                        message: format!(
                            "profile `{}` fixes the payload; drop payload_bits or use profile = fixed",
                            traffic_class.name()
                        ),
                    });
                }
                bits
            }
            None => take(&mut map, "payload_bits", d.payload_bits)?,
        };

        let offered = map.remove("offered_bps");
        let per_station = map.remove("lambda_per_station");
        let load = match (offered, per_station) {
            (Some(_), Some(_)) => {
                return Err(ConfigError::Value {
                    key: "offered_bps".into(),
                    message: "offered_bps and lambda_per_station are mutually exclusive".into(),
                })
            }
            (Some(v), None) => LoadSpec::OfferedBps(v.parse().map_err(|_| ConfigError::Value {
                key: "offered_bps".into(),
                message: format!("cannot parse `{v}`"),
            })?),
            (None, Some(v)) => LoadSpec::PerStation(v.parse().map_err(|_| ConfigError::Value {
                key: "lambda_per_station".into(),
                message: format!("cannot parse `{v}`"),
            })?),
            (None, None) => d.load,
        };

        let baseline = BaselineConfig {
            contention_slots: take(&mut map, "contention_slots", d.baseline.contention_slots)?,
            cw_min: take(&mut map, "cw_min", d.baseline.cw_min)?,
            cw_max: take(&mut map, "cw_max", d.baseline.cw_max)?,
            subchannel_bytes: take(&mut map, "subchannel_bytes", d.baseline.subchannel_bytes)?,
            capacity_bps: take(&mut map, "capacity_bps", d.baseline.capacity_bps)?,
            poll_grace_frames: take(&mut map, "poll_grace_frames", d.baseline.poll_grace_frames)?,
        };

        if let Some(key) = map.into_keys().next() {
            return Err(ConfigError::UnknownKey { key });
        }

        let cfg = Config {
            system,
            n_stations,
            n_channels,
            channels_per_station,
            traffic_class,
            payload_bits,
            load,
            baseline,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.system.validate()?;
        self.baseline.validate()?;
        if self.n_stations == 0 {
            return Err(ConfigError::Invalid("n_stations must be >= 1".into()));
        }
        // Topology construction re-checks channel consistency.
        self.topology().map(|_| ())
    }

    /// Per-station packet arrival rate implied by the load specification.
    pub fn lambda_per_station(&self) -> f64 {
        match self.load {
            LoadSpec::PerStation(l) => l,
            LoadSpec::OfferedBps(bps) => bps / (self.n_stations as f64 * self.payload_bits),
        }
    }

    /// Build the station/channel topology for this configuration.
    pub fn topology(&self) -> Result<ChannelTopology, ConfigError> {
        ChannelTopology::grouped(
            self.n_stations,
            self.n_channels,
            self.channels_per_station,
            self.lambda_per_station(),
            self.payload_bits,
        )
    }

    /// Render the effective configuration back in the config-file syntax.
    pub fn echo(&self) -> String {
        let s = &self.system;
        let b = &self.baseline;
        let mut out = String::new();
        let _ = writeln!(out, "beta = {}", s.backoff_max);
        let _ = writeln!(out, "s_max = {}", s.stage_max);
        let _ = writeln!(out, "epsilon_s = {}", s.slot_s);
        let _ = writeln!(out, "preamble_slots = {}", s.preamble_slots);
        let _ = writeln!(out, "t_frame_s = {}", s.frame_s);
        let _ = writeln!(out, "t_up_s = {}", s.upstream_s);
        let _ = writeln!(out, "t_down_s = {}", s.downstream_s);
        let _ = writeln!(out, "sigma_bits = {}", s.channel_bits);
        let _ = writeln!(out, "p_bit = {}", s.bit_error);
        let _ = writeln!(out, "p_corr = {}", s.corr_error);
        let _ = writeln!(out, "distance_km = {}", s.distance_km);
        let _ = writeln!(out, "n_stations = {}", self.n_stations);
        let _ = writeln!(out, "n_channels = {}", self.n_channels);
        let _ = writeln!(out, "channels_per_station = {}", self.channels_per_station);
        let _ = writeln!(out, "profile = {}", self.traffic_class.name());
        if self.traffic_class == TrafficClass::Fixed {
            let _ = writeln!(out, "payload_bits = {}", self.payload_bits);
        }
        match self.load {
            LoadSpec::OfferedBps(v) => {
                let _ = writeln!(out, "offered_bps = {v}");
            }
            LoadSpec::PerStation(v) => {
                let _ = writeln!(out, "lambda_per_station = {v}");
            }
        }
        let _ = writeln!(out, "contention_slots = {}", b.contention_slots);
        let _ = writeln!(out, "cw_min = {}", b.cw_min);
        let _ = writeln!(out, "cw_max = {}", b.cw_max);
        let _ = writeln!(out, "subchannel_bytes = {}", b.subchannel_bytes);
        let _ = writeln!(out, "capacity_bps = {}", b.capacity_bps);
        let _ = writeln!(out, "poll_grace_frames = {}", b.poll_grace_frames);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        Config::default().validate().unwrap();
    }

    #[test]
    fn parse_round_trips_through_echo() {
        let cfg = Config::default();
        let reparsed = Config::parse(&cfg.echo()).unwrap();
        assert_eq!(cfg, reparsed);
    }

    #[test]
    fn parse_accepts_comments_and_blank_lines() {
        let cfg = Config::parse(
            "# scenario\nbeta = 3\n\nn_stations = 4   # four stations\nn_channels = 2\nchannels_per_station = 2\n",
        )
        .unwrap();
        assert_eq!(cfg.system.backoff_max, 3);
        assert_eq!(cfg.n_stations, 4);
    }

    #[test]
    fn parse_rejects_unknown_key() {
        let err = Config::parse("betta = 3\n").unwrap_err();
        assert!(matches!(err, ConfigError::UnknownKey { key } if key == "betta"));
    }

    #[test]
    fn parse_rejects_bad_value_with_key_name() {
        let err = Config::parse("beta = seven\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("beta"), "message should name the key: {msg}");
    }

    #[test]
    fn parse_rejects_even_beta() {
        let err = Config::parse("beta = 4\n").unwrap_err();
        assert!(err.to_string().contains("post-backoff"));
    }

    #[test]
    fn parse_rejects_conflicting_load_keys() {
        let err = Config::parse("offered_bps = 1e6\nlambda_per_station = 10\n").unwrap_err();
        assert!(err.to_string().contains("mutually exclusive"));
    }

    #[test]
    fn contention_must_fit_in_subframe() {
        // 16 stages of (7+1+5) slots at 13 us each exceed a 2.5 ms subframe.
        let err = Config::parse("epsilon_s = 13e-6\n").unwrap_err();
        assert!(err.to_string().contains("does not fit"));
    }

    #[test]
    fn grouped_topology_splits_channels_into_blocks() {
        let t = ChannelTopology::grouped(315, 35, 7, 10.0, 2400.0).unwrap();
        assert_eq!(t.n_stations(), 315);
        // Station 0 is in group 0, station 1 in group 1, ...
        assert_eq!(t.allowed[0], vec![0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(t.allowed[1], vec![7, 8, 9, 10, 11, 12, 13]);
        // 5 groups of 63 stations each.
        for g in 0..5 {
            let members = (0..315).filter(|k| k % 5 == g).count();
            assert_eq!(members, 63);
        }
    }

    #[test]
    fn offered_load_round_trips() {
        let t = ChannelTopology::grouped(10, 7, 7, 0.0, 2400.0)
            .unwrap()
            .with_offered_bps(1e6);
        assert!((t.offered_bps() - 1e6).abs() < 1e-6);
    }

    #[test]
    fn traffic_classes_have_expected_payloads() {
        assert_eq!(TrafficClass::HvaLv.payload_bits(), Some(4000.0));
        assert_eq!(TrafficClass::Substation.payload_bits(), Some(40000.0));
        assert_eq!(TrafficClass::Der.payload_bits(), Some(1792.0));
        assert_eq!(TrafficClass::Switch.payload_bits(), Some(800.0));
        assert_eq!(TrafficClass::Fixed.payload_bits(), None);
    }
}
