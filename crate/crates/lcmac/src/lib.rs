//! Performance model and slot-accurate simulator for a multi-channel
//! contention-resolution MAC with speculative preambles, aimed at dense
//! populations of low-rate uplink stations.
//!
//! Stations contend inside each upstream subframe by drawing backoff numbers
//! on their assigned channel; the smallest draw wins, ties are broken over
//! successive stages, and a short speculative preamble per stage lets losers
//! detect the winner early. Leftover subframe time is handed to the losing
//! stations of the winning stage via a channel-reuse preamble.
//!
//! The crate provides:
//!
//! * [`model`] — a fixed-point analytical model yielding per-station access
//!   probabilities, success probabilities and queueing delays;
//! * [`sim`] — a discrete-event simulator of the same protocol;
//! * [`baseline`] — a request/grant reference MAC for comparison;
//! * [`traffic`] — Poisson arrival generation and trace import/export;
//! * [`experiment`] — load sweeps, model-vs-simulation verification and
//!   baseline comparisons with CSV output;
//! * [`cli`] — the `lcmac` command-line front end.

pub mod baseline;
pub mod cli;
pub mod config;
pub mod experiment;
pub mod model;
pub mod sim;
pub mod traffic;

pub use config::{
    BaselineConfig, ChannelTopology, Config, ConfigError, LoadSpec, SystemConfig, TrafficClass,
};
