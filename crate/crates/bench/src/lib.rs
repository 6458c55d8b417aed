//! Sweep declaration, scheduling, and reporting around `hebbench-core`.
//!
//! The binary in this crate reads a TOML sweep description, fans the grid
//! cells out over a thread pool with per-cell derived seeds, and writes
//! plot-ready CSV files plus a manifest that echoes the configuration.
//! Everything except wall-clock times in the manifest is a pure function
//! of the configuration and the base seed.

pub mod config;
pub mod report;
pub mod runner;
pub mod seed;

pub use config::{Experiment, SweepConfig};
pub use runner::{run, RunOptions};
