//! Command-line driver: run configs, event files, tangle CSVs, PPM heat maps
//! and replayable JSON manifests.

pub mod cli;
pub mod commands;
pub mod config;
pub mod events;
pub mod export;
pub mod manifest;
pub mod presets;
