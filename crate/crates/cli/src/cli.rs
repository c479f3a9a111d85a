//! Command-line surface.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{EngineName, KindName, ModelName, RunConfig, SchemeName, SelectionName};
use crate::presets;

#[derive(Debug, Parser)]
#[command(name = "quilt", version, about = "Pairwise entanglement in qubit collision models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scheme (analytic engine by default) and export its tangles.
    Simulate(RunArgs),
    /// Run a scheme on the state-vector oracle.
    Oracle(RunArgs),
    /// Check the analytic engine against the oracle after every event;
    /// exits 1 if any tangle differs by more than 1e-9.
    Compare(RunArgs),
    /// Emit a uniform-quilt schedule as an event file, optionally with the
    /// gate list that realizes it.
    Prep(PrepArgs),
    /// Bath temperature at which one qubit in `odds` is excited.
    Temperature(TemperatureArgs),
    /// Render a saved tangle CSV as a PPM heat map of log2(C^2).
    Heatmap(HeatmapArgs),
    /// Re-run the scheme recorded in a manifest.
    Replay(ReplayArgs),
    /// List the named reproduction runs.
    Presets,
}

/// Scheme and run selection. A config file or a preset supplies defaults;
/// explicit flags override them.
#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// TOML run config.
    #[arg(long, conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Named reproduction run (see `quilt presets`).
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeName>,
    /// Event file; implies `--scheme file`.
    #[arg(long)]
    pub events: Option<PathBuf>,
    /// Number of qubits.
    #[arg(long)]
    pub n: Option<usize>,
    /// Collision duration in radians [default: pi/4].
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Qubit frequency omega, shared by all qubits [default: 1].
    #[arg(long)]
    pub omega: Option<f64>,
    /// Interaction strength Omega [default: 1].
    #[arg(long)]
    pub coupling: Option<f64>,
    #[arg(long, value_enum)]
    pub kind: Option<KindName>,
    /// Phase of the xy coupling, radians.
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Comma-separated qubits starting in |1> [default: 0].
    #[arg(long, value_delimiter = ',')]
    pub excited: Option<Vec<usize>>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Family for `--scheme random-model`.
    #[arg(long, value_enum)]
    pub model: Option<ModelName>,
    /// Number of random old-pair collisions for `--scheme thermal`.
    #[arg(long)]
    pub n_events: Option<u64>,
    /// Durations of random old-pair collisions are uniform in [0, t_max).
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long, value_enum)]
    pub selection: Option<SelectionName>,
    /// Engine for `simulate`.
    #[arg(long, value_enum)]
    pub engine: Option<EngineName>,
    /// Comma-separated event counts after which to record the tangles.
    #[arg(long, value_delimiter = ',')]
    pub snapshots: Option<Vec<u64>>,
    /// Oracle qubit cap; overrides QUILT_ORACLE_CAP.
    #[arg(long)]
    pub cap: Option<usize>,
    /// Heat-map pixels per pair along each axis.
    #[arg(long)]
    pub scale: Option<u32>,
    /// Output directory for CSV, heat maps and manifest.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    /// Merges config file or preset, then flags. `forced` pins the engine
    /// for the `oracle` and `compare` subcommands.
    pub fn resolve(&self, forced: Option<EngineName>) -> Result<RunConfig> {
        let mut c = match (&self.config, &self.preset) {
            (Some(path), _) => RunConfig::load(path)?,
            (None, Some(name)) => {
                presets::find(name).with_context(|| format!("unknown preset {name:?}; see `quilt presets`"))?.config
            }
            (None, None) => RunConfig::default(),
        };
        if let Some(v) = self.scheme {
            c.scheme = v;
        }
        if let Some(v) = &self.events {
            c.events_file = Some(v.clone());
            if self.scheme.is_none() {
                c.scheme = SchemeName::File;
            }
        }
        macro_rules! take {
            ($($field:ident => $target:ident),*) => {$(
                if let Some(v) = &self.$field {
                    c.$target = v.clone().into();
                }
            )*};
        }
        take!(
            n => n, t => t, omega => omega, coupling => coupling, kind => kind, theta => theta,
            excited => excited, seed => seed, model => model, n_events => n_events, t_max => t_max,
            selection => selection, snapshots => snapshots, cap => cap, scale => heatmap_scale
        );
        match (forced, self.engine) {
            (Some(f), Some(e)) if f != e => bail!("--engine {e:?} conflicts with this subcommand"),
            (Some(f), _) => c.engine = f,
            (None, Some(e)) => c.engine = e,
            (None, None) => {}
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PrepSchedule {
    /// Chain with tuned durations arcsin(sqrt((n-k)/(n-k+1)))/Omega.
    Uniform,
    /// Doubling schedule of pi/(4 Omega) collisions; n a power of two.
    Binary,
}

#[derive(Debug, Args)]
pub struct PrepArgs {
    #[arg(long, value_enum)]
    pub schedule: PrepSchedule,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub coupling: f64,
    /// Event file to write; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the two-qubit unitaries, one gate per line.
    #[arg(long)]
    pub gates: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TemperatureArgs {
    /// Qubit frequency f in GHz (omega = 2 pi f).
    #[arg(long)]
    pub freq_ghz: f64,
    /// Comma-separated odds against excitation, each > 2.
    #[arg(long, value_delimiter = ',', required = true)]
    pub odds: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct HeatmapArgs {
    /// Tangle CSV written by `simulate`.
    #[arg(long)]
    pub csv: PathBuf,
    /// PPM file to write.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub scale: u32,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Output directory for the regenerated artifacts.
    #[arg(long)]
    pub out: PathBuf,
    /// Exit 1 unless every regenerated CSV matches the recorded one byte for
    /// byte.
    #[arg(long)]
    pub check: bool,
}
