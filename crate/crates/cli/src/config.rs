//! Run configuration: flat TOML with an explicit schema version.

use std::f64::consts::FRAC_PI_4;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use quilt_core::oracle::default_cap;
use quilt_core::qstate::HamiltonianKind;
use quilt_core::scheme::{
    build_binary_tree, build_random_model, build_thermalization, build_topology, build_uniform_quilt, Model,
    PairSelection, Scheme, Topology,
};
use quilt_core::simulate::EngineChoice;
use serde::{Deserialize, Serialize};

use crate::events::read_event_file;

pub const SCHEMA_VERSION: u32 = 1;

/// Named scheme builders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeName {
    /// Qubit i collides with qubit i−1.
    Chain,
    /// Qubit i collides with qubit 0.
    Star,
    /// Qubit i collides with a random earlier qubit.
    Random,
    /// Chain with durations that leave every pair at τ = 4/n².
    Uniform,
    /// Doubling schedule of π/(4Ω) collisions; n must be a power of two.
    Binary,
    /// Random old-pair collisions (W-like engine); see --n-events.
    Thermal,
    /// Random scheme of one solvable family; see --model.
    RandomModel,
    /// Explicit event list from --events.
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum KindName {
    /// Excitation exchange.
    Ee,
    /// xy coupling with phase --theta.
    Xy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum TopologyName {
    Chain,
    Star,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModelName {
    Xy,
    MixedX,
    ExcitedBath,
    GroundBath,
    Superposed,
}

impl From<ModelName> for Model {
    fn from(m: ModelName) -> Self {
        match m {
            ModelName::Xy => Model::Xy,
            ModelName::MixedX => Model::MixedX,
            ModelName::ExcitedBath => Model::ExcitedBath,
            ModelName::GroundBath => Model::GroundBath,
            ModelName::Superposed => Model::Superposed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionName {
    Uniform,
    WithFirst,
}

impl From<SelectionName> for PairSelection {
    fn from(s: SelectionName) -> Self {
        match s {
            SelectionName::Uniform => PairSelection::Uniform,
            SelectionName::WithFirst => PairSelection::WithFirst,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum EngineName {
    Analytic,
    Oracle,
    /// Analytic output, checked against the oracle after every event.
    Compare,
}

/// Everything needed to build and run one scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub scheme: SchemeName,
    /// Register size; for `file` schemes the event file may supply it.
    pub n: Option<usize>,
    /// Collision duration in radians of `Ωt`.
    pub t: f64,
    pub coupling: f64,
    /// Qubit frequency, shared by all qubits.
    pub omega: f64,
    pub kind: KindName,
    pub theta: f64,
    /// Qubits starting in `|1⟩`; builders default to qubit 0.
    pub excited: Option<Vec<usize>>,
    pub seed: u64,
    pub model: ModelName,
    pub n_events: u64,
    pub t_max: f64,
    pub selection: SelectionName,
    pub events_file: Option<PathBuf>,
    pub engine: EngineName,
    /// Record the tangles after this many events.
    pub snapshots: Vec<u64>,
    /// Oracle qubit cap; unset means the environment override or 14.
    pub cap: Option<usize>,
    /// Heat-map pixels per pair along each axis.
    pub heatmap_scale: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            scheme: SchemeName::Chain,
            n: None,
            t: FRAC_PI_4,
            coupling: 1.0,
            omega: 1.0,
            kind: KindName::Ee,
            theta: 0.0,
            excited: None,
            seed: 0,
            model: ModelName::GroundBath,
            n_events: 1000,
            t_max: 1.0,
            selection: SelectionName::Uniform,
            events_file: None,
            engine: EngineName::Analytic,
            snapshots: Vec::new(),
            cap: None,
            heatmap_scale: 1,
        }
    }
}

impl RunConfig {
    /// Reads a TOML config. Relative event-file paths resolve against the
    /// config's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut config = Self::from_toml(&text).with_context(|| format!("parsing {}", path.display()))?;
        if let (Some(file), Some(dir)) = (&config.events_file, path.parent()) {
            if file.is_relative() {
                config.events_file = Some(dir.join(file));
            }
        }
        Ok(config)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let value: toml::Table = text.parse()?;
        match value.get("schema_version").and_then(toml::Value::as_integer) {
            Some(v) if v == i64::from(SCHEMA_VERSION) => {}
            Some(v) => bail!("unsupported schema_version {v}; expected {SCHEMA_VERSION}"),
            None => bail!("missing schema_version"),
        }
        Ok(value.try_into()?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs serialize")
    }

    pub fn hamiltonian(&self) -> HamiltonianKind {
        match self.kind {
            KindName::Ee => HamiltonianKind::ExcitationExchange,
            KindName::Xy => HamiltonianKind::Xy { theta: self.theta },
        }
    }

    pub fn engine_choice(&self) -> EngineChoice {
        match self.engine {
            EngineName::Oracle => EngineChoice::Oracle { cap: self.oracle_cap() },
            EngineName::Analytic | EngineName::Compare => EngineChoice::Analytic,
        }
    }

    pub fn oracle_cap(&self) -> usize {
        self.cap.unwrap_or_else(default_cap)
    }

    fn require_n(&self) -> Result<usize> {
        self.n.with_context(|| format!("scheme {:?} needs --n", self.scheme))
    }

    /// Builds the scheme, then applies the Hamiltonian, frequency and
    /// initial-state overrides.
    pub fn build_scheme(&self) -> Result<Scheme> {
        let topology = |t| build_topology(self.require_n()?, self.coupling, self.t, t).map_err(anyhow::Error::from);
        let scheme = match self.scheme {
            SchemeName::Chain => topology(Topology::Chain)?,
            SchemeName::Star => topology(Topology::Star)?,
            SchemeName::Random => topology(Topology::Random { seed: self.seed })?,
            SchemeName::Uniform => build_uniform_quilt(self.require_n()?, self.coupling)?,
            SchemeName::Binary => build_binary_tree(self.require_n()?, self.coupling)?,
            SchemeName::Thermal => build_thermalization(
                self.require_n()?,
                self.coupling,
                self.n_events,
                self.seed,
                self.t_max,
                self.selection.into(),
            )?,
            // The family fixes kind, frequencies and initial state.
            SchemeName::RandomModel => return Ok(build_random_model(self.model.into(), self.require_n()?, self.seed)?),
            SchemeName::File => {
                let path = self.events_file.as_ref().context("scheme file needs --events")?;
                let file = read_event_file(path)?;
                let n = match (self.n, file.n_qubits) {
                    (Some(n), _) | (None, Some(n)) => n,
                    (None, None) => file.max_index().map_or(2, |m| m + 1),
                };
                let excited = self.excited.clone().or(file.excited).unwrap_or_else(|| vec![0]);
                let scheme = Scheme::new(n, excited, file.events)?.with_uniform_frequency(self.omega);
                scheme.validate()?;
                return Ok(scheme);
            }
        };
        let mut scheme = scheme.with_uniform_frequency(self.omega);
        if self.kind != KindName::Ee {
            scheme = scheme.with_kind(self.hamiltonian());
        }
        if let Some(excited) = &self.excited {
            scheme = scheme.with_excited(excited.clone())?;
        }
        scheme.validate()?;
        Ok(scheme)
    }
}
