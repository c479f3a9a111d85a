//! JSON run manifests. The scheme is recorded in full (initial state,
//! frequencies and every event, or the generator of a random-pair
//! schedule), so a replay does not depend on builders or event files.

use std::path::Path;

use anyhow::{Context, Result};
use quilt_core::qstate::HamiltonianKind;
use quilt_core::scheme::{
    CollisionEvent, Event, InitialState, RandomPairs, Schedule, Scheme, SimultaneousCollision, SuperposedPair,
};
use serde::{Deserialize, Serialize};

use crate::config::{RunConfig, SelectionName};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub command: String,
    pub config: RunConfig,
    pub seed: u64,
    /// Engine requested in the config.
    pub engine: String,
    /// `pairs`, `wlike` or `oracle`.
    pub engine_used: String,
    pub scheme: SchemeRecord,
    pub wall_time_s: f64,
    pub heatmap_floor: f64,
    /// File names relative to the manifest's directory.
    pub outputs: Outputs,
    pub snapshots: Vec<SnapshotRecord>,
    pub compare: Option<CompareRecord>,
    pub norm_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outputs {
    pub tangles_csv: String,
    pub heatmap: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotRecord {
    pub events: u64,
    pub tangles_csv: String,
    pub heatmap: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRecord {
    pub max_diff: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub worst_pair: Option<(usize, usize)>,
    pub first_offending_event: Option<u64>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeRecord {
    pub n_qubits: usize,
    pub excited: Vec<usize>,
    pub superposed: Option<SuperposedRecord>,
    pub frequencies: Vec<f64>,
    pub seed: Option<u64>,
    pub schedule: ScheduleRecord,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperposedRecord {
    pub qubits: (usize, usize),
    pub theta: (f64, f64),
    pub phi: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ScheduleRecord {
    /// The per-event log.
    Explicit { events: Vec<EventRecord> },
    RandomPairs { n_events: u64, coupling: f64, t_max: f64, seed: u64, selection: SelectionName },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum EventRecord {
    Collision {
        old: usize,
        new: usize,
        /// `ee` or `xy`.
        kind: String,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        theta: Option<f64>,
        coupling: f64,
        duration: f64,
    },
    ManyToOne(GroupRecord),
    TwoGroups { first: GroupRecord, second: GroupRecord },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub old: usize,
    pub new: Vec<usize>,
    pub couplings: Vec<f64>,
    pub duration: f64,
}

impl From<&SimultaneousCollision> for GroupRecord {
    fn from(g: &SimultaneousCollision) -> Self {
        Self { old: g.old, new: g.new.clone(), couplings: g.couplings.clone(), duration: g.duration }
    }
}

impl From<GroupRecord> for SimultaneousCollision {
    fn from(g: GroupRecord) -> Self {
        Self { old: g.old, new: g.new, couplings: g.couplings, duration: g.duration }
    }
}

impl From<&Event> for EventRecord {
    fn from(e: &Event) -> Self {
        match e {
            Event::Collision(c) => {
                let (kind, theta) = match c.kind {
                    HamiltonianKind::ExcitationExchange => ("ee", None),
                    HamiltonianKind::Xy { theta } => ("xy", Some(theta)),
                };
                Self::Collision {
                    old: c.old,
                    new: c.new,
                    kind: kind.into(),
                    theta,
                    coupling: c.coupling,
                    duration: c.duration,
                }
            }
            Event::ManyToOne(g) => Self::ManyToOne(g.into()),
            Event::TwoGroups(a, b) => Self::TwoGroups { first: a.into(), second: b.into() },
        }
    }
}

impl TryFrom<EventRecord> for Event {
    type Error = anyhow::Error;

    fn try_from(r: EventRecord) -> Result<Self> {
        Ok(match r {
            EventRecord::Collision { old, new, kind, theta, coupling, duration } => {
                let kind = match (kind.as_str(), theta) {
                    ("ee", None) => HamiltonianKind::ExcitationExchange,
                    ("xy", Some(theta)) => HamiltonianKind::Xy { theta },
                    _ => anyhow::bail!("collision kind {kind:?} with theta {theta:?}"),
                };
                Event::Collision(CollisionEvent { old, new, kind, coupling, duration })
            }
            EventRecord::ManyToOne(g) => Event::ManyToOne(g.into()),
            EventRecord::TwoGroups { first, second } => Event::TwoGroups(first.into(), second.into()),
        })
    }
}

impl From<&Scheme> for SchemeRecord {
    fn from(s: &Scheme) -> Self {
        let schedule = match &s.schedule {
            Schedule::Explicit(events) => ScheduleRecord::Explicit { events: events.iter().map(Into::into).collect() },
            Schedule::RandomPairs(r) => ScheduleRecord::RandomPairs {
                n_events: r.n_events,
                coupling: r.coupling,
                t_max: r.t_max,
                seed: r.seed,
                selection: match r.selection {
                    quilt_core::scheme::PairSelection::Uniform => SelectionName::Uniform,
                    quilt_core::scheme::PairSelection::WithFirst => SelectionName::WithFirst,
                },
            },
        };
        Self {
            n_qubits: s.n_qubits,
            excited: s.initial.excited.clone(),
            superposed: s
                .initial
                .superposed
                .map(|p| SuperposedRecord { qubits: p.qubits, theta: p.theta, phi: p.phi }),
            frequencies: s.frequencies.clone(),
            seed: s.seed,
            schedule,
        }
    }
}

impl TryFrom<SchemeRecord> for Scheme {
    type Error = anyhow::Error;

    fn try_from(r: SchemeRecord) -> Result<Self> {
        let schedule = match r.schedule {
            ScheduleRecord::Explicit { events } => {
                Schedule::Explicit(events.into_iter().map(Event::try_from).collect::<Result<_>>()?)
            }
            ScheduleRecord::RandomPairs { n_events, coupling, t_max, seed, selection } => {
                Schedule::RandomPairs(RandomPairs { n_events, coupling, t_max, seed, selection: selection.into() })
            }
        };
        let scheme = Scheme {
            n_qubits: r.n_qubits,
            initial: InitialState {
                excited: r.excited,
                superposed: r.superposed.map(|p| SuperposedPair { qubits: p.qubits, theta: p.theta, phi: p.phi }),
            },
            frequencies: r.frequencies,
            schedule,
            seed: r.seed,
        };
        scheme.validate()?;
        Ok(scheme)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use quilt_core::scheme::{build_random_model, build_thermalization, Model, PairSelection};

    #[test]
    fn scheme_records_round_trip_through_json() {
        let mut schemes: Vec<Scheme> = Model::ALL.iter().map(|&m| build_random_model(m, 6, 11).unwrap()).collect();
        schemes.push(build_thermalization(5, 0.7, 100, 4, 1.3, PairSelection::WithFirst).unwrap());
        schemes.push(
            Scheme::new(
                6,
                vec![0],
                vec![
                    Event::ManyToOne(SimultaneousCollision { old: 0, new: vec![1, 2], couplings: vec![1.0, 0.3], duration: 0.4 }),
                    Event::TwoGroups(
                        SimultaneousCollision { old: 0, new: vec![3], couplings: vec![0.5], duration: 0.2 },
                        SimultaneousCollision { old: 1, new: vec![4, 5], couplings: vec![1.0, 2.0], duration: 0.2 },
                    ),
                ],
            )
            .unwrap(),
        );
        for s in schemes {
            let json = serde_json::to_string(&SchemeRecord::from(&s)).unwrap();
            let back: SchemeRecord = serde_json::from_str(&json).unwrap();
            assert_eq!(Scheme::try_from(back).unwrap(), s);
        }
    }
}
