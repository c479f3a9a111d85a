//! Engine selection and whole-scheme runs.

use std::collections::HashSet;

use crate::engine::{PairState, WLikeState};
use crate::error::Result;
use crate::measures::PairwiseTangleMatrix;
use crate::oracle::{OracleRun, run_oracle};
use crate::scheme::{Event, Schedule, Scheme};

/// The analytic engine suited to a scheme.
#[derive(Debug, Clone)]
pub enum AnalyticState {
    Pairs(PairState),
    WLike(WLikeState),
}

impl AnalyticState {
    /// [`PairState`] unless some collision involves two qubits that both
    /// collided before, which only the W-like engine handles.
    ///
    /// # Errors
    /// Fails if the scheme is invalid, or needs the W-like engine but is not
    /// W-like.
    pub fn for_scheme(scheme: &Scheme) -> Result<Self> {
        if needs_wlike(scheme) {
            Ok(Self::WLike(WLikeState::from_scheme(scheme)?))
        } else {
            Ok(Self::Pairs(PairState::from_scheme(scheme)?))
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Pairs(_) => "pairs",
            Self::WLike(_) => "wlike",
        }
    }

    /// # Errors
    /// Fails when the event is outside the engine's model.
    pub fn apply(&mut self, event: &Event) -> Result<()> {
        match self {
            Self::Pairs(p) => p.apply(event).map(|_| ()),
            Self::WLike(w) => w.apply(event),
        }
    }

    pub fn tangle_matrix(&self) -> PairwiseTangleMatrix {
        match self {
            Self::Pairs(p) => p.tangle_matrix(),
            Self::WLike(w) => w.tangle_matrix(),
        }
    }
}

fn needs_wlike(scheme: &Scheme) -> bool {
    let events = match &scheme.schedule {
        Schedule::RandomPairs(_) => return true,
        Schedule::Explicit(events) => events,
    };
    let mut seen = HashSet::new();
    for event in events {
        let fresh = match event {
            Event::Collision(c) => vec![c.new],
            Event::ManyToOne(m) => m.new.clone(),
            Event::TwoGroups(a, b) => a.new.iter().chain(&b.new).copied().collect(),
        };
        if fresh.iter().any(|q| seen.contains(q)) {
            return true;
        }
        seen.extend(event.participants());
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineChoice {
    Analytic,
    Oracle { cap: usize },
}

#[derive(Debug, Clone)]
pub struct SimulationOutput {
    pub tangles: PairwiseTangleMatrix,
    /// `(events applied, tangles)`, in increasing event count.
    pub snapshots: Vec<(u64, PairwiseTangleMatrix)>,
    /// `"pairs"`, `"wlike"` or `"oracle"`.
    pub engine: &'static str,
    /// `|Σ|a_i|² − 1|` for W-like runs.
    pub norm_error: Option<f64>,
}

/// Runs a whole scheme. A snapshot `k` records the tangles after `k` events.
///
/// # Errors
/// Fails if the chosen engine rejects the scheme.
pub fn simulate(scheme: &Scheme, engine: EngineChoice, snapshots: &[u64]) -> Result<SimulationOutput> {
    let mut wanted: Vec<u64> = snapshots.to_vec();
    wanted.sort_unstable();
    wanted.dedup();
    if let EngineChoice::Oracle { cap } = engine {
        let out = run_oracle(&OracleRun { scheme: scheme.clone(), cap, snapshots: wanted })?;
        return Ok(SimulationOutput {
            tangles: out.tangles,
            snapshots: out.snapshots,
            engine: "oracle",
            norm_error: None,
        });
    }
    let mut state = AnalyticState::for_scheme(scheme)?;
    let mut taken = Vec::new();
    let mut next = wanted.iter().peekable();
    if next.peek() == Some(&&0) {
        taken.push((0, state.tangle_matrix()));
        next.next();
    }
    let mut done = 0u64;
    for event in scheme.events() {
        state.apply(&event)?;
        done += 1;
        if next.peek() == Some(&&done) {
            taken.push((done, state.tangle_matrix()));
            next.next();
        }
    }
    let norm_error = match &state {
        AnalyticState::WLike(w) => Some(w.norm_error()),
        AnalyticState::Pairs(_) => None,
    };
    Ok(SimulationOutput { tangles: state.tangle_matrix(), snapshots: taken, engine: state.name(), norm_error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{build_chain, build_thermalization, CollisionEvent, PairSelection};

    #[test]
    fn engine_choice() {
        let chain = build_chain(4, 1.0, 0.3).unwrap();
        assert_eq!(AnalyticState::for_scheme(&chain).unwrap().name(), "pairs");
        let thermal = build_thermalization(5, 1.0, 10, 3, 1.0, PairSelection::Uniform).unwrap();
        assert_eq!(AnalyticState::for_scheme(&thermal).unwrap().name(), "wlike");
        let revisit = Scheme::new(
            3,
            vec![0],
            vec![
                Event::Collision(CollisionEvent::ee(0, 1, 1.0, 0.3)),
                Event::Collision(CollisionEvent::ee(1, 0, 1.0, 0.3)),
            ],
        )
        .unwrap();
        assert_eq!(AnalyticState::for_scheme(&revisit).unwrap().name(), "wlike");
    }

    #[test]
    fn snapshots_match_truncated_runs() {
        let s = build_chain(6, 1.0, 0.6).unwrap();
        let out = simulate(&s, EngineChoice::Analytic, &[3, 0, 3]).unwrap();
        assert_eq!(out.snapshots.len(), 2);
        let truncated = Scheme::new(6, vec![0], s.events().take(3).collect()).unwrap();
        let t3 = simulate(&truncated, EngineChoice::Analytic, &[]).unwrap().tangles;
        assert_eq!(out.snapshots[1].1, t3);
    }
}
