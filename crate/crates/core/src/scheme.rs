//! Collision schedules and initial states.
//!
//! Random schedules draw from `ChaCha8Rng::seed_from_u64(seed)`; indices are
//! sampled as `u32` ranges and durations as `random::<f64>()`, both of which
//! are platform independent.

use std::f64::consts::FRAC_PI_4;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::qstate::{HamiltonianKind, C64};

/// Frequency assigned to every qubit by the builders.
pub const DEFAULT_FREQUENCY: f64 = 1.0;

/// One two-qubit collision. `new` is the qubit joining the collision; in
/// W-like runs both indices may refer to qubits that collided before.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionEvent {
    pub old: usize,
    pub new: usize,
    pub kind: HamiltonianKind,
    pub coupling: f64,
    pub duration: f64,
}

impl CollisionEvent {
    /// Excitation-exchange collision.
    pub fn ee(old: usize, new: usize, coupling: f64, duration: f64) -> Self {
        Self { old, new, kind: HamiltonianKind::ExcitationExchange, coupling, duration }
    }
}

/// Several fresh qubits colliding at once with one old qubit through
/// excitation exchange, each with its own coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct SimultaneousCollision {
    pub old: usize,
    pub new: Vec<usize>,
    pub couplings: Vec<f64>,
    pub duration: f64,
}

impl SimultaneousCollision {
    /// `|Ω⃗| = √ΣΩᵢ²`.
    pub fn coupling_norm(&self) -> f64 {
        self.couplings.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    Collision(CollisionEvent),
    ManyToOne(SimultaneousCollision),
    /// Two simultaneous many-to-one collisions on disjoint groups.
    TwoGroups(SimultaneousCollision, SimultaneousCollision),
}

impl Event {
    pub fn duration(&self) -> f64 {
        match self {
            Event::Collision(c) => c.duration,
            Event::ManyToOne(m) => m.duration,
            Event::TwoGroups(a, _) => a.duration,
        }
    }

    /// Every qubit taking part, old qubits first.
    pub fn participants(&self) -> Vec<usize> {
        let group = |m: &SimultaneousCollision| {
            std::iter::once(m.old).chain(m.new.iter().copied()).collect::<Vec<_>>()
        };
        match self {
            Event::Collision(c) => vec![c.old, c.new],
            Event::ManyToOne(m) => group(m),
            Event::TwoGroups(a, b) => {
                let mut v = group(a);
                v.extend(group(b));
                v
            }
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        let parts = self.participants();
        for (k, &q) in parts.iter().enumerate() {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
            if parts[..k].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        let check = |name: &str, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} {v} must be finite and ≥ 0")))
            }
        };
        let check_group = |m: &SimultaneousCollision| -> Result<()> {
            if m.new.len() != m.couplings.len() || m.new.is_empty() {
                return Err(Error::InvalidParameter(
                    "many-to-one collision needs one coupling per new qubit".into(),
                ));
            }
            m.couplings.iter().try_for_each(|&c| check("coupling", c))?;
            if m.coupling_norm() == 0.0 {
                return Err(Error::InvalidParameter("many-to-one couplings are all zero".into()));
            }
            check("duration", m.duration)
        };
        match self {
            Event::Collision(c) => {
                check("coupling", c.coupling)?;
                check("duration", c.duration)
            }
            Event::ManyToOne(m) => check_group(m),
            Event::TwoGroups(a, b) => {
                check_group(a)?;
                check_group(b)?;
                if a.duration != b.duration {
                    return Err(Error::InvalidParameter(
                        "simultaneous groups must share one duration".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// Product initial state of two designated qubits,
/// `e^{iφ}cos θ |1⟩ + sin θ |0⟩` each.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperposedPair {
    pub qubits: (usize, usize),
    pub theta: (f64, f64),
    pub phi: (f64, f64),
}

/// Initial product state: the listed qubits start in `|1⟩`, the others in
/// `|0⟩`, except the optional superposed pair.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InitialState {
    pub excited: Vec<usize>,
    pub superposed: Option<SuperposedPair>,
}

impl InitialState {
    /// `[⟨0|q⟩, ⟨1|q⟩]`.
    pub fn qubit_state(&self, q: usize) -> [C64; 2] {
        if let Some(sp) = &self.superposed {
            let angles = if sp.qubits.0 == q {
                Some((sp.theta.0, sp.phi.0))
            } else if sp.qubits.1 == q {
                Some((sp.theta.1, sp.phi.1))
            } else {
                None
            };
            if let Some((theta, phi)) = angles {
                return [C64::new(theta.sin(), 0.0), C64::from_polar(theta.cos(), phi)];
            }
        }
        if self.excited.contains(&q) {
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
        } else {
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
        }
    }
}

/// How random old-pair collisions pick their participants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSelection {
    /// Two distinct qubits uniformly at random.
    Uniform,
    /// Qubit 0 against a uniformly chosen other qubit.
    WithFirst,
}

/// A lazily generated schedule of random excitation-exchange collisions
/// between existing qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomPairs {
    pub n_events: u64,
    pub coupling: f64,
    pub t_max: f64,
    pub seed: u64,
    pub selection: PairSelection,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Schedule {
    Explicit(Vec<Event>),
    RandomPairs(RandomPairs),
}

/// A simulation input: register size, initial state, per-qubit frequencies
/// and an ordered event schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct Scheme {
    pub n_qubits: usize,
    pub initial: InitialState,
    pub frequencies: Vec<f64>,
    pub schedule: Schedule,
    pub seed: Option<u64>,
}

/// Iterator over the events of a [`Scheme`].
pub struct Events<'a> {
    inner: EventsInner<'a>,
}

// One iterator per run; boxing the RNG would only add an indirection per event.
#[allow(clippy::large_enum_variant)]
enum EventsInner<'a> {
    Explicit(std::slice::Iter<'a, Event>),
    Random { params: RandomPairs, n_qubits: u32, rng: ChaCha8Rng, remaining: u64 },
}

impl Iterator for Events<'_> {
    type Item = Event;

    fn next(&mut self) -> Option<Event> {
        match &mut self.inner {
            EventsInner::Explicit(it) => it.next().cloned(),
            EventsInner::Random { params, n_qubits, rng, remaining } => {
                if *remaining == 0 {
                    return None;
                }
                *remaining -= 1;
                let (a, b) = match params.selection {
                    PairSelection::Uniform => {
                        let a = rng.random_range(0..*n_qubits);
                        let mut b = rng.random_range(0..*n_qubits - 1);
                        if b >= a {
                            b += 1;
                        }
                        (a, b)
                    }
                    PairSelection::WithFirst => (0, rng.random_range(1..*n_qubits)),
                };
                let t = rng.random::<f64>() * params.t_max;
                Some(Event::Collision(CollisionEvent::ee(a as usize, b as usize, params.coupling, t)))
            }
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        match &self.inner {
            EventsInner::Explicit(it) => it.size_hint(),
            EventsInner::Random { remaining, .. } => {
                let r = usize::try_from(*remaining).unwrap_or(usize::MAX);
                (r, Some(r))
            }
        }
    }
}

impl Scheme {
    /// Scheme with every qubit in `|0⟩` except `excited`, at the default
    /// frequency.
    ///
    /// # Errors
    /// Fails if an event or excitation index is invalid.
    pub fn new(n_qubits: usize, excited: Vec<usize>, events: Vec<Event>) -> Result<Self> {
        let scheme = Self {
            n_qubits,
            initial: InitialState { excited, superposed: None },
            frequencies: vec![DEFAULT_FREQUENCY; n_qubits],
            schedule: Schedule::Explicit(events),
            seed: None,
        };
        scheme.validate()?;
        Ok(scheme)
    }

    /// # Errors
    /// Reports the first invalid index, parameter or frequency.
    pub fn validate(&self) -> Result<()> {
        let n = self.n_qubits;
        if n < 2 {
            return Err(Error::InvalidParameter(format!("{n} qubits; at least 2 are needed")));
        }
        if self.frequencies.len() != n || self.frequencies.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter("one finite frequency per qubit is needed".into()));
        }
        for (k, &q) in self.initial.excited.iter().enumerate() {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n_qubits: n });
            }
            if self.initial.excited[..k].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        if let Some(sp) = &self.initial.superposed {
            for q in [sp.qubits.0, sp.qubits.1] {
                if q >= n {
                    return Err(Error::QubitOutOfRange { index: q, n_qubits: n });
                }
            }
            if sp.qubits.0 == sp.qubits.1 {
                return Err(Error::DuplicateQubit(sp.qubits.0));
            }
        }
        match &self.schedule {
            Schedule::Explicit(events) => events.iter().try_for_each(|e| e.validate(n)),
            Schedule::RandomPairs(r) => {
                if !(r.coupling.is_finite() && r.coupling >= 0.0 && r.t_max.is_finite() && r.t_max >= 0.0) {
                    return Err(Error::InvalidParameter("random schedule needs Ω ≥ 0 and t_max ≥ 0".into()));
                }
                if u32::try_from(n).is_err() {
                    return Err(Error::InvalidParameter("register too large for random schedule".into()));
                }
                Ok(())
            }
        }
    }

    pub fn events(&self) -> Events<'_> {
        let inner = match &self.schedule {
            Schedule::Explicit(events) => EventsInner::Explicit(events.iter()),
            Schedule::RandomPairs(params) => EventsInner::Random {
                params: *params,
                n_qubits: self.n_qubits as u32,
                rng: ChaCha8Rng::seed_from_u64(params.seed),
                remaining: params.n_events,
            },
        };
        Events { inner }
    }

    pub fn n_events(&self) -> u64 {
        match &self.schedule {
            Schedule::Explicit(events) => events.len() as u64,
            Schedule::RandomPairs(r) => r.n_events,
        }
    }

    /// Replaces the Hamiltonian of every two-qubit collision.
    pub fn with_kind(mut self, kind: HamiltonianKind) -> Self {
        if let Schedule::Explicit(events) = &mut self.schedule {
            for e in events.iter_mut() {
                if let Event::Collision(c) = e {
                    c.kind = kind;
                }
            }
        }
        self
    }

    /// # Errors
    /// Fails if an index is out of range or repeated.
    pub fn with_excited(mut self, excited: Vec<usize>) -> Result<Self> {
        self.initial.excited = excited;
        self.validate()?;
        Ok(self)
    }

    /// # Errors
    /// Fails if the pair is invalid for this register.
    pub fn with_superposed_pair(mut self, pair: SuperposedPair) -> Result<Self> {
        self.initial.superposed = Some(pair);
        self.validate()?;
        Ok(self)
    }

    /// # Errors
    /// Fails unless there is one finite frequency per qubit.
    pub fn with_frequencies(mut self, frequencies: Vec<f64>) -> Result<Self> {
        self.frequencies = frequencies;
        self.validate()?;
        Ok(self)
    }

    /// Sets every qubit to frequency `omega`.
    pub fn with_uniform_frequency(mut self, omega: f64) -> Self {
        self.frequencies = vec![omega; self.n_qubits];
        self
    }

    /// Whether every qubit shares the first qubit's frequency.
    pub fn uniform_frequency(&self) -> bool {
        self.frequencies.iter().all(|&w| w == self.frequencies[0])
    }
}

fn require_at_least_two(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::InvalidParameter(format!("{n} qubits; at least 2 are needed")))
    } else {
        Ok(())
    }
}

fn scheme_from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize, f64)>, coupling: f64) -> Result<Scheme> {
    let events = pairs
        .into_iter()
        .map(|(old, new, t)| Event::Collision(CollisionEvent::ee(old, new, coupling, t)))
        .collect();
    Scheme::new(n, vec![0], events)
}

/// Qubit `i` collides with qubit `i − 1`, for `i = 1..n`.
///
/// # Errors
/// Fails if `n < 2` or the parameters are negative.
pub fn build_chain(n: usize, coupling: f64, t: f64) -> Result<Scheme> {
    require_at_least_two(n)?;
    scheme_from_pairs(n, (1..n).map(|i| (i - 1, i, t)), coupling)
}

/// Qubit `i` collides with qubit `0`, for `i = 1..n`.
///
/// # Errors
/// Fails if `n < 2` or the parameters are negative.
pub fn build_star(n: usize, coupling: f64, t: f64) -> Result<Scheme> {
    require_at_least_two(n)?;
    scheme_from_pairs(n, (1..n).map(|i| (0, i, t)), coupling)
}

/// Qubit `i` collides with a uniformly chosen qubit in `0..i`.
///
/// # Errors
/// Fails if `n < 2` or the parameters are negative.
pub fn build_random(n: usize, coupling: f64, t: f64, seed: u64) -> Result<Scheme> {
    require_at_least_two(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<_> = (1..n).map(|i| (rng.random_range(0..i as u32) as usize, i, t)).collect();
    let mut scheme = scheme_from_pairs(n, pairs, coupling)?;
    scheme.seed = Some(seed);
    Ok(scheme)
}

/// Collision durations that leave every qubit with excitation probability
/// `1/n` along a chain: the collision admitting qubit `k` (0-based) lasts
/// `arcsin √((n−k)/(n−k+1)) / Ω`.
pub fn uniform_quilt_durations(n: usize, coupling: f64) -> Vec<f64> {
    (1..n)
        .map(|k| {
            let remaining = (n - k) as f64;
            (remaining / (remaining + 1.0)).sqrt().asin() / coupling
        })
        .collect()
}

/// Chain with [`uniform_quilt_durations`]; every pair ends with `τ = 4/n²`.
///
/// # Errors
/// Fails if `n < 2` or `coupling ≤ 0`.
pub fn build_uniform_quilt(n: usize, coupling: f64) -> Result<Scheme> {
    require_at_least_two(n)?;
    if !(coupling > 0.0) {
        return Err(Error::InvalidParameter("uniform quilt needs Ω > 0".into()));
    }
    let durations = uniform_quilt_durations(n, coupling);
    scheme_from_pairs(n, (1..n).map(|i| (i - 1, i, durations[i - 1])), coupling)
}

/// Partner of new qubit `k ≥ 1` in the doubling schedule: `k − 2^⌊log₂ k⌋`.
pub fn binary_tree_target(k: usize) -> usize {
    k - (1usize << (usize::BITS - 1 - k.leading_zeros()))
}

/// Doubling schedule of `π/(4Ω)` collisions; every pair ends with `τ = 4/n²`.
///
/// # Errors
/// Fails if `n` is not a power of two at least 2, or `coupling ≤ 0`.
pub fn build_binary_tree(n: usize, coupling: f64) -> Result<Scheme> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!("{n} is not a power of two ≥ 2")));
    }
    if !(coupling > 0.0) {
        return Err(Error::InvalidParameter("binary tree needs Ω > 0".into()));
    }
    let t = FRAC_PI_4 / coupling;
    scheme_from_pairs(n, (1..n).map(|k| (binary_tree_target(k), k, t)), coupling)
}

/// Collision topology for schemes with several excitations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Chain,
    Star,
    Random { seed: u64 },
}

/// Topology `topology` starting from `|1010…⟩` (even 0-based indices excited).
///
/// # Errors
/// Fails if `n < 2` or the parameters are negative.
pub fn build_neel_variant(n: usize, coupling: f64, t: f64, topology: Topology) -> Result<Scheme> {
    build_topology(n, coupling, t, topology)?.with_excited((0..n).step_by(2).collect())
}

/// [`build_chain`], [`build_star`] or [`build_random`].
///
/// # Errors
/// Fails if `n < 2` or the parameters are negative.
pub fn build_topology(n: usize, coupling: f64, t: f64, topology: Topology) -> Result<Scheme> {
    match topology {
        Topology::Chain => build_chain(n, coupling, t),
        Topology::Star => build_star(n, coupling, t),
        Topology::Random { seed } => build_random(n, coupling, t, seed),
    }
}

/// Families of schemes the pair engine solves exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// xy collisions, excited and ground new qubits; X states.
    Xy,
    /// xy and excitation-exchange collisions mixed; X states.
    MixedX,
    /// Excitation exchange, excited and ground new qubits; φ states.
    ExcitedBath,
    /// Excitation exchange, qubit 0 excited, ground new qubits; Q states.
    GroundBath,
    /// Excitation exchange, qubit 0 superposed, ground new qubits; box states.
    Superposed,
}

impl Model {
    pub const ALL: [Model; 5] = [Model::Xy, Model::MixedX, Model::ExcitedBath, Model::GroundBath, Model::Superposed];
}

/// Random scheme of family `model` on `n` qubits: chain, star or random
/// topology; couplings in `[0.2, 2]`, durations in `[0, π]`, and in half the
/// draws detuned frequencies in `[0.5, 1.5]`.
///
/// # Errors
/// Fails if `n < 2`.
pub fn build_random_model(model: Model, n: usize, seed: u64) -> Result<Scheme> {
    require_at_least_two(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let topology = match rng.random_range(0..3u32) {
        0 => Topology::Chain,
        1 => Topology::Star,
        _ => Topology::Random { seed: rng.random::<u64>() },
    };
    let targets: Vec<(usize, usize)> = build_topology(n, 1.0, 0.0, topology)?
        .events()
        .map(|e| match e {
            Event::Collision(c) => (c.old, c.new),
            _ => unreachable!("topologies are pairwise"),
        })
        .collect();
    let mut uniform = |lo: f64, hi: f64| lo + (hi - lo) * rng.random::<f64>();
    let events = targets
        .into_iter()
        .map(|(old, new)| {
            let coupling = uniform(0.2, 2.0);
            let duration = uniform(0.0, std::f64::consts::PI);
            let xy = match model {
                Model::Xy => true,
                Model::MixedX => uniform(0.0, 1.0) < 0.5,
                _ => false,
            };
            let kind = if xy {
                HamiltonianKind::Xy { theta: uniform(0.0, std::f64::consts::TAU) }
            } else {
                HamiltonianKind::ExcitationExchange
            };
            Event::Collision(CollisionEvent { old, new, kind, coupling, duration })
        })
        .collect();
    let excited: Vec<usize> = match model {
        Model::GroundBath => vec![0],
        Model::Superposed => vec![],
        _ => std::iter::once(0).chain((1..n).filter(|_| uniform(0.0, 1.0) < 0.3)).collect(),
    };
    let mut scheme = Scheme::new(n, excited, events)?;
    if model == Model::Superposed {
        let pair = SuperposedPair {
            qubits: (0, 1),
            theta: (uniform(0.0, std::f64::consts::FRAC_PI_2), std::f64::consts::FRAC_PI_2),
            phi: (uniform(0.0, std::f64::consts::TAU), 0.0),
        };
        scheme = scheme.with_superposed_pair(pair)?;
    }
    if uniform(0.0, 1.0) < 0.5 {
        let frequencies = (0..n).map(|_| uniform(0.5, 1.5)).collect();
        scheme = scheme.with_frequencies(frequencies)?;
    }
    scheme.seed = Some(seed);
    Ok(scheme)
}

/// Random old-pair excitation-exchange collisions on a register with qubit 0
/// excited; durations are uniform in `[0, t_max)`.
///
/// # Errors
/// Fails if `n < 2` or the parameters are negative.
pub fn build_thermalization(
    n: usize,
    coupling: f64,
    n_events: u64,
    seed: u64,
    t_max: f64,
    selection: PairSelection,
) -> Result<Scheme> {
    require_at_least_two(n)?;
    let scheme = Scheme {
        n_qubits: n,
        initial: InitialState { excited: vec![0], superposed: None },
        frequencies: vec![DEFAULT_FREQUENCY; n],
        schedule: Schedule::RandomPairs(RandomPairs { n_events, coupling, t_max, seed, selection }),
        seed: Some(seed),
    };
    scheme.validate()?;
    Ok(scheme)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(s: &Scheme) -> Vec<(usize, usize)> {
        s.events()
            .map(|e| match e {
                Event::Collision(c) => (c.old, c.new),
                _ => unreachable!(),
            })
            .collect()
    }

    #[test]
    fn chain_and_star_topologies() {
        assert_eq!(pairs(&build_chain(4, 1.0, 0.5).unwrap()), vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(pairs(&build_star(4, 1.0, 0.5).unwrap()), vec![(0, 1), (0, 2), (0, 3)]);
        assert_eq!(build_chain(2, 1.0, 0.5).unwrap(), build_star(2, 1.0, 0.5).unwrap());
        assert!(build_chain(1, 1.0, 0.5).is_err());
    }

    #[test]
    fn random_scheme_is_deterministic() {
        let a = build_random(30, 1.0, 0.7, 11).unwrap();
        assert_eq!(a, build_random(30, 1.0, 0.7, 11).unwrap());
        assert_ne!(pairs(&a), pairs(&build_random(30, 1.0, 0.7, 12).unwrap()));
        for (old, new) in pairs(&a) {
            assert!(old < new);
        }
    }

    #[test]
    fn binary_tree_targets() {
        let targets: Vec<usize> = (1..16).map(binary_tree_target).collect();
        assert_eq!(targets, vec![0, 0, 1, 0, 1, 2, 3, 0, 1, 2, 3, 4, 5, 6, 7]);
        assert!(build_binary_tree(12, 1.0).is_err());
        assert_eq!(build_binary_tree(2, 1.0).unwrap().n_events(), 1);
    }

    #[test]
    fn uniform_durations_start_at_quarter_period_for_two() {
        let d = uniform_quilt_durations(2, 1.0);
        assert!((d[0] - FRAC_PI_4).abs() < 1e-15);
        let d = uniform_quilt_durations(5, 2.0);
        assert!((d[3] * 2.0 - FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn neel_excites_even_indices() {
        let s = build_neel_variant(5, 1.0, 0.3, Topology::Chain).unwrap();
        assert_eq!(s.initial.excited, vec![0, 2, 4]);
    }

    #[test]
    fn thermalization_stream_is_deterministic_and_valid() {
        let s = build_thermalization(6, 1.0, 1000, 3, 1.5, PairSelection::Uniform).unwrap();
        let a: Vec<Event> = s.events().collect();
        let b: Vec<Event> = s.events().collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 1000);
        for e in &a {
            let Event::Collision(c) = e else { panic!() };
            assert!(c.old != c.new && c.old < 6 && c.new < 6);
            assert!((0.0..1.5).contains(&c.duration));
        }
        let s = build_thermalization(6, 1.0, 50, 3, 1.5, PairSelection::WithFirst).unwrap();
        assert!(s.events().all(|e| matches!(e, Event::Collision(c) if c.old == 0 && c.new > 0)));
        assert_eq!(build_thermalization(6, 1.0, 0, 3, 1.5, PairSelection::Uniform).unwrap().events().count(), 0);
    }

    #[test]
    fn invalid_events_are_rejected() {
        let bad = vec![Event::Collision(CollisionEvent::ee(0, 0, 1.0, 1.0))];
        assert_eq!(Scheme::new(3, vec![], bad), Err(Error::DuplicateQubit(0)));
        let bad = vec![Event::Collision(CollisionEvent::ee(0, 5, 1.0, 1.0))];
        assert!(matches!(Scheme::new(3, vec![], bad), Err(Error::QubitOutOfRange { .. })));
        let bad = vec![Event::Collision(CollisionEvent::ee(0, 1, 1.0, -1.0))];
        assert!(Scheme::new(3, vec![], bad).is_err());
        let bad = vec![Event::ManyToOne(SimultaneousCollision {
            old: 0,
            new: vec![1, 2],
            couplings: vec![1.0],
            duration: 1.0,
        })];
        assert!(Scheme::new(3, vec![], bad).is_err());
    }

    #[test]
    fn superposed_qubit_state() {
        let pair = SuperposedPair { qubits: (0, 1), theta: (0.0, std::f64::consts::FRAC_PI_2), phi: (0.3, 0.0) };
        let s = build_chain(3, 1.0, 0.5).unwrap().with_superposed_pair(pair).unwrap();
        let a = s.initial.qubit_state(0);
        assert!((a[1] - C64::from_polar(1.0, 0.3)).norm() < 1e-15);
        let b = s.initial.qubit_state(1);
        assert!((b[0].re - 1.0).abs() < 1e-15 && b[1].norm() < 1e-15);
    }
}
