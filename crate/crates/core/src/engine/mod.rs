//! Analytic recurrence engine.
//!
//! [`PairState`] tracks the reduced state of every pair of qubits that have
//! taken part in a collision, plus every single-qubit marginal, without
//! forming the global state. A collision between an old qubit `B` and a
//! fresh qubit `C` prepared in `|c⟩` maps, for each spectator `A`,
//!
//! * `ρ_{AB} ↦ Σ_K (I⊗K) ρ_{AB} (I⊗K)†` with `K ∈ {diag(s₀, s₁), w_b|b̄⟩⟨b|}`
//! * `ρ_{AC} ↦ Σ_K (I⊗K) ρ_{AB} (I⊗K)†` with `K_e` collecting the terms that
//!   leave `B` in `|e⟩`
//!
//! where `U|b c⟩ = s_b|b c⟩ + w_b|b̄ c̄⟩` (both Hamiltonians conserve parity).
//! Spectator–spectator pairs are untouched.
//!
//! States are stored in the interaction picture of the free Hamiltonian
//! `Σ ½ω_q σz`, so spectators need no update while the clock advances.
//! Tangles are identical in every frame; [`PairState::pair_density`]
//! reports lab-frame entries.

mod kraus;
pub mod closed_form;
pub mod wlike;

pub use closed_form::{
    bath_temperature, closed_form_chain_tangle, excited_bath_collision_analysis,
    superposed_pair_tangle, DetuningFactors,
};
pub use wlike::{collide_old_pair_wlike, WLikeState};

use nalgebra::Matrix4;

pub(crate) use kraus::{one_to_two, second_qubit_channel, Kraus1, Kraus12, ZERO};

use crate::error::{Error, Result};
use crate::measures::{
    concurrence_clamped, pidx, x_concurrence, DensityMatrix4, PairwiseTangleMatrix, Structure,
    ZERO_TOL,
};
use crate::qstate::{HamiltonianKind, Propagator, C64};
use crate::scheme::{CollisionEvent, Event, InitialState, Scheme};

/// Tangles of one spectator before and after a collision.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectatorTangles {
    pub spectator: usize,
    /// Class of `ρ_{A,old}` before the collision.
    pub structure: Structure,
    pub before: f64,
    pub with_old: f64,
    /// Tangle with each new qubit, in the event's order.
    pub with_new: Vec<f64>,
}

/// What a collision did to the spectators of its old qubit(s).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CollisionReport {
    pub spectators: Vec<SpectatorTangles>,
    /// Excitation exchange with every new qubit starting in `|0⟩`.
    pub ground_exchange: bool,
}

/// Tangle of a pair state in any frame.
pub(crate) fn pair_tangle(m: &Matrix4<C64>) -> f64 {
    let c = match DensityMatrix4::classify(m) {
        s if s.is_x_family() => x_concurrence(m),
        Structure::Box => 2.0 * m[(1, 2)].norm(),
        _ => concurrence_clamped(m),
    };
    let c = c.clamp(0.0, 1.0);
    c * c
}

pub(crate) fn swap_pair(m: &Matrix4<C64>) -> Matrix4<C64> {
    let p = [0usize, 2, 1, 3];
    Matrix4::from_fn(|i, j| m[(p[i], p[j])])
}

/// `|0⟩` or `|1⟩` if the marginal is a basis state.
pub(crate) fn basis_bit(m: &Kraus1) -> Option<usize> {
    if m[0][1].norm() > ZERO_TOL {
        None
    } else if m[1][1].re <= ZERO_TOL {
        Some(0)
    } else if m[0][0].re <= ZERO_TOL {
        Some(1)
    } else {
        None
    }
}

fn product_pair(a: &Kraus1, b: &Kraus1) -> Matrix4<C64> {
    let mut m = Matrix4::zeros();
    for x in 0..2 {
        for y in 0..2 {
            for u in 0..2 {
                for v in 0..2 {
                    m[(pidx(x, u), pidx(y, v))] = a[x][y] * b[u][v];
                }
            }
        }
    }
    m
}

pub(crate) fn marginals_of(m: &Matrix4<C64>) -> (Kraus1, Kraus1) {
    let mut first = [[ZERO; 2]; 2];
    let mut second = [[ZERO; 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            for e in 0..2 {
                first[x][y] += m[(pidx(x, e), pidx(y, e))];
                second[x][y] += m[(pidx(e, x), pidx(e, y))];
            }
        }
    }
    (first, second)
}

/// Pair states of every collided qubit.
#[derive(Debug, Clone)]
pub struct PairState {
    pub(crate) frequencies: Vec<f64>,
    pub(crate) clock: f64,
    /// Interaction-picture marginals, `[[P(0), ·], [·, P(1)]]`.
    pub(crate) marginals: Vec<Kraus1>,
    order: Vec<usize>,
    position: Vec<Option<usize>>,
    /// Pair `(order[p], order[q])`, `p < q`, at `q(q−1)/2 + p`, oriented
    /// with the earlier-tracked qubit first.
    pairs: Vec<Matrix4<C64>>,
}

impl PairState {
    /// Untracked register in the given product state.
    ///
    /// # Errors
    /// Fails if the frequencies do not match the register or an index is out
    /// of range.
    pub fn new(n_qubits: usize, initial: &InitialState, frequencies: Vec<f64>) -> Result<Self> {
        if frequencies.len() != n_qubits {
            return Err(Error::InvalidParameter("one frequency per qubit is needed".into()));
        }
        if let Some(&q) = initial.excited.iter().find(|&&q| q >= n_qubits) {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
        let marginals = (0..n_qubits)
            .map(|q| {
                let a = initial.qubit_state(q);
                [[a[0] * a[0].conj(), a[0] * a[1].conj()], [a[1] * a[0].conj(), a[1] * a[1].conj()]]
            })
            .collect();
        Ok(Self {
            frequencies,
            clock: 0.0,
            marginals,
            order: Vec::new(),
            position: vec![None; n_qubits],
            pairs: Vec::new(),
        })
    }

    /// Initial state of `scheme`, before any event.
    ///
    /// # Errors
    /// Fails if the scheme is invalid.
    pub fn from_scheme(scheme: &Scheme) -> Result<Self> {
        scheme.validate()?;
        Self::new(scheme.n_qubits, &scheme.initial, scheme.frequencies.clone())
    }

    pub fn n_qubits(&self) -> usize {
        self.marginals.len()
    }

    /// Total elapsed time.
    pub fn clock(&self) -> f64 {
        self.clock
    }

    pub fn is_tracked(&self, q: usize) -> bool {
        self.position.get(q).is_some_and(Option::is_some)
    }

    /// Collided qubits in the order they were first tracked.
    pub fn tracked(&self) -> &[usize] {
        &self.order
    }

    /// `⟨1|ρ_q|1⟩`.
    pub fn mean_excitation(&self, q: usize) -> f64 {
        self.marginals[q][1][1].re
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub(crate) fn check_index(&self, q: usize) -> Result<()> {
        if q < self.n_qubits() {
            Ok(())
        } else {
            Err(Error::QubitOutOfRange { index: q, n_qubits: self.n_qubits() })
        }
    }

    fn slot(p: usize, q: usize) -> usize {
        q * (q - 1) / 2 + p
    }

    /// Interaction-picture state of `(i, j)` with `i` first.
    pub(crate) fn pair(&self, i: usize, j: usize) -> Matrix4<C64> {
        match (self.position[i], self.position[j]) {
            (Some(p), Some(q)) if p < q => self.pairs[Self::slot(p, q)],
            (Some(p), Some(q)) => swap_pair(&self.pairs[Self::slot(q, p)]),
            _ => product_pair(&self.marginals[i], &self.marginals[j]),
        }
    }

    pub(crate) fn set_pair(&mut self, i: usize, j: usize, m: Matrix4<C64>) {
        match (self.position[i], self.position[j]) {
            (Some(p), Some(q)) if p < q => self.pairs[Self::slot(p, q)] = m,
            (Some(p), Some(q)) => self.pairs[Self::slot(q, p)] = swap_pair(&m),
            _ => unreachable!("pairs are stored only for tracked qubits"),
        }
    }

    /// Starts tracking `q`; `partner(a)` yields `ρ_{a q}` for every tracked `a`.
    pub(crate) fn track(&mut self, q: usize, mut partner: impl FnMut(&Self, usize) -> Matrix4<C64>) {
        let block: Vec<Matrix4<C64>> = self.order.iter().map(|&a| partner(self, a)).collect();
        self.position[q] = Some(self.order.len());
        self.order.push(q);
        self.pairs.extend(block);
    }

    /// Tracks an untouched qubit as a product with every tracked qubit.
    pub(crate) fn ensure_tracked(&mut self, q: usize) {
        if !self.is_tracked(q) {
            let mq = self.marginals[q];
            self.track(q, |s, a| product_pair(&s.marginals[a], &mq));
        }
    }

    /// Lab-frame reduced state of `(i, j)` with `i` first.
    ///
    /// # Errors
    /// Fails on out-of-range or equal indices.
    pub fn pair_density(&self, i: usize, j: usize) -> Result<DensityMatrix4> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(Error::DuplicateQubit(i));
        }
        let m = self.pair(i, j);
        let (wi, wj, t) = (self.frequencies[i], self.frequencies[j], self.clock);
        let energy = |k: usize| {
            let (a, b) = (1 - k / 2, 1 - k % 2);
            wi * a as f64 + wj * b as f64
        };
        let lab = Matrix4::from_fn(|k, l| m[(k, l)] * C64::from_polar(1.0, -(energy(k) - energy(l)) * t));
        Ok(DensityMatrix4::from_trusted(lab))
    }

    /// Lab-frame marginal of `q`, `[[P(0), ·], [·, P(1)]]`.
    pub fn marginal(&self, q: usize) -> [[C64; 2]; 2] {
        let mut m = self.marginals[q];
        let phase = C64::from_polar(1.0, self.frequencies[q] * self.clock);
        m[0][1] *= phase;
        m[1][0] *= phase.conj();
        m
    }

    /// `τ_ij`; zero for untracked pairs.
    pub fn tangle(&self, i: usize, j: usize) -> f64 {
        if i == j || !self.is_tracked(i) || !self.is_tracked(j) {
            return 0.0;
        }
        pair_tangle(&self.pair(i, j))
    }

    pub fn tangle_matrix(&self) -> PairwiseTangleMatrix {
        let mut out = PairwiseTangleMatrix::zeros(self.n_qubits());
        for q in 1..self.order.len() {
            for p in 0..q {
                let v = pair_tangle(&self.pairs[Self::slot(p, q)]);
                out.set(self.order[p], self.order[q], v);
            }
        }
        out
    }

    /// Applies one scheme event.
    ///
    /// # Errors
    /// Fails when the event is outside the analytically supported models.
    pub fn apply(&mut self, event: &Event) -> Result<CollisionReport> {
        match event {
            Event::Collision(c) => self.collide_new_qubit(c),
            Event::ManyToOne(m) => self.collide_many_to_one(m),
            Event::TwoGroups(a, b) => self.collide_two_groups(a, b),
        }
    }

    /// Interaction-picture propagator over `[clock, clock + t]` in register
    /// order `2b + c`.
    fn interaction_propagator(&self, ev: &CollisionEvent) -> Result<[[C64; 4]; 4]> {
        let (wb, wc) = (self.frequencies[ev.old], self.frequencies[ev.new]);
        let u = Propagator::new(ev.kind, ev.coupling, wb, wc, ev.duration)?;
        let energy = |k: usize| wb * ((k / 2) as f64 - 0.5) + wc * ((k % 2) as f64 - 0.5);
        let (t0, t1) = (self.clock, self.clock + ev.duration);
        let mut out = [[ZERO; 4]; 4];
        for (k, row) in out.iter_mut().enumerate() {
            for (l, entry) in row.iter_mut().enumerate() {
                let e = u.element(k, l);
                if e != ZERO {
                    *entry = e * C64::from_polar(1.0, energy(k) * t1 - energy(l) * t0);
                }
            }
        }
        Ok(out)
    }

    /// Collision of the old qubit `ev.old` with the fresh qubit `ev.new`.
    ///
    /// Supported inputs: every pair containing the old qubit is X-family
    /// (either Hamiltonian, new qubit in `|0⟩` or `|1⟩`) or a box state
    /// (excitation exchange with a `|0⟩` new qubit). A new qubit in a
    /// superposition is allowed only while the old qubit is uncorrelated.
    ///
    /// # Errors
    /// Fails on invalid indices, a new qubit that already collided, or an
    /// unsupported combination of structure, Hamiltonian and new state.
    pub fn collide_new_qubit(&mut self, ev: &CollisionEvent) -> Result<CollisionReport> {
        let (b, c) = (ev.old, ev.new);
        self.check_index(b)?;
        self.check_index(c)?;
        if b == c {
            return Err(Error::DuplicateQubit(b));
        }
        if self.is_tracked(c) {
            return Err(Error::IncompatibleCollision(format!(
                "qubit {c} already collided; collisions between old qubits need the W-like engine"
            )));
        }
        let spectators: Vec<usize> = self.order.iter().copied().filter(|&a| a != b).collect();
        let c_bit = basis_bit(&self.marginals[c]);
        let mut structures = Vec::with_capacity(spectators.len());
        for &a in &spectators {
            let s = DensityMatrix4::classify(&self.pair(a, b));
            let supported = if s.is_x_family() {
                c_bit.is_some()
            } else {
                s == Structure::Box
                    && c_bit == Some(0)
                    && ev.kind == HamiltonianKind::ExcitationExchange
            };
            if !supported {
                return Err(Error::IncompatibleCollision(format!(
                    "pair ({a},{b}) has {s:?} structure; unsupported with {:?} and new qubit state {}",
                    ev.kind,
                    c_bit.map_or("superposed".to_string(), |x| format!("|{x}⟩"))
                )));
            }
            structures.push(s);
        }

        let u = self.interaction_propagator(ev)?;
        self.ensure_tracked(b);
        let mut report = CollisionReport {
            spectators: Vec::with_capacity(spectators.len()),
            ground_exchange: c_bit == Some(0) && ev.kind == HamiltonianKind::ExcitationExchange,
        };
        let mut with_new = Vec::with_capacity(spectators.len());
        if let Some(cb) = c_bit {
            let reg = |x: usize, y: usize| 2 * x + y;
            let s = [u[reg(0, cb)][reg(0, cb)], u[reg(1, cb)][reg(1, cb)]];
            let w = [u[reg(1, 1 - cb)][reg(0, cb)], u[reg(0, 1 - cb)][reg(1, cb)]];
            let stay: Kraus1 = [[s[0], ZERO], [ZERO, s[1]]];
            let flip: Kraus1 = [[ZERO, w[1]], [w[0], ZERO]];
            // B left in |0⟩ / |1⟩; rows are C's bit
            let mut env0 = [[ZERO; 2]; 2];
            env0[cb][0] = s[0];
            env0[1 - cb][1] = w[1];
            let mut env1 = [[ZERO; 2]; 2];
            env1[cb][1] = s[1];
            env1[1 - cb][0] = w[0];
            for (&a, &structure) in spectators.iter().zip(&structures) {
                let rho = self.pair(a, b);
                let ab = second_qubit_channel(&rho, &[stay, flip]);
                let ac = second_qubit_channel(&rho, &[env0, env1]);
                report.spectators.push(SpectatorTangles {
                    spectator: a,
                    structure,
                    before: pair_tangle(&rho),
                    with_old: pair_tangle(&ab),
                    with_new: vec![pair_tangle(&ac)],
                });
                self.set_pair(a, b, ab);
                with_new.push((a, ac));
            }
        }

        // ρ'_BC = Ũ (ρ_B ⊗ ρ_C) Ũ†
        let (mb, mc) = (self.marginals[b], self.marginals[c]);
        let mut bc = Matrix4::<C64>::zeros();
        for x in 0..2 {
            for y in 0..2 {
                for x2 in 0..2 {
                    for y2 in 0..2 {
                        let mut acc = ZERO;
                        for p in 0..2 {
                            for q in 0..2 {
                                for p2 in 0..2 {
                                    for q2 in 0..2 {
                                        acc += u[2 * x + y][2 * p + q]
                                            * mb[p][p2]
                                            * mc[q][q2]
                                            * u[2 * x2 + y2][2 * p2 + q2].conj();
                                    }
                                }
                            }
                        }
                        bc[(pidx(x, y), pidx(x2, y2))] = acc;
                    }
                }
            }
        }
        let (new_b, new_c) = marginals_of(&bc);
        self.marginals[b] = new_b;
        self.marginals[c] = new_c;
        self.track(c, |_, a| {
            if a == b {
                bc
            } else {
                with_new.iter().find(|(x, _)| *x == a).map(|(_, m)| *m).unwrap_or(bc)
            }
        });
        self.clock += ev.duration;
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn run(scheme: &Scheme) -> PairState {
        let mut ps = PairState::from_scheme(scheme).unwrap();
        for e in scheme.events() {
            ps.apply(&e).unwrap();
        }
        ps
    }

    #[test]
    fn first_collision_tangle() {
        for t in [0.1, 0.5, FRAC_PI_4, 1.3] {
            let ps = run(&crate::scheme::build_chain(2, 1.0, t).unwrap());
            assert!((ps.tangle(0, 1) - (2.0 * t).sin().powi(2)).abs() < 1e-14);
        }
    }

    #[test]
    fn no_collisions_means_zero_tangles() {
        let s = crate::scheme::build_chain(4, 1.0, 0.3).unwrap();
        let ps = PairState::from_scheme(&s).unwrap();
        assert!(ps.tangle_matrix().pairs().all(|(_, _, v)| v == 0.0));
    }

    #[test]
    fn chain_step_recurrences() {
        let t0: f64 = 0.7;
        let t1: f64 = 0.4;
        let events = vec![
            Event::Collision(CollisionEvent::ee(0, 1, 1.0, t0)),
            Event::Collision(CollisionEvent::ee(1, 2, 1.0, t1)),
        ];
        let ps = run(&Scheme::new(3, vec![0], events).unwrap());
        let tab = (2.0 * t0).sin().powi(2);
        assert!((ps.tangle(0, 2) - tab * t1.sin().powi(2)).abs() < 1e-14);
        assert!((ps.tangle(0, 1) - tab * t1.cos().powi(2)).abs() < 1e-14);
        let e_b = t0.sin().powi(2);
        let expected_bc = 4.0 * e_b * e_b * (t1.sin() * t1.cos()).powi(2);
        assert!((ps.tangle(1, 2) - expected_bc).abs() < 1e-14);
        assert!((ps.mean_excitation(2) - e_b * t1.sin().powi(2)).abs() < 1e-14);
    }

    #[test]
    fn old_pair_collision_is_rejected() {
        let events = vec![
            Event::Collision(CollisionEvent::ee(0, 1, 1.0, 0.3)),
            Event::Collision(CollisionEvent::ee(1, 0, 1.0, 0.3)),
        ];
        let s = Scheme::new(2, vec![0], events).unwrap();
        let mut ps = PairState::from_scheme(&s).unwrap();
        let mut it = s.events();
        ps.apply(&it.next().unwrap()).unwrap();
        assert!(matches!(ps.apply(&it.next().unwrap()), Err(Error::IncompatibleCollision(_))));
    }

    #[test]
    fn pair_density_orientation() {
        let ps = run(&crate::scheme::build_chain(3, 1.0, 0.5).unwrap());
        let ab = ps.pair_density(0, 1).unwrap();
        let ba = ps.pair_density(1, 0).unwrap();
        assert_eq!(ab.swapped(), ba);
        assert!((ab.first_marginal()[1][1].re - ps.mean_excitation(0)).abs() < 1e-15);
    }
}
