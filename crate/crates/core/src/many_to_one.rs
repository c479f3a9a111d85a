//! Several fresh ground-state qubits colliding at once with one old qubit.
//!
//! With couplings `Ω_k` and `W = |Ω⃗|`, the old qubit `B` exchanges its
//! excitation with the bright mode `Σ_k (Ω_k/W) |1_k⟩`:
//!
//! `U|1_B, 0…⟩ = cos(Wt)|1_B, 0…⟩ − i Σ_k (Ω_k/W) sin(Wt)|0_B, 1_k⟩`
//!
//! and `|0_B, 0…⟩` is stationary. All participants share one frequency, so in
//! the interaction picture the free term drops out. Every pair recurrence is
//! a Kraus map read off these two lines.

use crate::engine::{
    basis_bit, marginals_of, one_to_two, pair_tangle, second_qubit_channel, CollisionReport,
    Kraus1, Kraus12, PairState, SpectatorTangles, ZERO,
};
use crate::error::{Error, Result};
use crate::measures::{pidx, DensityMatrix4};
use crate::qstate::C64;
use crate::scheme::SimultaneousCollision;

/// Tangles predicted for a spectator `A` whose pair with `B` is a Q-state.
#[derive(Debug, Clone, PartialEq)]
pub struct ManyToOneTangles {
    /// `τ'_{AB} = τ_{AB} cos²(Wt)`.
    pub spectator_old: f64,
    /// `τ'_{AC_k} = (Ω_k²/W²) τ_{AB} sin²(Wt)`.
    pub spectator_new: Vec<f64>,
    /// `τ'_{BC_k} = (Ω_k²/W²) ρ₃₃² sin²(2Wt)`.
    pub old_new: Vec<f64>,
    /// `τ'_{C_jC_k} = 4 (Ω_j²Ω_k²/W⁴) ρ₃₃² sin⁴(Wt)`, row-major, zero diagonal.
    pub new_new: Vec<Vec<f64>>,
}

/// Closed-form tangles after a many-to-one collision; `excitation` is the
/// old qubit's mean excitation `ρ₃₃`.
///
/// # Errors
/// Fails if every coupling is zero or one is negative.
pub fn many_to_one_q_tangles(
    excitation: f64,
    tangle_ab: f64,
    couplings: &[f64],
    t: f64,
) -> Result<ManyToOneTangles> {
    if couplings.iter().any(|&c| !(c >= 0.0)) {
        return Err(Error::InvalidParameter("couplings must be ≥ 0".into()));
    }
    let w2: f64 = couplings.iter().map(|c| c * c).sum();
    if w2 == 0.0 {
        return Err(Error::InvalidParameter("many-to-one couplings are all zero".into()));
    }
    let w = w2.sqrt();
    let (s, c) = (w * t).sin_cos();
    let weight: Vec<f64> = couplings.iter().map(|x| x * x / w2).collect();
    let e2 = excitation * excitation;
    Ok(ManyToOneTangles {
        spectator_old: tangle_ab * c * c,
        spectator_new: weight.iter().map(|u| u * tangle_ab * s * s).collect(),
        old_new: weight.iter().map(|u| u * e2 * (2.0 * w * t).sin().powi(2)).collect(),
        new_new: weight
            .iter()
            .enumerate()
            .map(|(j, uj)| {
                weight
                    .iter()
                    .enumerate()
                    .map(|(k, uk)| if j == k { 0.0 } else { 4.0 * uj * uk * e2 * s.powi(4) })
                    .collect()
            })
            .collect(),
    })
}

/// [`PairState::collide_many_to_one`] as a free function.
///
/// # Errors
/// See [`PairState::collide_many_to_one`].
pub fn collide_many_to_one(pairs: &mut PairState, ev: &SimultaneousCollision) -> Result<CollisionReport> {
    pairs.collide_many_to_one(ev)
}

/// [`PairState::collide_two_groups`] as a free function.
///
/// # Errors
/// See [`PairState::collide_two_groups`].
pub fn collide_two_groups(
    pairs: &mut PairState,
    first: &SimultaneousCollision,
    second: &SimultaneousCollision,
) -> Result<CollisionReport> {
    pairs.collide_two_groups(first, second)
}

impl PairState {
    fn check_many_to_one(&self, ev: &SimultaneousCollision) -> Result<()> {
        let b = ev.old;
        self.check_index(b)?;
        if ev.new.len() != ev.couplings.len() || ev.new.is_empty() {
            return Err(Error::InvalidParameter(
                "many-to-one collision needs one coupling per new qubit".into(),
            ));
        }
        if ev.couplings.iter().any(|&c| !(c >= 0.0 && c.is_finite())) || ev.coupling_norm() == 0.0 {
            return Err(Error::InvalidParameter("many-to-one couplings must be ≥ 0, not all zero".into()));
        }
        if !(ev.duration >= 0.0 && ev.duration.is_finite()) {
            return Err(Error::InvalidParameter(format!("duration {} must be finite and ≥ 0", ev.duration)));
        }
        for (k, &c) in ev.new.iter().enumerate() {
            self.check_index(c)?;
            if c == b || ev.new[..k].contains(&c) {
                return Err(Error::DuplicateQubit(c));
            }
            if self.is_tracked(c) {
                return Err(Error::IncompatibleCollision(format!("qubit {c} already collided")));
            }
            if basis_bit(&self.marginals[c]) != Some(0) {
                return Err(Error::IncompatibleCollision(format!(
                    "many-to-one collisions need new qubits in |0⟩; qubit {c} is not"
                )));
            }
            if self.frequencies[c] != self.frequencies[b] {
                return Err(Error::IncompatibleCollision(
                    "many-to-one participants must share one frequency".into(),
                ));
            }
        }
        for &a in self.tracked() {
            if a != b {
                let s = DensityMatrix4::classify(&self.pair(a, b));
                if !s.is_x_family() {
                    return Err(Error::IncompatibleCollision(format!(
                        "pair ({a},{b}) has {s:?} structure; many-to-one needs X-family pairs"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Applies one group without advancing the clock.
    fn many_to_one_step(&mut self, ev: &SimultaneousCollision) -> Result<CollisionReport> {
        self.check_many_to_one(ev)?;
        let b = ev.old;
        let w = ev.coupling_norm();
        let (sin, cos) = (w * ev.duration).sin_cos();
        let one = C64::new(1.0, 0.0);
        let cos_c = C64::new(cos, 0.0);
        let hop: Vec<C64> = ev.couplings.iter().map(|x| C64::new(0.0, -sin * x / w)).collect();
        let n_new = ev.new.len();

        let spectators: Vec<usize> = self.tracked().iter().copied().filter(|&a| a != b).collect();
        let mut report = CollisionReport {
            spectators: Vec::with_capacity(spectators.len()),
            ground_exchange: true,
        };

        // B kept: the bright mode stays empty or B loses its excitation to C_j
        let mut ab_ops: Vec<Kraus1> = vec![[[one, ZERO], [ZERO, cos_c]]];
        ab_ops.extend(hop.iter().map(|&h| [[ZERO, h], [ZERO, ZERO]]));
        let ac_ops = |k: usize| -> Vec<Kraus1> {
            let mut ops = vec![[[one, ZERO], [ZERO, hop[k]]], [[ZERO, cos_c], [ZERO, ZERO]]];
            ops.extend((0..n_new).filter(|&j| j != k).map(|j| [[ZERO, hop[j]], [ZERO, ZERO]]));
            ops
        };

        let mut with_new = Vec::with_capacity(spectators.len());
        for &a in &spectators {
            let rho = self.pair(a, b);
            let ab = second_qubit_channel(&rho, &ab_ops);
            let acs: Vec<_> = (0..n_new).map(|k| second_qubit_channel(&rho, &ac_ops(k))).collect();
            report.spectators.push(SpectatorTangles {
                spectator: a,
                structure: DensityMatrix4::classify(&rho),
                before: pair_tangle(&rho),
                with_old: pair_tangle(&ab),
                with_new: acs.iter().map(pair_tangle).collect(),
            });
            with_new.push((a, ab, acs));
        }

        let rho_b = self.marginals[b];
        let bc: Vec<_> = (0..n_new)
            .map(|k| {
                let mut env0: Kraus12 = [[ZERO; 2]; 4];
                env0[pidx(0, 0)][0] = one;
                env0[pidx(1, 0)][1] = cos_c;
                env0[pidx(0, 1)][1] = hop[k];
                let mut ops = vec![env0];
                for j in (0..n_new).filter(|&j| j != k) {
                    let mut op: Kraus12 = [[ZERO; 2]; 4];
                    op[pidx(0, 0)][1] = hop[j];
                    ops.push(op);
                }
                one_to_two(&rho_b, &ops)
            })
            .collect();
        let cc = |j: usize, k: usize| {
            let mut env0: Kraus12 = [[ZERO; 2]; 4];
            env0[pidx(0, 0)][0] = one;
            env0[pidx(1, 0)][1] = hop[j];
            env0[pidx(0, 1)][1] = hop[k];
            let mut b1: Kraus12 = [[ZERO; 2]; 4];
            b1[pidx(0, 0)][1] = cos_c;
            let mut ops = vec![env0, b1];
            for m in (0..n_new).filter(|&m| m != j && m != k) {
                let mut op: Kraus12 = [[ZERO; 2]; 4];
                op[pidx(0, 0)][1] = hop[m];
                ops.push(op);
            }
            one_to_two(&rho_b, &ops)
        };

        self.ensure_tracked(b);
        for (a, ab, _) in &with_new {
            self.set_pair(*a, b, *ab);
        }
        let (new_b, _) = marginals_of(&bc[0]);
        self.marginals[b] = new_b;
        for k in 0..n_new {
            let c = ev.new[k];
            self.marginals[c] = marginals_of(&bc[k]).1;
            self.track(c, |_, a| {
                if a == b {
                    return bc[k];
                }
                if let Some(j) = ev.new[..k].iter().position(|&x| x == a) {
                    return cc(j, k);
                }
                with_new
                    .iter()
                    .find(|(x, _, _)| *x == a)
                    .map(|(_, _, acs)| acs[k])
                    .expect("every tracked qubit is the old qubit, a new qubit or a spectator")
            });
        }
        Ok(report)
    }

    /// Many-to-one collision with fresh ground-state qubits.
    ///
    /// # Errors
    /// Fails if a new qubit already collided or is not in `|0⟩`, if the
    /// participants' frequencies differ, or if a pair containing the old
    /// qubit is outside the X family.
    pub fn collide_many_to_one(&mut self, ev: &SimultaneousCollision) -> Result<CollisionReport> {
        let report = self.many_to_one_step(ev)?;
        self.clock += ev.duration;
        Ok(report)
    }

    /// Two simultaneous many-to-one collisions on disjoint groups. The two
    /// propagators commute, so the groups are applied one after the other.
    ///
    /// # Errors
    /// Fails if the groups overlap, their durations differ, or either group
    /// is rejected by [`PairState::collide_many_to_one`]. The state is left
    /// unchanged on error.
    pub fn collide_two_groups(
        &mut self,
        first: &SimultaneousCollision,
        second: &SimultaneousCollision,
    ) -> Result<CollisionReport> {
        let group = |m: &SimultaneousCollision| {
            std::iter::once(m.old).chain(m.new.iter().copied()).collect::<Vec<_>>()
        };
        let g2 = group(second);
        if let Some(&q) = group(first).iter().find(|q| g2.contains(q)) {
            return Err(Error::DuplicateQubit(q));
        }
        if first.duration != second.duration {
            return Err(Error::InvalidParameter("simultaneous groups must share one duration".into()));
        }
        let mut next = self.clone();
        let mut report = next.many_to_one_step(first)?;
        let r2 = next.many_to_one_step(second)?;
        report.spectators.extend(r2.spectators);
        next.clock += first.duration;
        *self = next;
        Ok(report)
    }
}
