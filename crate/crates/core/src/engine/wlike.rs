//! Single-excitation ("W-like") states `Σ a_i |0…1_i…0⟩`.
//!
//! Excitation-exchange collisions at a common frequency keep the register in
//! this manifold, so any pair of qubits may collide, old or new, at O(1) cost
//! per event. Free precession at a common frequency is a global phase here,
//! so amplitudes are the same in the lab and rotating frames.

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::measures::{DensityMatrix4, PairwiseTangleMatrix};
use crate::qstate::{HamiltonianKind, C64};
use crate::scheme::{Event, Scheme};

/// Normalization tolerance for user-supplied amplitudes.
pub const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct WLikeState {
    amplitudes: Vec<C64>,
}

impl WLikeState {
    /// `|0…1_q…0⟩`.
    ///
    /// # Errors
    /// Fails if `q ≥ n`.
    pub fn single_excitation(n: usize, q: usize) -> Result<Self> {
        if q >= n {
            return Err(Error::QubitOutOfRange { index: q, n_qubits: n });
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); n];
        amplitudes[q] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    /// # Errors
    /// Fails unless `Σ|a_i|² = 1` within [`NORM_TOL`].
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(C64::norm_sqr).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { amplitudes })
    }

    /// Initial state of a scheme that stays in the single-excitation
    /// manifold: one excited qubit, excitation-exchange events and a common
    /// frequency.
    ///
    /// # Errors
    /// Fails if the scheme is not W-like; many-to-one events are checked
    /// when applied.
    pub fn from_scheme(scheme: &Scheme) -> Result<Self> {
        scheme.validate()?;
        if scheme.initial.superposed.is_some() || scheme.initial.excited.len() != 1 {
            return Err(Error::IncompatibleCollision(
                "W-like runs start from exactly one excited qubit".into(),
            ));
        }
        if !scheme.uniform_frequency() {
            return Err(Error::IncompatibleCollision("W-like runs need a common frequency".into()));
        }
        Self::single_excitation(scheme.n_qubits, scheme.initial.excited[0])
    }

    pub fn n_qubits(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `|Σ|a_i|² − 1|`.
    pub fn norm_error(&self) -> f64 {
        (self.amplitudes.iter().map(C64::norm_sqr).sum::<f64>() - 1.0).abs()
    }

    /// Excitation-exchange collision between any two qubits.
    ///
    /// # Errors
    /// Fails on out-of-range or equal indices.
    pub fn collide(&mut self, k1: usize, k2: usize, coupling: f64, t: f64) -> Result<()> {
        let n = self.n_qubits();
        for k in [k1, k2] {
            if k >= n {
                return Err(Error::QubitOutOfRange { index: k, n_qubits: n });
            }
        }
        if k1 == k2 {
            return Err(Error::DuplicateQubit(k1));
        }
        let (s, c) = (coupling * t).sin_cos();
        let (a1, a2) = (self.amplitudes[k1], self.amplitudes[k2]);
        let mis = C64::new(0.0, -s);
        self.amplitudes[k1] = a1 * c + mis * a2;
        self.amplitudes[k2] = a2 * c + mis * a1;
        Ok(())
    }

    /// Applies an excitation-exchange event; many-to-one collisions map the
    /// old amplitude `a_B` to `cos(|Ω⃗|t) a_B − i Σ_k (Ω_k/|Ω⃗|) sin(|Ω⃗|t) a_k`
    /// and each `a_k` symmetrically.
    ///
    /// # Errors
    /// Fails on xy events or invalid indices.
    pub fn apply(&mut self, event: &Event) -> Result<()> {
        match event {
            Event::Collision(c) => {
                if c.kind != HamiltonianKind::ExcitationExchange {
                    return Err(Error::IncompatibleCollision(
                        "xy collisions leave the single-excitation manifold".into(),
                    ));
                }
                self.collide(c.old, c.new, c.coupling, c.duration)
            }
            Event::ManyToOne(m) => self.apply_star(m),
            Event::TwoGroups(a, b) => {
                self.apply_star(a)?;
                self.apply_star(b)
            }
        }
    }

    fn apply_star(&mut self, m: &crate::scheme::SimultaneousCollision) -> Result<()> {
        let n = self.n_qubits();
        if let Some(&q) = std::iter::once(&m.old).chain(&m.new).find(|&&q| q >= n) {
            return Err(Error::QubitOutOfRange { index: q, n_qubits: n });
        }
        let w = m.coupling_norm();
        let (s, c) = (w * m.duration).sin_cos();
        // |B⟩ and the bright mode Σ(Ω_k/W)|C_k⟩ rotate; dark modes stay put
        let u: Vec<f64> = m.couplings.iter().map(|x| x / w).collect();
        let b = self.amplitudes[m.old];
        let bright: C64 = m.new.iter().zip(&u).map(|(&k, &uk)| self.amplitudes[k] * uk).sum();
        let mis = C64::new(0.0, -s);
        let new_bright = bright * c + mis * b;
        self.amplitudes[m.old] = b * c + mis * bright;
        for (&k, &uk) in m.new.iter().zip(&u) {
            self.amplitudes[k] += (new_bright - bright) * uk;
        }
        Ok(())
    }

    /// `4|a_i|²|a_j|²`.
    pub fn tangle(&self, i: usize, j: usize) -> f64 {
        if i == j {
            0.0
        } else {
            4.0 * self.amplitudes[i].norm_sqr() * self.amplitudes[j].norm_sqr()
        }
    }

    pub fn tangle_matrix(&self) -> PairwiseTangleMatrix {
        let n = self.n_qubits();
        let mut out = PairwiseTangleMatrix::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                out.set(i, j, self.tangle(i, j));
            }
        }
        out
    }

    /// The Q-state of `(i, j)`.
    ///
    /// # Errors
    /// Fails on out-of-range or equal indices.
    pub fn pair_density(&self, i: usize, j: usize) -> Result<DensityMatrix4> {
        let n = self.n_qubits();
        for k in [i, j] {
            if k >= n {
                return Err(Error::QubitOutOfRange { index: k, n_qubits: n });
            }
        }
        if i == j {
            return Err(Error::DuplicateQubit(i));
        }
        let (ai, aj) = (self.amplitudes[i], self.amplitudes[j]);
        let mut m = Matrix4::zeros();
        m[(1, 1)] = C64::new(ai.norm_sqr(), 0.0);
        m[(2, 2)] = C64::new(aj.norm_sqr(), 0.0);
        m[(1, 2)] = ai * aj.conj();
        m[(2, 1)] = aj * ai.conj();
        m[(3, 3)] = C64::new(1.0 - ai.norm_sqr() - aj.norm_sqr(), 0.0);
        Ok(DensityMatrix4::from_trusted(m))
    }
}

/// Pure form of [`WLikeState::collide`].
///
/// # Errors
/// Fails if the input is not normalized within [`NORM_TOL`] or on invalid
/// indices.
pub fn collide_old_pair_wlike(
    state: &WLikeState,
    k1: usize,
    k2: usize,
    coupling: f64,
    t: f64,
) -> Result<WLikeState> {
    if state.norm_error() > NORM_TOL {
        return Err(Error::NotNormalized { norm_sq: 1.0 + state.norm_error() });
    }
    let mut out = state.clone();
    out.collide(k1, k2, coupling, t)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn zero_time_is_identity() {
        let s = WLikeState::from_amplitudes(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).unwrap();
        assert_eq!(collide_old_pair_wlike(&s, 0, 1, 1.0, 0.0).unwrap(), s);
    }

    #[test]
    fn half_period_swaps() {
        let s = WLikeState::single_excitation(3, 0).unwrap();
        let out = collide_old_pair_wlike(&s, 0, 2, 1.0, FRAC_PI_2).unwrap();
        assert!(out.amplitudes()[0].norm() < 1e-15);
        assert!((out.amplitudes()[2] - C64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(WLikeState::from_amplitudes(vec![C64::new(0.5, 0.0)]).is_err());
        let s = WLikeState { amplitudes: vec![C64::new(0.5, 0.0), C64::new(0.0, 0.0)] };
        assert!(matches!(collide_old_pair_wlike(&s, 0, 1, 1.0, 0.1), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn uniform_amplitudes_give_uniform_tangles() {
        let n = 8;
        let a = C64::new(1.0 / (n as f64).sqrt(), 0.0);
        let s = WLikeState::from_amplitudes(vec![a; n]).unwrap();
        assert!(s.tangle_matrix().pairs().all(|(_, _, v)| (v - 4.0 / 64.0).abs() < 1e-15));
        let rho = s.pair_density(2, 5).unwrap();
        assert_eq!(rho.structure(), crate::measures::Structure::Q);
    }
}
