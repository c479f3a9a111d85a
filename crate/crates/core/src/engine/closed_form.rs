//! Closed-form results that the recurrence engine must reproduce.

use crate::error::{Error, Result};
use crate::qstate::C64;

/// Reduced Planck constant in J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant in J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Rates and phases of an excitation-exchange collision between an old qubit
/// `B` and a new qubit `C`, seen from a spectator `A`.
///
/// `β_s` is the fraction of `B`'s excitation handed to `C`; `β_c = 1 − β_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetuningFactors {
    pub beta_s: f64,
    pub beta_c: f64,
    /// Effective Rabi frequency `Δ = √(Ω² + δ²)`, `δ = (ω_B − ω_C)/2`.
    pub rabi: f64,
    /// `R`, taken on the branch continuous in `t` (it equals
    /// `arctan((δ/Δ) tan(tΔ))` while `|tΔ| < π/2`).
    pub big_r: f64,
    pub r: f64,
    pub s: f64,
}

impl DetuningFactors {
    /// # Errors
    /// Fails on a negative or non-finite coupling or duration.
    pub fn new(coupling: f64, omega_a: f64, omega_b: f64, omega_c: f64, t: f64) -> Result<Self> {
        for (name, v) in [("coupling", coupling), ("duration", t)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!("{name} {v} must be finite and ≥ 0")));
            }
        }
        let delta = 0.5 * (omega_b - omega_c);
        let rabi = coupling.hypot(delta);
        let (sin, cos) = (t * rabi).sin_cos();
        let beta_s = if rabi > 0.0 { (coupling * sin / rabi).powi(2) } else { 0.0 };
        let big_r = if rabi > 0.0 { (delta * sin).atan2(rabi * cos) } else { 0.0 };
        Ok(Self {
            beta_s,
            beta_c: 1.0 - beta_s,
            rabi,
            big_r,
            r: -0.5 * (omega_a - omega_b) * t - 0.5 * (omega_a - omega_c) * t,
            s: -0.5 * (omega_a + omega_b) * t - 0.5 * (omega_a + omega_c) * t,
        })
    }
}

/// Rates of an xy collision, one set per parity block.
///
/// `minus` belongs to the block `{|10⟩, |01⟩}` (detuning `(ω_B − ω_C)/2`),
/// `plus` to `{|11⟩, |00⟩}` (detuning `(ω_B + ω_C)/2`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XyFactors {
    pub rabi_plus: f64,
    pub rabi_minus: f64,
    pub beta_s_plus: f64,
    pub beta_s_minus: f64,
    pub a: C64,
    pub b: C64,
}

impl XyFactors {
    pub fn new(coupling: f64, omega_b: f64, omega_c: f64, t: f64) -> Self {
        let block = |detuning: f64| {
            let rabi = coupling.hypot(detuning);
            let (sin, cos) = (t * rabi).sin_cos();
            let beta_s = if rabi > 0.0 { (coupling * sin / rabi).powi(2) } else { 0.0 };
            let ratio = if rabi > 0.0 { detuning * sin / rabi } else { 0.0 };
            (rabi, beta_s, cos, ratio)
        };
        let (rabi_plus, beta_s_plus, cos_p, ratio_p) = block(0.5 * (omega_b + omega_c));
        let (rabi_minus, beta_s_minus, cos_m, ratio_m) = block(0.5 * (omega_b - omega_c));
        Self {
            rabi_plus,
            rabi_minus,
            beta_s_plus,
            beta_s_minus,
            a: C64::new(-ratio_p, cos_p),
            b: C64::new(ratio_m, cos_m),
        }
    }
}

/// Tangle between qubit `0` and qubit `m` after a resonant chain run,
/// `sin²(2Ωt) sin^{2(m−1)}(Ωt)`.
///
/// # Errors
/// Fails if `m < 1`.
pub fn closed_form_chain_tangle(m: usize, coupling: f64, t: f64) -> Result<f64> {
    if m < 1 {
        return Err(Error::InvalidParameter("chain tangle needs m ≥ 1".into()));
    }
    let x = coupling * t;
    Ok((2.0 * x).sin().powi(2) * x.sin().powi(2 * (m as i32 - 1)))
}

/// Tangle after one resonant collision (`Ω = 1`) of two qubits prepared in
/// `e^{iφ_k} cos θ_k |1⟩ + sin θ_k |0⟩`, evolved by `e^{−iHt}`.
///
/// With `a = cos 2θ₁ cos 2θ₂`, `b = cos 2θ₁ − cos 2θ₂`, `c = sin 2θ₁ sin 2θ₂`
/// and `φ = φ₁ − φ₂` this is
/// `sin²t [(1 − a)² − b² sin²t − c² cos²t sin²φ − b c sin φ sin 2t]`.
pub fn superposed_pair_tangle(theta: (f64, f64), phi: (f64, f64), t: f64) -> f64 {
    let (c1, c2) = ((2.0 * theta.0).cos(), (2.0 * theta.1).cos());
    let a = c1 * c2;
    let b = c1 - c2;
    let c = (2.0 * theta.0).sin() * (2.0 * theta.1).sin();
    let p = phi.0 - phi.1;
    let (st, ct) = t.sin_cos();
    st * st
        * ((1.0 - a).powi(2) - b * b * st * st - c * c * ct * ct * p.sin().powi(2) - b * c * p.sin() * (2.0 * t).sin())
}

/// Concurrences `(C'_{jm}, C'_{j,m+1})` when the excited qubit `m + 1`
/// joins a resonant ground-state chain (qubit `0` initially excited).
///
/// Before the collision the pair `(j, m)` is the Q-state with
/// `ρ₂₂ = sin^{2j} cos²`, `ρ₃₃ = sin^{2m}` and `|ρ₂₃| = sin^{j+m} cos`
/// (arguments `Ωt`); afterwards both pairs are φ-states.
///
/// # Errors
/// Fails unless `j < m`.
pub fn excited_bath_collision_analysis(j: usize, m: usize, coupling: f64, t: f64) -> Result<(f64, f64)> {
    if j >= m {
        return Err(Error::InvalidParameter(format!("need j < m, got j={j}, m={m}")));
    }
    let (s, c) = (coupling * t).sin_cos();
    let r22 = s.powi(2 * j as i32) * c * c;
    let r33 = s.powi(2 * m as i32);
    let r23 = s.powi((j + m) as i32) * c.abs();
    let r44 = 1.0 - r22 - r33;
    let mixed = (r22 * r44).max(0.0).sqrt() * (c * s).abs();
    let stay = 2.0 * (r23 * c.abs() - mixed).max(0.0);
    let moved = 2.0 * (r23 * s.abs() - mixed).max(0.0);
    Ok((stay, moved))
}

/// Temperature at which one qubit in `odds` is thermally excited,
/// `ħω / (k_B ln(odds − 1))`, with `ω` in rad/s.
///
/// # Errors
/// Fails unless `odds > 2` and `ω > 0`.
pub fn bath_temperature(odds: f64, angular_frequency: f64) -> Result<f64> {
    if !(odds > 2.0) || !(angular_frequency > 0.0) || !angular_frequency.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "temperature needs odds > 2 and ω > 0, got {odds} and {angular_frequency}"
        )));
    }
    Ok(HBAR * angular_frequency / (BOLTZMANN * (odds - 1.0).ln()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn detuning_factors_resonant() {
        let f = DetuningFactors::new(1.0, 1.0, 1.0, 1.0, 0.3).unwrap();
        assert!((f.beta_s - 0.3f64.sin().powi(2)).abs() < 1e-15);
        assert_eq!(f.beta_s + f.beta_c, 1.0);
        assert_eq!(f.big_r, 0.0);
        assert_eq!(f.r, 0.0);
        assert!((f.s + 2.0 * 0.3).abs() < 1e-15);
    }

    #[test]
    fn big_r_matches_arctan_on_principal_branch() {
        let f = DetuningFactors::new(1.0, 0.0, 1.7, 0.4, 0.5).unwrap();
        let delta: f64 = 0.65;
        let expected = (delta / f.rabi * (0.5 * f.rabi).tan()).atan();
        assert!((f.big_r - expected).abs() < 1e-14);
    }

    #[test]
    fn detuning_caps_transfer() {
        for k in 0..20 {
            let dw = 0.1 * k as f64;
            let rabi = 1.0f64.hypot(dw / 2.0);
            let f = DetuningFactors::new(1.0, 1.0, 1.0 + dw, 1.0, FRAC_PI_2 / rabi).unwrap();
            assert!(f.beta_s <= 1.0 / (rabi * rabi) + 1e-15);
        }
    }

    #[test]
    fn xy_factors_have_unit_modulus_phases() {
        let f = XyFactors::new(1.0, 1.0, 1.0, 0.7);
        assert!((f.a.norm_sqr() + f.beta_s_plus - 1.0).abs() < 1e-14);
        assert!((f.b.norm_sqr() + f.beta_s_minus - 1.0).abs() < 1e-14);
    }

    #[test]
    fn chain_closed_form_values() {
        assert!((closed_form_chain_tangle(1, 1.0, 0.3).unwrap() - 0.6f64.sin().powi(2)).abs() < 1e-15);
        assert!((closed_form_chain_tangle(4, 1.0, FRAC_PI_4).unwrap() - 0.125).abs() < 1e-15);
        assert!(closed_form_chain_tangle(0, 1.0, 0.3).is_err());
    }

    #[test]
    fn superposed_pair_corners() {
        for t in [0.2, 0.9, 2.0] {
            let basis = superposed_pair_tangle((0.0, FRAC_PI_2), (0.3, -1.2), t);
            assert!((basis - (2.0 * t).sin().powi(2)).abs() < 1e-14);
            let equal = superposed_pair_tangle((FRAC_PI_4, FRAC_PI_4), (0.0, 0.0), t);
            assert!((equal - t.sin().powi(2)).abs() < 1e-14);
            let quarter = superposed_pair_tangle((FRAC_PI_4, FRAC_PI_4), (FRAC_PI_2, 0.0), t);
            assert!((quarter - t.sin().powi(4)).abs() < 1e-14);
        }
    }

    /// `τ = 4|αδ − βγ|²` of the evolved pure state, with the odd block
    /// rotated by `e^{−iHt}`.
    #[test]
    fn superposed_pair_matches_pure_state_tangle() {
        let (th, ph, t): ((f64, f64), (f64, f64), f64) = ((0.3, 1.1), (1.4, 0.2), 0.8);
        let amp = |k: usize, excited: bool| {
            let th = if k == 0 { th.0 } else { th.1 };
            let ph = if k == 0 { ph.0 } else { ph.1 };
            if excited { C64::from_polar(th.cos(), ph) } else { C64::new(th.sin(), 0.0) }
        };
        let (alpha, delta) = (amp(0, true) * amp(1, true), amp(0, false) * amp(1, false));
        let (beta, gamma) = (amp(0, true) * amp(1, false), amp(0, false) * amp(1, true));
        let (s, c) = t.sin_cos();
        let i = C64::i();
        let beta_t = beta * c - i * s * gamma;
        let gamma_t = gamma * c - i * s * beta;
        let want = 4.0 * (alpha * delta - beta_t * gamma_t).norm_sqr();
        assert!((superposed_pair_tangle(th, ph, t) - want).abs() < 1e-14);
    }

    #[test]
    fn excited_bath_kills_long_range_pairs() {
        assert_eq!(excited_bath_collision_analysis(1, 8, 1.0, FRAC_PI_4).unwrap(), (0.0, 0.0));
        let (a, b) = excited_bath_collision_analysis(0, 3, 1.0, FRAC_PI_2).unwrap();
        assert!(a < 1e-15 && b < 1e-15);
        assert!(excited_bath_collision_analysis(3, 3, 1.0, 0.1).is_err());
    }

    #[test]
    fn temperatures() {
        let w = 2.0 * PI * 5e9;
        let t2 = bath_temperature(1e2, w).unwrap();
        let t5 = bath_temperature(1e5, w).unwrap();
        let t10 = bath_temperature(1e10, w).unwrap();
        assert!((t2 - 0.050).abs() < 0.005, "{t2}");
        assert!((t5 - 0.020).abs() < 0.002, "{t5}");
        assert!((t10 - 0.010).abs() < 0.001, "{t10}");
        assert!(bath_temperature(2.0, w).is_err());
    }
}
