use nalgebra::DMatrix;

use super::{ComplexMatrix, LocalUnitary, C64};
use crate::error::{Error, Result};

/// Interaction Hamiltonian of a two-qubit collision (ħ = 1).
///
/// * `ExcitationExchange`: `Ω(σ₊⊗σ₋ + σ₋⊗σ₊)`, conserves excitation number.
/// * `Xy { theta }`: `Ω·n⊗n` with `n = cos θ σx + sin θ σy`; the `σ₊⊗σ₊`
///   term carries the phase `e^{-2iθ}`.
///
/// Both conserve the parity of the excitation number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HamiltonianKind {
    ExcitationExchange,
    Xy { theta: f64 },
}

impl HamiltonianKind {
    pub fn is_excitation_exchange(&self) -> bool {
        matches!(self, HamiltonianKind::ExcitationExchange)
    }
}

/// Register index of `|b c⟩` in a two-qubit operator.
const fn reg(b: usize, c: usize) -> usize {
    2 * b + c
}

/// Closed-form propagator `exp(-i(H_int + ½ω_B σz⊗I + ½ω_C I⊗σz)t)`.
///
/// The Hamiltonian is block diagonal on the parity sectors, so the
/// propagator is stored as two 2×2 blocks: `odd` over `(|10⟩, |01⟩)` and
/// `even` over `(|11⟩, |00⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagator {
    odd: [[C64; 2]; 2],
    even: [[C64; 2]; 2],
}

/// `exp(-i t [[d, κ], [κ*, -d]])`.
fn block(d: f64, kappa: C64, t: f64) -> [[C64; 2]; 2] {
    let big_d = (d * d + kappa.norm_sqr()).sqrt();
    let i = C64::i();
    if big_d == 0.0 {
        return [[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]];
    }
    let (sin, cos) = (big_d * t).sin_cos();
    let sn = sin / big_d;
    [
        [C64::new(cos, -sn * d), -i * sn * kappa],
        [-i * sn * kappa.conj(), C64::new(cos, sn * d)],
    ]
}

fn check_params(coupling: f64, omega_b: f64, omega_c: f64, t: f64) -> Result<()> {
    if !(coupling.is_finite() && coupling >= 0.0) {
        return Err(Error::InvalidParameter(format!("coupling {coupling} must be finite and ≥ 0")));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter(format!("duration {t} must be finite and ≥ 0")));
    }
    if !(omega_b.is_finite() && omega_c.is_finite()) {
        return Err(Error::InvalidParameter("frequencies must be finite".into()));
    }
    Ok(())
}

impl Propagator {
    /// # Errors
    /// Fails on negative or non-finite coupling or duration.
    pub fn new(kind: HamiltonianKind, coupling: f64, omega_b: f64, omega_c: f64, t: f64) -> Result<Self> {
        check_params(coupling, omega_b, omega_c, t)?;
        let odd = block(0.5 * (omega_b - omega_c), C64::new(coupling, 0.0), t);
        let even_coupling = match kind {
            HamiltonianKind::ExcitationExchange => C64::new(0.0, 0.0),
            HamiltonianKind::Xy { theta } => coupling * C64::from_polar(1.0, -2.0 * theta),
        };
        let even = block(0.5 * (omega_b + omega_c), even_coupling, t);
        Ok(Self { odd, even })
    }

    /// Matrix element `⟨out|U|in⟩` with register indices `2b + c`.
    pub fn element(&self, out: usize, inp: usize) -> C64 {
        let sector = |k: usize| match k {
            3 => (true, 0),
            0 => (true, 1),
            2 => (false, 0),
            _ => (false, 1),
        };
        let (eo, ro) = sector(out);
        let (ei, ri) = sector(inp);
        match (eo, ei) {
            (true, true) => self.even[ro][ri],
            (false, false) => self.odd[ro][ri],
            _ => C64::new(0.0, 0.0),
        }
    }

    /// Amplitude `⟨b' c'|U|b c⟩` addressed by bits.
    pub fn amplitude(&self, out: (usize, usize), inp: (usize, usize)) -> C64 {
        self.element(reg(out.0, out.1), reg(inp.0, inp.1))
    }

    /// Dense 4×4 matrix in register order (`|00⟩, |01⟩, |10⟩, |11⟩`).
    pub fn matrix(&self) -> ComplexMatrix {
        DMatrix::from_fn(4, 4, |r, c| self.element(r, c))
    }

    pub fn adjoint(&self) -> Self {
        let dag = |m: [[C64; 2]; 2]| {
            [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]]
        };
        Self { odd: dag(self.odd), even: dag(self.even) }
    }

    /// Embeds the propagator on `(b, c)`; `b` is the first operator qubit.
    ///
    /// # Errors
    /// Fails if `b == c`.
    pub fn to_local_unitary(&self, b: usize, c: usize) -> Result<LocalUnitary> {
        LocalUnitary::new(vec![b, c], self.matrix())
    }
}

/// Full two-qubit Hamiltonian in register order, for test oracles and
/// generic exponentiation.
pub fn two_qubit_hamiltonian(kind: HamiltonianKind, coupling: f64, omega_b: f64, omega_c: f64) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(4, 4);
    h[(reg(1, 1), reg(1, 1))] = C64::new(0.5 * (omega_b + omega_c), 0.0);
    h[(reg(0, 0), reg(0, 0))] = C64::new(-0.5 * (omega_b + omega_c), 0.0);
    h[(reg(1, 0), reg(1, 0))] = C64::new(0.5 * (omega_b - omega_c), 0.0);
    h[(reg(0, 1), reg(0, 1))] = C64::new(-0.5 * (omega_b - omega_c), 0.0);
    h[(reg(1, 0), reg(0, 1))] = C64::new(coupling, 0.0);
    h[(reg(0, 1), reg(1, 0))] = C64::new(coupling, 0.0);
    if let HamiltonianKind::Xy { theta } = kind {
        let k = coupling * C64::from_polar(1.0, -2.0 * theta);
        h[(reg(1, 1), reg(0, 0))] = k;
        h[(reg(0, 0), reg(1, 1))] = k.conj();
    }
    h
}

/// Propagator of one collision between qubits `targets.0` and `targets.1`.
///
/// # Errors
/// Fails on invalid parameters or coinciding targets.
pub fn two_qubit_propagator(
    kind: HamiltonianKind,
    coupling: f64,
    omega_b: f64,
    omega_c: f64,
    t: f64,
    targets: (usize, usize),
) -> Result<LocalUnitary> {
    Propagator::new(kind, coupling, omega_b, omega_c, t)?.to_local_unitary(targets.0, targets.1)
}
