//! Entry-level transfer maps for pair states.
//!
//! A collision that leaves a spectator `A` untouched acts on `ρ_{AB}` as a
//! channel on the second qubit. Every recurrence of the engine is one of the
//! two shapes below, applied with Kraus operators read off the collision
//! propagator.

use nalgebra::Matrix4;

use crate::measures::pidx;
use crate::qstate::C64;

/// Single-qubit operator `K[out_bit][in_bit]`.
pub(crate) type Kraus1 = [[C64; 2]; 2];

/// One-to-two-qubit operator `K[out_pidx][in_bit]`, output in the
/// excitation-first layout.
pub(crate) type Kraus12 = [[C64; 2]; 4];

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);

/// `Σ_K (I ⊗ K) ρ (I ⊗ K)†` for a pair state in the excitation-first layout.
pub(crate) fn second_qubit_channel(rho: &Matrix4<C64>, ks: &[Kraus1]) -> Matrix4<C64> {
    let mut out = Matrix4::<C64>::zeros();
    for a in 0..2 {
        for b in 0..2 {
            for a2 in 0..2 {
                for b2 in 0..2 {
                    let r = rho[(pidx(a, b), pidx(a2, b2))];
                    if r == ZERO {
                        continue;
                    }
                    for k in ks {
                        for x in 0..2 {
                            let left = k[x][b];
                            if left == ZERO {
                                continue;
                            }
                            for y in 0..2 {
                                let right = k[y][b2];
                                if right != ZERO {
                                    out[(pidx(a, x), pidx(a2, y))] += left * r * right.conj();
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// `Σ_K K ρ₁ K†` mapping a single-qubit state to a pair state.
pub(crate) fn one_to_two(rho: &Kraus1, ks: &[Kraus12]) -> Matrix4<C64> {
    let mut out = Matrix4::<C64>::zeros();
    for k in ks {
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = ZERO;
                for b in 0..2 {
                    for b2 in 0..2 {
                        acc += k[i][b] * rho[b][b2] * k[j][b2].conj();
                    }
                }
                out[(i, j)] += acc;
            }
        }
    }
    out
}
