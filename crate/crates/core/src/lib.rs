//! Pairwise entanglement dynamics in qubit collision models.
//!
//! Qubits are indexed from `0`; bit value `1` is the excited state. Every
//! collision lasts a finite time during which all qubits precess under
//! their own `½ωσz`, and the two (or more) participants additionally
//! interact. Tangles do not depend on the frame, but density-matrix entries
//! reported by the engines and the oracle are in the lab frame.

// `!(x >= 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod engine;
pub mod error;
pub mod many_to_one;
pub mod measures;
pub mod oracle;
pub mod qstate;
pub mod scheme;
pub mod simulate;

pub use error::{Error, Result};
