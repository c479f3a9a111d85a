//! Dense complex linear algebra on qubit registers.
//!
//! Basis convention: in an `n`-qubit register, qubit `0` is the most
//! significant bit of the basis index and bit value `1` means excited
//! (`|1⟩`). The same convention orders the rows of every operator and of
//! every matrix returned by [`partial_trace`]: `keep[0]` is the most
//! significant bit of the reduced index.

mod propagator;

pub use propagator::{two_qubit_hamiltonian, two_qubit_propagator, HamiltonianKind, Propagator};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Dense complex matrix.
pub type ComplexMatrix = DMatrix<C64>;

/// Tolerance for unitarity, Hermiticity and normalization checks.
pub const STRUCTURAL_TOL: f64 = 1e-12;

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Largest elementwise deviation of `m` from `m†`.
pub fn hermiticity_deviation(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Largest elementwise deviation of `u†u` from the identity.
pub fn unitarity_deviation(u: &ComplexMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let prod = u.adjoint() * u;
    let mut dev: f64 = 0.0;
    for i in 0..prod.nrows() {
        for j in 0..prod.ncols() {
            let target = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            dev = dev.max((prod[(i, j)] - target).norm());
        }
    }
    dev
}

fn check_targets(targets: &[usize], n_qubits: usize) -> Result<()> {
    for (k, &q) in targets.iter().enumerate() {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
        if targets[..k].contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
    }
    Ok(())
}

/// A unitary acting on an ordered list of target qubits.
///
/// `targets[0]` is the most significant bit of the operator's row index.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitary {
    targets: Vec<usize>,
    matrix: ComplexMatrix,
}

impl LocalUnitary {
    /// # Errors
    /// Fails if the matrix dimension is not `2^targets.len()`, targets
    /// repeat, or `u†u` deviates from the identity by more than 1e-12.
    pub fn new(targets: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        let dim = 1usize << targets.len();
        if targets.is_empty() || matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::ArityMismatch { dim: matrix.nrows(), targets: targets.len() });
        }
        check_targets(&targets, usize::MAX)?;
        let deviation = unitarity_deviation(&matrix);
        if deviation > STRUCTURAL_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { targets, matrix })
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn arity(&self) -> usize {
        self.targets.len()
    }

    /// The inverse operation `u†` on the same targets.
    pub fn adjoint(&self) -> Self {
        Self { targets: self.targets.clone(), matrix: self.matrix.adjoint() }
    }
}

/// Pure state of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct RegisterState {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl RegisterState {
    /// Computational basis state with the listed qubits excited.
    ///
    /// # Errors
    /// Fails on out-of-range or repeated indices.
    pub fn basis(n_qubits: usize, excited: &[usize]) -> Result<Self> {
        check_targets(excited, n_qubits)?;
        let mut index = 0usize;
        for &q in excited {
            index |= 1 << (n_qubits - 1 - q);
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    /// Product state; `qubits[q] = [⟨0|q⟩, ⟨1|q⟩]`.
    ///
    /// # Errors
    /// Fails if any single-qubit state is not normalized.
    pub fn product(qubits: &[[C64; 2]]) -> Result<Self> {
        let mut amplitudes = vec![C64::new(1.0, 0.0)];
        for q in qubits {
            let norm_sq = q[0].norm_sqr() + q[1].norm_sqr();
            if (norm_sq - 1.0).abs() > STRUCTURAL_TOL {
                return Err(Error::NotNormalized { norm_sq });
            }
            amplitudes = amplitudes.iter().flat_map(|&a| [a * q[0], a * q[1]]).collect();
        }
        Ok(Self { n_qubits: qubits.len(), amplitudes })
    }

    /// # Errors
    /// Fails if the length is not `2^n_qubits` or the vector is not normalized.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::InvalidParameter(format!(
                "{} amplitudes for {n_qubits} qubits",
                amplitudes.len()
            )));
        }
        let state = Self { n_qubits, amplitudes };
        let norm_sq = state.norm_sqr();
        if (norm_sq - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Multiplies every amplitude by `phase(index)`; used for diagonal
    /// evolutions such as free precession.
    pub fn apply_diagonal(&mut self, phase: impl Fn(usize) -> C64) {
        for (index, a) in self.amplitudes.iter_mut().enumerate() {
            *a *= phase(index);
        }
    }

    /// Applies `u` in place.
    ///
    /// # Errors
    /// Fails if a target is out of range for this register.
    pub fn apply(&mut self, u: &LocalUnitary) -> Result<()> {
        check_targets(u.targets(), self.n_qubits)?;
        let k = u.arity();
        let dim = 1usize << k;
        let shifts: Vec<usize> = u.targets().iter().map(|&q| self.n_qubits - 1 - q).collect();
        let target_mask: usize = shifts.iter().map(|&s| 1usize << s).sum();
        // offsets[l] = register bits for local index l
        let offsets: Vec<usize> = (0..dim)
            .map(|l| {
                (0..k)
                    .filter(|&bit| l & (1 << (k - 1 - bit)) != 0)
                    .map(|bit| 1usize << shifts[bit])
                    .sum()
            })
            .collect();
        let m = u.matrix();
        let mut local = vec![C64::new(0.0, 0.0); dim];
        for base in 0..self.amplitudes.len() {
            if base & target_mask != 0 {
                continue;
            }
            for l in 0..dim {
                local[l] = self.amplitudes[base | offsets[l]];
            }
            for r in 0..dim {
                let mut acc = C64::new(0.0, 0.0);
                for l in 0..dim {
                    acc += m[(r, l)] * local[l];
                }
                self.amplitudes[base | offsets[r]] = acc;
            }
        }
        Ok(())
    }
}

/// Returns `u|ψ⟩`.
///
/// # Errors
/// Fails if a target of `u` is out of range for `state`.
pub fn apply_local_unitary(state: &RegisterState, u: &LocalUnitary) -> Result<RegisterState> {
    let mut out = state.clone();
    out.apply(u)?;
    Ok(out)
}

/// Maps every register index to (reduced index over `keep`, index over the rest).
fn split_index(n_qubits: usize, keep: &[usize], index: usize) -> (usize, usize) {
    let mut kept = 0usize;
    for &q in keep {
        kept = (kept << 1) | ((index >> (n_qubits - 1 - q)) & 1);
    }
    let mut rest = 0usize;
    for q in 0..n_qubits {
        if !keep.contains(&q) {
            rest = (rest << 1) | ((index >> (n_qubits - 1 - q)) & 1);
        }
    }
    (kept, rest)
}

/// Reduced density matrix of `state` on the qubits in `keep`.
///
/// # Errors
/// Fails on out-of-range or repeated indices.
pub fn partial_trace(state: &RegisterState, keep: &[usize]) -> Result<ComplexMatrix> {
    check_targets(keep, state.n_qubits)?;
    let dim = 1usize << keep.len();
    let rest_dim = 1usize << (state.n_qubits - keep.len());
    // columns[rest] holds the kept-subsystem vector for that environment configuration
    let mut columns = DMatrix::<C64>::zeros(dim, rest_dim);
    for (index, &a) in state.amplitudes.iter().enumerate() {
        let (k, r) = split_index(state.n_qubits, keep, index);
        columns[(k, r)] = a;
    }
    Ok(&columns * columns.adjoint())
}

/// Reduced density matrix of an `n_qubits` density matrix on `keep`.
///
/// # Errors
/// Fails on out-of-range indices, a non-square or mis-sized input, or an
/// input that is not Hermitian with unit trace within 1e-12.
pub fn partial_trace_density(
    rho: &ComplexMatrix,
    n_qubits: usize,
    keep: &[usize],
) -> Result<ComplexMatrix> {
    check_targets(keep, n_qubits)?;
    let full = 1usize << n_qubits;
    if rho.nrows() != full || rho.ncols() != full {
        return Err(Error::InvalidDensity(format!(
            "{}x{} matrix for {n_qubits} qubits",
            rho.nrows(),
            rho.ncols()
        )));
    }
    if hermiticity_deviation(rho) > STRUCTURAL_TOL {
        return Err(Error::InvalidDensity("not Hermitian".into()));
    }
    let trace = rho.trace();
    if (trace - C64::new(1.0, 0.0)).norm() > STRUCTURAL_TOL {
        return Err(Error::InvalidDensity(format!("trace {trace}")));
    }
    let dim = 1usize << keep.len();
    let split: Vec<(usize, usize)> =
        (0..full).map(|i| split_index(n_qubits, keep, i)).collect();
    let mut out = DMatrix::<C64>::zeros(dim, dim);
    for i in 0..full {
        let (ki, ri) = split[i];
        for j in 0..full {
            let (kj, rj) = split[j];
            if ri == rj {
                out[(ki, kj)] += rho[(i, j)];
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sigma_plus() -> ComplexMatrix {
        // |1⟩⟨0| in the (|0⟩, |1⟩) ordering
        DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., 0.), c(1., 0.), c(0., 0.)])
    }

    #[test]
    fn identity_tensor_identity() {
        let i2 = ComplexMatrix::identity(2, 2);
        assert_eq!(tensor(&i2, &i2), ComplexMatrix::identity(4, 4));
    }

    #[test]
    fn raising_tensor_lowering_has_single_entry() {
        let sp = sigma_plus();
        let sm = sp.adjoint();
        let m = tensor(&sp, &sm);
        // ⟨10| (σ+ ⊗ σ-) |01⟩ = 1, register indices 2 and 1
        for i in 0..4 {
            for j in 0..4 {
                let expected = if (i, j) == (2, 1) { 1.0 } else { 0.0 };
                assert_eq!(m[(i, j)], c(expected, 0.0));
            }
        }
    }

    #[test]
    fn sigma_y_tensor_sigma_y_is_antidiagonal() {
        let sy = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
        let m = tensor(&sy, &sy);
        let expected = [-1.0, 1.0, 1.0, -1.0];
        for i in 0..4 {
            for j in 0..4 {
                let v = if i + j == 3 { expected[i] } else { 0.0 };
                assert_eq!(m[(i, j)], c(v, 0.0));
            }
        }
    }

    #[test]
    fn basis_and_product_agree() {
        let zero = [c(1., 0.), c(0., 0.)];
        let one = [c(0., 0.), c(1., 0.)];
        let a = RegisterState::basis(3, &[0, 2]).unwrap();
        let b = RegisterState::product(&[one, zero, one]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.amplitudes()[0b101], c(1., 0.));
    }

    #[test]
    fn apply_rejects_bad_targets() {
        let u = LocalUnitary::new(vec![3], ComplexMatrix::identity(2, 2)).unwrap();
        let mut s = RegisterState::basis(2, &[]).unwrap();
        assert_eq!(s.apply(&u), Err(Error::QubitOutOfRange { index: 3, n_qubits: 2 }));
        assert!(matches!(
            LocalUnitary::new(vec![0, 1], ComplexMatrix::identity(2, 2)),
            Err(Error::ArityMismatch { .. })
        ));
        assert_eq!(
            LocalUnitary::new(vec![1, 1], ComplexMatrix::identity(4, 4)),
            Err(Error::DuplicateQubit(1))
        );
    }

    #[test]
    fn apply_respects_target_order() {
        // CNOT with control = first target
        let mut m = ComplexMatrix::zeros(4, 4);
        for (r, col) in [(0, 0), (1, 1), (3, 2), (2, 3)] {
            m[(r, col)] = c(1., 0.);
        }
        let cnot = |targets| LocalUnitary::new(targets, m.clone()).unwrap();
        let s = RegisterState::basis(3, &[2]).unwrap();
        let out = apply_local_unitary(&s, &cnot(vec![2, 0])).unwrap();
        assert_eq!(out, RegisterState::basis(3, &[0, 2]).unwrap());
        let out = apply_local_unitary(&s, &cnot(vec![0, 2])).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn partial_trace_product_and_bell() {
        let plus = [c(FRAC_1_SQRT_2, 0.), c(FRAC_1_SQRT_2, 0.)];
        let zero = [c(1., 0.), c(0., 0.)];
        let s = RegisterState::product(&[plus, zero]).unwrap();
        let r = partial_trace(&s, &[0]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((r[(i, j)] - c(0.5, 0.)).norm() < 1e-15);
            }
        }

        let h = FRAC_1_SQRT_2;
        let bell =
            RegisterState::from_amplitudes(2, vec![c(h, 0.), c(0., 0.), c(0., 0.), c(h, 0.)])
                .unwrap();
        let full = partial_trace(&bell, &[0, 1]).unwrap();
        assert!((full[(0, 3)] - c(0.5, 0.)).norm() < 1e-15);
        assert!((full[(3, 3)] - c(0.5, 0.)).norm() < 1e-15);
        let marginal = partial_trace(&bell, &[1]).unwrap();
        assert!((marginal - ComplexMatrix::identity(2, 2) * c(0.5, 0.)).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_density_matches_state_path() {
        let amps: Vec<C64> = (0..8).map(|k| c(k as f64 + 1.0, 0.5 * k as f64)).collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let s = RegisterState::from_amplitudes(3, amps.iter().map(|a| a / norm).collect()).unwrap();
        let rho = partial_trace(&s, &[0, 1, 2]).unwrap();
        let direct = partial_trace(&s, &[2, 0]).unwrap();
        let via = partial_trace_density(&rho, 3, &[2, 0]).unwrap();
        assert!((direct - via).norm() < 1e-14);
    }
}
