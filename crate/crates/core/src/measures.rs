//! Concurrence and tangle of two-qubit states.
//!
//! [`DensityMatrix4`] stores its entries in the excitation-first layout:
//! row/column `0..4` correspond to `|11⟩, |10⟩, |01⟩, |00⟩` of the ordered
//! pair `(first, second)`. Entry `(0, 0)` is therefore `ρ₁₁` and entry
//! `(1, 2)` is `ρ₂₃`, the coherence between "first excited" and "second
//! excited". This is the layout in which the sparsity classes are defined.
//! Register-ordered matrices from [`crate::qstate::partial_trace`] convert
//! with [`DensityMatrix4::from_register_order`], which is the index
//! reversal `i ↦ 3 − i`.

use nalgebra::{Matrix4, SymmetricEigen};

use crate::error::{Error, Result};
use crate::qstate::{ComplexMatrix, C64};

/// Entries with modulus at or below this are structurally zero.
pub const ZERO_TOL: f64 = 1e-12;

/// Eigenvalues down to `-NEGATIVITY_TOL` are treated as rounding noise.
pub const NEGATIVITY_TOL: f64 = 1e-10;

/// Eigenvalues and populations at or below this are rounding noise. They
/// enter the concurrence through square roots, where `1e-17` would become
/// `3e-9`.
pub const NOISE_FLOOR: f64 = 1e-14;

/// Sparsity class of a two-qubit density matrix; `Q ⊂ Phi ⊂ X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Structure {
    /// Nonzero only on the diagonal and at `ρ₂₃, ρ₁₄` (and conjugates).
    X,
    /// First row and column (`|11⟩`) vanish.
    Box,
    /// `X` with `ρ₁₄ = 0`.
    Phi,
    /// `Phi` with `ρ₁₁ = 0`.
    Q,
    General,
}

impl Structure {
    /// Whether the class is `X` or one of its subclasses.
    pub fn is_x_family(self) -> bool {
        matches!(self, Structure::X | Structure::Phi | Structure::Q)
    }

    /// Whether a matrix of class `self` also belongs to `other`.
    pub fn within(self, other: Structure) -> bool {
        use Structure::*;
        matches!(
            (self, other),
            (_, General) | (Q, X | Phi | Q | Box) | (Phi, X | Phi) | (X, X) | (Box, Box)
        )
    }
}

/// Two-qubit density matrix with its sparsity class.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix4 {
    entries: Matrix4<C64>,
    structure: Structure,
}

fn hermitian_part_deviation(m: &Matrix4<C64>) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..4 {
        for j in i..4 {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

fn min_eigenvalue(m: &Matrix4<C64>) -> f64 {
    SymmetricEigen::new(*m).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

impl DensityMatrix4 {
    /// Validates `entries` (excitation-first layout) and classifies them.
    ///
    /// # Errors
    /// Fails if the matrix is not Hermitian with unit trace within 1e-12 or
    /// has an eigenvalue below `-1e-10`.
    pub fn new(entries: Matrix4<C64>) -> Result<Self> {
        let structure = Self::classify(&entries);
        Self::with_structure(entries, structure)
    }

    /// Like [`DensityMatrix4::new`] but with a declared structure.
    ///
    /// # Errors
    /// Additionally fails if the entries do not fit the declared class.
    pub fn with_structure(entries: Matrix4<C64>, structure: Structure) -> Result<Self> {
        if hermitian_part_deviation(&entries) > ZERO_TOL {
            return Err(Error::InvalidDensity("not Hermitian".into()));
        }
        let trace = entries.trace();
        if (trace - C64::new(1.0, 0.0)).norm() > ZERO_TOL {
            return Err(Error::InvalidDensity(format!("trace {trace}")));
        }
        let lowest = min_eigenvalue(&entries);
        if lowest < -NEGATIVITY_TOL {
            return Err(Error::NotPositive { eigenvalue: lowest });
        }
        if !Self::classify(&entries).within(structure) {
            return Err(Error::InvalidDensity(format!("entries are not of class {structure:?}")));
        }
        Ok(Self { entries, structure })
    }

    /// Builds from entries already known to be valid; the class is computed.
    pub(crate) fn from_trusted(entries: Matrix4<C64>) -> Self {
        let structure = Self::classify(&entries);
        Self { entries, structure }
    }

    /// Converts a register-ordered 4×4 (`|00⟩, |01⟩, |10⟩, |11⟩`).
    ///
    /// # Errors
    /// Fails on a wrong shape or an invalid density matrix.
    pub fn from_register_order(m: &ComplexMatrix) -> Result<Self> {
        if m.nrows() != 4 || m.ncols() != 4 {
            return Err(Error::InvalidDensity(format!("{}x{} matrix", m.nrows(), m.ncols())));
        }
        Self::new(Matrix4::from_fn(|i, j| m[(3 - i, 3 - j)]))
    }

    pub fn to_register_order(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(4, 4, |i, j| self.entries[(3 - i, 3 - j)])
    }

    /// Most specific class consistent with the entries.
    pub fn classify(m: &Matrix4<C64>) -> Structure {
        let zero = |i: usize, j: usize| m[(i, j)].norm() <= ZERO_TOL;
        let x_slots = |i: usize, j: usize| i == j || i + j == 3;
        let x_pattern = (0..4).all(|i| (0..4).all(|j| x_slots(i, j) || zero(i, j)));
        if x_pattern {
            return match (zero(0, 3), zero(0, 0)) {
                (true, true) => Structure::Q,
                (true, false) => Structure::Phi,
                _ => Structure::X,
            };
        }
        if (0..4).all(|k| zero(0, k) && zero(k, 0)) {
            Structure::Box
        } else {
            Structure::General
        }
    }

    pub fn entries(&self) -> &Matrix4<C64> {
        &self.entries
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    /// The same state with the two qubits exchanged.
    pub fn swapped(&self) -> Self {
        let p = [0usize, 2, 1, 3];
        Self { entries: Matrix4::from_fn(|i, j| self.entries[(p[i], p[j])]), structure: self.structure }
    }

    /// Reduced state of the first qubit as `[[P(0), ⟨0|ρ|1⟩], [⟨1|ρ|0⟩, P(1)]]`.
    pub fn first_marginal(&self) -> [[C64; 2]; 2] {
        marginal(&self.entries, true)
    }

    /// Reduced state of the second qubit, same layout as [`Self::first_marginal`].
    pub fn second_marginal(&self) -> [[C64; 2]; 2] {
        marginal(&self.entries, false)
    }
}

/// Index of `|a b⟩` in the excitation-first layout.
pub(crate) const fn pidx(a: usize, b: usize) -> usize {
    2 * (1 - a) + (1 - b)
}

fn marginal(m: &Matrix4<C64>, first: bool) -> [[C64; 2]; 2] {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            for e in 0..2 {
                out[x][y] += if first { m[(pidx(x, e), pidx(y, e))] } else { m[(pidx(e, x), pidx(e, y))] };
            }
        }
    }
    out
}

/// Concurrence `C` and tangle `τ = C²` of a two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangleValue {
    pub concurrence: f64,
    pub tangle: f64,
}

impl TangleValue {
    /// Clamps `c` into `[0, 1]` and squares it.
    pub fn from_concurrence(c: f64) -> Self {
        let concurrence = c.clamp(0.0, 1.0);
        Self { concurrence, tangle: concurrence * concurrence }
    }
}

/// Wootters concurrence for an arbitrary two-qubit density matrix.
///
/// The spin flip uses `Y = σy⊗σy`. With `ρ = W W†` from the spectral
/// decomposition (`W = V √Λ`), the square roots `√λᵢ` of the eigenvalues of
/// `ρρ̃` are the singular values of the symmetric matrix `Wᵀ Y W`; taking
/// them from an SVD keeps near-zero values accurate to rounding instead of
/// to its square root.
///
/// # Errors
/// Fails if an eigenvalue of `ρ` is below `-1e-10`.
pub fn concurrence_general(rho: &DensityMatrix4) -> Result<TangleValue> {
    wootters(&rho.entries, true).map(TangleValue::from_concurrence)
}

/// General concurrence with every negative eigenvalue clamped to zero, for
/// states produced internally by exact maps.
pub(crate) fn concurrence_clamped(m: &Matrix4<C64>) -> f64 {
    wootters(m, false).unwrap_or(0.0).clamp(0.0, 1.0)
}

fn wootters(m: &Matrix4<C64>, strict: bool) -> Result<f64> {
    let eig = SymmetricEigen::new(*m);
    let mut w = eig.eigenvectors;
    for (k, &mu) in eig.eigenvalues.iter().enumerate() {
        if strict && mu < -NEGATIVITY_TOL {
            return Err(Error::NotPositive { eigenvalue: mu });
        }
        let root = if mu > NOISE_FLOOR { mu.sqrt() } else { 0.0 };
        for r in 0..4 {
            w[(r, k)] *= root;
        }
    }
    // Y is antidiagonal (-1, 1, 1, -1) in either qubit-pair ordering
    let y = Matrix4::from_fn(|i, j| {
        if i + j == 3 {
            C64::new(if i == 0 || i == 3 { -1.0 } else { 1.0 }, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let t = w.transpose() * y * w;
    let mut s: Vec<f64> = t.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s[0] - s[1] - s[2] - s[3])
}

/// `C_X` evaluated on the X-slots of `m`; exact for every X-family state.
pub(crate) fn x_concurrence(m: &Matrix4<C64>) -> f64 {
    let d = |k: usize| if m[(k, k)].re > NOISE_FLOOR { m[(k, k)].re } else { 0.0 };
    let a = m[(1, 2)].norm() - (d(0) * d(3)).sqrt();
    let b = m[(0, 3)].norm() - (d(1) * d(2)).sqrt();
    2.0 * a.max(b).max(0.0)
}

/// Closed-form concurrence selected by the declared structure.
///
/// For `Box` states the concurrence is `2|ρ₂₃|`: with the `|11⟩` row and
/// column empty, `ρρ̃` is block triangular and has the single nonzero
/// eigenvalue `4|ρ₂₃|²`.
///
/// # Errors
/// Fails for `Structure::General`.
pub fn concurrence_structured(rho: &DensityMatrix4) -> Result<TangleValue> {
    let m = &rho.entries;
    let c = match rho.structure {
        Structure::X | Structure::Phi => x_concurrence(m),
        Structure::Q | Structure::Box => 2.0 * m[(1, 2)].norm(),
        Structure::General => return Err(Error::GeneralStructure),
    };
    Ok(TangleValue::from_concurrence(c))
}

/// One-qubit-versus-rest tangle `4 det ρ_A` of a globally pure state.
pub fn one_qubit_tangle(rho_a: &[[C64; 2]; 2]) -> f64 {
    let det = rho_a[0][0] * rho_a[1][1] - rho_a[0][1] * rho_a[1][0];
    4.0 * det.re
}

/// Monogamy residual `τ_bipartite − Σ τ_pairs`; non-negative for valid inputs.
pub fn ckw_residual(pair_tangles: &[f64], bipartite: f64) -> f64 {
    bipartite - pair_tangles.iter().sum::<f64>()
}

/// Pair reduced state of the Dicke state with `n_up` excitations among `n` qubits.
///
/// # Errors
/// Fails if `n < 2` or `n_up > n`.
pub fn dicke_pair_density(n: usize, n_up: usize) -> Result<DensityMatrix4> {
    if n < 2 || n_up > n {
        return Err(Error::InvalidParameter(format!("Dicke state with N={n}, n={n_up}")));
    }
    let (nf, kf) = (n as f64, n_up as f64);
    let norm = nf * (nf - 1.0);
    let mut m = Matrix4::<C64>::zeros();
    let mixed = kf * (nf - kf) / norm;
    m[(0, 0)] = C64::new(kf * (kf - 1.0) / norm, 0.0);
    m[(1, 1)] = C64::new(mixed, 0.0);
    m[(2, 2)] = C64::new(mixed, 0.0);
    m[(1, 2)] = C64::new(mixed, 0.0);
    m[(2, 1)] = C64::new(mixed, 0.0);
    m[(3, 3)] = C64::new((nf - kf) * (nf - kf - 1.0) / norm, 0.0);
    Ok(DensityMatrix4::from_trusted(m))
}

/// Symmetric `n×n` matrix of pairwise tangles with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseTangleMatrix {
    n: usize,
    values: Vec<f64>,
}

impl PairwiseTangleMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, values: vec![0.0; n * n] }
    }

    /// # Errors
    /// Fails unless `rows` is square, symmetric, zero on the diagonal and
    /// within `[0, 1]`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut out = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidParameter("tangle matrix is not square".into()));
            }
            for (j, &v) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&v) || (i == j && v != 0.0) || v != rows[j][i] {
                    return Err(Error::InvalidParameter(format!("bad tangle entry ({i},{j}) = {v}")));
                }
                out.values[i * n + j] = v;
            }
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Sets `τ_ij = τ_ji`; the diagonal is left untouched.
    pub fn set(&mut self, i: usize, j: usize, tangle: f64) {
        if i != j {
            self.values[i * self.n + j] = tangle;
            self.values[j * self.n + i] = tangle;
        }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    /// Off-diagonal entries `(i, j, τ_ij)` with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| (i, j, self.get(i, j))))
    }

    /// Largest entrywise difference and the pair where it occurs.
    ///
    /// # Panics
    /// Panics if the sizes differ.
    pub fn max_abs_diff(&self, other: &Self) -> (f64, Option<(usize, usize)>) {
        assert_eq!(self.n, other.n, "tangle matrices of different size");
        let mut worst = (0.0, None);
        for (i, j, v) in self.pairs() {
            let d = (v - other.get(i, j)).abs();
            if d > worst.0 {
                worst = (d, Some((i, j)));
            }
        }
        worst
    }
}
