//! Brute-force reference: the full `2ⁿ` state vector evolved event by event.
//!
//! Every event applies the exact propagator of its participants, including
//! their free precession, and the free phase `e^{-i½ω σz t}` to every other
//! qubit, so reported density matrices are in the lab frame.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::engine::PairState;
use crate::error::{Error, Result};
use crate::measures::{
    concurrence_general, one_qubit_tangle, pidx, DensityMatrix4, PairwiseTangleMatrix,
};
use crate::qstate::{LocalUnitary, Propagator, RegisterState, C64};
use crate::scheme::{Event, Scheme, SimultaneousCollision};
use crate::simulate::AnalyticState;

/// Default register cap; `2¹⁴` amplitudes.
pub const DEFAULT_CAP: usize = 14;
/// Environment variable overriding [`DEFAULT_CAP`].
pub const CAP_ENV: &str = "QUILT_ORACLE_CAP";
/// Engine agreement threshold of [`compare_engines`].
pub const COMPARE_TOL: f64 = 1e-9;

/// Cap from [`CAP_ENV`] if set to an integer, else [`DEFAULT_CAP`].
pub fn default_cap() -> usize {
    std::env::var(CAP_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_CAP)
}

/// Global pure state of a register.
#[derive(Debug, Clone)]
pub struct OracleState {
    state: RegisterState,
    frequencies: Vec<f64>,
}

impl OracleState {
    /// Initial state of `scheme`.
    ///
    /// # Errors
    /// Fails if the scheme is invalid or larger than `cap`.
    pub fn new(scheme: &Scheme, cap: usize) -> Result<Self> {
        scheme.validate()?;
        let n = scheme.n_qubits;
        if n > cap {
            return Err(Error::CapExceeded { n_qubits: n, cap });
        }
        if cap > DEFAULT_CAP && n > DEFAULT_CAP {
            log::warn!("oracle register of {n} qubits needs {} MiB", (16usize << n) >> 20);
        }
        let qubits: Vec<[C64; 2]> = (0..n).map(|q| scheme.initial.qubit_state(q)).collect();
        Ok(Self { state: RegisterState::product(&qubits)?, frequencies: scheme.frequencies.clone() })
    }

    pub fn state(&self) -> &RegisterState {
        &self.state
    }

    pub fn n_qubits(&self) -> usize {
        self.state.n_qubits()
    }

    fn bit(&self, k: usize, q: usize) -> usize {
        (k >> (self.n_qubits() - 1 - q)) & 1
    }

    /// `e^{-i t Σ_{q ∉ skip} ω_q (b_q − ½)}` on every basis state.
    fn free_phase(&mut self, skip: &[usize], t: f64) {
        let n = self.n_qubits();
        let active: Vec<(usize, f64)> =
            (0..n).filter(|q| !skip.contains(q)).map(|q| (n - 1 - q, self.frequencies[q])).collect();
        self.state.apply_diagonal(|k| {
            let e: f64 = active.iter().map(|&(shift, w)| w * (((k >> shift) & 1) as f64 - 0.5)).sum();
            C64::from_polar(1.0, -e * t)
        });
    }

    fn group_unitary(&self, m: &SimultaneousCollision) -> Result<LocalUnitary> {
        let targets: Vec<usize> = std::iter::once(m.old).chain(m.new.iter().copied()).collect();
        let k = targets.len();
        let dim = 1usize << k;
        let bit = |x: usize, pos: usize| (x >> (k - 1 - pos)) & 1;
        let mut h = DMatrix::<C64>::zeros(dim, dim);
        for x in 0..dim {
            let e: f64 = targets.iter().enumerate().map(|(p, &q)| self.frequencies[q] * (bit(x, p) as f64 - 0.5)).sum();
            h[(x, x)] = C64::new(e, 0.0);
            if bit(x, 0) == 1 {
                for (j, &omega) in m.couplings.iter().enumerate() {
                    if bit(x, j + 1) == 0 {
                        let y = x ^ (1 << (k - 1)) ^ (1 << (k - 2 - j));
                        h[(y, x)] = C64::new(omega, 0.0);
                        h[(x, y)] = C64::new(omega, 0.0);
                    }
                }
            }
        }
        let eig = SymmetricEigen::new(h);
        let v = &eig.eigenvectors;
        let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::from_polar(1.0, -l * m.duration)));
        LocalUnitary::new(targets, v * phases * v.adjoint())
    }

    fn event_unitaries(&self, event: &Event) -> Result<(Vec<LocalUnitary>, Vec<usize>, f64)> {
        Ok(match event {
            Event::Collision(c) => {
                let u = Propagator::new(c.kind, c.coupling, self.frequencies[c.old], self.frequencies[c.new], c.duration)?;
                (vec![u.to_local_unitary(c.old, c.new)?], vec![c.old, c.new], c.duration)
            }
            Event::ManyToOne(m) => (vec![self.group_unitary(m)?], event.participants(), m.duration),
            Event::TwoGroups(a, b) => {
                (vec![self.group_unitary(a)?, self.group_unitary(b)?], event.participants(), a.duration)
            }
        })
    }

    /// # Errors
    /// Fails on invalid events.
    pub fn apply(&mut self, event: &Event) -> Result<()> {
        let (us, parts, t) = self.event_unitaries(event)?;
        for u in &us {
            self.state.apply(u)?;
        }
        self.free_phase(&parts, t);
        Ok(())
    }

    /// Undoes [`OracleState::apply`] for the same event.
    ///
    /// # Errors
    /// Fails on invalid events.
    pub fn apply_inverse(&mut self, event: &Event) -> Result<()> {
        let (us, parts, t) = self.event_unitaries(event)?;
        self.free_phase(&parts, -t);
        for u in us.iter().rev() {
            self.state.apply(&u.adjoint())?;
        }
        Ok(())
    }

    /// Reduced state of `(i, j)` with `i` first, straight from the amplitudes.
    ///
    /// # Errors
    /// Fails on out-of-range or equal indices.
    pub fn pair_density(&self, i: usize, j: usize) -> Result<DensityMatrix4> {
        let n = self.n_qubits();
        for q in [i, j] {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n_qubits: n });
            }
        }
        if i == j {
            return Err(Error::DuplicateQubit(i));
        }
        let (mi, mj) = (1usize << (n - 1 - i), 1usize << (n - 1 - j));
        let amps = self.state.amplitudes();
        let mut m = nalgebra::Matrix4::<C64>::zeros();
        for (k, &a) in amps.iter().enumerate() {
            if a == C64::new(0.0, 0.0) {
                continue;
            }
            let (bi, bj) = (self.bit(k, i), self.bit(k, j));
            let base = k & !(mi | mj);
            for (ci, cj) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                let k2 = base | if ci == 1 { mi } else { 0 } | if cj == 1 { mj } else { 0 };
                m[(pidx(bi, bj), pidx(ci, cj))] += a * amps[k2].conj();
            }
        }
        Ok(DensityMatrix4::from_trusted(m))
    }

    /// `[[P(0), ⟨0|ρ|1⟩], [⟨1|ρ|0⟩, P(1)]]` of qubit `q`.
    pub fn marginal(&self, q: usize) -> [[C64; 2]; 2] {
        let mask = 1usize << (self.n_qubits() - 1 - q);
        let amps = self.state.amplitudes();
        let mut m = [[C64::new(0.0, 0.0); 2]; 2];
        for (k, &a) in amps.iter().enumerate() {
            if k & mask == 0 {
                m[0][0] += a.norm_sqr();
                m[0][1] += a * amps[k | mask].conj();
            } else {
                m[1][1] += a.norm_sqr();
            }
        }
        m[1][0] = m[0][1].conj();
        m
    }

    /// General concurrence of every pair.
    ///
    /// # Errors
    /// Fails if a reduced state is not positive within tolerance.
    pub fn tangle_matrix(&self) -> Result<PairwiseTangleMatrix> {
        let n = self.n_qubits();
        let mut out = PairwiseTangleMatrix::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                out.set(i, j, concurrence_general(&self.pair_density(i, j)?)?.tangle);
            }
        }
        Ok(out)
    }

    /// `4 det ρ_q − Σ_j τ_qj` for every qubit.
    pub fn ckw_residuals(&self, tangles: &PairwiseTangleMatrix) -> Vec<f64> {
        (0..self.n_qubits())
            .map(|q| crate::measures::ckw_residual(tangles.row(q), one_qubit_tangle(&self.marginal(q))))
            .collect()
    }
}

/// A brute-force run with optional snapshots.
#[derive(Debug, Clone)]
pub struct OracleRun {
    pub scheme: Scheme,
    pub cap: usize,
    /// Event counts after which the tangle matrix is recorded; `0` is the
    /// initial state.
    pub snapshots: Vec<u64>,
}

impl OracleRun {
    pub fn new(scheme: Scheme) -> Self {
        Self { scheme, cap: default_cap(), snapshots: Vec::new() }
    }
}

#[derive(Debug, Clone)]
pub struct OracleOutput {
    pub tangles: PairwiseTangleMatrix,
    pub snapshots: Vec<(u64, PairwiseTangleMatrix)>,
    pub state: OracleState,
}

/// # Errors
/// Fails if the register exceeds the cap or an event is invalid.
pub fn run_oracle(run: &OracleRun) -> Result<OracleOutput> {
    let mut state = OracleState::new(&run.scheme, run.cap)?;
    let mut snapshots = Vec::new();
    if run.snapshots.contains(&0) {
        snapshots.push((0, state.tangle_matrix()?));
    }
    for (k, event) in run.scheme.events().enumerate() {
        state.apply(&event)?;
        let done = k as u64 + 1;
        if run.snapshots.contains(&done) {
            snapshots.push((done, state.tangle_matrix()?));
        }
    }
    Ok(OracleOutput { tangles: state.tangle_matrix()?, snapshots, state })
}

/// Outcome of [`compare_engines`].
#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyReport {
    pub max_diff: f64,
    pub worst_pair: Option<(usize, usize)>,
    /// Event count after which the difference first exceeded the tolerance.
    pub first_offending_event: Option<u64>,
    pub n_events: u64,
    pub engine: &'static str,
}

impl DiscrepancyReport {
    pub fn passed(&self) -> bool {
        self.max_diff <= COMPARE_TOL
    }
}

/// Runs the analytic engine and the oracle side by side and compares every
/// tangle after every event.
///
/// # Errors
/// Fails if the scheme exceeds `cap` or the analytic engines reject it.
pub fn compare_engines(scheme: &Scheme, cap: usize) -> Result<DiscrepancyReport> {
    let mut oracle = OracleState::new(scheme, cap)?;
    let mut analytic = AnalyticState::for_scheme(scheme)?;
    let mut report = DiscrepancyReport {
        max_diff: 0.0,
        worst_pair: None,
        first_offending_event: None,
        n_events: 0,
        engine: analytic.name(),
    };
    for event in scheme.events() {
        oracle.apply(&event)?;
        analytic.apply(&event)?;
        report.n_events += 1;
        let (d, pair) = analytic.tangle_matrix().max_abs_diff(&oracle.tangle_matrix()?);
        if d > report.max_diff {
            report.max_diff = d;
            report.worst_pair = pair;
        }
        if d > COMPARE_TOL && report.first_offending_event.is_none() {
            report.first_offending_event = Some(report.n_events);
        }
    }
    Ok(report)
}

/// Lab-frame pair densities of the engine and the oracle, entry by entry.
pub fn max_density_diff(pairs: &PairState, oracle: &OracleState) -> Result<f64> {
    let mut worst = 0.0f64;
    for (p, &i) in pairs.tracked().iter().enumerate() {
        for &j in &pairs.tracked()[p + 1..] {
            let a = pairs.pair_density(i, j)?;
            let b = oracle.pair_density(i, j)?;
            worst = worst.max((a.entries() - b.entries()).iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    Ok(worst)
}
