//! Variational minimization of ⟨Ψ(θ)|H|Ψ(θ)⟩ over the UCCSD parameters by
//! cyclic coordinate descent, and an exact-diagonalization reference.
//!
//! Each factor of the ansatz is exp(θG) with G³ = −G, so along one coordinate
//! the state is y₀ + sin θ·y₁ + (1 − cos θ)·y₂ and the energy is a quadratic
//! form in (1, sin θ, 1 − cos θ) whose 3×3 matrix costs three Hamiltonian
//! applications. The 1-D problems are then solved exactly on [−π, π].

mod brent;
mod lanczos;

pub use brent::{brent, minimize_on_interval, Minimum};
pub use lanczos::{lowest_eigenpair, LanczosOptions, LanczosResult};

use num_complex::Complex64;
use std::f64::consts::PI;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::fermion_qubit::QubitOperator;
use crate::statevector::{inner_product, spin_counts, SectorBasis, SparseOperator, StateVector, HERMITIAN_RESIDUE};
use crate::uccsd::{apply_ansatz, AnsatzProgram, ExcitationAction};

/// Grid points used to locate the best basin before Brent refinement.
const BRACKET_GRID: usize = 25;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub max_sweeps: usize,
    /// A sweep improving the energy by less than this ends the optimization.
    pub energy_tolerance: f64,
    pub bracket: (f64, f64),
    pub theta_tolerance: f64,
    /// Checked before every 1-D solve.
    pub deadline: Option<Instant>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            max_sweeps: 3,
            energy_tolerance: 1e-9,
            bracket: (-PI, PI),
            theta_tolerance: 1e-10,
            deadline: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_sweeps == 0 {
            return Err(Error::InvalidArgument("max_sweeps must be at least 1".into()));
        }
        if !(self.energy_tolerance > 0.0 && self.theta_tolerance > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        if !(self.bracket.0 < self.bracket.1) {
            return Err(Error::InvalidArgument(format!(
                "empty bracket [{}, {}]",
                self.bracket.0, self.bracket.1
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VQEResult {
    pub parameters: Vec<f64>,
    pub energy: f64,
    /// Energy at the starting parameters.
    pub initial_energy: f64,
    /// Energy after each completed sweep.
    pub sweep_energies: Vec<f64>,
    pub sweeps: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// One 1-D solve, reported as it completes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProgressRecord {
    pub sweep: usize,
    pub excitation: usize,
    pub theta: f64,
    pub energy: f64,
}

impl ProgressRecord {
    pub const CSV_HEADER: &'static str = "sweep,excitation,theta,energy";

    pub fn to_csv(&self) -> String {
        format!("{},{},{:.12e},{:.12e}", self.sweep, self.excitation, self.theta, self.energy)
    }
}

/// Spin sector (N_α, N_β) with α on even qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sector {
    pub n_alpha: usize,
    pub n_beta: usize,
}

impl Sector {
    pub fn closed_shell(n_electrons: usize) -> Self {
        Self {
            n_alpha: n_electrons / 2,
            n_beta: n_electrons - n_electrons / 2,
        }
    }
}

/// Energy of the ansatz state, evaluated on the full 2^M register by Pauli
/// rotations and term-wise expectation.
pub fn energy_at(h: &QubitOperator, prog: &AnsatzProgram, reference: &StateVector, theta: &[f64]) -> Result<f64> {
    apply_ansatz(reference, prog, theta)?.expectation(h)
}

/// The ansatz and Hamiltonian restricted to the spin sectors occupied by the
/// reference state.
#[derive(Debug, Clone)]
pub struct SectorEngine {
    basis: SectorBasis,
    hamiltonian: SparseOperator,
    actions: Vec<ExcitationAction>,
    reference: Vec<Complex64>,
}

impl SectorEngine {
    pub fn new(h: &QubitOperator, prog: &AnsatzProgram, reference: &StateVector) -> Result<Self> {
        let n = prog.n_qubits();
        if h.n_qubits() != n || reference.n_qubits() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: if h.n_qubits() != n { h.n_qubits() } else { reference.n_qubits() },
            });
        }
        let mut sectors: Vec<(usize, usize)> = reference
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(b, _)| spin_counts(b as u64, n))
            .collect();
        sectors.sort_unstable();
        sectors.dedup();
        let basis = SectorBasis::from_sectors(n, &sectors)?;
        let hamiltonian = SparseOperator::restrict(h, &basis)?;
        let actions = prog
            .excitations()
            .iter()
            .map(|e| ExcitationAction::new(e, &basis))
            .collect::<Result<Vec<_>>>()?;
        let reference = basis.states().iter().map(|&s| reference.amplitudes()[s as usize]).collect();
        Ok(Self {
            basis,
            hamiltonian,
            actions,
            reference,
        })
    }

    pub fn basis(&self) -> &SectorBasis {
        &self.basis
    }

    pub fn hamiltonian(&self) -> &SparseOperator {
        &self.hamiltonian
    }

    pub fn parameter_count(&self) -> usize {
        self.actions.len()
    }

    fn check(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.actions.len() {
            return Err(Error::DimensionMismatch {
                expected: self.actions.len(),
                found: theta.len(),
            });
        }
        Ok(())
    }

    /// Ansatz amplitudes over the sector basis.
    pub fn state(&self, theta: &[f64]) -> Result<Vec<Complex64>> {
        self.check(theta)?;
        let mut psi = self.reference.clone();
        for (a, &t) in self.actions.iter().zip(theta) {
            a.rotate(&mut psi, t);
        }
        Ok(psi)
    }

    pub fn full_state(&self, theta: &[f64]) -> Result<StateVector> {
        StateVector::from_amplitudes(self.basis.n_qubits(), self.basis.embed(&self.state(theta)?))
    }

    fn expectation(&self, psi: &[Complex64]) -> Result<f64> {
        let e = self.hamiltonian.expectation(psi);
        if e.im.abs() > HERMITIAN_RESIDUE {
            return Err(Error::NotHermitian(e.im.abs()));
        }
        Ok(e.re)
    }

    pub fn energy(&self, theta: &[f64]) -> Result<f64> {
        self.expectation(&self.state(theta)?)
    }

    /// Gram matrix R_ij = Re⟨y_i|H|y_j⟩ of the coordinate-k slice, given the
    /// state after factors 0..k.
    fn slice(&self, prefix: &[Complex64], k: usize, theta: &[f64]) -> [[f64; 3]; 3] {
        let dim = prefix.len();
        let mut y = [prefix.to_vec(), vec![Complex64::default(); dim], vec![Complex64::default(); dim]];
        {
            let [y0, y1, y2] = &mut y;
            self.actions[k].apply_generator(y0, y1);
            self.actions[k].apply_generator(y1, y2);
        }
        for (a, &t) in self.actions.iter().zip(theta).skip(k + 1) {
            for v in y.iter_mut() {
                a.rotate(v, t);
            }
        }
        let hy: Vec<Vec<Complex64>> = y
            .iter()
            .map(|v| {
                let mut out = vec![Complex64::default(); dim];
                self.hamiltonian.apply(v, &mut out);
                out
            })
            .collect();
        let mut r = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                let v = 0.5 * (inner_product(&y[i], &hy[j]).re + inner_product(&y[j], &hy[i]).re);
                r[i][j] = v;
                r[j][i] = v;
            }
        }
        r
    }
}

fn slice_energy(r: &[[f64; 3]; 3], t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    let v = [1.0, s, 1.0 - c];
    let mut e = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            e += v[i] * r[i][j] * v[j];
        }
    }
    e
}

fn slice_derivative(r: &[[f64; 3]; 3], t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    let v = [1.0, s, 1.0 - c];
    let dv = [0.0, c, s];
    let mut e = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            e += v[i] * r[i][j] * dv[j];
        }
    }
    2.0 * e
}

pub fn sequential_optimize(
    h: &QubitOperator,
    prog: &AnsatzProgram,
    reference: &StateVector,
    cfg: &SweepConfig,
) -> Result<VQEResult> {
    let engine = SectorEngine::new(h, prog, reference)?;
    optimize_with_engine(&engine, cfg, &vec![0.0; prog.parameter_count()], &mut |_| {})
}

/// Coordinate descent from `initial`, reporting every 1-D solve to `progress`.
pub fn optimize_with_engine(
    engine: &SectorEngine,
    cfg: &SweepConfig,
    initial: &[f64],
    progress: &mut dyn FnMut(&ProgressRecord),
) -> Result<VQEResult> {
    cfg.validate()?;
    let mut theta = initial.to_vec();
    let initial_energy = engine.energy(&theta)?;
    let mut energy = initial_energy;
    let mut sweep_energies = Vec::new();
    let mut evaluations = 1;
    let mut converged = false;
    let (lo, hi) = cfg.bracket;

    for sweep in 1..=cfg.max_sweeps {
        let mut prefix = engine.reference.clone();
        for k in 0..theta.len() {
            if cfg.deadline.is_some_and(|d| Instant::now() >= d) {
                return Err(Error::TimeLimit);
            }
            let r = engine.slice(&prefix, k, &theta);
            let current = slice_energy(&r, theta[k]);
            let df = |t: f64| slice_derivative(&r, t);
            let m = minimize_on_interval(|t| slice_energy(&r, t), Some(&df), lo, hi, BRACKET_GRID, cfg.theta_tolerance);
            evaluations += m.evaluations;
            let step_energy = if m.f < current {
                theta[k] = m.x;
                m.f
            } else {
                current
            };
            progress(&ProgressRecord {
                sweep,
                excitation: k,
                theta: theta[k],
                energy: step_energy,
            });
            engine.actions[k].rotate(&mut prefix, theta[k]);
        }
        let e = engine.expectation(&prefix)?;
        evaluations += 1;
        sweep_energies.push(e);
        let improvement = energy - e;
        energy = e.min(energy);
        if improvement < cfg.energy_tolerance {
            converged = true;
            break;
        }
    }
    Ok(VQEResult {
        parameters: theta,
        energy,
        initial_energy,
        sweeps: sweep_energies.len(),
        sweep_energies,
        evaluations,
        converged,
    })
}

/// Lowest eigenpair of H within one spin sector.
pub fn exact_ground_state(h: &QubitOperator, sector: Sector) -> Result<(SectorBasis, LanczosResult)> {
    let basis = SectorBasis::fixed_spin(h.n_qubits(), sector.n_alpha, sector.n_beta)?;
    let op = SparseOperator::restrict(h, &basis)?;
    // Deterministic start with weight on every basis state.
    let start: Vec<Complex64> = (0..basis.dim())
        .map(|k| Complex64::new(1.0 + 0.5 * (k as f64 * 0.618).sin(), 0.0))
        .collect();
    let result = lowest_eigenpair(basis.dim(), |x, y| op.apply(x, y), &start, &LanczosOptions::default())?;
    Ok((basis, result))
}

/// Exact (FCI) ground energy of H within one spin sector.
pub fn exact_ground_energy(h: &QubitOperator, sector: Sector) -> Result<f64> {
    exact_ground_state(h, sector).map(|(_, r)| r.eigenvalue)
}
