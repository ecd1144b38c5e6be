//! JSON report types. Every report carries a `command` field naming the
//! subcommand that produced it; energies are in Hartree, lengths in Å and
//! angles in degrees.

use molvqe::basis::{MoleculeSpec, BOHR_IN_ANGSTROM};
use molvqe::geometry::{GeometryOptimization, ParaboloidFit};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomReport {
    pub element: String,
    /// Å.
    pub position: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoleculeReport {
    pub charge: i32,
    pub atoms: Vec<AtomReport>,
}

impl From<&MoleculeSpec> for MoleculeReport {
    fn from(m: &MoleculeSpec) -> Self {
        Self {
            charge: m.charge(),
            atoms: m
                .atoms()
                .iter()
                .map(|a| AtomReport {
                    element: a.element.symbol().to_string(),
                    position: a.position.map(|x| x * BOHR_IN_ANGSTROM),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HfReport {
    pub command: String,
    pub molecule: MoleculeReport,
    pub n_basis: usize,
    pub n_electrons: usize,
    pub nuclear_repulsion: f64,
    pub energy: f64,
    pub iterations: usize,
    /// Ascending; the lowest `n_electrons / 2` are doubly occupied.
    pub orbital_energies: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledEnergy {
    pub shots: usize,
    pub seed: u64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub command: String,
    /// `molecule`, `template`, `preset` or `fcidump`, with its argument.
    pub source: String,
    pub molecule: Option<MoleculeReport>,
    pub n_qubits: usize,
    pub n_electrons: usize,
    pub n_excitations: usize,
    pub pauli_terms: usize,
    pub e_hf: f64,
    pub e_uccsd: f64,
    pub e_fci: Option<f64>,
    pub sweeps: usize,
    /// Energy after each sweep.
    pub sweep_energies: Vec<f64>,
    pub converged: bool,
    pub evaluations: usize,
    /// Optimized θ in program order.
    pub parameters: Vec<f64>,
    pub sampled: Option<SampledEnergy>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub params: Vec<f64>,
    pub e_hf: Option<f64>,
    pub e_uccsd: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub command: String,
    pub template: String,
    pub parameter_names: Vec<String>,
    pub points: Vec<ScanRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// Rotation-gate angle; θ = −φ/2.
    pub phi: f64,
    /// Ansatz parameter of exp(θ(A − A†)).
    pub theta: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub command: String,
    pub excitation: String,
    /// Position of the excitation in the program.
    pub excitation_index: usize,
    /// `phi` or `theta`.
    pub variable: String,
    pub e_hf: f64,
    pub points: Vec<SweepRow>,
    /// Minimum over the swept range, refined between grid points.
    pub minimum: SweepRow,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizeReport {
    pub command: String,
    #[serde(flatten)]
    pub result: GeometryOptimization,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub command: String,
    pub column: String,
    pub n_points: usize,
    pub fit: ParaboloidFit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FcidumpReport {
    pub command: String,
    pub n_orbitals: usize,
    pub n_electrons: usize,
    pub n_qubits: usize,
    pub core_energy: f64,
    pub e_hf: f64,
    pub pauli_terms: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub molecule: String,
    pub qubits: usize,
    /// Geometry used (fixed mode) or found (optimize mode).
    pub params: Vec<f64>,
    pub reference_params: Vec<f64>,
    pub e_uccsd: Option<f64>,
    pub e_reference: f64,
    /// e_uccsd − e_reference.
    pub deviation: Option<f64>,
    pub e_hf: Option<f64>,
    /// `ok`, `timeout` or `error`.
    pub status: String,
    pub message: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub command: String,
    /// `fixed` or `optimize`.
    pub mode: String,
    pub rows: Vec<TableRow>,
}
