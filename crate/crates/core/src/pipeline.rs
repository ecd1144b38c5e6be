//! Molecule → RHF → spin-orbital Hamiltonian → UCCSD/VQE, in one place.

use crate::basis::{BasisLibrary, MoleculeSpec};
use crate::error::Result;
use crate::fermion_qubit::{qubit_hamiltonian, QubitOperator};
use crate::integrals::AOIntegrals;
use crate::scf::{mo_transform, run_rhf, MOIntegrals, RHFSolution};
use crate::statevector::StateVector;
use crate::uccsd::AnsatzProgram;
use crate::vqe::{exact_ground_energy, optimize_with_engine, ProgressRecord, Sector, SectorEngine, SweepConfig, VQEResult};

/// RHF on a molecule with the given basis library.
pub fn hartree_fock(mol: &MoleculeSpec, library: &BasisLibrary) -> Result<(AOIntegrals, RHFSolution)> {
    let basis = library.build(mol)?;
    let ao = AOIntegrals::compute(&basis, mol);
    let hf = run_rhf(&ao, mol)?;
    Ok((ao, hf))
}

/// Everything the quantum part of the calculation needs.
#[derive(Debug, Clone)]
pub struct ElectronicProblem {
    pub mo: MOIntegrals,
    pub hamiltonian: QubitOperator,
    pub program: AnsatzProgram,
    pub reference: StateVector,
    /// ⟨HF|H|HF⟩ from the MO integrals.
    pub hf_energy: f64,
}

impl ElectronicProblem {
    pub fn from_molecule(mol: &MoleculeSpec, library: &BasisLibrary) -> Result<Self> {
        let (ao, hf) = hartree_fock(mol, library)?;
        Self::from_mo(mo_transform(&ao, &hf)?)
    }

    pub fn from_mo(mo: MOIntegrals) -> Result<Self> {
        let m = mo.n_spin_orbitals();
        let n = mo.n_electrons();
        let hamiltonian = qubit_hamiltonian(&mo)?;
        let program = AnsatzProgram::uccsd(m, n)?;
        let reference = StateVector::hartree_fock(m, n)?;
        let hf_energy = mo.reference_energy();
        Ok(Self {
            mo,
            hamiltonian,
            program,
            reference,
            hf_energy,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.mo.n_spin_orbitals()
    }

    pub fn engine(&self) -> Result<SectorEngine> {
        SectorEngine::new(&self.hamiltonian, &self.program, &self.reference)
    }

    pub fn solve(&self, cfg: &SweepConfig) -> Result<VQEResult> {
        self.solve_with_progress(cfg, &mut |_| {})
    }

    pub fn solve_with_progress(&self, cfg: &SweepConfig, progress: &mut dyn FnMut(&ProgressRecord)) -> Result<VQEResult> {
        let engine = self.engine()?;
        optimize_with_engine(&engine, cfg, &vec![0.0; self.program.parameter_count()], progress)
    }

    /// Exact ground energy in the closed-shell spin sector.
    pub fn fci_energy(&self) -> Result<f64> {
        exact_ground_energy(&self.hamiltonian, Sector::closed_shell(self.mo.n_electrons()))
    }
}
