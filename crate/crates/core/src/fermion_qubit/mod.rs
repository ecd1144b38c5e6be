//! Second-quantized operators, Pauli algebra and the Jordan-Wigner map.

mod fcidump;
mod fermion;
mod jordan_wigner;
mod pauli;

pub use fcidump::{export_fcidump, import_fcidump};
pub use fermion::{build_hamiltonian, number_operator, sz_operator, FermionOperator, FermionTerm, Ladder};
pub use jordan_wigner::jordan_wigner;
pub use pauli::{PauliLetter, PauliString, PauliWord, QubitOperator, MAX_QUBITS, PRUNE_THRESHOLD};

pub(crate) use pauli::i_pow;

use crate::error::Result;
use crate::scf::MOIntegrals;

/// Normal-ordered second-quantized Hamiltonian mapped to qubits.
pub fn qubit_hamiltonian(mo: &MOIntegrals) -> Result<QubitOperator> {
    jordan_wigner(&build_hamiltonian(mo).normal_ordered(), mo.n_spin_orbitals())
}
