//! Minimal-basis molecular electronic structure with a UCCSD variational
//! quantum eigensolver simulated on a statevector.

pub mod basis;
pub mod error;
pub mod fermion_qubit;
pub mod geometry;
pub mod integrals;
pub mod linalg;
pub mod pipeline;
pub mod scf;
pub mod statevector;
pub mod uccsd;
pub mod vqe;

pub use error::{Error, Result};
