use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported element `{0}`")]
    UnsupportedElement(String),

    #[error("odd electron count {0}: only closed-shell molecules are supported")]
    OddElectronCount(i64),

    #[error("invalid molecule: {0}")]
    InvalidMolecule(String),

    #[error("atoms {0} and {1} coincide")]
    CoincidentAtoms(usize, usize),

    #[error("Boys function requires x >= 0, got {0}")]
    NegativeBoysArgument(f64),

    #[error("overlap matrix is linearly dependent (smallest eigenvalue {0:e})")]
    LinearDependence(f64),

    #[error("SCF did not converge after {iterations} iterations (last energy {last_energy:.10})")]
    ScfNotConverged { iterations: usize, last_energy: f64 },

    #[error("Lanczos did not converge after {0} iterations")]
    LanczosNotConverged(usize),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for {bound} modes")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("operator is not Hermitian (imaginary residue {0:e})")]
    NotHermitian(f64),

    #[error("Pauli exponential requires a unit coefficient, got {0}")]
    NonUnitCoefficient(String),

    #[error("invalid excitation space: {0}")]
    InvalidExcitationSpace(String),

    #[error("invalid geometry parameters: {0}")]
    InvalidGeometry(String),

    #[error("paraboloid fit: {0}")]
    Fit(String),

    #[error("malformed FCIDUMP: {0}")]
    Fcidump(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("time limit exceeded")]
    TimeLimit,
}

impl Error {
    /// True for failures of an iterative numerical method (as opposed to bad input).
    pub fn is_numeric_failure(&self) -> bool {
        matches!(
            self,
            Error::ScfNotConverged { .. }
                | Error::LanczosNotConverged(_)
                | Error::LinearDependence(_)
                | Error::Fit(_)
                | Error::NotHermitian(_)
        )
    }
}
