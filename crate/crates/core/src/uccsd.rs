//! UCCSD excitations, their Jordan-Wigner generators and the ansatz circuit.
//!
//! Excitations are spin-orbital excitations out of the determinant that fills
//! modes 0..N. Singles i→a come first, then doubles (i<j)→(a<b), each kind in
//! lexicographic order of (occupied, virtual) indices. The generator of an
//! excitation is A − A† with A = a†_a a_i or A = a†_b a†_a a_j a_i, and the
//! ansatz applies exp(θ_k (A_k − A_k†)) for k in program order.

use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fermion_qubit::{jordan_wigner, FermionOperator, Ladder, PauliString};
use crate::statevector::{SectorBasis, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExcitationKind {
    Single,
    Double,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Excitation {
    occupied: Vec<usize>,
    virtuals: Vec<usize>,
}

impl Excitation {
    pub fn single(i: usize, a: usize) -> Result<Self> {
        if i == a {
            return Err(Error::InvalidExcitationSpace(format!("{i} -> {a} is not an excitation")));
        }
        Ok(Self {
            occupied: vec![i],
            virtuals: vec![a],
        })
    }

    /// Indices are sorted, so (j, i) and (i, j) name the same excitation.
    pub fn double(i: usize, j: usize, a: usize, b: usize) -> Result<Self> {
        let (i, j) = (i.min(j), i.max(j));
        let (a, b) = (a.min(b), a.max(b));
        if i == j || a == b || [i, j].iter().any(|o| *o == a || *o == b) {
            return Err(Error::InvalidExcitationSpace(format!(
                "{i},{j} -> {a},{b} is not an excitation"
            )));
        }
        Ok(Self {
            occupied: vec![i, j],
            virtuals: vec![a, b],
        })
    }

    pub fn kind(&self) -> ExcitationKind {
        if self.occupied.len() == 1 {
            ExcitationKind::Single
        } else {
            ExcitationKind::Double
        }
    }

    pub fn occupied(&self) -> &[usize] {
        &self.occupied
    }

    pub fn virtuals(&self) -> &[usize] {
        &self.virtuals
    }

    fn max_mode(&self) -> usize {
        self.occupied.iter().chain(&self.virtuals).copied().max().unwrap_or(0)
    }

    /// A, the excitation string: a†_a a_i or a†_b a†_a a_j a_i.
    pub fn excitation_operator(&self) -> FermionOperator {
        let mut ops: Vec<Ladder> = self.virtuals.iter().rev().map(|&v| Ladder::create(v)).collect();
        ops.extend(self.occupied.iter().rev().map(|&o| Ladder::annihilate(o)));
        let mut f = FermionOperator::new();
        f.push(ops, Complex64::new(1.0, 0.0));
        f
    }

    /// A|b⟩ for a basis state, with the fermionic sign.
    pub fn apply_to_basis(&self, state: u64) -> Option<(f64, u64)> {
        let mut s = state;
        let mut sign = 1.0;
        let ops = self
            .occupied
            .iter()
            .map(|&o| (o, false))
            .chain(self.virtuals.iter().map(|&v| (v, true)));
        for (mode, dagger) in ops {
            let bit = 1u64 << mode;
            if (s & bit != 0) == dagger {
                return None;
            }
            if (s & (bit - 1)).count_ones() % 2 == 1 {
                sign = -sign;
            }
            s ^= bit;
        }
        Some((sign, s))
    }
}

impl fmt::Display for Excitation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}->{}", join(&self.occupied), join(&self.virtuals))
    }
}

/// Parses the `Display` form: `i->a` or `i,j->a,b`.
impl FromStr for Excitation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidExcitationSpace(format!("cannot parse `{s}` (expected i->a or i,j->a,b)"));
        let (occ, virt) = s.split_once("->").ok_or_else(bad)?;
        let list = |part: &str| -> Result<Vec<usize>> {
            part.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| bad())).collect()
        };
        match (list(occ)?.as_slice(), list(virt)?.as_slice()) {
            ([i], [a]) => Self::single(*i, *a),
            ([i, j], [a, b]) => Self::double(*i, *j, *a, *b),
            _ => Err(bad()),
        }
    }
}

/// All spin-conserving singles and doubles from modes 0..N into N..M.
pub fn generate_excitations(n_electrons: usize, n_spin_orbitals: usize) -> Result<Vec<Excitation>> {
    if n_electrons % 2 != 0 || n_spin_orbitals % 2 != 0 {
        return Err(Error::InvalidExcitationSpace(format!(
            "N={n_electrons} and M={n_spin_orbitals} must both be even"
        )));
    }
    if n_electrons > n_spin_orbitals {
        return Err(Error::InvalidExcitationSpace(format!(
            "N={n_electrons} exceeds M={n_spin_orbitals}"
        )));
    }
    let (n, m) = (n_electrons, n_spin_orbitals);
    let mut out = Vec::new();
    for i in 0..n {
        for a in n..m {
            if i % 2 == a % 2 {
                out.push(Excitation::single(i, a)?);
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for a in n..m {
                for b in a + 1..m {
                    if (i % 2 + j % 2) == (a % 2 + b % 2) {
                        out.push(Excitation::double(i, j, a, b)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// A − A†.
pub fn generator(exc: &Excitation) -> FermionOperator {
    let a = exc.excitation_operator();
    a.add(&a.adjoint().scale(Complex64::new(-1.0, 0.0)))
}

/// The excitation list together with each generator's Pauli expansion.
#[derive(Debug, Clone)]
pub struct AnsatzProgram {
    n_qubits: usize,
    n_electrons: usize,
    excitations: Vec<Excitation>,
    terms: Vec<Vec<PauliString>>,
}

impl AnsatzProgram {
    /// Full UCCSD program for N electrons in M spin orbitals.
    pub fn uccsd(n_qubits: usize, n_electrons: usize) -> Result<Self> {
        Self::from_excitations(n_qubits, n_electrons, generate_excitations(n_electrons, n_qubits)?)
    }

    pub fn from_excitations(n_qubits: usize, n_electrons: usize, excitations: Vec<Excitation>) -> Result<Self> {
        if n_electrons > n_qubits {
            return Err(Error::InvalidExcitationSpace(format!("N={n_electrons} exceeds M={n_qubits}")));
        }
        let mut terms = Vec::with_capacity(excitations.len());
        for exc in &excitations {
            if exc.max_mode() >= n_qubits {
                return Err(Error::IndexOutOfRange {
                    index: exc.max_mode(),
                    bound: n_qubits,
                });
            }
            let q = jordan_wigner(&generator(exc).normal_ordered(), n_qubits)?;
            let mut strings = Vec::with_capacity(q.len());
            for p in q.strings() {
                if p.coefficient.re.abs() > 1e-12 {
                    return Err(Error::InvalidExcitationSpace(format!(
                        "generator of {exc} has a non-imaginary term {p}"
                    )));
                }
                strings.push(p);
            }
            for (k, a) in strings.iter().enumerate() {
                if strings[k + 1..].iter().any(|b| !a.word.commutes_with(&b.word)) {
                    return Err(Error::InvalidExcitationSpace(format!(
                        "generator of {exc} has non-commuting Pauli terms"
                    )));
                }
            }
            terms.push(strings);
        }
        Ok(Self {
            n_qubits,
            n_electrons,
            excitations,
            terms,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_electrons(&self) -> usize {
        self.n_electrons
    }

    pub fn parameter_count(&self) -> usize {
        self.excitations.len()
    }

    pub fn excitations(&self) -> &[Excitation] {
        &self.excitations
    }

    pub fn pauli_terms(&self, k: usize) -> &[PauliString] {
        &self.terms[k]
    }

    /// Position of an excitation in the program.
    pub fn index_of(&self, exc: &Excitation) -> Option<usize> {
        self.excitations.iter().position(|e| e == exc)
    }

    /// Same program with every excitation's Pauli factors in reverse order.
    pub fn with_reversed_terms(&self) -> Self {
        let mut out = self.clone();
        out.terms.iter_mut().for_each(|t| t.reverse());
        out
    }

    /// The determinant filling modes 0..N.
    pub fn reference(&self) -> Result<StateVector> {
        StateVector::hartree_fock(self.n_qubits, self.n_electrons)
    }

    /// Text listing: one header line per excitation followed by its Pauli
    /// terms, coefficients as (re, im) and letters from qubit 0 upward.
    pub fn dump(&self) -> String {
        let mut out = format!(
            "# qubits {} electrons {} parameters {}\n",
            self.n_qubits,
            self.n_electrons,
            self.parameter_count()
        );
        for (k, (exc, terms)) in self.excitations.iter().zip(&self.terms).enumerate() {
            let kind = match exc.kind() {
                ExcitationKind::Single => "single",
                ExcitationKind::Double => "double",
            };
            out.push_str(&format!("excitation {k} {kind} {exc} terms {}\n", terms.len()));
            for p in terms {
                out.push_str(&format!("  {p}\n"));
            }
        }
        out
    }
}

fn check_parameters(prog: &AnsatzProgram, theta: &[f64]) -> Result<()> {
    if theta.len() != prog.parameter_count() {
        return Err(Error::DimensionMismatch {
            expected: prog.parameter_count(),
            found: theta.len(),
        });
    }
    Ok(())
}

/// Applies the program as a product of Pauli rotations. Each term i·s·P of an
/// excitation's generator becomes exp(iθ s P).
pub fn apply_ansatz(reference: &StateVector, prog: &AnsatzProgram, theta: &[f64]) -> Result<StateVector> {
    check_parameters(prog, theta)?;
    if reference.n_qubits() != prog.n_qubits {
        return Err(Error::DimensionMismatch {
            expected: prog.n_qubits,
            found: reference.n_qubits(),
        });
    }
    let mut state = reference.clone();
    for (terms, &t) in prog.terms.iter().zip(theta) {
        if t == 0.0 {
            continue;
        }
        for p in terms {
            let unit = PauliString {
                coefficient: Complex64::new(1.0, 0.0),
                ..*p
            };
            state.apply_pauli_exponential(&unit, -t * p.coefficient.im)?;
        }
    }
    Ok(state)
}

/// One excitation acting on a [`SectorBasis`]: pairs (d, d', s) with
/// A|d⟩ = s|d'⟩. On each pair exp(θ(A − A†)) is a plane rotation and it is
/// the identity on every other basis state.
#[derive(Debug, Clone)]
pub struct ExcitationAction {
    pairs: Vec<(u32, u32, f64)>,
}

impl ExcitationAction {
    pub fn new(exc: &Excitation, basis: &SectorBasis) -> Result<Self> {
        let mut pairs = Vec::new();
        for (d, &state) in basis.states().iter().enumerate() {
            if let Some((sign, target)) = exc.apply_to_basis(state) {
                let dp = basis.position(target).ok_or_else(|| {
                    Error::InvalidExcitationSpace(format!("{exc} leaves the sector basis"))
                })?;
                pairs.push((d as u32, dp as u32, sign));
            }
        }
        Ok(Self { pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// ψ ← exp(θG) ψ.
    pub fn rotate(&self, psi: &mut [Complex64], theta: f64) {
        if theta == 0.0 {
            return;
        }
        let (s, c) = theta.sin_cos();
        for &(d, dp, sign) in &self.pairs {
            let (d, dp) = (d as usize, dp as usize);
            let (x, y) = (psi[d], psi[dp]);
            psi[d] = c * x - sign * s * y;
            psi[dp] = c * y + sign * s * x;
        }
    }

    /// out ← G ψ.
    pub fn apply_generator(&self, psi: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|v| *v = Complex64::default());
        for &(d, dp, sign) in &self.pairs {
            let (d, dp) = (d as usize, dp as usize);
            out[dp] += sign * psi[d];
            out[d] -= sign * psi[dp];
        }
    }
}
