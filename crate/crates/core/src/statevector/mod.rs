//! Dense statevector simulation. Basis index bit k is the state of qubit k.

mod subspace;

pub use subspace::{spin_counts, SectorBasis, SparseOperator};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fermion_qubit::{PauliString, PauliWord, QubitOperator};

pub const MAX_STATEVECTOR_QUBITS: usize = 24;

/// Imaginary part tolerated in the expectation of a Hermitian operator.
pub const HERMITIAN_RESIDUE: f64 = 1e-10;

/// Amplitudes per parallel task in the reductions. Fixed so that sums come
/// out bit-identical for any thread count.
pub(crate) const REDUCTION_CHUNK: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// Σ conj(a_i)·b_i with a fixed reduction tree.
pub(crate) fn inner_product(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.par_chunks(REDUCTION_CHUNK)
        .zip(b.par_chunks(REDUCTION_CHUNK))
        .map(|(x, y)| x.iter().zip(y).map(|(u, v)| u.conj() * v).sum::<Complex64>())
        .collect::<Vec<_>>()
        .into_iter()
        .sum()
}

impl StateVector {
    fn check_width(n_qubits: usize) -> Result<()> {
        if n_qubits > MAX_STATEVECTOR_QUBITS {
            return Err(Error::InvalidArgument(format!(
                "{n_qubits} qubits exceed the statevector limit of {MAX_STATEVECTOR_QUBITS}"
            )));
        }
        Ok(())
    }

    /// Computational basis state with the listed qubits set to |1⟩.
    pub fn prepare_occupation(n_qubits: usize, occupied: &[usize]) -> Result<Self> {
        Self::check_width(n_qubits)?;
        let mut index = 0usize;
        for &q in occupied {
            if q >= n_qubits {
                return Err(Error::IndexOutOfRange {
                    index: q,
                    bound: n_qubits,
                });
            }
            index |= 1 << q;
        }
        let mut amplitudes = vec![Complex64::default(); 1 << n_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Hartree-Fock reference: the lowest `n_electrons` modes occupied.
    pub fn hartree_fock(n_qubits: usize, n_electrons: usize) -> Result<Self> {
        let occ: Vec<usize> = (0..n_electrons).collect();
        Self::prepare_occupation(n_qubits, &occ)
    }

    /// Wraps and normalizes explicit amplitudes.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::check_width(n_qubits)?;
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_qubits,
                found: amplitudes.len(),
            });
        }
        let mut s = Self {
            n_qubits,
            amplitudes,
        };
        let norm = s.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidArgument("state has zero norm".into()));
        }
        s.amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        inner_product(&self.amplitudes, &self.amplitudes).re.sqrt()
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_operand(other.n_qubits)?;
        Ok(inner_product(&self.amplitudes, &other.amplitudes))
    }

    fn check_operand(&self, n_qubits: usize) -> Result<()> {
        if n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: n_qubits,
            });
        }
        Ok(())
    }

    /// ψ ← c·P ψ.
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        self.check_operand(p.n_qubits)?;
        let w = p.word;
        let c = p.coefficient;
        let src = std::mem::take(&mut self.amplitudes);
        self.amplitudes = (0..src.len())
            .into_par_iter()
            .map(|b| {
                let from = b as u64 ^ w.x;
                let (phase, _) = w.apply_to_basis(from);
                c * phase * src[from as usize]
            })
            .collect();
        Ok(())
    }

    /// ψ ← exp(−iθP) ψ = (cos θ − i sin θ P) ψ for a Pauli string with
    /// coefficient exactly ±1.
    pub fn apply_pauli_exponential(&mut self, p: &PauliString, theta: f64) -> Result<()> {
        self.check_operand(p.n_qubits)?;
        let c = p.coefficient;
        if c.im != 0.0 || c.re.abs() != 1.0 {
            return Err(Error::NonUnitCoefficient(format!("{c}")));
        }
        self.rotate(p.word, c.re * theta);
        Ok(())
    }

    pub(crate) fn rotate(&mut self, w: PauliWord, theta: f64) {
        let (s, cth) = theta.sin_cos();
        let msin = Complex64::new(0.0, -s);
        let src = std::mem::take(&mut self.amplitudes);
        self.amplitudes = (0..src.len())
            .into_par_iter()
            .map(|b| {
                let from = b as u64 ^ w.x;
                let (phase, _) = w.apply_to_basis(from);
                cth * src[b] + msin * phase * src[from as usize]
            })
            .collect();
    }

    /// ⟨ψ|P|ψ⟩ for a bare word.
    fn word_expectation(&self, w: &PauliWord) -> Complex64 {
        let a = &self.amplitudes;
        let mut acc = Complex64::default();
        for (b, amp) in a.iter().enumerate() {
            let (phase, to) = w.apply_to_basis(b as u64);
            acc += a[to as usize].conj() * phase * amp;
        }
        acc
    }

    /// ⟨ψ|H|ψ⟩ including the imaginary part.
    pub fn expectation_complex(&self, h: &QubitOperator) -> Result<Complex64> {
        self.check_operand(h.n_qubits())?;
        let terms: Vec<(PauliWord, Complex64)> = h.terms().map(|(w, c)| (*w, *c)).collect();
        let values: Vec<Complex64> = terms
            .par_iter()
            .map(|(w, c)| c * self.word_expectation(w))
            .collect();
        Ok(values.into_iter().sum())
    }

    /// ⟨ψ|H|ψ⟩ for Hermitian H; fails if the imaginary residue exceeds
    /// [`HERMITIAN_RESIDUE`].
    pub fn expectation(&self, h: &QubitOperator) -> Result<f64> {
        let e = self.expectation_complex(h)?;
        if e.im.abs() > HERMITIAN_RESIDUE {
            return Err(Error::NotHermitian(e.im.abs()));
        }
        Ok(e.re)
    }

    /// Shot-based estimate of ⟨H⟩: every Pauli term is measured separately
    /// with `shots` ±1 outcomes drawn from its exact Born probabilities.
    pub fn sample_expectation<R: Rng>(&self, h: &QubitOperator, shots: usize, rng: &mut R) -> Result<f64> {
        self.check_operand(h.n_qubits())?;
        if shots == 0 {
            return Err(Error::InvalidArgument("shot count must be positive".into()));
        }
        if !h.is_hermitian(1e-12) {
            return Err(Error::NotHermitian(h.max_imaginary()));
        }
        let mut total = 0.0;
        for (w, c) in h.terms() {
            if w.is_identity() {
                total += c.re;
                continue;
            }
            let p_plus = (0.5 * (1.0 + self.word_expectation(w).re)).clamp(0.0, 1.0);
            let plus = (0..shots).filter(|_| rng.gen::<f64>() < p_plus).count();
            total += c.re * (2.0 * plus as f64 - shots as f64) / shots as f64;
        }
        Ok(total)
    }

    /// Total weight on basis states whose popcount differs from `n`.
    pub fn weight_outside_particle_number(&self, n: usize) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(b, _)| b.count_ones() as usize != n)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Total weight on basis states with a different (N_α, N_β), α on even qubits.
    pub fn weight_outside_spin_sector(&self, n_alpha: usize, n_beta: usize) -> f64 {
        let even = (0..self.n_qubits).step_by(2).fold(0u64, |m, k| m | 1 << k);
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(b, _)| {
                let b = *b as u64;
                (b & even).count_ones() as usize != n_alpha || (b & !even).count_ones() as usize != n_beta
            })
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn occupation_index() {
        let s = StateVector::prepare_occupation(4, &[0, 1]).unwrap();
        assert_eq!(s.amplitudes()[3], c(1.0, 0.0));
        let s = StateVector::prepare_occupation(3, &[]).unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        assert!(StateVector::prepare_occupation(3, &[3]).is_err());
        assert!(StateVector::prepare_occupation(25, &[]).is_err());
    }

    #[test]
    fn single_letters() {
        let mut s = StateVector::prepare_occupation(2, &[]).unwrap();
        s.apply_pauli(&PauliString::parse("XI").unwrap()).unwrap();
        assert_eq!(s.amplitudes()[1], c(1.0, 0.0));
        s.apply_pauli(&PauliString::parse("ZI").unwrap()).unwrap();
        assert_eq!(s.amplitudes()[1], c(-1.0, 0.0));
        let mut s = StateVector::prepare_occupation(1, &[]).unwrap();
        s.apply_pauli(&PauliString::parse("Y").unwrap()).unwrap();
        assert_eq!(s.amplitudes()[1], c(0.0, 1.0));
        assert!(s.apply_pauli(&PauliString::parse("YY").unwrap()).is_err());
    }

    #[test]
    fn exponential_special_angles() {
        let p = PauliString::parse("XZY").unwrap();
        let s0 = StateVector::from_amplitudes(3, (0..8).map(|k| c(k as f64 + 1.0, 0.5 - k as f64)).collect()).unwrap();
        let mut s = s0.clone();
        s.apply_pauli_exponential(&p, 0.0).unwrap();
        assert_eq!(s, s0);
        let mut s = s0.clone();
        s.apply_pauli_exponential(&p, std::f64::consts::FRAC_PI_2).unwrap();
        let mut expected = s0.clone();
        expected.apply_pauli(&p).unwrap();
        for (a, b) in s.amplitudes().iter().zip(expected.amplitudes()) {
            assert!((a - c(0.0, -1.0) * b).norm() < 1e-15);
        }
        let mut bad = p;
        bad.coefficient = c(0.5, 0.0);
        assert!(s.apply_pauli_exponential(&bad, 0.1).is_err());
    }

    #[test]
    fn exponential_matches_dense_expm() {
        let p = PauliString::parse("XZY").unwrap();
        let (vals, v) = crate::linalg::hermitian_eigen(&QubitOperator::from_string(&p).to_dense().unwrap());
        let v = &v;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let theta: f64 = rng.gen_range(-3.0..3.0);
            let phases = DMatrix::from_diagonal(&vals.map(|l| Complex64::from_polar(1.0, -theta * l)));
            let u = v * phases * v.adjoint();
            let amps: Vec<Complex64> = (0..8).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let s0 = StateVector::from_amplitudes(3, amps).unwrap();
            let y = &u * nalgebra::DVector::from_column_slice(s0.amplitudes());
            let mut s = s0.clone();
            s.apply_pauli_exponential(&p, theta).unwrap();
            for k in 0..8 {
                assert!((s.amplitudes()[k] - y[k]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn expectation_basics() {
        let s = StateVector::prepare_occupation(3, &[]).unwrap();
        assert_eq!(s.expectation(&QubitOperator::identity(3, 1.0)).unwrap(), 1.0);
        let z1 = QubitOperator::from_string(&PauliString::parse("IZI").unwrap());
        assert_eq!(s.expectation(&z1).unwrap(), 1.0);
        let y = QubitOperator::from_string(&PauliString::parse("YII").unwrap()).scale(c(0.0, 1.0));
        let plus = StateVector::from_amplitudes(3, vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(matches!(plus.expectation(&y), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn shot_estimate_converges() {
        let s = StateVector::from_amplitudes(2, vec![c(0.8, 0.0), c(0.0, 0.6), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let h = QubitOperator::from_terms(2, [
            (PauliWord::from_letters("ZI").unwrap(), c(0.7, 0.0)),
            (PauliWord::from_letters("YI").unwrap(), c(-0.3, 0.0)),
            (PauliWord::IDENTITY, c(0.2, 0.0)),
        ]).unwrap();
        let exact = s.expectation(&h).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let est = s.sample_expectation(&h, 200_000, &mut rng).unwrap();
        assert!((est - exact).abs() < 1e-2, "{est} vs {exact}");
    }
}
