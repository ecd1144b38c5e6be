//! Number- and spin-conserving subspaces of the qubit register and operators
//! restricted to them.
//!
//! With even qubits holding α spin orbitals and odd qubits β, states with
//! fixed (N_α, N_β) form an invariant subspace of any molecular Hamiltonian
//! and of every spin-conserving excitation. Working there shrinks 2^M
//! amplitudes to C(M/2, N_α)·C(M/2, N_β).

use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fermion_qubit::QubitOperator;

use super::inner_product;

/// Sorted list of computational basis states spanning a subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorBasis {
    n_qubits: usize,
    states: Vec<u64>,
}

fn alpha_mask(n_qubits: usize) -> u64 {
    (0..n_qubits).step_by(2).fold(0u64, |m, k| m | 1 << k)
}

/// (N_α, N_β) of a basis state.
pub fn spin_counts(state: u64, n_qubits: usize) -> (usize, usize) {
    let a = alpha_mask(n_qubits);
    ((state & a).count_ones() as usize, (state & !a).count_ones() as usize)
}

impl SectorBasis {
    /// All states with `n_alpha` set even bits and `n_beta` set odd bits.
    pub fn fixed_spin(n_qubits: usize, n_alpha: usize, n_beta: usize) -> Result<Self> {
        Self::from_sectors(n_qubits, &[(n_alpha, n_beta)])
    }

    /// Union of several (N_α, N_β) sectors.
    pub fn from_sectors(n_qubits: usize, sectors: &[(usize, usize)]) -> Result<Self> {
        if n_qubits > 40 {
            return Err(Error::InvalidArgument(format!("{n_qubits} qubits is too many for a sector basis")));
        }
        let half_a = n_qubits.div_ceil(2);
        let half_b = n_qubits / 2;
        let mut states = Vec::new();
        for &(na, nb) in sectors {
            if na > half_a || nb > half_b {
                return Err(Error::InvalidArgument(format!(
                    "sector ({na}, {nb}) does not fit in {n_qubits} qubits"
                )));
            }
            let alphas = combinations(half_a, na);
            let betas = combinations(half_b, nb);
            for &a in &alphas {
                let a_bits = spread(a, 0);
                for &b in &betas {
                    states.push(a_bits | spread(b, 1));
                }
            }
        }
        states.sort_unstable();
        states.dedup();
        Ok(Self { n_qubits, states })
    }

    /// Fixed total particle number, any spin split.
    pub fn fixed_particle_number(n_qubits: usize, n: usize) -> Result<Self> {
        let half_a = n_qubits.div_ceil(2);
        let half_b = n_qubits / 2;
        let sectors: Vec<(usize, usize)> = (0..=n.min(half_a))
            .filter(|&na| n - na <= half_b)
            .map(|na| (na, n - na))
            .collect();
        Self::from_sectors(n_qubits, &sectors)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    #[inline]
    pub fn position(&self, state: u64) -> Option<usize> {
        self.states.binary_search(&state).ok()
    }

    /// Embeds subspace amplitudes into the full 2^M register.
    pub fn embed(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let mut full = vec![Complex64::default(); 1 << self.n_qubits];
        for (&s, &a) in self.states.iter().zip(amps) {
            full[s as usize] = a;
        }
        full
    }
}

/// Bitmasks of all k-subsets of n elements, ascending.
fn combinations(n: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    if k == 0 {
        return vec![0];
    }
    let mut v: u64 = (1 << k) - 1;
    let limit = 1u64 << n;
    while v < limit {
        out.push(v);
        // Gosper's hack: next integer with the same popcount.
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
    out
}

/// Places bit i of `bits` at position 2i + offset.
fn spread(bits: u64, offset: usize) -> u64 {
    let mut out = 0;
    let mut b = bits;
    while b != 0 {
        let i = b.trailing_zeros() as usize;
        out |= 1 << (2 * i + offset);
        b &= b - 1;
    }
    out
}

/// Compressed-sparse-row matrix of an operator within a [`SectorBasis`].
#[derive(Debug, Clone)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    values: Vec<Complex64>,
}

impl SparseOperator {
    /// Matrix elements ⟨b_i|H|b_j⟩ between subspace states. Fails if H maps
    /// some subspace state outside the subspace.
    pub fn restrict(h: &QubitOperator, basis: &SectorBasis) -> Result<Self> {
        if h.n_qubits() != basis.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: basis.n_qubits(),
                found: h.n_qubits(),
            });
        }
        // Group by X mask: each group maps b_j to the single state b_j ^ x.
        let mut groups: BTreeMap<u64, Vec<(u64, u32, Complex64)>> = BTreeMap::new();
        for (w, c) in h.terms() {
            groups.entry(w.x).or_default().push((w.z, w.y_count(), *c));
        }
        let groups: Vec<(u64, Vec<(u64, u32, Complex64)>)> = groups.into_iter().collect();
        let states = basis.states();
        let rows: Vec<(Vec<(u32, Complex64)>, f64)> = states
            .par_iter()
            .map(|&bi| {
                let mut row = Vec::new();
                let mut leak = 0.0;
                for (x, terms) in &groups {
                    let bj = bi ^ x;
                    // ⟨b_i|P|b_j⟩ = i^{n_y} (−1)^{|z & b_j|}.
                    let mut v = Complex64::default();
                    for &(z, ny, c) in terms {
                        let k = ny + 2 * (z & bj).count_ones();
                        v += c * crate::fermion_qubit::i_pow(k);
                    }
                    if v.norm() < 1e-14 {
                        continue;
                    }
                    match basis.position(bj) {
                        Some(j) => row.push((j as u32, v)),
                        None => leak += v.norm_sqr(),
                    }
                }
                row.sort_unstable_by_key(|&(j, _)| j);
                (row, leak)
            })
            .collect();
        let leak: f64 = rows.iter().map(|(_, l)| l).sum();
        if leak.sqrt() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "operator leaves the subspace (leakage {:.3e})",
                leak.sqrt()
            )));
        }
        let mut row_ptr = Vec::with_capacity(states.len() + 1);
        let mut cols = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for (row, _) in rows {
            for (j, v) in row {
                cols.push(j);
                values.push(v);
            }
            row_ptr.push(cols.len());
        }
        Ok(Self {
            dim: states.len(),
            row_ptr,
            cols,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// y = A x.
    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        y.par_iter_mut().enumerate().for_each(|(i, yi)| {
            let mut acc = Complex64::default();
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.cols[k] as usize];
            }
            *yi = acc;
        });
    }

    /// y = A x for real x and real-valued A; the imaginary parts of A are
    /// ignored, so only valid when A is real symmetric.
    pub fn apply_real(&self, x: &[f64], y: &mut [f64]) {
        y.par_iter_mut().enumerate().for_each(|(i, yi)| {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k].re * x[self.cols[k] as usize];
            }
            *yi = acc;
        });
    }

    /// Largest |Im A_ij|.
    pub fn max_imaginary(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// ⟨x|A|x⟩.
    pub fn expectation(&self, x: &[Complex64]) -> Complex64 {
        let mut y = vec![Complex64::default(); self.dim];
        self.apply(x, &mut y);
        inner_product(x, &y)
    }

    /// Diagonal entries.
    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| {
                (self.row_ptr[i]..self.row_ptr[i + 1])
                    .find(|&k| self.cols[k] as usize == i)
                    .map(|k| self.values[k])
                    .unwrap_or_default()
            })
            .collect()
    }
}
