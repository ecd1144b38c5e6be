//! Products of fermionic ladder operators and their normal ordering.

use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scf::MOIntegrals;

use super::pauli::PRUNE_THRESHOLD;

/// a†_mode when `dagger`, otherwise a_mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ladder {
    pub mode: usize,
    pub dagger: bool,
}

impl Ladder {
    pub fn create(mode: usize) -> Self {
        Self { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Self { mode, dagger: false }
    }

    pub fn adjoint(self) -> Self {
        Self {
            mode: self.mode,
            dagger: !self.dagger,
        }
    }

    /// Normal-order rank: creators first, each group by descending mode.
    fn rank(self) -> (bool, std::cmp::Reverse<usize>) {
        (!self.dagger, std::cmp::Reverse(self.mode))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FermionTerm {
    pub ops: Vec<Ladder>,
    pub coefficient: Complex64,
}

impl FermionTerm {
    pub fn new(ops: Vec<Ladder>, coefficient: Complex64) -> Self {
        Self { ops, coefficient }
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.ops.windows(2).all(|w| w[0].rank() < w[1].rank())
    }

    pub fn adjoint(&self) -> FermionTerm {
        FermionTerm {
            ops: self.ops.iter().rev().map(|l| l.adjoint()).collect(),
            coefficient: self.coefficient.conj(),
        }
    }
}

impl fmt::Display for FermionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:+.12e}{:+.12e}i)", self.coefficient.re, self.coefficient.im)?;
        for l in &self.ops {
            write!(f, " {}{}", l.mode, if l.dagger { "^" } else { "" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FermionOperator {
    terms: Vec<FermionTerm>,
}

impl FermionOperator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        let mut op = Self::new();
        op.push(Vec::new(), Complex64::new(c, 0.0));
        op
    }

    pub fn push(&mut self, ops: Vec<Ladder>, coefficient: Complex64) {
        self.terms.push(FermionTerm::new(ops, coefficient));
    }

    pub fn terms(&self) -> &[FermionTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// One more than the largest mode index referenced.
    pub fn mode_span(&self) -> usize {
        self.terms
            .iter()
            .flat_map(|t| t.ops.iter().map(|l| l.mode + 1))
            .max()
            .unwrap_or(0)
    }

    pub fn check_modes(&self, n_modes: usize) -> Result<()> {
        match self.mode_span() {
            s if s > n_modes => Err(Error::IndexOutOfRange {
                index: s - 1,
                bound: n_modes,
            }),
            _ => Ok(()),
        }
    }

    pub fn adjoint(&self) -> FermionOperator {
        FermionOperator {
            terms: self.terms.iter().map(FermionTerm::adjoint).collect(),
        }
    }

    pub fn add(&self, other: &FermionOperator) -> FermionOperator {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        FermionOperator { terms }
    }

    pub fn scale(&self, a: Complex64) -> FermionOperator {
        FermionOperator {
            terms: self
                .terms
                .iter()
                .map(|t| FermionTerm::new(t.ops.clone(), t.coefficient * a))
                .collect(),
        }
    }

    pub fn multiply(&self, other: &FermionOperator) -> FermionOperator {
        let mut out = FermionOperator::new();
        for a in &self.terms {
            for b in &other.terms {
                let mut ops = a.ops.clone();
                ops.extend_from_slice(&b.ops);
                out.push(ops, a.coefficient * b.coefficient);
            }
        }
        out
    }

    /// Rewrites every product in normal order using {a_p, a†_q} = δ_pq and
    /// {a_p, a_q} = 0, merges equal products and drops negligible terms.
    /// Terms come out sorted by their operator sequence.
    pub fn normal_ordered(&self) -> FermionOperator {
        let mut acc: BTreeMap<Vec<Ladder>, Complex64> = BTreeMap::new();
        let mut stack: Vec<(Vec<Ladder>, Complex64)> = self
            .terms
            .iter()
            .map(|t| (t.ops.clone(), t.coefficient))
            .collect();
        while let Some((mut ops, mut c)) = stack.pop() {
            // Insertion sort by rank; every transposition flips the sign,
            // and a_p a†_p additionally spawns the contracted product.
            let mut zero = false;
            'outer: for i in 1..ops.len() {
                let mut j = i;
                while j > 0 && ops[j - 1].rank() >= ops[j].rank() {
                    let (left, right) = (ops[j - 1], ops[j]);
                    if left == right {
                        zero = true;
                        break 'outer;
                    }
                    if left.mode == right.mode && !left.dagger && right.dagger {
                        let mut contracted = ops.clone();
                        contracted.drain(j - 1..=j);
                        stack.push((contracted, c));
                    }
                    ops.swap(j - 1, j);
                    c = -c;
                    j -= 1;
                }
            }
            if !zero {
                *acc.entry(ops).or_default() += c;
            }
        }
        FermionOperator {
            terms: acc
                .into_iter()
                .filter(|(_, c)| c.norm() >= PRUNE_THRESHOLD)
                .map(|(ops, c)| FermionTerm::new(ops, c))
                .collect(),
        }
    }
}

impl fmt::Display for FermionOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.terms {
            writeln!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Σ_pq h_pq a†_p a_q + ½ Σ_pqrs h_pqrs a†_p a†_q a_r a_s + E_core.
///
/// Zero integrals and products that vanish identically (a†_p a†_p, a_r a_r)
/// are skipped.
pub fn build_hamiltonian(mo: &MOIntegrals) -> FermionOperator {
    let m = mo.n_spin_orbitals();
    let mut op = FermionOperator::new();
    if mo.core_energy() != 0.0 {
        op.push(Vec::new(), Complex64::new(mo.core_energy(), 0.0));
    }
    for p in 0..m {
        for q in 0..m {
            let h = mo.one_body(p, q);
            if h != 0.0 {
                op.push(vec![Ladder::create(p), Ladder::annihilate(q)], Complex64::new(h, 0.0));
            }
        }
    }
    for p in 0..m {
        for q in 0..m {
            if p == q {
                continue;
            }
            for r in 0..m {
                for s in 0..m {
                    if r == s {
                        continue;
                    }
                    let h = mo.two_body(p, q, r, s);
                    if h != 0.0 {
                        op.push(
                            vec![
                                Ladder::create(p),
                                Ladder::create(q),
                                Ladder::annihilate(r),
                                Ladder::annihilate(s),
                            ],
                            Complex64::new(0.5 * h, 0.0),
                        );
                    }
                }
            }
        }
    }
    op
}

/// Σ_p a†_p a_p.
pub fn number_operator(n_modes: usize) -> FermionOperator {
    let mut op = FermionOperator::new();
    for p in 0..n_modes {
        op.push(vec![Ladder::create(p), Ladder::annihilate(p)], Complex64::new(1.0, 0.0));
    }
    op
}

/// ½ Σ_k (n_{2k} − n_{2k+1}) under the even-α / odd-β spin-orbital layout.
pub fn sz_operator(n_modes: usize) -> FermionOperator {
    let mut op = FermionOperator::new();
    for p in 0..n_modes {
        let sign = if p % 2 == 0 { 0.5 } else { -0.5 };
        op.push(vec![Ladder::create(p), Ladder::annihilate(p)], Complex64::new(sign, 0.0));
    }
    op
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn ordered_product_is_untouched() {
        let mut op = FermionOperator::new();
        op.push(vec![Ladder::create(3), Ladder::create(1), Ladder::annihilate(2), Ladder::annihilate(0)], one());
        let n = op.normal_ordered();
        assert_eq!(n.terms(), op.terms());
        assert!(n.terms()[0].is_normal_ordered());
    }

    #[test]
    fn anticommutator_reduces_to_delta() {
        for p in 0..3 {
            for q in 0..3 {
                let mut op = FermionOperator::new();
                op.push(vec![Ladder::annihilate(p), Ladder::create(q)], one());
                op.push(vec![Ladder::create(q), Ladder::annihilate(p)], one());
                let n = op.normal_ordered();
                if p == q {
                    assert_eq!(n.terms(), &[FermionTerm::new(vec![], one())]);
                } else {
                    assert!(n.is_empty());
                }
            }
        }
    }

    #[test]
    fn repeated_creator_vanishes() {
        let mut op = FermionOperator::new();
        op.push(vec![Ladder::create(2), Ladder::annihilate(0), Ladder::create(2)], one());
        assert!(op.normal_ordered().is_empty());
    }

    #[test]
    fn swap_sign() {
        let mut op = FermionOperator::new();
        op.push(vec![Ladder::create(0), Ladder::create(1)], one());
        let n = op.normal_ordered();
        assert_eq!(n.terms()[0].ops, vec![Ladder::create(1), Ladder::create(0)]);
        assert_eq!(n.terms()[0].coefficient, -one());
    }

    #[test]
    fn single_orbital_hamiltonian() {
        let eps = -0.75;
        let mo = MOIntegrals::from_spatial(
            DMatrix::from_element(1, 1, eps),
            crate::integrals::EriTensor::zeros(1),
            0.25,
            0,
        )
        .unwrap();
        let h = build_hamiltonian(&mo).normal_ordered();
        let expected = vec![
            FermionTerm::new(vec![], Complex64::new(0.25, 0.0)),
            FermionTerm::new(vec![Ladder::create(0), Ladder::annihilate(0)], Complex64::new(eps, 0.0)),
            FermionTerm::new(vec![Ladder::create(1), Ladder::annihilate(1)], Complex64::new(eps, 0.0)),
        ];
        assert_eq!(h.terms(), expected.as_slice());
    }
}
