//! Pauli strings and weighted sums of them.
//!
//! A word is stored as two bit masks: qubit k carries X if bit k of `x` is
//! set, Z if bit k of `z` is set, and Y if both are. Coefficients always refer
//! to the letter form, so `Y` means the Hermitian Pauli Y and not `XZ`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Coefficients with modulus below this are dropped by [`QubitOperator::simplify`].
pub const PRUNE_THRESHOLD: f64 = 1e-12;

/// Largest qubit count a word can address.
pub const MAX_QUBITS: usize = 64;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    fn code(self) -> u8 {
        self as u8
    }

    pub fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PauliWord {
    pub x: u64,
    pub z: u64,
}

/// i^k for k mod 4.
#[inline]
pub(crate) fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => I,
        2 => Complex64::new(-1.0, 0.0),
        _ => -I,
    }
}

impl PauliWord {
    pub const IDENTITY: PauliWord = PauliWord { x: 0, z: 0 };

    pub fn new(x: u64, z: u64) -> Self {
        Self { x, z }
    }

    pub fn single(qubit: usize, letter: PauliLetter) -> Self {
        let bit = 1u64 << qubit;
        match letter {
            PauliLetter::I => Self::IDENTITY,
            PauliLetter::X => Self { x: bit, z: 0 },
            PauliLetter::Y => Self { x: bit, z: bit },
            PauliLetter::Z => Self { x: 0, z: bit },
        }
    }

    /// Builds a word from letters listed qubit 0 first, e.g. "XZY" = X₀Z₁Y₂.
    pub fn from_letters(letters: &str) -> Result<Self> {
        let mut w = Self::IDENTITY;
        for (k, ch) in letters.chars().enumerate() {
            if k >= MAX_QUBITS {
                return Err(Error::IndexOutOfRange {
                    index: k,
                    bound: MAX_QUBITS,
                });
            }
            let letter = match ch.to_ascii_uppercase() {
                'I' => PauliLetter::I,
                'X' => PauliLetter::X,
                'Y' => PauliLetter::Y,
                'Z' => PauliLetter::Z,
                _ => return Err(Error::InvalidArgument(format!("bad Pauli letter `{ch}`"))),
            };
            let s = Self::single(k, letter);
            w.x |= s.x;
            w.z |= s.z;
        }
        Ok(w)
    }

    pub fn letter(&self, qubit: usize) -> PauliLetter {
        let x = self.x >> qubit & 1 == 1;
        let z = self.z >> qubit & 1 == 1;
        match (x, z) {
            (false, false) => PauliLetter::I,
            (true, false) => PauliLetter::X,
            (true, true) => PauliLetter::Y,
            (false, true) => PauliLetter::Z,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// Highest qubit index touched, plus one.
    pub fn span(&self) -> usize {
        (MAX_QUBITS as u32 - (self.x | self.z).leading_zeros()) as usize
    }

    /// Product `self · other` as (phase, word).
    #[inline]
    pub fn multiply(&self, other: &PauliWord) -> (Complex64, PauliWord) {
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let k = self.y_count() + other.y_count() + 3 * (x & z).count_ones()
            + 2 * (self.z & other.x).count_ones();
        (i_pow(k), PauliWord { x, z })
    }

    pub fn commutes_with(&self, other: &PauliWord) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// P|b⟩ = phase |b'⟩.
    #[inline]
    pub fn apply_to_basis(&self, b: u64) -> (Complex64, u64) {
        let k = self.y_count() + 2 * (self.z & b).count_ones();
        (i_pow(k), b ^ self.x)
    }

    pub fn to_letters(&self, n_qubits: usize) -> String {
        (0..n_qubits).map(|k| self.letter(k).as_char()).collect()
    }
}

impl Ord for PauliWord {
    /// Lexicographic in letters from qubit 0 upward with I < X < Y < Z.
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = (self.x ^ other.x) | (self.z ^ other.z);
        if diff == 0 {
            return Ordering::Equal;
        }
        let k = diff.trailing_zeros() as usize;
        self.letter(k).code().cmp(&other.letter(k).code())
    }
}

impl PartialOrd for PauliWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A Pauli word of fixed length with a complex coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliString {
    pub n_qubits: usize,
    pub word: PauliWord,
    pub coefficient: Complex64,
}

impl PauliString {
    pub fn new(n_qubits: usize, word: PauliWord, coefficient: Complex64) -> Result<Self> {
        check_width(n_qubits)?;
        if word.span() > n_qubits {
            return Err(Error::IndexOutOfRange {
                index: word.span() - 1,
                bound: n_qubits,
            });
        }
        Ok(Self {
            n_qubits,
            word,
            coefficient,
        })
    }

    /// Unit-coefficient string parsed from letters, qubit 0 first.
    pub fn parse(letters: &str) -> Result<Self> {
        Self::new(
            letters.chars().count(),
            PauliWord::from_letters(letters)?,
            Complex64::new(1.0, 0.0),
        )
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({:+.12e}{:+.12e}i) {}",
            self.coefficient.re,
            self.coefficient.im,
            self.word.to_letters(self.n_qubits)
        )
    }
}

fn check_width(n_qubits: usize) -> Result<()> {
    if n_qubits > MAX_QUBITS {
        Err(Error::IndexOutOfRange {
            index: n_qubits,
            bound: MAX_QUBITS,
        })
    } else {
        Ok(())
    }
}

/// Σ_k c_k P_k on a fixed number of qubits, keyed by word in canonical order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QubitOperator {
    n_qubits: usize,
    terms: BTreeMap<PauliWord, Complex64>,
}

impl QubitOperator {
    pub fn zero(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n_qubits: usize, c: f64) -> Self {
        let mut op = Self::zero(n_qubits);
        op.add_term(PauliWord::IDENTITY, Complex64::new(c, 0.0));
        op.simplify()
    }

    pub fn from_string(p: &PauliString) -> Self {
        let mut op = Self::zero(p.n_qubits);
        op.add_term(p.word, p.coefficient);
        op
    }

    pub fn from_terms(
        n_qubits: usize,
        terms: impl IntoIterator<Item = (PauliWord, Complex64)>,
    ) -> Result<Self> {
        check_width(n_qubits)?;
        let mut op = Self::zero(n_qubits);
        for (w, c) in terms {
            if w.span() > n_qubits {
                return Err(Error::IndexOutOfRange {
                    index: w.span() - 1,
                    bound: n_qubits,
                });
            }
            op.add_term(w, c);
        }
        Ok(op)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliWord, &Complex64)> {
        self.terms.iter()
    }

    pub fn strings(&self) -> impl Iterator<Item = PauliString> + '_ {
        self.terms.iter().map(|(w, c)| PauliString {
            n_qubits: self.n_qubits,
            word: *w,
            coefficient: *c,
        })
    }

    pub fn coefficient(&self, word: &PauliWord) -> Complex64 {
        self.terms.get(word).copied().unwrap_or_default()
    }

    /// Coefficient of the identity word.
    pub fn constant(&self) -> Complex64 {
        self.coefficient(&PauliWord::IDENTITY)
    }

    /// Accumulates without pruning; the word must fit in `n_qubits`.
    pub(crate) fn add_term(&mut self, word: PauliWord, c: Complex64) {
        *self.terms.entry(word).or_default() += c;
    }

    fn check_same_width(&self, other: &QubitOperator) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &QubitOperator) -> Result<QubitOperator> {
        self.check_same_width(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, *c);
        }
        Ok(out.simplify())
    }

    pub fn sub(&self, other: &QubitOperator) -> Result<QubitOperator> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, a: Complex64) -> QubitOperator {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= a;
        }
        out.simplify()
    }

    pub fn multiply(&self, other: &QubitOperator) -> Result<QubitOperator> {
        self.check_same_width(other)?;
        let mut out = QubitOperator::zero(self.n_qubits);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let (phase, w) = w1.multiply(w2);
                out.add_term(w, phase * c1 * c2);
            }
        }
        Ok(out.simplify())
    }

    /// [A, B] = AB − BA, computed only over anticommuting word pairs.
    pub fn commutator(&self, other: &QubitOperator) -> Result<QubitOperator> {
        self.check_same_width(other)?;
        let mut out = QubitOperator::zero(self.n_qubits);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                if !w1.commutes_with(w2) {
                    let (phase, w) = w1.multiply(w2);
                    out.add_term(w, 2.0 * phase * c1 * c2);
                }
            }
        }
        Ok(out.simplify())
    }

    pub fn adjoint(&self) -> QubitOperator {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.conj();
        }
        out
    }

    /// Drops coefficients with modulus below [`PRUNE_THRESHOLD`].
    pub fn simplify(mut self) -> QubitOperator {
        self.terms.retain(|_, c| c.norm() >= PRUNE_THRESHOLD);
        self
    }

    /// Sum of coefficient moduli.
    pub fn one_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// Largest |Im c| over all terms.
    pub fn max_imaginary(&self) -> f64 {
        self.terms.values().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_imaginary() <= tol
    }

    /// Dense 2ⁿ×2ⁿ matrix with basis index bit k = qubit k.
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        if self.n_qubits > 12 {
            return Err(Error::InvalidArgument(format!(
                "dense matrix of {} qubits is too large",
                self.n_qubits
            )));
        }
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::zeros(dim, dim);
        for (w, c) in &self.terms {
            for col in 0..dim {
                let (phase, row) = w.apply_to_basis(col as u64);
                m[(row as usize, col)] += phase * c;
            }
        }
        Ok(m)
    }
}

impl fmt::Display for QubitOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.strings() {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_matrix(l: PauliLetter) -> DMatrix<Complex64> {
        let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
        match l {
            PauliLetter::I => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
            PauliLetter::X => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
            PauliLetter::Y => DMatrix::from_row_slice(2, 2, &[z, c(0.0, -1.0), c(0.0, 1.0), z]),
            PauliLetter::Z => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        }
    }

    /// Kronecker product with qubit 0 as the least significant factor.
    fn kron_word(w: &PauliWord, n: usize) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
        for k in (0..n).rev() {
            m = m.kronecker(&pauli_matrix(w.letter(k)));
        }
        m
    }

    #[test]
    fn single_qubit_products() {
        let x = PauliWord::single(0, PauliLetter::X);
        let y = PauliWord::single(0, PauliLetter::Y);
        let z = PauliWord::single(0, PauliLetter::Z);
        assert_eq!(x.multiply(&x), (c(1.0, 0.0), PauliWord::IDENTITY));
        assert_eq!(x.multiply(&y), (c(0.0, 1.0), z));
        assert_eq!(y.multiply(&x), (c(0.0, -1.0), z));
        assert_eq!(y.multiply(&z), (c(0.0, 1.0), x));
        assert_eq!(z.multiply(&x), (c(0.0, 1.0), y));
    }

    #[test]
    fn canonical_order() {
        let words: Vec<_> = ["ZI", "IX", "YI", "XZ", "II"]
            .iter()
            .map(|s| PauliWord::from_letters(s).unwrap())
            .collect();
        let mut sorted = words.clone();
        sorted.sort();
        let letters: Vec<_> = sorted.iter().map(|w| w.to_letters(2)).collect();
        assert_eq!(letters, ["II", "IX", "XZ", "YI", "ZI"]);
    }

    #[test]
    fn dense_matches_kronecker() {
        let w = PauliWord::from_letters("XZY").unwrap();
        let op = QubitOperator::from_terms(3, [(w, c(1.0, 0.0))]).unwrap();
        let diff = op.to_dense().unwrap() - kron_word(&w, 3);
        assert!(diff.iter().all(|v| v.norm() < 1e-15));
    }

    #[test]
    fn width_mismatch_is_an_error() {
        let a = QubitOperator::identity(2, 1.0);
        let b = QubitOperator::identity(3, 1.0);
        assert!(a.add(&b).is_err());
        assert!(a.multiply(&b).is_err());
    }

    fn word_strategy(n: usize) -> impl Strategy<Value = PauliWord> {
        let mask = (1u64 << n) - 1;
        (any::<u64>(), any::<u64>()).prop_map(move |(x, z)| PauliWord::new(x & mask, z & mask))
    }

    fn operator_strategy(n: usize) -> impl Strategy<Value = QubitOperator> {
        prop::collection::vec((word_strategy(n), -1.0..1.0f64, -1.0..1.0f64), 1..6).prop_map(
            move |ts| QubitOperator::from_terms(n, ts.into_iter().map(|(w, a, b)| (w, c(a, b)))).unwrap(),
        )
    }

    proptest! {
        #[test]
        fn word_product_matches_matrices(a in word_strategy(3), b in word_strategy(3)) {
            let (phase, w) = a.multiply(&b);
            let lhs = kron_word(&a, 3) * kron_word(&b, 3);
            let rhs = kron_word(&w, 3) * phase;
            prop_assert!((lhs - rhs).iter().all(|v| v.norm() < 1e-14));
            let anti = (kron_word(&a, 3) * kron_word(&b, 3) - kron_word(&b, 3) * kron_word(&a, 3))
                .iter().all(|v| v.norm() < 1e-14);
            prop_assert_eq!(anti, a.commutes_with(&b));
        }

        #[test]
        fn multiply_is_matrix_product(a in operator_strategy(4), b in operator_strategy(4)) {
            let prod = a.multiply(&b).unwrap().to_dense().unwrap();
            let dense = a.to_dense().unwrap() * b.to_dense().unwrap();
            prop_assert!((prod - dense).iter().all(|v| v.norm() < 1e-11));
        }

        #[test]
        fn multiply_is_associative(a in operator_strategy(3), b in operator_strategy(3), d in operator_strategy(3)) {
            let l = a.multiply(&b).unwrap().multiply(&d).unwrap();
            let r = a.multiply(&b.multiply(&d).unwrap()).unwrap();
            prop_assert!(l.sub(&r).unwrap().one_norm() < 1e-11);
        }

        #[test]
        fn commutator_matches_products(a in operator_strategy(3), b in operator_strategy(3)) {
            let direct = a.multiply(&b).unwrap().sub(&b.multiply(&a).unwrap()).unwrap();
            prop_assert!(a.commutator(&b).unwrap().sub(&direct).unwrap().one_norm() < 1e-11);
        }
    }
}
