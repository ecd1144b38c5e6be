//! Jordan-Wigner encoding: mode p ↔ qubit p, |1⟩ = occupied,
//! a†_p = Z₀…Z_{p−1} (X_p − iY_p)/2 and a_p = Z₀…Z_{p−1} (X_p + iY_p)/2.

use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::BTreeMap;

use crate::error::Result;

use super::fermion::{FermionOperator, Ladder};
use super::pauli::{PauliWord, QubitOperator};

/// Terms per parallel work unit. Partial sums are merged in chunk order so
/// the result does not depend on the thread count.
const CHUNK: usize = 2048;

fn ladder_image(l: Ladder) -> [(PauliWord, Complex64); 2] {
    let bit = 1u64 << l.mode;
    let parity = bit - 1;
    let y_coef = if l.dagger { -0.5 } else { 0.5 };
    [
        (PauliWord::new(bit, parity), Complex64::new(0.5, 0.0)),
        (PauliWord::new(bit, parity | bit), Complex64::new(0.0, y_coef)),
    ]
}

fn expand_term(ops: &[Ladder], coefficient: Complex64, out: &mut BTreeMap<PauliWord, Complex64>) {
    let mut partial: Vec<(PauliWord, Complex64)> = vec![(PauliWord::IDENTITY, coefficient)];
    for &l in ops {
        let image = ladder_image(l);
        let mut next = Vec::with_capacity(partial.len() * 2);
        for (w, c) in &partial {
            for (w2, c2) in &image {
                let (phase, prod) = w.multiply(w2);
                next.push((prod, c * c2 * phase));
            }
        }
        partial = next;
    }
    for (w, c) in partial {
        *out.entry(w).or_default() += c;
    }
}

pub fn jordan_wigner(f: &FermionOperator, n_modes: usize) -> Result<QubitOperator> {
    f.check_modes(n_modes)?;
    let partials: Vec<BTreeMap<PauliWord, Complex64>> = f
        .terms()
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = BTreeMap::new();
            for t in chunk {
                expand_term(&t.ops, t.coefficient, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = QubitOperator::zero(n_modes);
    for part in partials {
        for (w, c) in part {
            total.add_term(w, c);
        }
    }
    Ok(total.simplify())
}
