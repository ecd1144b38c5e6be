//! Restricted Hartree-Fock and the transformation of integrals to the
//! spin-orbital MO basis.
//!
//! Spin-orbital ordering: index 2k is spatial MO k with spin α, 2k+1 the
//! same MO with spin β, spatial MOs in ascending orbital energy. The closed-shell
//! determinant therefore occupies spin orbitals 0..N.

use nalgebra::{DMatrix, DVector};
use std::collections::VecDeque;

use crate::basis::{nuclear_repulsion, MoleculeSpec};
use crate::error::{Error, Result};
use crate::integrals::{AOIntegrals, EriTensor};
use crate::linalg::symmetric_eigen;

#[derive(Debug, Clone)]
pub struct ScfOptions {
    pub max_iterations: usize,
    pub energy_tolerance: f64,
    pub density_tolerance: f64,
    pub diis_size: usize,
    /// First iteration (1-based) at which DIIS extrapolation is applied.
    pub diis_start: usize,
    /// Weight kept on the previous density when DIIS is unavailable.
    pub damping: f64,
}

impl Default for ScfOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            energy_tolerance: 1e-10,
            density_tolerance: 1e-8,
            diis_size: 8,
            diis_start: 2,
            damping: 0.5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RHFSolution {
    /// AO → MO coefficients, columns sorted by orbital energy.
    pub coefficients: DMatrix<f64>,
    pub orbital_energies: DVector<f64>,
    /// Total density P = 2 C_occ C_occᵀ.
    pub density: DMatrix<f64>,
    /// Total energy including nuclear repulsion (Hartree).
    pub energy: f64,
    pub nuclear_repulsion: f64,
    pub iterations: usize,
    pub n_electrons: usize,
}

impl RHFSolution {
    pub fn n_occupied(&self) -> usize {
        self.n_electrons / 2
    }
}

const LINEAR_DEPENDENCE_CUTOFF: f64 = 1e-10;

/// Symmetric orthogonalizer S^{-1/2}.
fn symmetric_orthogonalizer(s: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (vals, vecs) = symmetric_eigen(s);
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < LINEAR_DEPENDENCE_CUTOFF {
        return Err(Error::LinearDependence(min));
    }
    let inv_sqrt = DMatrix::from_diagonal(&vals.map(|x| 1.0 / x.sqrt()));
    Ok(&vecs * inv_sqrt * vecs.transpose())
}

fn orbitals_from_fock(f: &DMatrix<f64>, x: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let fp = x.transpose() * f * x;
    let (eps, cp) = symmetric_eigen(&fp);
    (eps, x * cp)
}

fn density_from(c: &DMatrix<f64>, n_occ: usize) -> DMatrix<f64> {
    let occ = c.columns(0, n_occ);
    2.0 * &occ * occ.transpose()
}

fn two_electron_part(p: &DMatrix<f64>, eri: &EriTensor) -> DMatrix<f64> {
    let n = p.nrows();
    let mut g = DMatrix::zeros(n, n);
    for mu in 0..n {
        for nu in 0..=mu {
            let mut acc = 0.0;
            for la in 0..n {
                for si in 0..n {
                    acc += p[(la, si)] * (eri.get(mu, nu, la, si) - 0.5 * eri.get(mu, la, nu, si));
                }
            }
            g[(mu, nu)] = acc;
            g[(nu, mu)] = acc;
        }
    }
    g
}

fn electronic_energy(p: &DMatrix<f64>, h: &DMatrix<f64>, f: &DMatrix<f64>) -> f64 {
    0.5 * p.component_mul(&(h + f)).sum()
}

fn rms(m: &DMatrix<f64>) -> f64 {
    (m.norm_squared() / m.len() as f64).sqrt()
}

struct Diis {
    capacity: usize,
    focks: VecDeque<DMatrix<f64>>,
    errors: VecDeque<DMatrix<f64>>,
}

impl Diis {
    fn new(capacity: usize) -> Self {
        Self {
            capacity,
            focks: VecDeque::new(),
            errors: VecDeque::new(),
        }
    }

    fn push(&mut self, fock: DMatrix<f64>, error: DMatrix<f64>) {
        if self.focks.len() == self.capacity {
            self.focks.pop_front();
            self.errors.pop_front();
        }
        self.focks.push_back(fock);
        self.errors.push_back(error);
    }

    /// Extrapolated Fock matrix, or `None` when the DIIS system is singular.
    fn extrapolate(&self) -> Option<DMatrix<f64>> {
        let k = self.focks.len();
        if k < 2 {
            return self.focks.back().cloned();
        }
        let mut b = DMatrix::zeros(k + 1, k + 1);
        for i in 0..k {
            for j in 0..=i {
                let v = self.errors[i].dot(&self.errors[j]);
                b[(i, j)] = v;
                b[(j, i)] = v;
            }
            b[(i, k)] = -1.0;
            b[(k, i)] = -1.0;
        }
        let mut rhs = DVector::zeros(k + 1);
        rhs[k] = -1.0;
        let coeffs = b.lu().solve(&rhs)?;
        if coeffs.iter().any(|c| !c.is_finite()) {
            return None;
        }
        let mut f = DMatrix::zeros(self.focks[0].nrows(), self.focks[0].ncols());
        for i in 0..k {
            f += coeffs[i] * &self.focks[i];
        }
        Some(f)
    }
}

pub fn run_rhf(ao: &AOIntegrals, mol: &MoleculeSpec) -> Result<RHFSolution> {
    run_rhf_with(ao, mol, &ScfOptions::default())
}

pub fn run_rhf_with(ao: &AOIntegrals, mol: &MoleculeSpec, opts: &ScfOptions) -> Result<RHFSolution> {
    let n = ao.n();
    let n_electrons = mol.electron_count();
    if n_electrons % 2 != 0 {
        return Err(Error::OddElectronCount(n_electrons as i64));
    }
    let n_occ = n_electrons / 2;
    if n_occ > n {
        return Err(Error::InvalidMolecule(format!(
            "{n_electrons} electrons do not fit in {n} spatial orbitals"
        )));
    }
    let e_nuc = nuclear_repulsion(mol)?;
    let s = &ao.overlap;
    let h = ao.core_hamiltonian();
    let x = symmetric_orthogonalizer(s)?;

    let (_, c0) = orbitals_from_fock(&h, &x);
    let mut p = density_from(&c0, n_occ);
    let mut e_old: Option<f64> = None;
    let mut diis = Diis::new(opts.diis_size);
    let mut last_energy = f64::NAN;

    for iter in 1..=opts.max_iterations {
        let f = &h + two_electron_part(&p, &ao.eri);
        let e = electronic_energy(&p, &h, &f) + e_nuc;
        last_energy = e;

        let mut damp = false;
        let f_use = if iter >= opts.diis_start {
            let err = x.transpose() * (&f * &p * s - s * &p * &f) * &x;
            diis.push(f.clone(), err);
            match diis.extrapolate() {
                Some(fd) => fd,
                None => {
                    damp = true;
                    f.clone()
                }
            }
        } else {
            f.clone()
        };
        let (_, c) = orbitals_from_fock(&f_use, &x);
        let mut p_new = density_from(&c, n_occ);
        if damp {
            p_new = opts.damping * &p + (1.0 - opts.damping) * p_new;
        }

        let d_rms = rms(&(&p_new - &p));
        let converged = e_old
            .map(|eo| (e - eo).abs() < opts.energy_tolerance && d_rms < opts.density_tolerance)
            .unwrap_or(false);
        if converged {
            // Canonical orbitals of the converged density.
            let f = &h + two_electron_part(&p_new, &ao.eri);
            let (eps, c) = orbitals_from_fock(&f, &x);
            let p_fin = density_from(&c, n_occ);
            let f_fin = &h + two_electron_part(&p_fin, &ao.eri);
            let energy = electronic_energy(&p_fin, &h, &f_fin) + e_nuc;
            return Ok(RHFSolution {
                coefficients: c,
                orbital_energies: eps,
                density: p_fin,
                energy,
                nuclear_repulsion: e_nuc,
                iterations: iter,
                n_electrons,
            });
        }
        p = p_new;
        e_old = Some(e);
    }
    Err(Error::ScfNotConverged {
        iterations: opts.max_iterations,
        last_energy,
    })
}

/// Integrals in the spin-orbital MO basis.
///
/// The underlying storage is spatial: a one-electron matrix and an 8-fold
/// symmetric (pq|rs) tensor. Spin-orbital elements are derived on access, so
/// spin-forbidden entries are exactly zero.
#[derive(Debug, Clone)]
pub struct MOIntegrals {
    one_body: DMatrix<f64>,
    two_body: EriTensor,
    core_energy: f64,
    n_electrons: usize,
}

impl MOIntegrals {
    /// `two_body` is the spatial (pq|rs) tensor in chemists' notation.
    pub fn from_spatial(
        one_body: DMatrix<f64>,
        two_body: EriTensor,
        core_energy: f64,
        n_electrons: usize,
    ) -> Result<Self> {
        if one_body.nrows() != one_body.ncols() {
            return Err(Error::DimensionMismatch {
                expected: one_body.nrows(),
                found: one_body.ncols(),
            });
        }
        if two_body.dim() != one_body.nrows() {
            return Err(Error::DimensionMismatch {
                expected: one_body.nrows(),
                found: two_body.dim(),
            });
        }
        if n_electrons % 2 != 0 || n_electrons > 2 * one_body.nrows() {
            return Err(Error::InvalidMolecule(format!(
                "{n_electrons} electrons in {} spin orbitals",
                2 * one_body.nrows()
            )));
        }
        Ok(Self {
            one_body,
            two_body,
            core_energy,
            n_electrons,
        })
    }

    pub fn n_spatial(&self) -> usize {
        self.one_body.nrows()
    }

    /// Number of spin orbitals M.
    pub fn n_spin_orbitals(&self) -> usize {
        2 * self.n_spatial()
    }

    pub fn n_electrons(&self) -> usize {
        self.n_electrons
    }

    pub fn core_energy(&self) -> f64 {
        self.core_energy
    }

    pub fn spatial_one_body(&self) -> &DMatrix<f64> {
        &self.one_body
    }

    pub fn spatial_two_body(&self) -> &EriTensor {
        &self.two_body
    }

    /// h_pq over spin orbitals.
    #[inline]
    pub fn one_body(&self, p: usize, q: usize) -> f64 {
        if p % 2 != q % 2 {
            0.0
        } else {
            self.one_body[(p / 2, q / 2)]
        }
    }

    /// h_pqrs = ∫ φ*_p(x₁)φ*_q(x₂)φ_s(x₁)φ_r(x₂)/r₁₂, the coefficient of
    /// ½ a†_p a†_q a_r a_s. Equals (ps|qr) in chemists' notation.
    #[inline]
    pub fn two_body(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        if p % 2 != s % 2 || q % 2 != r % 2 {
            0.0
        } else {
            self.two_body.get(p / 2, s / 2, q / 2, r / 2)
        }
    }

    /// Dense h_pq, row-major M×M.
    pub fn one_body_tensor(&self) -> Vec<f64> {
        let m = self.n_spin_orbitals();
        let mut out = Vec::with_capacity(m * m);
        for p in 0..m {
            for q in 0..m {
                out.push(self.one_body(p, q));
            }
        }
        out
    }

    /// Dense h_pqrs, row-major M⁴.
    pub fn two_body_tensor(&self) -> Vec<f64> {
        let m = self.n_spin_orbitals();
        let mut out = Vec::with_capacity(m * m * m * m);
        for p in 0..m {
            for q in 0..m {
                for r in 0..m {
                    for s in 0..m {
                        out.push(self.two_body(p, q, r, s));
                    }
                }
            }
        }
        out
    }

    /// Energy of the determinant occupying spin orbitals 0..N.
    pub fn reference_energy(&self) -> f64 {
        let n = self.n_electrons;
        let mut e = self.core_energy;
        for i in 0..n {
            e += self.one_body(i, i);
        }
        let mut two = 0.0;
        for i in 0..n {
            for j in 0..n {
                two += self.two_body(i, j, j, i) - self.two_body(i, j, i, j);
            }
        }
        e + 0.5 * two
    }
}

/// Four-index transformation of `eri` with `c`: (pq|rs) = Σ C_μp C_νq C_λr C_σs (μν|λσ).
pub fn transform_eri(eri: &EriTensor, c: &DMatrix<f64>) -> EriTensor {
    let n = c.nrows();
    let m = c.ncols();
    let idx = |a: usize, b: usize, cc: usize, d: usize, dims: [usize; 4]| {
        ((a * dims[1] + b) * dims[2] + cc) * dims[3] + d
    };
    // Quarter transforms over a dense copy; n ≤ a few dozen here.
    let mut t0 = vec![0.0; n * n * n * n];
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                for d in 0..n {
                    t0[idx(a, b, cc, d, [n, n, n, n])] = eri.get(a, b, cc, d);
                }
            }
        }
    }
    let mut t1 = vec![0.0; m * n * n * n];
    for p in 0..m {
        for mu in 0..n {
            let cmp = c[(mu, p)];
            if cmp == 0.0 {
                continue;
            }
            for rest in 0..n * n * n {
                t1[p * n * n * n + rest] += cmp * t0[mu * n * n * n + rest];
            }
        }
    }
    let mut t2 = vec![0.0; m * m * n * n];
    for p in 0..m {
        for q in 0..m {
            for nu in 0..n {
                let cnq = c[(nu, q)];
                for rest in 0..n * n {
                    t2[(p * m + q) * n * n + rest] += cnq * t1[(p * n + nu) * n * n + rest];
                }
            }
        }
    }
    let mut t3 = vec![0.0; m * m * m * n];
    for pq in 0..m * m {
        for r in 0..m {
            for la in 0..n {
                let clr = c[(la, r)];
                for s in 0..n {
                    t3[(pq * m + r) * n + s] += clr * t2[(pq * n + la) * n + s];
                }
            }
        }
    }
    EriTensor::from_fn(m, |p, q, r, s| {
        let base = ((p * m + q) * m + r) * n;
        (0..n).map(|si| c[(si, s)] * t3[base + si]).sum()
    })
}

pub fn mo_transform(ao: &AOIntegrals, hf: &RHFSolution) -> Result<MOIntegrals> {
    let c = &hf.coefficients;
    let h_mo = c.transpose() * ao.core_hamiltonian() * c;
    let h_mo = 0.5 * (&h_mo + h_mo.transpose());
    let eri_mo = transform_eri(&ao.eri, c);
    MOIntegrals::from_spatial(h_mo, eri_mo, hf.nuclear_repulsion, hf.n_electrons)
}
