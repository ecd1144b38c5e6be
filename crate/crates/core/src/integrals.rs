//! One- and two-electron integrals over contracted Cartesian Gaussians.
//!
//! McMurchie-Davidson scheme: products of Gaussians are expanded in Hermite
//! Gaussians (`E` coefficients), Coulomb-type integrals reduce to the Hermite
//! Coulomb integrals `R_tuv`, which in turn are built from the Boys function.

use nalgebra::DMatrix;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::basis::{Basis, BasisFunction, MoleculeSpec};
use crate::error::{Error, Result};

/// Highest Boys order any supported integral needs (ERI over p functions).
pub const MAX_BOYS_ORDER: usize = 4;
const BOYS_SERIES_LIMIT: f64 = 25.0;

/// F_m(x) = ∫₀¹ t^{2m} e^{−x t²} dt.
pub fn boys(m: usize, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::NegativeBoysArgument(x));
    }
    let mut out = vec![0.0; m + 1];
    boys_into(x, &mut out);
    Ok(out[m])
}

/// Fills `out[m]` with F_m(x) for m = 0..out.len(). `x` must be non-negative.
///
/// x < 25: power series at the highest order, then downward recursion.
/// x ≥ 25: F_0 from erf and upward recursion (stable there since 2x > 2m+1).
pub fn boys_into(x: f64, out: &mut [f64]) {
    debug_assert!(x >= 0.0);
    let m_max = out.len() - 1;
    let ex = (-x).exp();
    if x < BOYS_SERIES_LIMIT {
        let mut term = 1.0 / (2 * m_max + 1) as f64;
        let mut sum = term;
        let mut k = 1;
        loop {
            term *= 2.0 * x / (2 * (m_max + k) + 1) as f64;
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
            k += 1;
        }
        out[m_max] = ex * sum;
        for m in (0..m_max).rev() {
            out[m] = (2.0 * x * out[m + 1] + ex) / (2 * m + 1) as f64;
        }
    } else {
        let sx = x.sqrt();
        out[0] = 0.5 * PI.sqrt() * libm::erf(sx) / sx;
        for m in 0..m_max {
            out[m + 1] = ((2 * m + 1) as f64 * out[m] - ex) / (2.0 * x);
        }
    }
}

/// Maximum Cartesian power per direction after the kinetic-energy shift (l + 2).
const E_DIM: usize = 5;
const T_DIM: usize = 2 * E_DIM + 1;

/// 1-D Hermite expansion coefficients E^{ij}_t of a Gaussian product.
struct HermiteE {
    e: [[[f64; T_DIM]; E_DIM]; E_DIM],
}

impl HermiteE {
    /// `xab` = A − B along one axis, `a`, `b` exponents.
    fn new(imax: usize, jmax: usize, xab: f64, a: f64, b: f64) -> Self {
        let p = a + b;
        let mu = a * b / p;
        let xpa = -b * xab / p;
        let xpb = a * xab / p;
        let inv2p = 0.5 / p;
        let mut e = [[[0.0; T_DIM]; E_DIM]; E_DIM];
        e[0][0][0] = (-mu * xab * xab).exp();
        for i in 0..imax {
            for t in 0..=i + 1 {
                let lower = if t > 0 { e[i][0][t - 1] } else { 0.0 };
                e[i + 1][0][t] = inv2p * lower + xpa * e[i][0][t] + (t + 1) as f64 * e[i][0][t + 1];
            }
        }
        for i in 0..=imax {
            for j in 0..jmax {
                for t in 0..=i + j + 1 {
                    let lower = if t > 0 { e[i][j][t - 1] } else { 0.0 };
                    e[i][j + 1][t] =
                        inv2p * lower + xpb * e[i][j][t] + (t + 1) as f64 * e[i][j][t + 1];
                }
            }
        }
        Self { e }
    }

    #[inline]
    fn get(&self, i: usize, j: usize, t: usize) -> f64 {
        self.e[i][j][t]
    }
}

/// Data for one primitive pair of a function pair, reused by V and ERI.
#[derive(Clone)]
struct PrimPair {
    p: f64,
    center: [f64; 3],
    coef: f64,
    /// Hermite coefficients E_t, E_u, E_v per axis (t ≤ l_a + l_b).
    e: [[f64; 3]; 3],
    lmax: [usize; 3],
}

fn prim_pairs(fa: &BasisFunction, fb: &BasisFunction) -> Vec<PrimPair> {
    let mut out = Vec::with_capacity(9);
    for (&a, &ca) in fa.exponents.iter().zip(fa.coefficients.iter()) {
        for (&b, &cb) in fb.exponents.iter().zip(fb.coefficients.iter()) {
            let p = a + b;
            let mut e = [[0.0; 3]; 3];
            let mut lmax = [0; 3];
            for k in 0..3 {
                let (i, j) = (fa.powers[k] as usize, fb.powers[k] as usize);
                let h = HermiteE::new(i, j, fa.center[k] - fb.center[k], a, b);
                lmax[k] = i + j;
                for t in 0..=i + j {
                    e[k][t] = h.get(i, j, t);
                }
            }
            let center = [0, 1, 2].map(|k| (a * fa.center[k] + b * fb.center[k]) / p);
            out.push(PrimPair {
                p,
                center,
                coef: ca * cb,
                e,
                lmax,
            });
        }
    }
    out
}

const R_DIM: usize = 2 * 2 + 1;
const R_LEN: usize = R_DIM * R_DIM * R_DIM;

#[inline]
fn ridx(t: usize, u: usize, v: usize) -> usize {
    (t * R_DIM + u) * R_DIM + v
}

/// Hermite Coulomb integrals R^0_{tuv}(alpha, pc) for t + u + v ≤ l.
fn hermite_coulomb(l: usize, alpha: f64, pc: [f64; 3]) -> [f64; R_LEN] {
    let mut f = [0.0; MAX_BOYS_ORDER + 1];
    let r2 = pc[0] * pc[0] + pc[1] * pc[1] + pc[2] * pc[2];
    boys_into(alpha * r2, &mut f[..=l]);
    let mut r = [[0.0; R_LEN]; MAX_BOYS_ORDER + 1];
    let mut pow = 1.0;
    for n in 0..=l {
        r[n][0] = pow * f[n];
        pow *= -2.0 * alpha;
    }
    for order in 1..=l {
        for n in 0..=(l - order) {
            for t in 0..=order {
                for u in 0..=(order - t) {
                    let v = order - t - u;
                    let up = &r[n + 1];
                    let val = if t > 0 {
                        let prev = if t > 1 { (t - 1) as f64 * up[ridx(t - 2, u, v)] } else { 0.0 };
                        prev + pc[0] * up[ridx(t - 1, u, v)]
                    } else if u > 0 {
                        let prev = if u > 1 { (u - 1) as f64 * up[ridx(t, u - 2, v)] } else { 0.0 };
                        prev + pc[1] * up[ridx(t, u - 1, v)]
                    } else {
                        let prev = if v > 1 { (v - 1) as f64 * up[ridx(t, u, v - 2)] } else { 0.0 };
                        prev + pc[2] * up[ridx(t, u, v - 1)]
                    };
                    r[n][ridx(t, u, v)] = val;
                }
            }
        }
    }
    r[0]
}

fn one_d_overlap(h: &HermiteE, i: usize, j: usize, p: f64) -> f64 {
    h.get(i, j, 0) * (PI / p).sqrt()
}

fn overlap_and_kinetic(fa: &BasisFunction, fb: &BasisFunction) -> (f64, f64) {
    let mut s_total = 0.0;
    let mut t_total = 0.0;
    for (&a, &ca) in fa.exponents.iter().zip(fa.coefficients.iter()) {
        for (&b, &cb) in fb.exponents.iter().zip(fb.coefficients.iter()) {
            let p = a + b;
            let mut s = [0.0; 3];
            let mut t = [0.0; 3];
            for k in 0..3 {
                let (i, j) = (fa.powers[k] as usize, fb.powers[k] as usize);
                let h = HermiteE::new(i, j + 2, fa.center[k] - fb.center[k], a, b);
                s[k] = one_d_overlap(&h, i, j, p);
                let lower = if j >= 2 {
                    (j * (j - 1)) as f64 * one_d_overlap(&h, i, j - 2, p)
                } else {
                    0.0
                };
                t[k] = -0.5
                    * (lower - 2.0 * b * (2 * j + 1) as f64 * s[k]
                        + 4.0 * b * b * one_d_overlap(&h, i, j + 2, p));
            }
            s_total += ca * cb * s[0] * s[1] * s[2];
            t_total += ca * cb * (t[0] * s[1] * s[2] + s[0] * t[1] * s[2] + s[0] * s[1] * t[2]);
        }
    }
    (s_total, t_total)
}

fn symmetric_from(n: usize, f: impl Fn(usize, usize) -> f64 + Sync) -> DMatrix<f64> {
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| (0..=i).map(|j| f(i, j)).collect())
        .collect();
    let mut m = DMatrix::zeros(n, n);
    for (i, row) in upper.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

pub fn overlap(basis: &Basis) -> DMatrix<f64> {
    let f = &basis.functions;
    symmetric_from(f.len(), |i, j| overlap_and_kinetic(&f[i], &f[j]).0)
}

pub fn kinetic(basis: &Basis) -> DMatrix<f64> {
    let f = &basis.functions;
    symmetric_from(f.len(), |i, j| overlap_and_kinetic(&f[i], &f[j]).1)
}

fn nuclear_element(pairs: &[PrimPair], mol: &MoleculeSpec) -> f64 {
    let mut total = 0.0;
    for pp in pairs {
        let l = pp.lmax.iter().sum::<usize>();
        for atom in mol.atoms() {
            let pc = [0, 1, 2].map(|k| pp.center[k] - atom.position[k]);
            let r = hermite_coulomb(l, pp.p, pc);
            let mut acc = 0.0;
            for t in 0..=pp.lmax[0] {
                for u in 0..=pp.lmax[1] {
                    for v in 0..=pp.lmax[2] {
                        acc += pp.e[0][t] * pp.e[1][u] * pp.e[2][v] * r[ridx(t, u, v)];
                    }
                }
            }
            total -= atom.charge() * pp.coef * 2.0 * PI / pp.p * acc;
        }
    }
    total
}

/// Nuclear attraction matrix, −Σ_C Z_C ⟨μ|1/|r − R_C||ν⟩.
pub fn nuclear_attraction(basis: &Basis, mol: &MoleculeSpec) -> DMatrix<f64> {
    let f = &basis.functions;
    symmetric_from(f.len(), |i, j| nuclear_element(&prim_pairs(&f[i], &f[j]), mol))
}

/// Compound index of an unordered pair.
#[inline]
pub fn pair_index(i: usize, j: usize) -> usize {
    if i >= j {
        i * (i + 1) / 2 + j
    } else {
        j * (j + 1) / 2 + i
    }
}

/// Two-electron integrals (pq|rs) in chemists' notation, stored once per
/// 8-fold symmetry class.
#[derive(Debug, Clone, PartialEq)]
pub struct EriTensor {
    n: usize,
    values: Vec<f64>,
}

impl EriTensor {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let npair = n * (n + 1) / 2;
        let mut values = vec![0.0; npair * (npair + 1) / 2];
        for i in 0..n {
            for j in 0..=i {
                for k in 0..n {
                    for l in 0..=k {
                        let (ij, kl) = (pair_index(i, j), pair_index(k, l));
                        if kl <= ij {
                            values[pair_index(ij, kl)] = f(i, j, k, l);
                        }
                    }
                }
            }
        }
        Self { n, values }
    }

    pub fn zeros(n: usize) -> Self {
        let npair = n * (n + 1) / 2;
        Self {
            n,
            values: vec![0.0; npair * (npair + 1) / 2],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Sets (pq|rs) and, implicitly, its seven symmetry partners.
    pub fn set(&mut self, p: usize, q: usize, r: usize, s: usize, value: f64) {
        self.values[pair_index(pair_index(p, q), pair_index(r, s))] = value;
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.values[pair_index(pair_index(p, q), pair_index(r, s))]
    }

    /// Number of symmetry-unique values.
    pub fn unique_len(&self) -> usize {
        self.values.len()
    }
}

fn eri_element(ab: &[PrimPair], cd: &[PrimPair]) -> f64 {
    let mut total = 0.0;
    for p1 in ab {
        for p2 in cd {
            let alpha = p1.p * p2.p / (p1.p + p2.p);
            let pq = [0, 1, 2].map(|k| p1.center[k] - p2.center[k]);
            let l = p1.lmax.iter().sum::<usize>() + p2.lmax.iter().sum::<usize>();
            let r = hermite_coulomb(l, alpha, pq);
            let mut acc = 0.0;
            for t in 0..=p1.lmax[0] {
                for u in 0..=p1.lmax[1] {
                    for v in 0..=p1.lmax[2] {
                        let e1 = p1.e[0][t] * p1.e[1][u] * p1.e[2][v];
                        let mut inner = 0.0;
                        for tau in 0..=p2.lmax[0] {
                            for nu in 0..=p2.lmax[1] {
                                for phi in 0..=p2.lmax[2] {
                                    let sign = if (tau + nu + phi) % 2 == 0 { 1.0 } else { -1.0 };
                                    inner += sign
                                        * p2.e[0][tau]
                                        * p2.e[1][nu]
                                        * p2.e[2][phi]
                                        * r[ridx(t + tau, u + nu, v + phi)];
                                }
                            }
                        }
                        acc += e1 * inner;
                    }
                }
            }
            let pre = 2.0 * PI.powf(2.5) / (p1.p * p2.p * (p1.p + p2.p).sqrt());
            total += p1.coef * p2.coef * pre * acc;
        }
    }
    total
}

pub fn electron_repulsion(basis: &Basis) -> EriTensor {
    let f = &basis.functions;
    let n = f.len();
    let mut pairs = Vec::with_capacity(n * (n + 1) / 2);
    let mut pair_ids = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in 0..=i {
            pairs.push(prim_pairs(&f[i], &f[j]));
            pair_ids.push((i, j));
        }
    }
    let rows: Vec<Vec<f64>> = (0..pairs.len())
        .into_par_iter()
        .map(|ij| (0..=ij).map(|kl| eri_element(&pairs[ij], &pairs[kl])).collect())
        .collect();
    let values = rows.into_iter().flatten().collect();
    EriTensor { n, values }
}

/// All AO-basis integrals of one molecule.
#[derive(Debug, Clone)]
pub struct AOIntegrals {
    pub overlap: DMatrix<f64>,
    pub kinetic: DMatrix<f64>,
    pub nuclear: DMatrix<f64>,
    pub eri: EriTensor,
}

impl AOIntegrals {
    pub fn compute(basis: &Basis, mol: &MoleculeSpec) -> Self {
        Self {
            overlap: overlap(basis),
            kinetic: kinetic(basis),
            nuclear: nuclear_attraction(basis, mol),
            eri: electron_repulsion(basis),
        }
    }

    pub fn n(&self) -> usize {
        self.overlap.nrows()
    }

    pub fn core_hamiltonian(&self) -> DMatrix<f64> {
        &self.kinetic + &self.nuclear
    }
}
