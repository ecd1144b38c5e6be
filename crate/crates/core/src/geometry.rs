//! Parameterized molecular templates, energy-surface scans and geometry
//! optimization.
//!
//! Distances are in Ångström and angles in degrees. For `pyramidal-xh3` the
//! angle is measured between an X–H bond and the C₃ symmetry axis, not between
//! two bonds: 90° is planar, and ammonia sits near 68°.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{BasisLibrary, Element, MoleculeSpec};
use crate::error::{Error, Result};
use crate::pipeline::{hartree_fock, ElectronicProblem};
use crate::vqe::SweepConfig;

/// Shortest distance accepted by [`build_geometry`], in Å.
pub const MIN_DISTANCE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TemplateKind {
    Diatomic,
    #[serde(rename = "linear-xh2")]
    LinearXH2,
    #[serde(rename = "bent-xh2")]
    BentXH2,
    #[serde(rename = "pyramidal-xh3")]
    PyramidalXH3,
    #[serde(rename = "tetrahedral-xh4")]
    TetrahedralXH4,
}

impl TemplateKind {
    pub const ALL: [TemplateKind; 5] = [
        TemplateKind::Diatomic,
        TemplateKind::LinearXH2,
        TemplateKind::BentXH2,
        TemplateKind::PyramidalXH3,
        TemplateKind::TetrahedralXH4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TemplateKind::Diatomic => "diatomic",
            TemplateKind::LinearXH2 => "linear-xh2",
            TemplateKind::BentXH2 => "bent-xh2",
            TemplateKind::PyramidalXH3 => "pyramidal-xh3",
            TemplateKind::TetrahedralXH4 => "tetrahedral-xh4",
        }
    }

    pub fn parameter_count(self) -> usize {
        match self {
            TemplateKind::BentXH2 | TemplateKind::PyramidalXH3 => 2,
            _ => 1,
        }
    }

    fn element_count(self) -> usize {
        match self {
            TemplateKind::Diatomic => 2,
            _ => 1,
        }
    }
}

/// A molecule family with 1 or 2 free geometric parameters: the X–H (or A–B)
/// distance, plus an angle for the bent and pyramidal templates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GeometryTemplate {
    pub kind: TemplateKind,
    /// Both atoms for `diatomic`, the central atom otherwise.
    pub elements: Vec<Element>,
    pub charge: i32,
}

impl GeometryTemplate {
    pub fn new(kind: TemplateKind, elements: Vec<Element>, charge: i32) -> Result<Self> {
        if elements.len() != kind.element_count() {
            return Err(Error::InvalidArgument(format!(
                "template {} takes {} element(s), got {}",
                kind.name(),
                kind.element_count(),
                elements.len()
            )));
        }
        Ok(Self { kind, elements, charge })
    }

    pub fn parameter_count(&self) -> usize {
        self.kind.parameter_count()
    }

    pub fn parameter_names(&self) -> &'static [&'static str] {
        if self.parameter_count() == 2 {
            &["distance", "angle"]
        } else {
            &["distance"]
        }
    }

    /// A reasonable starting point for the HF search.
    pub fn default_start(&self) -> Vec<f64> {
        match self.kind {
            TemplateKind::BentXH2 => vec![1.0, 104.5],
            TemplateKind::PyramidalXH3 => vec![1.0, 68.0],
            _ => vec![1.0],
        }
    }

    pub fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.parameter_count() {
            return Err(Error::InvalidGeometry(format!(
                "{} takes {} parameter(s), got {}",
                self.kind.name(),
                self.parameter_count(),
                params.len()
            )));
        }
        let d = params[0];
        if !(d > MIN_DISTANCE) || !d.is_finite() {
            return Err(Error::InvalidGeometry(format!(
                "distance {d} Å must exceed {MIN_DISTANCE} Å"
            )));
        }
        if let Some(&a) = params.get(1) {
            if !(a > 0.0 && a < 180.0) {
                return Err(Error::InvalidGeometry(format!("angle {a}° must lie in (0°, 180°)")));
            }
        }
        Ok(())
    }
}

/// `kind:El[,El][:charge]`, e.g. `diatomic:He,H:+1` or `bent-xh2:O`.
impl FromStr for GeometryTemplate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::InvalidArgument(format!(
                "bad template `{s}`; expected kind:El[,El][:charge] with kind one of {}",
                TemplateKind::ALL.map(|k| k.name()).join(", ")
            ))
        };
        let mut parts = s.trim().split(':');
        let kind_name = parts.next().ok_or_else(bad)?.to_ascii_lowercase();
        let kind = TemplateKind::ALL
            .into_iter()
            .find(|k| k.name() == kind_name)
            .ok_or_else(bad)?;
        let elements = parts
            .next()
            .ok_or_else(bad)?
            .split(',')
            .map(|e| e.trim().parse::<Element>())
            .collect::<Result<Vec<_>>>()?;
        let charge = match parts.next() {
            Some(c) => c.trim().parse::<i32>().map_err(|_| bad())?,
            None => 0,
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        Self::new(kind, elements, charge)
    }
}

impl fmt::Display for GeometryTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let els: Vec<&str> = self.elements.iter().map(|e| e.symbol()).collect();
        write!(f, "{}:{}", self.kind.name(), els.join(","))?;
        if self.charge != 0 {
            write!(f, ":{:+}", self.charge)?;
        }
        Ok(())
    }
}

/// Cartesian coordinates for `params`, X (or the first diatomic atom) at the origin.
pub fn build_geometry(t: &GeometryTemplate, params: &[f64]) -> Result<MoleculeSpec> {
    t.check_params(params)?;
    let d = params[0];
    let x = t.elements[0];
    let h = Element::H;
    let atoms: Vec<(Element, [f64; 3])> = match t.kind {
        TemplateKind::Diatomic => vec![(x, [0.0, 0.0, 0.0]), (t.elements[1], [0.0, 0.0, d])],
        TemplateKind::LinearXH2 => vec![(x, [0.0; 3]), (h, [0.0, 0.0, d]), (h, [0.0, 0.0, -d])],
        TemplateKind::BentXH2 => {
            let half = params[1].to_radians() / 2.0;
            let (s, c) = half.sin_cos();
            vec![(x, [0.0; 3]), (h, [d * s, 0.0, d * c]), (h, [-d * s, 0.0, d * c])]
        }
        TemplateKind::PyramidalXH3 => {
            let (sb, cb) = params[1].to_radians().sin_cos();
            let mut atoms = vec![(x, [0.0; 3])];
            for k in 0..3 {
                let (sp, cp) = (k as f64 * 2.0 * std::f64::consts::PI / 3.0).sin_cos();
                atoms.push((h, [d * sb * cp, d * sb * sp, d * cb]));
            }
            atoms
        }
        TemplateKind::TetrahedralXH4 => {
            let a = d / 3f64.sqrt();
            vec![
                (x, [0.0; 3]),
                (h, [a, a, a]),
                (h, [a, -a, -a]),
                (h, [-a, a, -a]),
                (h, [-a, -a, a]),
            ]
        }
    };
    MoleculeSpec::from_angstrom(&atoms, t.charge)
}

/// HF and UCCSD energies at one geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSample {
    pub params: Vec<f64>,
    pub e_hf: f64,
    pub e_uccsd: f64,
}

impl SurfaceSample {
    pub const CSV_HEADER: &'static str = "param1,param2,e_hf,e_uccsd";

    pub fn to_csv(&self) -> String {
        let p2 = self.params.get(1).map(|a| format!("{a:.12}")).unwrap_or_default();
        format!("{:.12},{},{:.12},{:.12}", self.params[0], p2, self.e_hf, self.e_uccsd)
    }
}

/// RHF energy (including nuclear repulsion) at `params`.
pub fn hf_energy(t: &GeometryTemplate, params: &[f64], library: &BasisLibrary) -> Result<f64> {
    let mol = build_geometry(t, params)?.canonicalized();
    Ok(hartree_fock(&mol, library)?.1.energy)
}

/// Full HF + UCCSD/VQE solve at one geometry.
pub fn evaluate(t: &GeometryTemplate, params: &[f64], library: &BasisLibrary, cfg: &SweepConfig) -> Result<SurfaceSample> {
    let mol = build_geometry(t, params)?.canonicalized();
    let problem = ElectronicProblem::from_molecule(&mol, library)?;
    let vqe = problem.solve(cfg)?;
    Ok(SurfaceSample {
        params: params.to_vec(),
        e_hf: problem.hf_energy,
        e_uccsd: vqe.energy,
    })
}

/// One grid point of a scan; failures are kept rather than aborting the scan.
#[derive(Debug)]
pub struct ScanPoint {
    pub params: Vec<f64>,
    pub outcome: Result<SurfaceSample>,
}

/// Evaluates every grid point in parallel. `on_point` sees each point as it
/// finishes (in completion order); the returned list is in grid order.
pub fn scan(
    t: &GeometryTemplate,
    grid: &[Vec<f64>],
    library: &BasisLibrary,
    cfg: &SweepConfig,
    on_point: &(dyn Fn(&ScanPoint) + Sync),
) -> Result<Vec<ScanPoint>> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty scan grid".into()));
    }
    Ok(grid
        .par_iter()
        .map(|p| {
            let point = ScanPoint {
                params: p.clone(),
                outcome: evaluate(t, p, library, cfg),
            };
            on_point(&point);
            point
        })
        .collect())
}

/// Least-squares quadratic E(p) ≈ c + gᵀu + ½uᵀQu with u = p − origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParaboloidFit {
    pub origin: Vec<f64>,
    pub constant: f64,
    pub gradient: Vec<f64>,
    /// Row-major Hessian.
    pub hessian: Vec<Vec<f64>>,
    pub minimum: Vec<f64>,
    pub energy: f64,
    /// Ratio of extreme singular values of the design matrix.
    pub condition_number: f64,
    pub rms_residual: f64,
}

fn design_row(u: &[f64]) -> Vec<f64> {
    match u.len() {
        1 => vec![1.0, u[0], 0.5 * u[0] * u[0]],
        _ => vec![1.0, u[0], u[1], 0.5 * u[0] * u[0], u[0] * u[1], 0.5 * u[1] * u[1]],
    }
}

/// Fits a paraboloid to `(params, energy)` points and returns its stationary
/// point, which must be a minimum.
pub fn paraboloid_fit(points: &[(Vec<f64>, f64)]) -> Result<ParaboloidFit> {
    let dim = points.first().map(|p| p.0.len()).unwrap_or(0);
    if !(dim == 1 || dim == 2) || points.iter().any(|p| p.0.len() != dim) {
        return Err(Error::Fit("points must all have 1 or 2 parameters".into()));
    }
    let n_coef = if dim == 1 { 3 } else { 6 };
    if points.len() < n_coef {
        return Err(Error::Fit(format!(
            "under-determined: {} point(s) for {n_coef} coefficients",
            points.len()
        )));
    }
    let origin: Vec<f64> = (0..dim)
        .map(|k| points.iter().map(|p| p.0[k]).sum::<f64>() / points.len() as f64)
        .collect();
    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|(p, _)| design_row(&p.iter().zip(&origin).map(|(a, b)| a - b).collect::<Vec<_>>()))
        .collect();
    let a = DMatrix::from_fn(points.len(), n_coef, |i, j| rows[i][j]);
    let b = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > smax * 1e-12) {
        return Err(Error::Fit("sample set is degenerate (rank-deficient design matrix)".into()));
    }
    let coef = svd.solve(&b, 0.0).map_err(|e| Error::Fit(e.to_string()))?;
    let residual = &a * &coef - &b;
    let rms_residual = (residual.norm_squared() / points.len() as f64).sqrt();

    let (gradient, hessian, step, drop) = if dim == 1 {
        let (g, q) = (coef[1], coef[2]);
        if !(q > 0.0) {
            return Err(Error::Fit(format!("no interior minimum (curvature {q:e})")));
        }
        (vec![g], vec![vec![q]], vec![-g / q], 0.5 * g * g / q)
    } else {
        let g = Vector2::new(coef[1], coef[2]);
        let q = Matrix2::new(coef[3], coef[4], coef[4], coef[5]);
        let half_trace = 0.5 * (q[(0, 0)] + q[(1, 1)]);
        let spread = (half_trace * half_trace - q.determinant()).max(0.0).sqrt();
        let lowest = half_trace - spread;
        if !(lowest > 0.0) {
            return Err(Error::Fit(format!(
                "no interior minimum (Hessian eigenvalues {:e}, {:e})",
                lowest,
                half_trace + spread
            )));
        }
        let x = q.cholesky().ok_or_else(|| Error::Fit("Hessian not positive definite".into()))?.solve(&g);
        (
            vec![g[0], g[1]],
            vec![vec![q[(0, 0)], q[(0, 1)]], vec![q[(1, 0)], q[(1, 1)]]],
            vec![-x[0], -x[1]],
            0.5 * g.dot(&x),
        )
    };
    Ok(ParaboloidFit {
        minimum: origin.iter().zip(&step).map(|(o, s)| o + s).collect(),
        origin,
        constant: coef[0],
        gradient,
        hessian,
        energy: coef[0] - drop,
        condition_number: smax / smin,
        rms_residual,
    })
}

/// Minimum of `f` along one coordinate: downhill bracketing from `x0` in
/// steps of `step`, then golden section to `tol`.
fn golden_section(
    mut f: impl FnMut(f64) -> Result<f64>,
    x0: f64,
    step: f64,
    bounds: (f64, f64),
    tol: f64,
) -> Result<(f64, f64)> {
    const R: f64 = 0.618_033_988_749_894_9;
    let clamp = |x: f64| x.clamp(bounds.0, bounds.1);
    let mut b = clamp(x0);
    let mut fb = f(b)?;
    let mut a = clamp(b - step);
    let mut fa = f(a)?;
    let mut dir = 1.0;
    if fa < fb {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
        dir = -1.0;
    }
    // Walk downhill until the function rises again.
    let mut h = step;
    let mut c = clamp(b + dir * h);
    let mut fc = f(c)?;
    while fc < fb {
        if c == b {
            return Ok((b, fb));
        }
        a = b;
        b = c;
        fb = fc;
        h *= 1.6;
        c = clamp(b + dir * h);
        fc = f(c)?;
    }
    let (mut lo, mut hi) = if a < c { (a, c) } else { (c, a) };
    let mut x1 = hi - R * (hi - lo);
    let mut x2 = lo + R * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - R * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + R * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 < f2 { (x1, f1) } else { (x2, f2) })
}

#[derive(Debug, Clone)]
pub struct OptimizeOptions {
    pub sweep: SweepConfig,
    /// Starting point of the HF search; the template default if `None`.
    pub start: Option<Vec<f64>>,
    pub distance_tolerance: f64,
    pub angle_tolerance: f64,
    /// Half-widths of the UCCSD stencil.
    pub distance_offset: f64,
    pub angle_offset: f64,
    pub max_hf_cycles: usize,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            sweep: SweepConfig::default(),
            start: None,
            distance_tolerance: 1e-4,
            angle_tolerance: 1e-2,
            distance_offset: 0.05,
            angle_offset: 2.0,
            max_hf_cycles: 30,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeometryOptimization {
    pub template: String,
    pub hf_minimum: Vec<f64>,
    pub hf_energy: f64,
    pub hf_cycles: usize,
    pub hf_converged: bool,
    pub samples: Vec<SurfaceSample>,
    pub fit: ParaboloidFit,
    pub refitted: bool,
    /// Fitted minimum.
    pub params: Vec<f64>,
    /// VQE energy at `params`.
    pub energy: f64,
    /// HF energy at `params`.
    pub hf_energy_at_minimum: f64,
}

/// Cyclic golden-section minimization of the RHF energy.
pub fn optimize_hf(
    t: &GeometryTemplate,
    library: &BasisLibrary,
    opts: &OptimizeOptions,
) -> Result<(Vec<f64>, f64, usize, bool)> {
    let mut p = opts.start.clone().unwrap_or_else(|| t.default_start());
    t.check_params(&p)?;
    let tols = [opts.distance_tolerance, opts.angle_tolerance];
    let steps = [0.1, 5.0];
    let bounds = [(MIN_DISTANCE + 0.2, 5.0), (1.0, 179.0)];
    let mut energy = hf_energy(t, &p, library)?;
    for cycle in 1..=opts.max_hf_cycles {
        let previous = p.clone();
        for k in 0..p.len() {
            let (x, e) = golden_section(
                |x| {
                    let mut q = p.clone();
                    q[k] = x;
                    hf_energy(t, &q, library)
                },
                p[k],
                steps[k],
                bounds[k],
                tols[k],
            )?;
            if e <= energy {
                p[k] = x;
                energy = e;
            }
        }
        let moved = p.iter().zip(&previous).zip(&tols).any(|((a, b), tol)| (a - b).abs() > *tol);
        if p.len() == 1 || !moved {
            return Ok((p, energy, cycle, true));
        }
    }
    Ok((p, energy, opts.max_hf_cycles, false))
}

fn stencil(center: &[f64], offsets: &[f64]) -> Vec<Vec<f64>> {
    let d = [-1.0, 0.0, 1.0];
    if center.len() == 1 {
        d.iter().map(|s| vec![center[0] + s * offsets[0]]).collect()
    } else {
        d.iter()
            .flat_map(|s| d.iter().map(move |r| vec![center[0] + s * offsets[0], center[1] + r * offsets[1]]))
            .collect()
    }
}

fn sample_stencil(
    t: &GeometryTemplate,
    center: &[f64],
    offsets: &[f64],
    library: &BasisLibrary,
    cfg: &SweepConfig,
) -> Result<Vec<SurfaceSample>> {
    scan(t, &stencil(center, offsets), library, cfg, &|_| {})?
        .into_iter()
        .map(|p| p.outcome)
        .collect()
}

fn fit_samples(samples: &[SurfaceSample]) -> Result<ParaboloidFit> {
    paraboloid_fit(&samples.iter().map(|s| (s.params.clone(), s.e_uccsd)).collect::<Vec<_>>())
}

/// HF geometry search followed by a paraboloid fit to UCCSD energies on a
/// stencil around the HF minimum.
pub fn optimize_geometry(t: &GeometryTemplate, library: &BasisLibrary, opts: &OptimizeOptions) -> Result<GeometryOptimization> {
    let (hf_minimum, hf_energy, hf_cycles, hf_converged) = optimize_hf(t, library, opts)?;
    let offsets = [opts.distance_offset, opts.angle_offset];
    let offsets = &offsets[..t.parameter_count()];
    let mut samples = sample_stencil(t, &hf_minimum, offsets, library, &opts.sweep)?;
    let mut fit = fit_samples(&samples)?;
    let moved = |fit: &ParaboloidFit, center: &[f64]| {
        fit.minimum
            .iter()
            .zip(center)
            .zip(offsets)
            .any(|((m, c), o)| (m - c).abs() > 0.5 * o)
    };
    let refitted = moved(&fit, &hf_minimum);
    if refitted {
        samples = sample_stencil(t, &fit.minimum, offsets, library, &opts.sweep)?;
        fit = fit_samples(&samples)?;
    }
    let at_min = evaluate(t, &fit.minimum, library, &opts.sweep)?;
    Ok(GeometryOptimization {
        template: t.to_string(),
        hf_minimum,
        hf_energy,
        hf_cycles,
        hf_converged,
        samples,
        params: fit.minimum.clone(),
        energy: at_min.e_uccsd,
        hf_energy_at_minimum: at_min.e_hf,
        fit,
        refitted,
    })
}

/// A reference molecule with its published UCCSD/STO-3G optimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub template: &'static str,
    pub params: &'static [f64],
    pub qubits: usize,
    pub energy: f64,
}

impl Preset {
    pub fn template(&self) -> GeometryTemplate {
        self.template.parse().expect("preset templates are valid")
    }

    pub fn molecule(&self) -> MoleculeSpec {
        build_geometry(&self.template(), self.params).expect("preset geometries are valid")
    }
}

pub const PRESETS: [Preset; 14] = [
    Preset { name: "H2", template: "diatomic:H,H", params: &[0.735], qubits: 4, energy: -1.137306 },
    Preset { name: "HeH+", template: "diatomic:He,H:+1", params: &[0.913], qubits: 4, energy: -2.862695 },
    Preset { name: "LiH", template: "diatomic:Li,H", params: &[1.546], qubits: 12, energy: -7.882752 },
    Preset { name: "OH-", template: "diatomic:O,H:-1", params: &[1.112], qubits: 12, energy: -74.095341 },
    Preset { name: "HF", template: "diatomic:F,H", params: &[0.995], qubits: 12, energy: -98.603302 },
    Preset { name: "BeH2", template: "linear-xh2:Be", params: &[1.316], qubits: 14, energy: -15.594875 },
    Preset { name: "H2O", template: "bent-xh2:O", params: &[1.028, 96.9], qubits: 14, energy: -75.023189 },
    Preset { name: "H3O+", template: "pyramidal-xh3:O:+1", params: &[1.021, 69.0], qubits: 16, energy: -75.396782 },
    Preset { name: "NH3", template: "pyramidal-xh3:N", params: &[1.070, 62.2], qubits: 16, energy: -55.528054 },
    Preset { name: "CH4", template: "tetrahedral-xh4:C", params: &[1.108], qubits: 18, energy: -39.806790 },
    Preset { name: "NH4+", template: "tetrahedral-xh4:N:+1", params: &[1.067], qubits: 18, energy: -55.954449 },
    Preset { name: "F2", template: "diatomic:F,F", params: &[1.387], qubits: 20, energy: -196.050161 },
    Preset { name: "HCl", template: "diatomic:Cl,H", params: &[1.342], qubits: 20, energy: -455.157067 },
    Preset { name: "CO", template: "diatomic:C,O", params: &[1.182], qubits: 20, energy: -111.363038 },
];

/// Case-insensitive preset lookup.
pub fn preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name.eq_ignore_ascii_case(name))
}
