use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use molvqe::basis::BasisLibrary;
use molvqe::fermion_qubit::{export_fcidump, import_fcidump};
use molvqe::geometry::{
    optimize_geometry, paraboloid_fit, scan, OptimizeOptions, Preset, ScanPoint, SurfaceSample, PRESETS,
};
use molvqe::pipeline::{hartree_fock, ElectronicProblem};
use molvqe::scf::mo_transform;
use molvqe::uccsd::Excitation;
use molvqe::vqe::{minimize_on_interval, ProgressRecord, SweepConfig};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::args::{
    EnergyArgs, EnergyColumn, FcidumpCommand, FitArgs, Format, GeometryInput, OptimizeArgs, ScanArgs, SolverArgs,
    SweepArgs, SweepVariable, TableArgs, TableMode,
};
use crate::error::{CliError, CliResult, ErrorKind};
use crate::input::{self, parse_list, read_file};
use crate::report::*;

/// Text to emit, plus an error to report after emitting it (partial results).
pub struct Output {
    pub text: String,
    pub deferred: Option<CliError>,
}

impl Output {
    fn complete(text: String) -> Self {
        Self { text, deferred: None }
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn num(x: f64) -> String {
    format!("{x:.12}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn csv_line(fields: &[String]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(fields).expect("in-memory CSV write");
    String::from_utf8(w.into_inner().expect("in-memory CSV flush")).expect("CSV is UTF-8")
}

fn sweep_config(s: &SolverArgs) -> CliResult<SweepConfig> {
    let cfg = SweepConfig {
        max_sweeps: s.sweeps,
        energy_tolerance: s.tolerance,
        ..Default::default()
    };
    cfg.validate().map_err(|e| CliError::usage(e.to_string()))?;
    Ok(cfg)
}

pub fn hf(g: &GeometryInput, lib: &BasisLibrary, format: Format) -> CliResult<Output> {
    let (mol, _) = input::molecule(g)?;
    let (ao, sol) = hartree_fock(&mol, lib)?;
    let report = HfReport {
        command: "hf".into(),
        molecule: (&mol).into(),
        n_basis: ao.overlap.nrows(),
        n_electrons: sol.n_electrons,
        nuclear_repulsion: sol.nuclear_repulsion,
        energy: sol.energy,
        iterations: sol.iterations,
        orbital_energies: sol.orbital_energies.iter().copied().collect(),
    };
    Ok(Output::complete(match format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut out = csv_line(&["quantity".into(), "index".into(), "value".into()]);
            out += &csv_line(&["e_hf".into(), String::new(), num(report.energy)]);
            out += &csv_line(&["nuclear_repulsion".into(), String::new(), num(report.nuclear_repulsion)]);
            out += &csv_line(&["iterations".into(), String::new(), report.iterations.to_string()]);
            for (k, e) in report.orbital_energies.iter().enumerate() {
                out += &csv_line(&["orbital_energy".into(), k.to_string(), num(*e)]);
            }
            out
        }
    }))
}

pub fn energy(a: &EnergyArgs, lib: &BasisLibrary, format: Format) -> CliResult<Output> {
    let cfg = sweep_config(&a.solver)?;
    let g = &a.geometry;
    let any_geometry = g.molecule.is_some() || g.template.is_some() || g.preset.is_some();
    let (problem, source, molecule) = match (&a.fcidump, any_geometry) {
        (Some(path), false) => {
            let mo = import_fcidump(&read_file(path)?).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            (ElectronicProblem::from_mo(mo)?, format!("fcidump {}", path.display()), None)
        }
        (None, _) => {
            let (mol, source) = input::molecule(g)?;
            (ElectronicProblem::from_molecule(&mol, lib)?, source, Some((&mol).into()))
        }
        (Some(_), true) => return Err(CliError::usage("--fcidump cannot be combined with a geometry source")),
    };
    let mut trace = String::new();
    if a.trace.is_some() {
        trace.push_str(ProgressRecord::CSV_HEADER);
        trace.push('\n');
    }
    let result = problem.solve_with_progress(&cfg, &mut |r| {
        if a.trace.is_some() {
            trace.push_str(&r.to_csv());
            trace.push('\n');
        }
    })?;
    if let Some(path) = &a.trace {
        fs::write(path, trace).map_err(|e| CliError::io(path, e))?;
    }
    let e_fci = if a.no_fci { None } else { Some(problem.fci_energy()?) };
    let sampled = match a.shots {
        Some(0) => return Err(CliError::usage("--shots must be positive")),
        Some(shots) => {
            let state = problem.engine()?.full_state(&result.parameters)?;
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            Some(SampledEnergy {
                shots,
                seed: a.seed,
                energy: state.sample_expectation(&problem.hamiltonian, shots, &mut rng)?,
            })
        }
        None => None,
    };
    let report = EnergyReport {
        command: "energy".into(),
        source,
        molecule,
        n_qubits: problem.n_qubits(),
        n_electrons: problem.mo.n_electrons(),
        n_excitations: problem.program.parameter_count(),
        pauli_terms: problem.hamiltonian.len(),
        e_hf: problem.hf_energy,
        e_uccsd: result.energy,
        e_fci,
        sweeps: result.sweeps,
        sweep_energies: result.sweep_energies.clone(),
        converged: result.converged,
        evaluations: result.evaluations,
        parameters: result.parameters.clone(),
        sampled,
    };
    Ok(Output::complete(match format {
        Format::Json => json(&report),
        Format::Csv => {
            let row = |q: &str, i: String, v: String| csv_line(&[q.into(), i, v]);
            let mut out = row("quantity", "index".into(), "value".into());
            out += &row("n_qubits", String::new(), report.n_qubits.to_string());
            out += &row("n_excitations", String::new(), report.n_excitations.to_string());
            out += &row("e_hf", String::new(), num(report.e_hf));
            out += &row("e_uccsd", String::new(), num(report.e_uccsd));
            if let Some(e) = report.e_fci {
                out += &row("e_fci", String::new(), num(e));
            }
            if let Some(s) = &report.sampled {
                out += &row("e_sampled", String::new(), num(s.energy));
            }
            for (k, e) in report.sweep_energies.iter().enumerate() {
                out += &row("sweep_energy", (k + 1).to_string(), num(*e));
            }
            for (k, t) in report.parameters.iter().enumerate() {
                out += &row("theta", k.to_string(), num(*t));
            }
            out
        }
    }))
}

pub fn scan_cmd(a: &ScanArgs, lib: &BasisLibrary, format: Format) -> CliResult<Output> {
    let cfg = sweep_config(&a.solver)?;
    let template = input::template_or_preset(a.template.as_deref(), a.preset.as_deref())?;
    let p1 = input::parse_grid(&a.param1, "--param1")?;
    let grid: Vec<Vec<f64>> = match (template.parameter_count(), &a.param2) {
        (1, None) => p1.iter().map(|&x| vec![x]).collect(),
        (2, Some(p2)) => {
            let p2 = input::parse_grid(p2, "--param2")?;
            p1.iter().flat_map(|&x| p2.iter().map(move |&y| vec![x, y])).collect()
        }
        (n, _) => return Err(CliError::usage(format!("template {template} takes {n} parameter grid(s)"))),
    };
    for p in &grid {
        template.check_params(p).map_err(|e| CliError::usage(e.to_string()))?;
    }
    let points = scan(&template, &grid, lib, &cfg, &|_: &ScanPoint| {})?;
    let mut failure = None;
    let rows: Vec<ScanRow> = points
        .into_iter()
        .map(|p| match p.outcome {
            Ok(s) => ScanRow {
                params: s.params,
                e_hf: Some(s.e_hf),
                e_uccsd: Some(s.e_uccsd),
                error: None,
            },
            Err(e) => {
                let message = format!("{:?}: {e}", p.params);
                failure.get_or_insert_with(|| CliError::from(e));
                ScanRow {
                    params: p.params,
                    e_hf: None,
                    e_uccsd: None,
                    error: Some(message),
                }
            }
        })
        .collect();
    let text = match format {
        Format::Json => json(&ScanReport {
            command: "scan".into(),
            template: template.to_string(),
            parameter_names: template.parameter_names().iter().map(|s| s.to_string()).collect(),
            points: rows,
        }),
        Format::Csv => {
            let mut out = format!("{}\n", SurfaceSample::CSV_HEADER);
            for r in &rows {
                let p2 = r.params.get(1).map(|x| num(*x)).unwrap_or_default();
                out += &csv_line(&[num(r.params[0]), p2, opt(r.e_hf), opt(r.e_uccsd)]);
            }
            out
        }
    };
    Ok(Output { text, deferred: failure })
}

pub fn sweep(a: &SweepArgs, lib: &BasisLibrary, format: Format) -> CliResult<Output> {
    let (from, to) = (a.from.unwrap_or(-PI), a.to.unwrap_or(PI));
    if !(from.is_finite() && to.is_finite()) || from >= to {
        return Err(CliError::usage(format!(
            "sweep range [{from}, {to}] has zero length; need --from < --to"
        )));
    }
    if a.points < 2 {
        return Err(CliError::usage("--points must be at least 2"));
    }
    let exc: Excitation = a.excitation.parse().map_err(|e: molvqe::Error| CliError::usage(e.to_string()))?;
    let (mol, _) = input::molecule(&a.geometry)?;
    let problem = ElectronicProblem::from_molecule(&mol, lib)?;
    let k = problem.program.index_of(&exc).ok_or_else(|| {
        CliError::usage(format!(
            "excitation {exc} is not in the UCCSD list ({} electrons, {} spin orbitals)",
            problem.mo.n_electrons(),
            problem.n_qubits()
        ))
    })?;
    let engine = problem.engine()?;
    let mut theta = vec![0.0; problem.program.parameter_count()];
    let to_theta = |x: f64| match a.variable {
        // + 0.0 turns −0 into 0.
        SweepVariable::Phi => -0.5 * x + 0.0,
        SweepVariable::Theta => x,
    };
    let mut row = |x: f64| {
        let t = to_theta(x);
        theta[k] = t;
        let energy = engine.energy(&theta).expect("parameter vector matches the program");
        SweepRow {
            phi: -2.0 * t + 0.0,
            theta: t,
            energy,
        }
    };
    let n = a.points;
    let xs: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { to } else { from + (to - from) * i as f64 / (n - 1) as f64 })
        .collect();
    let points: Vec<SweepRow> = xs.iter().map(|&x| row(x)).collect();
    let m = minimize_on_interval(|x| row(x).energy, None, from, to, n.max(25), 1e-10);
    let minimum = row(m.x);
    let report = SweepReport {
        command: "sweep".into(),
        excitation: exc.to_string(),
        excitation_index: k,
        variable: match a.variable {
            SweepVariable::Phi => "phi",
            SweepVariable::Theta => "theta",
        }
        .into(),
        e_hf: problem.hf_energy,
        points,
        minimum,
    };
    Ok(Output::complete(match format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut out = csv_line(&["phi".into(), "theta".into(), "energy".into()]);
            for r in &report.points {
                out += &csv_line(&[num(r.phi), num(r.theta), num(r.energy)]);
            }
            out
        }
    }))
}

pub fn optimize(a: &OptimizeArgs, lib: &BasisLibrary, format: Format) -> CliResult<Output> {
    let template = input::template_or_preset(a.template.as_deref(), a.preset.as_deref())?;
    let start = a.start.as_deref().map(|s| parse_list(s, "--start")).transpose()?;
    if let Some(s) = &start {
        template.check_params(s).map_err(|e| CliError::usage(e.to_string()))?;
    }
    if !(a.distance_offset > 0.0 && a.angle_offset > 0.0) {
        return Err(CliError::usage("stencil offsets must be positive"));
    }
    let opts = OptimizeOptions {
        sweep: sweep_config(&a.solver)?,
        start,
        distance_offset: a.distance_offset,
        angle_offset: a.angle_offset,
        ..Default::default()
    };
    let result = optimize_geometry(&template, lib, &opts)?;
    Ok(Output::complete(match format {
        Format::Json => json(&OptimizeReport {
            command: "optimize".into(),
            result,
        }),
        Format::Csv => {
            let p = |v: &[f64], i: usize| v.get(i).map(|x| num(*x)).unwrap_or_default();
            let mut out = csv_line(
                &["template", "param1", "param2", "e_uccsd", "e_hf", "hf_param1", "hf_param2", "e_hf_min", "refitted"]
                    .map(String::from),
            );
            out += &csv_line(&[
                result.template.clone(),
                p(&result.params, 0),
                p(&result.params, 1),
                num(result.energy),
                num(result.hf_energy_at_minimum),
                p(&result.hf_minimum, 0),
                p(&result.hf_minimum, 1),
                num(result.hf_energy),
                result.refitted.to_string(),
            ]);
            out
        }
    }))
}

#[derive(Debug, Deserialize)]
struct ScanCsvRow {
    param1: f64,
    param2: Option<f64>,
    e_hf: Option<f64>,
    e_uccsd: Option<f64>,
}

pub fn fit(a: &FitArgs, format: Format) -> CliResult<Output> {
    let text = read_file(&a.input)?;
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut points = Vec::new();
    for (line, row) in reader.deserialize::<ScanCsvRow>().enumerate() {
        let row = row.map_err(|e| CliError::usage(format!("{} row {}: {e}", a.input.display(), line + 1)))?;
        let energy = match a.column {
            EnergyColumn::EUccsd => row.e_uccsd,
            EnergyColumn::EHf => row.e_hf,
        };
        if let Some(e) = energy {
            let mut p = vec![row.param1];
            p.extend(row.param2);
            points.push((p, e));
        }
    }
    let fit = paraboloid_fit(&points)?;
    let report = FitReport {
        command: "fit".into(),
        column: match a.column {
            EnergyColumn::EUccsd => "e_uccsd",
            EnergyColumn::EHf => "e_hf",
        }
        .into(),
        n_points: points.len(),
        fit,
    };
    Ok(Output::complete(match format {
        Format::Json => json(&report),
        Format::Csv => {
            let m = &report.fit.minimum;
            let mut out = csv_line(&["param1", "param2", "energy", "rms_residual"].map(String::from));
            out += &csv_line(&[
                num(m[0]),
                m.get(1).map(|x| num(*x)).unwrap_or_default(),
                num(report.fit.energy),
                num(report.fit.rms_residual),
            ]);
            out
        }
    }))
}

pub fn fcidump(c: &FcidumpCommand, lib: &BasisLibrary, format: Format) -> CliResult<Output> {
    match c {
        FcidumpCommand::Export(g) => {
            let (mol, _) = input::molecule(g)?;
            let (ao, sol) = hartree_fock(&mol, lib)?;
            Ok(Output::complete(export_fcidump(&mo_transform(&ao, &sol)?)))
        }
        FcidumpCommand::Import { input } => {
            let mo = import_fcidump(&read_file(input)?).map_err(|e| CliError::usage(format!("{}: {e}", input.display())))?;
            let problem = ElectronicProblem::from_mo(mo)?;
            let report = FcidumpReport {
                command: "fcidump import".into(),
                n_orbitals: problem.mo.n_spatial(),
                n_electrons: problem.mo.n_electrons(),
                n_qubits: problem.n_qubits(),
                core_energy: problem.mo.core_energy(),
                e_hf: problem.hf_energy,
                pauli_terms: problem.hamiltonian.len(),
            };
            Ok(Output::complete(match format {
                Format::Json => json(&report),
                Format::Csv => {
                    let mut out = csv_line(
                        &["n_orbitals", "n_electrons", "n_qubits", "core_energy", "e_hf", "pauli_terms"].map(String::from),
                    );
                    out += &csv_line(&[
                        report.n_orbitals.to_string(),
                        report.n_electrons.to_string(),
                        report.n_qubits.to_string(),
                        num(report.core_energy),
                        num(report.e_hf),
                        report.pauli_terms.to_string(),
                    ]);
                    out
                }
            }))
        }
    }
}

pub fn program(g: &GeometryInput, lib: &BasisLibrary) -> CliResult<Output> {
    let (mol, _) = input::molecule(g)?;
    let problem = ElectronicProblem::from_molecule(&mol, lib)?;
    Ok(Output::complete(problem.program.dump()))
}

fn table_row(p: &Preset, mode: TableMode, lib: &BasisLibrary, cfg: &SweepConfig) -> molvqe::Result<(Vec<f64>, f64, f64)> {
    match mode {
        TableMode::Fixed => {
            let problem = ElectronicProblem::from_molecule(&p.molecule().canonicalized(), lib)?;
            let r = problem.solve(cfg)?;
            Ok((p.params.to_vec(), r.energy, problem.hf_energy))
        }
        TableMode::Optimize => {
            let opts = OptimizeOptions {
                sweep: cfg.clone(),
                ..Default::default()
            };
            let r = optimize_geometry(&p.template(), lib, &opts)?;
            Ok((r.params, r.energy, r.hf_energy_at_minimum))
        }
    }
}

pub fn benchmark(a: &TableArgs, lib: &BasisLibrary, format: Format) -> CliResult<Output> {
    let base = sweep_config(&a.solver)?;
    let selected: Vec<&Preset> = match &a.only {
        Some(list) => list.split(',').map(|n| input::find_preset(n.trim())).collect::<CliResult<_>>()?,
        None => PRESETS.iter().filter(|p| a.include_large || p.qubits <= 14).collect(),
    };
    let limit = match a.max_seconds {
        Some(s) if !(s > 0.0 && s.is_finite()) => return Err(CliError::usage("--max-seconds must be positive")),
        s => s.map(Duration::from_secs_f64),
    };
    let mut rows = Vec::new();
    let mut failure = None;
    for p in selected {
        let started = Instant::now();
        let cfg = SweepConfig {
            deadline: limit.map(|l| started + l),
            ..base.clone()
        };
        let outcome = table_row(p, a.mode, lib, &cfg);
        let seconds = started.elapsed().as_secs_f64();
        let row = match outcome {
            Ok((params, e, e_hf)) => {
                eprintln!("{:<6} {:>2} qubits  E = {e:.9}  ({seconds:.1} s)", p.name, p.qubits);
                TableRow {
                    molecule: p.name.into(),
                    qubits: p.qubits,
                    params,
                    reference_params: p.params.to_vec(),
                    e_uccsd: Some(e),
                    e_reference: p.energy,
                    deviation: Some(e - p.energy),
                    e_hf: Some(e_hf),
                    status: "ok".into(),
                    message: None,
                }
            }
            Err(e) => {
                let timeout = matches!(e, molvqe::Error::TimeLimit);
                eprintln!("{:<6} {:>2} qubits  {e}  ({seconds:.1} s)", p.name, p.qubits);
                if !timeout {
                    failure.get_or_insert_with(|| CliError {
                        kind: ErrorKind::Numeric,
                        message: format!("{}: {e}", p.name),
                    });
                }
                TableRow {
                    molecule: p.name.into(),
                    qubits: p.qubits,
                    params: p.params.to_vec(),
                    reference_params: p.params.to_vec(),
                    e_uccsd: None,
                    e_reference: p.energy,
                    deviation: None,
                    e_hf: None,
                    status: if timeout { "timeout" } else { "error" }.into(),
                    message: Some(e.to_string()),
                }
            }
        };
        rows.push(row);
    }
    let text = match format {
        Format::Json => json(&TableReport {
            command: "benchmark".into(),
            mode: match a.mode {
                TableMode::Fixed => "fixed",
                TableMode::Optimize => "optimize",
            }
            .into(),
            rows,
        }),
        Format::Csv => {
            let mut out = csv_line(
                &["molecule", "qubits", "param1", "param2", "e_uccsd", "e_reference", "deviation", "e_hf", "status"]
                    .map(String::from),
            );
            for r in &rows {
                out += &csv_line(&[
                    r.molecule.clone(),
                    r.qubits.to_string(),
                    num(r.params[0]),
                    r.params.get(1).map(|x| num(*x)).unwrap_or_default(),
                    opt(r.e_uccsd),
                    num(r.e_reference),
                    opt(r.deviation),
                    opt(r.e_hf),
                    r.status.clone(),
                ]);
            }
            out
        }
    };
    Ok(Output { text, deferred: failure })
}

/// Writes `text` to `path`, or stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    use std::io::Write;
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

