use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "molvqe", version, about = "UCCSD-VQE ground states of small molecules in STO-3G")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Basis override file replacing the built-in STO-3G records per element.
    #[arg(long, global = true)]
    pub basis_override: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Restricted Hartree-Fock only: total energy and orbital energies.
    Hf(GeometryInput),
    /// HF, UCCSD-VQE and exact energies at a fixed geometry.
    Energy(EnergyArgs),
    /// HF and UCCSD energies on a 1-D or 2-D parameter grid.
    Scan(ScanArgs),
    /// Energy along one excitation parameter with all others at zero.
    Sweep(SweepArgs),
    /// HF geometry search followed by a UCCSD paraboloid fit.
    Optimize(OptimizeArgs),
    /// Paraboloid fit of an existing scan CSV.
    Fit(FitArgs),
    /// Write or read FCIDUMP integral files.
    #[command(subcommand)]
    Fcidump(FcidumpCommand),
    /// Excitation list with the Pauli expansion of every generator.
    Program(GeometryInput),
    /// Reference molecules: energies at the listed geometries or re-optimized.
    Benchmark(TableArgs),
}

/// Geometry source: exactly one of a molecule file, a template with
/// parameters, or a preset.
#[derive(Debug, Args)]
#[group(skip)]
pub struct GeometryInput {
    /// Molecule file: `charge <int>` then `<El> <x> <y> <z>` lines in Å.
    #[arg(long)]
    pub molecule: Option<PathBuf>,

    /// Geometry template, e.g. `bent-xh2:O` or `diatomic:He,H:+1`.
    #[arg(long)]
    pub template: Option<String>,

    /// Template parameters, comma separated (Å, degrees).
    #[arg(long, allow_hyphen_values = true)]
    pub params: Option<String>,

    /// Reference molecule by name (H2, LiH, H2O, ...).
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Maximum sweeps through the excitation list.
    #[arg(long, default_value_t = 3)]
    pub sweeps: usize,

    /// Stop once a sweep lowers the energy by less than this (Hartree).
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    #[command(flatten)]
    pub geometry: GeometryInput,

    /// Read MO integrals from an FCIDUMP file instead of running SCF.
    #[arg(long)]
    pub fcidump: Option<PathBuf>,

    #[command(flatten)]
    pub solver: SolverArgs,

    /// Skip the exact-diagonalization reference.
    #[arg(long)]
    pub no_fci: bool,

    /// Also estimate the final energy from this many measurement shots per Pauli term.
    #[arg(long)]
    pub shots: Option<usize>,

    /// Seed for the shot estimator.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Write one CSV line per 1-D solve (sweep,excitation,theta,energy).
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Geometry template.
    #[arg(long)]
    pub template: Option<String>,

    /// Use the template of a reference molecule.
    #[arg(long)]
    pub preset: Option<String>,

    /// First parameter grid: `start:stop:count` or a comma list.
    #[arg(long, allow_hyphen_values = true)]
    pub param1: String,

    /// Second parameter grid (two-parameter templates only).
    #[arg(long, allow_hyphen_values = true)]
    pub param2: Option<String>,

    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVariable {
    /// Rotation-gate angle φ, the ansatz parameter being θ = −φ/2.
    Phi,
    /// The ansatz parameter θ of exp(θ(A − A†)).
    Theta,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub geometry: GeometryInput,

    /// Excitation to vary, `i->a` or `i,j->a,b` in spin-orbital indices.
    #[arg(long)]
    pub excitation: String,

    /// Swept variable.
    #[arg(long, value_enum, default_value_t = SweepVariable::Phi)]
    pub variable: SweepVariable,

    /// Range start (default −π).
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<f64>,

    /// Range end (default π).
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<f64>,

    /// Number of equally spaced samples, endpoints included.
    #[arg(long, default_value_t = 201)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub template: Option<String>,

    #[arg(long)]
    pub preset: Option<String>,

    /// Starting point of the HF search, comma separated.
    #[arg(long)]
    pub start: Option<String>,

    /// Half-width of the UCCSD stencil along distances (Å).
    #[arg(long, default_value_t = 0.05)]
    pub distance_offset: f64,

    /// Half-width of the UCCSD stencil along angles (degrees).
    #[arg(long, default_value_t = 2.0)]
    pub angle_offset: f64,

    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnergyColumn {
    EUccsd,
    EHf,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Scan CSV with header `param1,param2,e_hf,e_uccsd`.
    pub input: PathBuf,

    /// Energy column to fit.
    #[arg(long, value_enum, default_value_t = EnergyColumn::EUccsd)]
    pub column: EnergyColumn,
}

#[derive(Debug, Subcommand)]
pub enum FcidumpCommand {
    /// Run SCF and write the MO integrals.
    Export(GeometryInput),
    /// Read an FCIDUMP file and summarize the resulting qubit Hamiltonian.
    Import {
        input: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableMode {
    /// UCCSD energy at the listed geometry.
    Fixed,
    /// Full geometry optimization.
    Optimize,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_enum, default_value_t = TableMode::Fixed)]
    pub mode: TableMode,

    /// Include the 16–20 qubit molecules.
    #[arg(long)]
    pub include_large: bool,

    /// Restrict to these molecules (comma separated preset names).
    #[arg(long)]
    pub only: Option<String>,

    /// Per-molecule time limit in seconds; a molecule exceeding it is reported as `timeout`.
    #[arg(long)]
    pub max_seconds: Option<f64>,

    #[command(flatten)]
    pub solver: SolverArgs,
}
