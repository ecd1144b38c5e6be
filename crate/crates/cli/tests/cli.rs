//! End-to-end runs of the `molvqe` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use molvqe_cli::report::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

fn molvqe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_molvqe"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = molvqe(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Parses a report and checks that serializing it again gives the same JSON.
fn round_trip<T: Serialize + DeserializeOwned>(text: &str) -> T {
    let report: T = serde_json::from_str(text).unwrap();
    let again: serde_json::Value = serde_json::to_value(&report).unwrap();
    let original: serde_json::Value = serde_json::from_str(text).unwrap();
    assert_eq!(again, original);
    report
}

#[test]
fn energy_prints_the_h2_reference_value() {
    let text = stdout(&["energy", "--template", "diatomic:H,H", "--params", "0.735"]);
    let line = text.lines().find(|l| l.contains("\"e_uccsd\"")).unwrap();
    let value: f64 = line.split(':').nth(1).unwrap().trim().trim_end_matches(',').parse().unwrap();
    assert!((value + 1.137306).abs() < 5e-5, "{line}");
    let r: EnergyReport = round_trip(&text);
    assert_eq!((r.n_qubits, r.n_excitations), (4, 3));
    assert!(r.e_fci.unwrap() - 1e-9 <= r.e_uccsd && r.e_uccsd <= r.e_hf + 1e-12);
}

#[test]
fn zero_length_sweep_is_a_usage_error() {
    let out = molvqe(&["sweep", "--preset", "H2", "--excitation", "0,1->2,3", "--from", "0.5", "--to", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("Usage"), "{err}");
    let last: serde_json::Value = serde_json::from_str(err.lines().last().unwrap()).unwrap();
    assert_eq!(last["error"], "usage");
    assert_eq!(last["exit_code"], 1);
}

#[test]
fn exit_codes() {
    assert_eq!(molvqe(&["hf"]).status.code(), Some(1));
    assert_eq!(molvqe(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(molvqe(&["hf", "--preset", "H2", "--template", "diatomic:H,H", "--params", "1"]).status.code(), Some(1));
    assert_eq!(molvqe(&["hf", "--template", "diatomic:H,H"]).status.code(), Some(1));
    assert_eq!(molvqe(&["hf", "--molecule", "/nonexistent/h2.mol"]).status.code(), Some(3));
    assert_eq!(molvqe(&["hf", "--template", "diatomic:H", "--params", "1"]).status.code(), Some(1));
    assert_eq!(molvqe(&["energy", "--template", "diatomic:H,H:+1", "--params", "1"]).status.code(), Some(1));
    assert_eq!(molvqe(&["sweep", "--preset", "H2", "--excitation", "0->1"]).status.code(), Some(1));
    assert_eq!(molvqe(&["--help"]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing").join("out.json");
    assert_eq!(
        molvqe(&["hf", "--preset", "H2", "--output", out.to_str().unwrap()]).status.code(),
        Some(3)
    );
}

#[test]
fn linearly_dependent_basis_is_a_numeric_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dup.basis");
    let shell = "s 3.42525091 0.15432897 0.62391373 0.53532814 0.16885540 0.44463454\n";
    fs::write(&path, format!("H\n{shell}{shell}end\n")).unwrap();
    let out = molvqe(&["hf", "--preset", "H2", "--basis-override", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("\"error\":\"numeric\""));
}

#[test]
fn hf_report_round_trips() {
    let r: HfReport = round_trip(&stdout(&["hf", "--preset", "H2O"]));
    assert_eq!((r.n_basis, r.n_electrons), (7, 10));
    assert!((r.energy + 74.9626486944).abs() < 1e-8);
    assert!(r.orbital_energies.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn molecule_file_input_matches_the_template() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("heh.mol");
    fs::write(&path, "# helium hydride cation\ncharge 1\nHe 0 0 0\nH 0 0 0.913\n").unwrap();
    let a: EnergyReport = round_trip(&stdout(&["energy", "--molecule", path.to_str().unwrap()]));
    let b: EnergyReport = round_trip(&stdout(&["energy", "--preset", "HeH+"]));
    assert!((a.e_uccsd - b.e_uccsd).abs() < 1e-10);
}

#[test]
fn basis_override_changes_the_energy() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.basis");
    // A single primitive-like contraction for hydrogen.
    fs::write(&path, "H\ns 1.0 1.0 0.5 0.0 0.25 0.0\nend\n").unwrap();
    let plain: HfReport = round_trip(&stdout(&["hf", "--preset", "H2"]));
    let over: HfReport = round_trip(&stdout(&["hf", "--preset", "H2", "--basis-override", path.to_str().unwrap()]));
    assert!((plain.energy - over.energy).abs() > 1e-3);
    assert_eq!(
        molvqe(&["hf", "--preset", "H2", "--basis-override", "/nonexistent"]).status.code(),
        Some(3)
    );
}

#[test]
fn trace_and_shots() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let text = stdout(&[
        "energy", "--preset", "LiH", "--trace", trace.to_str().unwrap(), "--shots", "2000", "--seed", "3",
    ]);
    let r: EnergyReport = round_trip(&text);
    let lines: Vec<String> = fs::read_to_string(&trace).unwrap().lines().map(String::from).collect();
    assert_eq!(lines[0], "sweep,excitation,theta,energy");
    assert_eq!(lines.len() - 1, r.sweeps * r.n_excitations);
    let sampled = r.sampled.unwrap();
    assert!((sampled.energy - r.e_uccsd).abs() < 0.5);
    let again: EnergyReport = round_trip(&stdout(&["energy", "--preset", "LiH", "--shots", "2000", "--seed", "3"]));
    assert_eq!(again.sampled.unwrap().energy, sampled.energy);
}

#[test]
fn sweep_report_round_trips_and_csv_agrees() {
    let args = ["sweep", "--preset", "HeH+", "--excitation", "0,1->2,3", "--points", "9"];
    let r: SweepReport = round_trip(&stdout(&[&args[..], &["--format", "json"]].concat()));
    assert_eq!(r.points.len(), 9);
    assert_eq!(r.points[4].phi, 0.0);
    assert!((r.points[4].energy - r.e_hf).abs() < 1e-12);
    let csv = stdout(&args);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("phi,theta,energy"));
    for (line, row) in lines.zip(&r.points) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[0] - row.phi).abs() < 1e-12 && (v[2] - row.energy).abs() < 1e-11);
    }
    let theta: SweepReport = round_trip(&stdout(&[&args[..], &["--format", "json", "--variable", "theta"]].concat()));
    assert!(theta.points.iter().all(|p| (p.phi + 2.0 * p.theta).abs() < 1e-15));
    assert_eq!(theta.points[0].theta, -std::f64::consts::PI);
    assert!((theta.minimum.energy - r.minimum.energy).abs() < 1e-9);
}

#[test]
fn fcidump_export_import_and_energy() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("lih.fcidump");
    stdout(&["fcidump", "export", "--preset", "LiH", "--output", dump.to_str().unwrap()]);
    let text = fs::read_to_string(&dump).unwrap();
    assert!(text.starts_with("&FCI"));
    let imported: FcidumpReport = round_trip(&stdout(&["fcidump", "import", dump.to_str().unwrap()]));
    assert_eq!((imported.n_orbitals, imported.n_electrons, imported.n_qubits), (6, 4, 12));
    let from_dump: EnergyReport = round_trip(&stdout(&["energy", "--fcidump", dump.to_str().unwrap()]));
    let direct: EnergyReport = round_trip(&stdout(&["energy", "--preset", "LiH"]));
    assert!((from_dump.e_uccsd - direct.e_uccsd).abs() < 1e-9);
    assert!((from_dump.e_hf - imported.e_hf).abs() < 1e-12);
    assert_eq!(
        molvqe(&["energy", "--fcidump", dump.to_str().unwrap(), "--preset", "LiH"]).status.code(),
        Some(1)
    );
}

#[test]
fn program_dump_lists_excitations() {
    let text = stdout(&["program", "--preset", "H2"]);
    assert!(text.starts_with("# qubits 4 electrons 2 parameters 3"));
    assert_eq!(text.lines().filter(|l| l.starts_with("excitation")).count(), 3);
    assert!(text.contains("excitation 2 double 0,1->2,3 terms 8"));
}

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

#[test]
fn fit_reads_scan_csv_and_rejects_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("scan.csv");
    write(
        &good,
        "param1,param2,e_hf,e_uccsd\n0.9,,-1.0,-1.99\n1.0,,-1.1,-2.0\n1.1,,-1.0,-1.99\n1.2,,,\n",
    );
    let r: FitReport = round_trip(&stdout(&["fit", good.to_str().unwrap()]));
    assert_eq!(r.n_points, 3);
    assert!((r.fit.minimum[0] - 1.0).abs() < 1e-9);
    let bad = dir.path().join("bad.csv");
    write(&bad, "param1,param2,e_hf,e_uccsd\nx,,1,1\n");
    assert_eq!(molvqe(&["fit", bad.to_str().unwrap()]).status.code(), Some(1));
    let saddle = dir.path().join("max.csv");
    write(&saddle, "param1,param2,e_hf,e_uccsd\n0.9,,0,-2.0\n1.0,,0,-1.0\n1.1,,0,-2.0\n");
    assert_eq!(molvqe(&["fit", saddle.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn benchmark_with_expired_guard_reports_timeouts() {
    let text = stdout(&["benchmark", "--only", "H2,LiH", "--max-seconds", "1e-9", "--format", "json"]);
    let r: TableReport = round_trip(&text);
    assert_eq!(r.rows.len(), 2);
    assert!(r.rows.iter().all(|row| row.status == "timeout"));
    let ok: TableReport = round_trip(&stdout(&["benchmark", "--only", "H2", "--format", "json"]));
    assert_eq!(ok.rows[0].status, "ok");
    assert!(ok.rows[0].deviation.unwrap().abs() < 5e-5);
}

#[test]
fn scan_json_round_trips() {
    let r: ScanReport = round_trip(&stdout(&[
        "scan", "--template", "bent-xh2:O", "--param1", "1.0,1.05", "--param2", "100:104:2", "--format", "json",
    ]));
    assert_eq!(r.parameter_names, vec!["distance", "angle"]);
    let params: Vec<Vec<f64>> = r.points.iter().map(|p| p.params.clone()).collect();
    assert_eq!(params, vec![vec![1.0, 100.0], vec![1.0, 104.0], vec![1.05, 100.0], vec![1.05, 104.0]]);
    assert!(r.points.iter().all(|p| p.e_uccsd.unwrap() < p.e_hf.unwrap()));
    assert_eq!(molvqe(&["scan", "--template", "bent-xh2:O", "--param1", "1.0"]).status.code(), Some(1));
}
