//! Acceptance criteria 1–12, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines are always printed. The
//! 16–20 qubit rows (criterion 7) run only with `--include-large` or
//! `MOLVQE_ACCEPTANCE_LARGE=1`:
//!
//! ```text
//! cargo test --release -p molvqe-cli --test acceptance -- --include-large
//! ```

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use molvqe::basis::{parse_molecule, BasisFunction, BasisLibrary};
use molvqe::fermion_qubit::{jordan_wigner, number_operator, sz_operator, FermionOperator, Ladder, PauliWord};
use molvqe::geometry::{paraboloid_fit, preset, PRESETS};
use molvqe::integrals::AOIntegrals;
use molvqe::pipeline::ElectronicProblem;
use molvqe::uccsd::{apply_ansatz, AnsatzProgram};
use molvqe::vqe::SweepConfig;
use molvqe_cli::report::{EnergyReport, OptimizeReport, ScanReport, SweepReport};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn molvqe(args: &[&str]) -> Result<(String, Duration), String> {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_molvqe"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if !out.status.success() {
        return Err(format!("molvqe {args:?}: {}", String::from_utf8_lossy(&out.stderr).trim()));
    }
    Ok((String::from_utf8(out.stdout).map_err(|e| e.to_string())?, elapsed))
}

fn parse<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, String> {
    serde_json::from_str(text).map_err(|e| e.to_string())
}

/// `optimize --preset`: checks the fitted distance and energy and the wall time.
fn optimized_row(name: &str, d_tol: f64, e_tol: f64, limit: Duration) -> Check {
    let p = preset(name).expect("known preset");
    let (text, t) = molvqe(&["optimize", "--preset", name])?;
    let r: OptimizeReport = parse(&text)?;
    let (d, e) = (r.result.params[0], r.result.energy);
    let detail = format!(
        "{name}: {d:.4} Å (reference {:.3}), E = {e:.6} (reference {:.6}, Δ {:.1e}), {:.1} s",
        p.params[0],
        p.energy,
        e - p.energy,
        t.as_secs_f64()
    );
    ensure((d - p.params[0]).abs() <= d_tol, || format!("distance off: {detail}"))?;
    ensure((e - p.energy).abs() <= e_tol, || format!("energy off: {detail}"))?;
    ensure(t < limit, || format!("slower than {} s: {detail}", limit.as_secs()))?;
    Ok(detail)
}

fn criterion_5() -> Check {
    let p = preset("H2O").unwrap();
    let (text, t) = molvqe(&["energy", "--preset", "H2O"])?;
    let r: EnergyReport = parse(&text)?;
    let detail = format!(
        "H2O at (1.028 Å, 96.9°): E = {:.6} (reference {:.6}, Δ {:.1e}), {:.1} s",
        r.e_uccsd,
        p.energy,
        r.e_uccsd - p.energy,
        t.as_secs_f64()
    );
    ensure((r.e_uccsd - p.energy).abs() <= 2e-4, || detail.clone())?;
    ensure(t < Duration::from_secs(45 * 60), || detail.clone())?;
    Ok(detail)
}

fn criterion_5_stretch() -> Check {
    let (text, t) = molvqe(&["optimize", "--preset", "H2O"])?;
    let r: OptimizeReport = parse(&text)?;
    let (d, a) = (r.result.params[0], r.result.params[1]);
    let detail = format!(
        "H2O optimized to ({d:.4} Å, {a:.2}°), E = {:.6}, {:.1} s",
        r.result.energy,
        t.as_secs_f64()
    );
    ensure((d - 1.028).abs() <= 0.01 && (a - 96.9).abs() <= 1.0, || detail.clone())?;
    Ok(detail)
}

fn criterion_7() -> Check {
    let mut lines = Vec::new();
    let mut failed = Vec::new();
    for p in PRESETS.iter().filter(|p| p.qubits > 14) {
        let (text, t) = molvqe(&["energy", "--preset", p.name, "--no-fci"])?;
        let r: EnergyReport = parse(&text)?;
        let dev = r.e_uccsd - p.energy;
        lines.push(format!("{} {:.6} (Δ {dev:.1e}, {:.0} s)", p.name, r.e_uccsd, t.as_secs_f64()));
        if dev.abs() > 2e-4 {
            failed.push(p.name);
        }
    }
    let detail = lines.join("; ");
    ensure(failed.is_empty(), || format!("outside 2e-4: {failed:?}; {detail}"))?;
    Ok(detail)
}

fn problem_at(name: &str) -> ElectronicProblem {
    let p = preset(name).unwrap();
    ElectronicProblem::from_molecule(&p.molecule().canonicalized(), &BasisLibrary::sto3g()).unwrap()
}

fn criterion_8() -> Check {
    let mut parts = Vec::new();
    for name in ["H2", "HeH+"] {
        let p = problem_at(name);
        let e = p.solve(&SweepConfig::default()).map_err(|e| e.to_string())?.energy;
        let fci = p.fci_energy().map_err(|e| e.to_string())?;
        let gap = (e - fci).abs();
        parts.push(format!("{name} |E − E_FCI| = {gap:.1e}"));
        ensure(gap < 1e-6, || parts.join(", "))?;
    }
    Ok(parts.join(", "))
}

const MANDATORY: [&str; 6] = ["H2", "HeH+", "LiH", "OH-", "H2O", "BeH2"];

fn criterion_9() -> Check {
    let mut worst: f64 = f64::INFINITY;
    for name in MANDATORY {
        let p = problem_at(name);
        let e = p.solve(&SweepConfig::default()).map_err(|e| e.to_string())?.energy;
        let fci = p.fci_energy().map_err(|e| e.to_string())?;
        ensure(fci - 1e-9 <= e && e <= p.hf_energy + 1e-12, || {
            format!("{name}: FCI {fci:.10} ≤ {e:.10} ≤ HF {:.10} violated", p.hf_energy)
        })?;
        worst = worst.min(e - fci);
    }
    Ok(format!(
        "E_FCI ≤ E_UCCSD ≤ E_HF for {}; smallest E_UCCSD − E_FCI = {worst:.1e}",
        MANDATORY.join(", ")
    ))
}

fn criterion_10() -> Check {
    let (text, _) = molvqe(&["sweep", "--preset", "H2O", "--excitation", "4,5->12,13", "--format", "json"])?;
    let r: SweepReport = parse(&text)?;
    let e: Vec<f64> = r.points.iter().map(|p| p.energy).collect();
    let interior_minima = (1..e.len() - 1).filter(|&i| e[i] < e[i - 1] && e[i] <= e[i + 1]).count();
    let at_zero = r.points.iter().find(|p| p.phi == 0.0).ok_or("φ = 0 not sampled")?;
    let first = r.points.first().unwrap();
    let last = r.points.last().unwrap();
    let detail = format!(
        "minimum at φ = {:.4} (θ = {:.4}), {interior_minima} interior minimum, |E(0) − E_HF| = {:.1e}, |E(π) − E(−π)| = {:.1e}",
        r.minimum.phi,
        r.minimum.theta,
        (at_zero.energy - r.e_hf).abs(),
        (last.energy - first.energy).abs()
    );
    ensure(first.phi == -PI && last.phi == PI, || detail.clone())?;
    ensure(interior_minima == 1 && (r.minimum.phi + 0.184).abs() <= 0.02, || detail.clone())?;
    ensure((at_zero.energy - r.e_hf).abs() < 1e-9, || detail.clone())?;
    ensure((last.energy - first.energy).abs() < 1e-9, || detail.clone())?;
    Ok(detail)
}

fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn jw_anticommutation() -> Result<(), String> {
    let m = 4;
    let op = |l: Ladder| {
        let mut f = FermionOperator::new();
        f.push(vec![l], Complex64::new(1.0, 0.0));
        jordan_wigner(&f, m).unwrap()
    };
    for p in 0..m {
        for q in 0..m {
            let (ap, aqd) = (op(Ladder::annihilate(p)), op(Ladder::create(q)));
            let anti = ap.multiply(&aqd).unwrap().add(&aqd.multiply(&ap).unwrap()).unwrap();
            let expect = if p == q { 1.0 } else { 0.0 };
            let d = anti.to_dense().unwrap();
            let target = DMatrix::<Complex64>::identity(16, 16) * Complex64::new(expect, 0.0);
            ensure(max_diff(&d, &target) < 1e-14, || format!("{{a_{p}, a†_{q}}} wrong"))?;
            let aq = op(Ladder::annihilate(q));
            let zero = ap.multiply(&aq).unwrap().add(&aq.multiply(&ap).unwrap()).unwrap();
            ensure(zero.one_norm() < 1e-14, || format!("{{a_{p}, a_{q}}} ≠ 0"))?;
        }
    }
    Ok(())
}

/// Dense 8×8 matrix of a 3-qubit word from the 2×2 Pauli matrices, qubit k
/// acting on bit k of the basis index.
fn dense_word(w: &PauliWord) -> DMatrix<Complex64> {
    let (o, i) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0));
    let z = Complex64::default();
    let sigma = |x: bool, zb: bool| -> [[Complex64; 2]; 2] {
        match (x, zb) {
            (false, false) => [[o, z], [z, o]],
            (true, false) => [[z, o], [o, z]],
            (true, true) => [[z, -i], [i, z]],
            (false, true) => [[o, z], [z, -o]],
        }
    };
    let (wx, wz) = (pauli_bits(w).0, pauli_bits(w).1);
    DMatrix::from_fn(8, 8, |r, c| {
        (0..3)
            .map(|k| sigma(wx >> k & 1 == 1, wz >> k & 1 == 1)[r >> k & 1][c >> k & 1])
            .product()
    })
}

/// (x, z) masks recovered from the letters of a word.
fn pauli_bits(w: &PauliWord) -> (u64, u64) {
    let s = w.to_letters(3);
    let mut x = 0;
    let mut z = 0;
    for (k, ch) in s.chars().enumerate() {
        if ch == 'X' || ch == 'Y' {
            x |= 1 << k;
        }
        if ch == 'Z' || ch == 'Y' {
            z |= 1 << k;
        }
    }
    (x, z)
}

fn pauli_algebra() -> Result<(), String> {
    for a in 0..64u64 {
        for b in 0..64u64 {
            let wa = PauliWord::new(a & 7, a >> 3);
            let wb = PauliWord::new(b & 7, b >> 3);
            let (phase, w) = wa.multiply(&wb);
            let lhs = dense_word(&wa) * dense_word(&wb);
            let rhs = dense_word(&w) * phase;
            ensure(max_diff(&lhs, &rhs) < 1e-15, || format!("{} · {}", wa.to_letters(3), wb.to_letters(3)))?;
            let commute = max_diff(&lhs, &(dense_word(&wb) * dense_word(&wa))) < 1e-15;
            ensure(commute == wa.commutes_with(&wb), || "commutation flag".into())?;
        }
    }
    Ok(())
}

fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    let mut acc = f(lo) + f(hi);
    for k in 1..n {
        acc += f(lo + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// Overlap, kinetic and (00|00)/(00|11) integrals of H2 by quadrature.
fn integral_quadrature() -> Result<(), String> {
    let mol = parse_molecule("charge 0\nH 0 0 0\nH 0 0 0.735").unwrap();
    let basis = BasisLibrary::sto3g().build(&mol).unwrap();
    let ao = AOIntegrals::compute(&basis, &mol);
    let f = &basis.functions;
    let prim = |g: &BasisFunction, k: usize, d: usize| (g.coefficients[k], g.exponents[k], g.center[d]);
    let g1 = |a: f64, c: f64, x: f64| (-a * (x - c) * (x - c)).exp();
    let g1dd = |a: f64, c: f64, x: f64| (4.0 * a * a * (x - c) * (x - c) - 2.0 * a) * g1(a, c, x);
    for i in 0..2 {
        for j in 0..2 {
            let (mut s, mut t) = (0.0, 0.0);
            for k in 0..3 {
                for l in 0..3 {
                    let one: Vec<(f64, f64)> = (0..3)
                        .map(|d| {
                            let (_, a, ca) = prim(&f[i], k, d);
                            let (_, b, cb) = prim(&f[j], l, d);
                            (
                                simpson(|x| g1(a, ca, x) * g1(b, cb, x), -20.0, 20.0, 4000),
                                simpson(|x| g1(a, ca, x) * g1dd(b, cb, x), -20.0, 20.0, 4000),
                            )
                        })
                        .collect();
                    let c = f[i].coefficients[k] * f[j].coefficients[l];
                    s += c * one[0].0 * one[1].0 * one[2].0;
                    t += -0.5 * c * (one[0].1 * one[1].0 * one[2].0 + one[0].0 * one[1].1 * one[2].0 + one[0].0 * one[1].0 * one[2].1);
                }
            }
            ensure((s - ao.overlap[(i, j)]).abs() < 1e-10, || format!("S{i}{j}: {s} vs {}", ao.overlap[(i, j)]))?;
            ensure((t - ao.kinetic[(i, j)]).abs() < 1e-9, || format!("T{i}{j}: {t} vs {}", ao.kinetic[(i, j)]))?;
        }
    }
    // (ab|cd) of s Gaussians through 1/r = 2/√π ∫ exp(−t²r²) dt, t = u/(1 − u).
    let eri = |idx: [usize; 4]| {
        let pair = |x: &BasisFunction, y: &BasisFunction| {
            let mut out = Vec::new();
            for k in 0..3 {
                for l in 0..3 {
                    let (a, b) = (x.exponents[k], y.exponents[l]);
                    let p = a + b;
                    let r2: f64 = (0..3).map(|d| (x.center[d] - y.center[d]).powi(2)).sum();
                    let c: Vec<f64> = (0..3).map(|d| (a * x.center[d] + b * y.center[d]) / p).collect();
                    out.push((x.coefficients[k] * y.coefficients[l] * (-a * b / p * r2).exp(), p, c));
                }
            }
            out
        };
        let left = pair(&f[idx[0]], &f[idx[1]]);
        let right = pair(&f[idx[2]], &f[idx[3]]);
        let integrand = |u: f64| {
            if u >= 1.0 {
                return 0.0;
            }
            let t = u / (1.0 - u);
            let mut acc = 0.0;
            for (kl, p, pc) in &left {
                for (kr, q, qc) in &right {
                    let r2: f64 = (0..3).map(|d| (pc[d] - qc[d]).powi(2)).sum();
                    let den = p * q + t * t * (p + q);
                    acc += kl * kr * (PI / den.sqrt()).powi(3) * (-p * q * t * t * r2 / den).exp();
                }
            }
            acc / ((1.0 - u) * (1.0 - u))
        };
        2.0 / PI.sqrt() * simpson(integrand, 0.0, 1.0, 20000)
    };
    for idx in [[0, 0, 0, 0], [0, 0, 1, 1], [0, 1, 0, 1]] {
        let q = eri(idx);
        let v = ao.eri.get(idx[0], idx[1], idx[2], idx[3]);
        ensure((q - v).abs() < 1e-8, || format!("ERI {idx:?}: {q} vs {v}"))?;
    }
    Ok(())
}

fn ansatz_symmetries() -> Result<(), String> {
    let (m, n) = (14, 10);
    let prog = AnsatzProgram::uccsd(m, n).map_err(|e| e.to_string())?;
    let reference = prog.reference().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let number = jordan_wigner(&number_operator(m), m).unwrap();
    let sz = jordan_wigner(&sz_operator(m), m).unwrap();
    for _ in 0..3 {
        let theta: Vec<f64> = (0..prog.parameter_count())
            .map(|_| (rng.next_u64() as f64 / u64::MAX as f64 - 0.5) * 2.0 * PI)
            .collect();
        let psi = apply_ansatz(&reference, &prog, &theta).map_err(|e| e.to_string())?;
        ensure((psi.norm() - 1.0).abs() < 1e-12, || format!("norm {}", psi.norm()))?;
        ensure(psi.weight_outside_particle_number(n) < 1e-24, || "particle number leak".into())?;
        ensure(psi.weight_outside_spin_sector(n / 2, n / 2) < 1e-24, || "Sz leak".into())?;
        let nn = psi.expectation(&number).unwrap();
        let s = psi.expectation(&sz).unwrap();
        ensure((nn - n as f64).abs() < 1e-10 && s.abs() < 1e-10, || format!("<N> = {nn}, <Sz> = {s}"))?;
    }
    Ok(())
}

fn paraboloid_recovery() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut r = || rng.next_u64() as f64 / u64::MAX as f64;
    for _ in 0..20 {
        let (x0, y0) = (0.8 + r(), 90.0 + 20.0 * r());
        let (a, b, c) = (0.5 + r(), 0.3 * (r() - 0.5), 0.01 + 0.01 * r());
        let c = c.max(b * b / a + 1e-3);
        let e0 = -75.0 - r();
        let f = |x: f64, y: f64| e0 + a * (x - x0).powi(2) + b * (x - x0) * (y - y0) + c * (y - y0).powi(2);
        let mut pts = Vec::new();
        for i in -1..=1 {
            for j in -1..=1 {
                let (x, y) = (x0 + 0.03 + 0.05 * i as f64, y0 - 1.0 + 2.0 * j as f64);
                pts.push((vec![x, y], f(x, y)));
            }
        }
        let fit = paraboloid_fit(&pts).map_err(|e| e.to_string())?;
        ensure(
            (fit.minimum[0] - x0).abs() < 1e-8 && (fit.minimum[1] - y0).abs() < 1e-6 && (fit.energy - e0).abs() < 1e-10,
            || format!("fit {:?} vs ({x0}, {y0})", fit.minimum),
        )?;
    }
    Ok(())
}

fn bit_identical_reruns() -> Result<(), String> {
    let scan = ["scan", "--template", "bent-xh2:O", "--param1", "1.00,1.05", "--param2", "100,104"];
    let a = molvqe(&[&scan[..], &["--threads", "1"]].concat())?.0;
    let b = molvqe(&[&scan[..], &["--threads", "4"]].concat())?.0;
    let c = molvqe(&scan)?.0;
    ensure(a == b && b == c, || "scan output differs between runs".into())?;
    let json = molvqe(&[&scan[..], &["--format", "json"]].concat())?.0;
    let _: ScanReport = parse(&json)?;
    let energy = ["energy", "--preset", "LiH", "--shots", "500", "--seed", "11"];
    let e1 = molvqe(&[&energy[..], &["--threads", "1"]].concat())?.0;
    let e2 = molvqe(&[&energy[..], &["--threads", "3"]].concat())?.0;
    ensure(e1 == e2, || "energy report differs between thread counts".into())?;
    Ok(())
}

fn criterion_11() -> Check {
    let start = Instant::now();
    let suites: [(&str, fn() -> Result<(), String>); 6] = [
        ("JW anticommutation M=4", jw_anticommutation),
        ("Pauli algebra vs dense 8×8", pauli_algebra),
        ("H2 integral quadrature", integral_quadrature),
        ("ansatz norm/N/Sz at M=14", ansatz_symmetries),
        ("paraboloid recovery", paraboloid_recovery),
        ("bit-identical CLI reruns", bit_identical_reruns),
    ];
    for (name, suite) in suites {
        suite().map_err(|e| format!("{name}: {e}"))?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(120), || format!("suites took {:.0} s", t.as_secs_f64()))?;
    Ok(format!("{} suites in {:.1} s", suites.len(), t.as_secs_f64()))
}

fn criterion_12() -> Check {
    let mut parts = Vec::new();
    let mut failed = Vec::new();
    for name in MANDATORY {
        let p = problem_at(name);
        let run = |sweeps| {
            p.solve(&SweepConfig {
                max_sweeps: sweeps,
                energy_tolerance: 1e-15,
                ..Default::default()
            })
            .map(|r| r.energy)
            .map_err(|e| e.to_string())
        };
        let gap = run(3)? - run(6)?;
        parts.push(format!("{name} {gap:.1e}"));
        if gap >= 1e-6 {
            failed.push(name);
        }
    }
    let detail = format!("E(3 sweeps) − E(6 sweeps): {}", parts.join(", "));
    ensure(failed.is_empty(), || format!("gap ≥ 1e-6 for {failed:?}; {detail}"))?;
    Ok(detail)
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    // libtest flags such as --list must not run the suite.
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let large = args.iter().any(|a| a == "--include-large")
        || std::env::var("MOLVQE_ACCEPTANCE_LARGE").is_ok_and(|v| v == "1");

    let secs = Duration::from_secs;
    let criteria: Vec<(&str, Box<dyn Fn() -> Check>)> = vec![
        ("1", Box::new(move || optimized_row("H2", 0.005, 5e-5, secs(5)))),
        ("2", Box::new(move || optimized_row("HeH+", 0.005, 5e-5, secs(5)))),
        ("3", Box::new(move || optimized_row("LiH", 0.005, 1e-4, secs(600)))),
        ("4", Box::new(move || optimized_row("OH-", 0.005, 2e-4, secs(900)))),
        ("5", Box::new(criterion_5)),
        ("5s", Box::new(criterion_5_stretch)),
        ("6", Box::new(move || optimized_row("BeH2", 0.005, 2e-4, secs(3600)))),
        ("7", Box::new(criterion_7)),
        ("8", Box::new(criterion_8)),
        ("9", Box::new(criterion_9)),
        ("10", Box::new(criterion_10)),
        ("11", Box::new(criterion_11)),
        ("12", Box::new(criterion_12)),
    ];

    let mut failures = 0;
    for (id, check) in &criteria {
        if *id == "7" && !large {
            println!("criterion {id:>3}  SKIP  16–20 qubit rows are opt-in (--include-large)");
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let t = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>3}  PASS  {detail}  [{t:.1} s]"),
            Err(why) => {
                failures += 1;
                println!("criterion {id:>3}  FAIL  {why}  [{t:.1} s]");
            }
        }
    }
    println!("acceptance: {} checked, {failures} failed", criteria.len() - usize::from(!large));
    if failures > 0 {
        std::process::exit(1);
    }
}
