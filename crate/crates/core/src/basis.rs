//! Molecule input and the STO-3G contracted-Gaussian basis.
//!
//! Positions are stored in Bohr. Ångström only appears at the I/O boundary
//! (molecule files and [`MoleculeSpec::from_angstrom`]).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bohr radius in Ångström (CODATA 2014).
pub const BOHR_IN_ANGSTROM: f64 = 0.52917721067;
pub const ANGSTROM_TO_BOHR: f64 = 1.0 / BOHR_IN_ANGSTROM;

/// Elements with embedded STO-3G parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Element {
    H,
    He,
    Li,
    Be,
    C,
    N,
    O,
    F,
    Cl,
}

impl Element {
    pub const ALL: [Element; 9] = [
        Element::H,
        Element::He,
        Element::Li,
        Element::Be,
        Element::C,
        Element::N,
        Element::O,
        Element::F,
        Element::Cl,
    ];

    pub fn atomic_number(self) -> u32 {
        match self {
            Element::H => 1,
            Element::He => 2,
            Element::Li => 3,
            Element::Be => 4,
            Element::C => 6,
            Element::N => 7,
            Element::O => 8,
            Element::F => 9,
            Element::Cl => 17,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Element::H => "H",
            Element::He => "He",
            Element::Li => "Li",
            Element::Be => "Be",
            Element::C => "C",
            Element::N => "N",
            Element::O => "O",
            Element::F => "F",
            Element::Cl => "Cl",
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Element {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Element::ALL
            .iter()
            .copied()
            .find(|e| e.symbol().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnsupportedElement(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub element: Element,
    /// Position in Bohr.
    pub position: [f64; 3],
}

impl Atom {
    pub fn new(element: Element, position_bohr: [f64; 3]) -> Self {
        Self {
            element,
            position: position_bohr,
        }
    }

    pub fn charge(&self) -> f64 {
        self.element.atomic_number() as f64
    }
}

/// A closed-shell molecule: atoms plus total charge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoleculeSpec {
    atoms: Vec<Atom>,
    charge: i32,
}

impl MoleculeSpec {
    /// Validates electron count (positive, even) and that no two atoms coincide.
    pub fn new(atoms: Vec<Atom>, charge: i32) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMolecule("no atoms".into()));
        }
        let mol = Self { atoms, charge };
        let n = mol.electron_count_signed();
        if n < 1 {
            return Err(Error::InvalidMolecule(format!(
                "electron count must be positive, got {n}"
            )));
        }
        if n % 2 != 0 {
            return Err(Error::OddElectronCount(n));
        }
        for i in 0..mol.atoms.len() {
            for j in 0..i {
                if distance(&mol.atoms[i].position, &mol.atoms[j].position) < 1e-8 {
                    return Err(Error::CoincidentAtoms(j, i));
                }
            }
        }
        Ok(mol)
    }

    /// Builds a molecule from `(element, position in Å)` pairs.
    pub fn from_angstrom(atoms: &[(Element, [f64; 3])], charge: i32) -> Result<Self> {
        let atoms = atoms
            .iter()
            .map(|&(e, p)| Atom::new(e, p.map(|x| x * ANGSTROM_TO_BOHR)))
            .collect();
        Self::new(atoms, charge)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn charge(&self) -> i32 {
        self.charge
    }

    fn electron_count_signed(&self) -> i64 {
        let z: i64 = self
            .atoms
            .iter()
            .map(|a| a.element.atomic_number() as i64)
            .sum();
        z - self.charge as i64
    }

    pub fn electron_count(&self) -> usize {
        self.electron_count_signed() as usize
    }

    /// Same molecule with atoms sorted by (Z, x, y, z). Reordering equivalent
    /// atoms in the input therefore produces identical downstream arithmetic.
    pub fn canonicalized(&self) -> Self {
        let mut atoms = self.atoms.clone();
        atoms.sort_by(|a, b| {
            a.element.cmp(&b.element).then_with(|| {
                a.position
                    .iter()
                    .zip(b.position.iter())
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
        });
        Self {
            atoms,
            charge: self.charge,
        }
    }

    /// Applies `f` to every position (Bohr), revalidating the result.
    pub fn map_positions(&self, f: impl Fn([f64; 3]) -> [f64; 3]) -> Result<Self> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom::new(a.element, f(a.position)))
            .collect();
        Self::new(atoms, self.charge)
    }

    /// Renders the molecule in the molecule-file format (Å).
    pub fn to_xyz(&self) -> String {
        let mut out = format!("charge {}\n", self.charge);
        for a in &self.atoms {
            let p = a.position.map(|x| x * BOHR_IN_ANGSTROM);
            out.push_str(&format!(
                "{} {:.12} {:.12} {:.12}\n",
                a.element, p[0], p[1], p[2]
            ));
        }
        out
    }
}

pub(crate) fn distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Parses the molecule file format:
///
/// ```text
/// # water
/// charge 0
/// O 0.0 0.0 0.0
/// H 0.0 0.757 0.587
/// H 0.0 -0.757 0.587
/// ```
///
/// Coordinates are in Ångström; `#` starts a comment.
pub fn parse_molecule(text: &str) -> Result<MoleculeSpec> {
    let mut charge: Option<i32> = None;
    let mut atoms = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        if charge.is_none() {
            if fields.len() != 2 || !fields[0].eq_ignore_ascii_case("charge") {
                return Err(err(format!("expected `charge <int>`, found `{line}`")));
            }
            let q = fields[1]
                .parse::<i32>()
                .map_err(|_| err(format!("invalid charge `{}`", fields[1])))?;
            charge = Some(q);
            continue;
        }
        if fields.len() != 4 {
            return Err(err(format!(
                "expected `<element> <x> <y> <z>`, found `{line}`"
            )));
        }
        let element: Element = fields[0].parse().map_err(|_| {
            err(format!("unknown element `{}`", fields[0]))
        })?;
        let mut pos = [0.0; 3];
        for (k, f) in fields[1..].iter().enumerate() {
            let v = f
                .parse::<f64>()
                .map_err(|_| err(format!("invalid coordinate `{f}`")))?;
            if !v.is_finite() {
                return Err(err(format!("non-finite coordinate `{f}`")));
            }
            pos[k] = v * ANGSTROM_TO_BOHR;
        }
        atoms.push(Atom::new(element, pos));
    }
    let charge = charge.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        message: "missing `charge <int>` line".into(),
    })?;
    MoleculeSpec::new(atoms, charge)
}

/// Σ_{I<J} Z_I Z_J / |R_I − R_J| in Hartree.
pub fn nuclear_repulsion(mol: &MoleculeSpec) -> Result<f64> {
    let atoms = mol.atoms();
    let mut e = 0.0;
    for i in 0..atoms.len() {
        for j in 0..i {
            let r = distance(&atoms[i].position, &atoms[j].position);
            if r < 1e-8 {
                return Err(Error::CoincidentAtoms(j, i));
            }
            e += atoms[i].charge() * atoms[j].charge() / r;
        }
    }
    Ok(e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AngularMomentum {
    S,
    P,
}

impl AngularMomentum {
    pub fn l(self) -> u32 {
        match self {
            AngularMomentum::S => 0,
            AngularMomentum::P => 1,
        }
    }

    /// Cartesian components (lx, ly, lz), in the order s | px, py, pz.
    pub fn cartesian_powers(self) -> &'static [[u32; 3]] {
        match self {
            AngularMomentum::S => &[[0, 0, 0]],
            AngularMomentum::P => &[[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPrimitive {
    /// Exponent in Bohr⁻².
    pub exponent: f64,
    pub coefficient: f64,
}

/// Shell parameters as tabulated (unnormalized contraction coefficients).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellParameters {
    pub angular_momentum: AngularMomentum,
    pub primitives: [GaussianPrimitive; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractedShell {
    /// Index of the atom the shell sits on.
    pub center: usize,
    pub position: [f64; 3],
    pub angular_momentum: AngularMomentum,
    pub primitives: [GaussianPrimitive; 3],
}

/// One Cartesian contracted Gaussian. `coefficients` already include the
/// primitive normalization and the contraction renormalization.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisFunction {
    pub shell: usize,
    pub center: [f64; 3],
    pub powers: [u32; 3],
    pub exponents: [f64; 3],
    pub coefficients: [f64; 3],
}

impl BasisFunction {
    /// Value of the function at `r` (Bohr). Used by the quadrature tests.
    pub fn value(&self, r: [f64; 3]) -> f64 {
        let d = [
            r[0] - self.center[0],
            r[1] - self.center[1],
            r[2] - self.center[2],
        ];
        let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
        let poly: f64 = (0..3).map(|k| d[k].powi(self.powers[k] as i32)).product();
        let radial: f64 = self
            .exponents
            .iter()
            .zip(self.coefficients.iter())
            .map(|(a, c)| c * (-a * r2).exp())
            .sum();
        poly * radial
    }
}

/// The expanded AO basis of one molecule.
#[derive(Debug, Clone)]
pub struct Basis {
    pub shells: Vec<ContractedShell>,
    pub functions: Vec<BasisFunction>,
}

impl Basis {
    /// Number of spatial atomic orbitals.
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// Number of spin orbitals, i.e. qubits under Jordan-Wigner.
    pub fn spin_orbital_count(&self) -> usize {
        2 * self.functions.len()
    }
}

fn double_factorial(n: i64) -> f64 {
    if n <= 0 {
        1.0
    } else {
        (1..=n).rev().step_by(2).map(|k| k as f64).product()
    }
}

/// Normalization of a primitive Cartesian Gaussian x^l y^m z^n e^{-a r²}.
pub fn primitive_norm(exponent: f64, powers: [u32; 3]) -> f64 {
    let big_l: u32 = powers.iter().sum();
    let denom: f64 = powers
        .iter()
        .map(|&p| double_factorial(2 * p as i64 - 1))
        .product();
    (2.0 * exponent / std::f64::consts::PI).powf(0.75) * (4.0 * exponent).powf(big_l as f64 / 2.0)
        / denom.sqrt()
}

fn normalized_coefficients(shell: &ShellParameters, powers: [u32; 3]) -> [f64; 3] {
    let prims = &shell.primitives;
    let mut c = [0.0; 3];
    for k in 0..3 {
        c[k] = prims[k].coefficient * primitive_norm(prims[k].exponent, powers);
    }
    // Self-overlap of the contraction: Σ c_i c_j ∫ x^{2l} ... e^{-(a_i+a_j) r²}.
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let p = prims[i].exponent + prims[j].exponent;
            let mut one_d = 1.0;
            for &l in &powers {
                one_d *= double_factorial(2 * l as i64 - 1) / (2.0 * p).powi(l as i32)
                    * (std::f64::consts::PI / p).sqrt();
            }
            s += c[i] * c[j] * one_d;
        }
    }
    let scale = 1.0 / s.sqrt();
    c.map(|x| x * scale)
}

/// Per-element shell tables. [`BasisLibrary::sto3g`] embeds the standard
/// STO-3G parameterization (Hehre, Stewart & Pople 1969; values as distributed
/// by the Basis Set Exchange). Individual
/// elements can be replaced with [`BasisLibrary::apply_override`].
#[derive(Debug, Clone)]
pub struct BasisLibrary {
    shells: BTreeMap<Element, Vec<ShellParameters>>,
}

const STO3G_1S: [f64; 3] = [0.1543289673, 0.5353281423, 0.4446345422];
const STO3G_2SP_S: [f64; 3] = [-0.09996722919, 0.3995128261, 0.7001154689];
const STO3G_2SP_P: [f64; 3] = [0.1559162750, 0.6076837186, 0.3919573931];
const STO3G_3SP_S: [f64; 3] = [-0.2196203690, 0.2255954336, 0.9003984260];
const STO3G_3SP_P: [f64; 3] = [0.01058760429, 0.5951670053, 0.4620010120];

fn shell(l: AngularMomentum, exps: [f64; 3], coefs: [f64; 3]) -> ShellParameters {
    ShellParameters {
        angular_momentum: l,
        primitives: [0, 1, 2].map(|k| GaussianPrimitive {
            exponent: exps[k],
            coefficient: coefs[k],
        }),
    }
}

fn first_row(core: [f64; 3], valence: [f64; 3]) -> Vec<ShellParameters> {
    vec![
        shell(AngularMomentum::S, core, STO3G_1S),
        shell(AngularMomentum::S, valence, STO3G_2SP_S),
        shell(AngularMomentum::P, valence, STO3G_2SP_P),
    ]
}

impl BasisLibrary {
    pub fn sto3g() -> Self {
        use AngularMomentum::*;
        let mut shells = BTreeMap::new();
        shells.insert(
            Element::H,
            vec![shell(S, [3.425250914, 0.6239137298, 0.1688554040], STO3G_1S)],
        );
        shells.insert(
            Element::He,
            vec![shell(S, [6.362421394, 1.158922999, 0.3136497915], STO3G_1S)],
        );
        shells.insert(
            Element::Li,
            first_row(
                [16.11957475, 2.936200663, 0.7946504870],
                [0.6362897469, 0.1478600533, 0.04808867840],
            ),
        );
        shells.insert(
            Element::Be,
            first_row(
                [30.16787069, 5.495115306, 1.487192653],
                [1.314833110, 0.3055389383, 0.09937074560],
            ),
        );
        shells.insert(
            Element::C,
            first_row(
                [71.61683735, 13.04509632, 3.530512160],
                [2.941249355, 0.6834830964, 0.2222899159],
            ),
        );
        shells.insert(
            Element::N,
            first_row(
                [99.10616896, 18.05231239, 4.885660238],
                [3.780455879, 0.8784966449, 0.2857143744],
            ),
        );
        shells.insert(
            Element::O,
            first_row(
                [130.7093214, 23.80886605, 6.443608313],
                [5.033151319, 1.169596125, 0.3803889600],
            ),
        );
        shells.insert(
            Element::F,
            first_row(
                [166.6791340, 30.36081233, 8.216820672],
                [6.464803249, 1.502281245, 0.4885884864],
            ),
        );
        let cl_2sp = [38.96041889, 9.053563477, 2.944499834];
        let cl_3sp = [2.129386495, 0.5940934274, 0.2325241410];
        shells.insert(
            Element::Cl,
            vec![
                shell(S, [601.3456136, 109.5358542, 29.64467686], STO3G_1S),
                shell(S, cl_2sp, STO3G_2SP_S),
                shell(P, cl_2sp, STO3G_2SP_P),
                shell(S, cl_3sp, STO3G_3SP_S),
                shell(P, cl_3sp, STO3G_3SP_P),
            ],
        );
        Self { shells }
    }

    pub fn shells_for(&self, element: Element) -> Option<&[ShellParameters]> {
        self.shells.get(&element).map(|v| v.as_slice())
    }

    /// Replaces the shells of every element named in `text`.
    ///
    /// Format: one record per element, a symbol line followed by shell lines
    /// `<s|p> e1 c1 e2 c2 e3 c3` and closed by `end`. `#` starts a comment.
    pub fn apply_override(&mut self, text: &str) -> Result<()> {
        let mut current: Option<(Element, Vec<ShellParameters>, usize)> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match current.as_mut() {
                None => {
                    if fields.len() != 1 {
                        return Err(err(format!("expected element symbol, found `{line}`")));
                    }
                    let el: Element = fields[0].parse().map_err(|e: Error| err(e.to_string()))?;
                    current = Some((el, Vec::new(), line_no));
                }
                Some((el, shells, _)) => {
                    if fields.len() == 1 && fields[0].eq_ignore_ascii_case("end") {
                        if shells.is_empty() {
                            return Err(err(format!("no shells given for {el}")));
                        }
                        let (el, shells, _) = current.take().expect("record open");
                        self.shells.insert(el, shells);
                        continue;
                    }
                    if fields.len() != 7 {
                        return Err(err(format!(
                            "expected `<s|p> e1 c1 e2 c2 e3 c3`, found `{line}`"
                        )));
                    }
                    let l = match fields[0].to_ascii_lowercase().as_str() {
                        "s" => AngularMomentum::S,
                        "p" => AngularMomentum::P,
                        other => return Err(err(format!("unsupported shell type `{other}`"))),
                    };
                    let mut nums = [0.0; 6];
                    for (k, f) in fields[1..].iter().enumerate() {
                        nums[k] = f
                            .parse::<f64>()
                            .map_err(|_| err(format!("invalid number `{f}`")))?;
                    }
                    let exps = [nums[0], nums[2], nums[4]];
                    if exps.iter().any(|&a| !(a > 0.0)) {
                        return Err(err("exponents must be positive".into()));
                    }
                    shells.push(shell(l, exps, [nums[1], nums[3], nums[5]]));
                }
            }
        }
        if let Some((el, _, line)) = current {
            return Err(Error::Parse {
                line,
                message: format!("record for {el} is missing `end`"),
            });
        }
        Ok(())
    }

    pub fn build(&self, mol: &MoleculeSpec) -> Result<Basis> {
        let mut shells = Vec::new();
        let mut functions = Vec::new();
        for (center, atom) in mol.atoms().iter().enumerate() {
            let params = self
                .shells_for(atom.element)
                .ok_or_else(|| Error::UnsupportedElement(atom.element.to_string()))?;
            for p in params {
                let shell_idx = shells.len();
                shells.push(ContractedShell {
                    center,
                    position: atom.position,
                    angular_momentum: p.angular_momentum,
                    primitives: p.primitives,
                });
                for &powers in p.angular_momentum.cartesian_powers() {
                    functions.push(BasisFunction {
                        shell: shell_idx,
                        center: atom.position,
                        powers,
                        exponents: p.primitives.map(|g| g.exponent),
                        coefficients: normalized_coefficients(p, powers),
                    });
                }
            }
        }
        Ok(Basis { shells, functions })
    }
}

/// STO-3G basis for `mol`.
pub fn build_basis(mol: &MoleculeSpec) -> Result<Basis> {
    BasisLibrary::sto3g().build(mol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h2() -> MoleculeSpec {
        parse_molecule("charge 0\nH 0 0 0\nH 0 0 0.735\n").unwrap()
    }

    #[test]
    fn parses_h2_and_converts_units() {
        let mol = h2();
        assert_eq!(mol.electron_count(), 2);
        let r = distance(&mol.atoms()[0].position, &mol.atoms()[1].position);
        // 0.735 / 0.52917721067
        assert!((r - 1.388948_f64).abs() < 1e-5, "{r}");
        assert!((r - 0.735 / BOHR_IN_ANGSTROM).abs() < 1e-14);
    }

    #[test]
    fn parses_cation_with_comments() {
        let mol = parse_molecule("# HeH+\ncharge 1\nHe 0 0 0 # helium\nH 0 0 0.913\n").unwrap();
        assert_eq!(mol.electron_count(), 2);
        assert_eq!(mol.charge(), 1);
    }

    #[test]
    fn rejects_odd_electron_count() {
        let err = parse_molecule("charge 0\nH 0 0 0\n").unwrap_err();
        assert!(matches!(err, Error::OddElectronCount(1)));
    }

    #[test]
    fn rejects_unknown_element_with_line() {
        let err = parse_molecule("charge 0\nH 0 0 0\nXe 0 0 1\n").unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("Xe"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(
            parse_molecule("charge zero\nH 0 0 0\nH 0 0 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_molecule("charge 0\nH 0 0\nH 0 0 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_molecule("H 0 0 0\nH 0 0 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn rejects_coincident_atoms() {
        assert!(matches!(
            parse_molecule("charge 0\nH 0 0 0\nH 0 0 0\n"),
            Err(Error::CoincidentAtoms(0, 1))
        ));
    }

    #[test]
    fn nuclear_repulsion_values() {
        let single = parse_molecule("charge 0\nHe 0 0 0\n").unwrap();
        assert_eq!(nuclear_repulsion(&single).unwrap(), 0.0);
        let e = nuclear_repulsion(&h2()).unwrap();
        assert!((e - 0.719_968).abs() < 1e-5, "{e}");
        let doubled = h2().map_positions(|p| p.map(|x| 2.0 * x)).unwrap();
        assert!((nuclear_repulsion(&doubled).unwrap() - e / 2.0).abs() < 1e-14);
    }

    #[test]
    fn nuclear_repulsion_rigid_motion_invariant() {
        let mol = parse_molecule("charge 0\nO 0 0 0.1\nH 0.757 0 0.587\nH -0.757 0.1 0.587\n")
            .unwrap();
        let e = nuclear_repulsion(&mol).unwrap();
        let (s, c) = (0.7_f64.sin(), 0.7_f64.cos());
        let moved = mol
            .map_positions(|p| [c * p[0] - s * p[1] + 1.5, s * p[0] + c * p[1] - 2.0, p[2] + 0.3])
            .unwrap();
        assert!((nuclear_repulsion(&moved).unwrap() - e).abs() < 1e-12);
    }

    #[test]
    fn orbital_counts_match_sto3g() {
        let count = |text: &str| build_basis(&parse_molecule(text).unwrap()).unwrap().len();
        assert_eq!(count("charge 0\nH 0 0 0\nH 0 0 0.735"), 2);
        assert_eq!(count("charge 0\nO 0 0 0\nH 0 0.757 0.587\nH 0 -0.757 0.587"), 7);
        assert_eq!(count("charge 0\nH 0 0 0\nCl 0 0 1.342"), 10);
    }

    #[test]
    fn override_replaces_element_shells() {
        let mut lib = BasisLibrary::sto3g();
        lib.apply_override("H\n s 1.0 0.5 0.5 0.3 0.2 0.2\nend\n").unwrap();
        let h = lib.shells_for(Element::H).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].primitives[0].exponent, 1.0);
        assert!(lib.apply_override("H\n s 1.0 0.5\nend\n").is_err());
        assert!(lib.apply_override("H\n s 1 1 1 1 1 1\n").is_err());
        assert!(lib.apply_override("H\n d 1 1 1 1 1 1\nend").is_err());
    }

    #[test]
    fn canonical_order_is_permutation_invariant() {
        let a = parse_molecule("charge 0\nH 0 0.757 0.587\nO 0 0 0\nH 0 -0.757 0.587").unwrap();
        let b = parse_molecule("charge 0\nH 0 -0.757 0.587\nH 0 0.757 0.587\nO 0 0 0").unwrap();
        assert_eq!(a.canonicalized(), b.canonicalized());
    }
}
