use std::fs;
use std::path::Path;

use molvqe::basis::{parse_molecule, BasisLibrary, MoleculeSpec};
use molvqe::geometry::{build_geometry, preset, GeometryTemplate, Preset, PRESETS};

use crate::args::GeometryInput;
use crate::error::{CliError, CliResult};

pub fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn library(override_path: Option<&Path>) -> CliResult<BasisLibrary> {
    let mut lib = BasisLibrary::sto3g();
    if let Some(path) = override_path {
        lib.apply_override(&read_file(path)?)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    }
    Ok(lib)
}

pub fn find_preset(name: &str) -> CliResult<&'static Preset> {
    preset(name).ok_or_else(|| {
        let names: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
        CliError::usage(format!("unknown preset `{name}` (known: {})", names.join(", ")))
    })
}

pub fn parse_template(text: &str) -> CliResult<GeometryTemplate> {
    text.parse().map_err(|e: molvqe::Error| CliError::usage(e.to_string()))
}

/// Comma-separated floats.
pub fn parse_list(text: &str, what: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::usage(format!("{what}: `{x}` is not a number")))
        })
        .collect()
}

/// `start:stop:count` (inclusive, evenly spaced) or a comma list.
pub fn parse_grid(text: &str, what: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [_] => parse_list(text, what),
        [a, b, n] => {
            let a = parse_list(a, what)?;
            let b = parse_list(b, what)?;
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| CliError::usage(format!("{what}: point count `{n}` is not a positive integer")))?;
            let (a, b) = match (a.as_slice(), b.as_slice()) {
                ([a], [b]) => (*a, *b),
                _ => return Err(CliError::usage(format!("{what}: expected start:stop:count"))),
            };
            match n {
                0 => Err(CliError::usage(format!("{what}: point count must be positive"))),
                1 => Ok(vec![a]),
                _ => Ok((0..n)
                    .map(|k| if k == n - 1 { b } else { a + (b - a) * k as f64 / (n - 1) as f64 })
                    .collect()),
            }
        }
        _ => Err(CliError::usage(format!("{what}: expected start:stop:count or a comma list"))),
    }
}

/// The template of `--template` or `--preset`, exactly one of which must be given.
pub fn template_or_preset(template: Option<&str>, preset: Option<&str>) -> CliResult<GeometryTemplate> {
    match (template, preset) {
        (Some(t), None) => parse_template(t),
        (None, Some(p)) => Ok(find_preset(p)?.template()),
        _ => Err(CliError::usage("give exactly one of --template or --preset")),
    }
}

/// Resolves the geometry source into a molecule and a short description.
pub fn molecule(g: &GeometryInput) -> CliResult<(MoleculeSpec, String)> {
    let given = [g.molecule.is_some(), g.template.is_some(), g.preset.is_some()];
    if given.iter().filter(|x| **x).count() != 1 {
        return Err(CliError::usage("give exactly one of --molecule, --template or --preset"));
    }
    if g.params.is_some() && g.template.is_none() {
        return Err(CliError::usage("--params needs --template"));
    }
    if let Some(path) = &g.molecule {
        let mol = parse_molecule(&read_file(path)?).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        return Ok((mol, format!("molecule {}", path.display())));
    }
    if let Some(t) = &g.template {
        let template = parse_template(t)?;
        let params = match &g.params {
            Some(p) => parse_list(p, "--params")?,
            None => return Err(CliError::usage("--template needs --params")),
        };
        let mol = build_geometry(&template, &params)?;
        let listed: Vec<String> = params.iter().map(|p| p.to_string()).collect();
        return Ok((mol.canonicalized(), format!("template {template} {}", listed.join(","))));
    }
    let p = find_preset(g.preset.as_deref().unwrap_or_default())?;
    Ok((p.molecule().canonicalized(), format!("preset {}", p.name)))
}
