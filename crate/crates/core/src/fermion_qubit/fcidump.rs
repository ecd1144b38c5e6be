//! FCIDUMP reader and writer.
//!
//! Layout: a `&FCI ... &END` namelist header with NORB, NELEC, MS2, ORBSYM and
//! ISYM, followed by one `value i j k l` record per line. Indices are 1-based
//! spatial orbitals; two-electron records are (ij|kl) in chemists' notation,
//! `i j 0 0` is a one-electron integral and `0 0 0 0` the core energy. Only
//! one representative per permutational symmetry class is written.
//! Values are written with 17 significant digits, which round-trips f64.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::integrals::EriTensor;
use crate::scf::MOIntegrals;

pub fn export_fcidump(mo: &MOIntegrals) -> String {
    let n = mo.n_spatial();
    let mut out = String::new();
    let orbsym = vec!["1"; n].join(",");
    out.push_str(&format!(
        "&FCI NORB={n},NELEC={},MS2=0,\n ORBSYM={orbsym},\n ISYM=1,\n&END\n",
        mo.n_electrons()
    ));
    let eri = mo.spatial_two_body();
    let record = |v: f64, i: usize, j: usize, k: usize, l: usize| format!("{v:25.16e} {i:4} {j:4} {k:4} {l:4}\n");
    for i in 0..n {
        for j in 0..=i {
            for k in 0..n {
                for l in 0..=k {
                    if k * (k + 1) / 2 + l > i * (i + 1) / 2 + j {
                        continue;
                    }
                    let v = eri.get(i, j, k, l);
                    if v != 0.0 {
                        out.push_str(&record(v, i + 1, j + 1, k + 1, l + 1));
                    }
                }
            }
        }
    }
    let h = mo.spatial_one_body();
    for i in 0..n {
        for j in 0..=i {
            if h[(i, j)] != 0.0 {
                out.push_str(&record(h[(i, j)], i + 1, j + 1, 0, 0));
            }
        }
    }
    out.push_str(&record(mo.core_energy(), 0, 0, 0, 0));
    out
}

#[derive(Debug, Default)]
struct Header {
    norb: Option<usize>,
    nelec: Option<usize>,
    ms2: i64,
}

fn parse_header(text: &str) -> Result<Header> {
    let body = text
        .trim()
        .trim_start_matches('&')
        .trim_start_matches(|c: char| c.is_ascii_alphabetic());
    let mut header = Header::default();
    let mut key = String::new();
    for token in body.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        let value = match token.split_once('=') {
            Some((k, v)) => {
                key = k.trim().to_ascii_uppercase();
                v.trim()
            }
            None => token,
        };
        if value.is_empty() {
            continue;
        }
        let parse_int = || {
            value
                .parse::<i64>()
                .map_err(|_| Error::Fcidump(format!("bad value `{value}` for {key}")))
        };
        match key.as_str() {
            "NORB" => header.norb = Some(usize::try_from(parse_int()?).map_err(|_| Error::Fcidump("negative NORB".into()))?),
            "NELEC" => header.nelec = Some(usize::try_from(parse_int()?).map_err(|_| Error::Fcidump("negative NELEC".into()))?),
            "MS2" => header.ms2 = parse_int()?,
            _ => {}
        }
    }
    Ok(header)
}

pub fn import_fcidump(text: &str) -> Result<MOIntegrals> {
    let upper = text.to_ascii_uppercase();
    let start = upper
        .find("&FCI")
        .ok_or_else(|| Error::Fcidump("missing &FCI header".into()))?;
    let (end, end_len) = match upper[start..].find("&END") {
        Some(e) => (start + e, 4),
        None => match upper[start..].find('/') {
            Some(e) => (start + e, 1),
            None => return Err(Error::Fcidump("unterminated header".into())),
        },
    };
    let header = parse_header(&text[start..end])?;
    let n = header.norb.ok_or_else(|| Error::Fcidump("NORB missing".into()))?;
    let nelec = header.nelec.ok_or_else(|| Error::Fcidump("NELEC missing".into()))?;
    if header.ms2 != 0 {
        return Err(Error::Fcidump(format!("MS2={} is not a closed shell", header.ms2)));
    }

    let mut h = DMatrix::zeros(n, n);
    let mut eri = EriTensor::zeros(n);
    let mut core = 0.0;
    let body = &text[end + end_len..];
    let first_line = text[..end + end_len].lines().count();
    for (offset, line) in body.lines().enumerate() {
        let line_no = first_line + offset;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 5 {
            return Err(Error::Fcidump(format!("line {line_no}: expected 5 fields, found {}", fields.len())));
        }
        let value: f64 = fields[0]
            .replace(['D', 'd'], "e")
            .parse()
            .map_err(|_| Error::Fcidump(format!("line {line_no}: bad value `{}`", fields[0])))?;
        let mut idx = [0usize; 4];
        for (slot, f) in idx.iter_mut().zip(&fields[1..]) {
            *slot = f
                .parse()
                .map_err(|_| Error::Fcidump(format!("line {line_no}: bad index `{f}`")))?;
            if *slot > n {
                return Err(Error::Fcidump(format!("line {line_no}: index {slot} exceeds NORB={n}")));
            }
        }
        match idx {
            [0, 0, 0, 0] => core = value,
            // Orbital energies carry no integral information.
            [_, 0, 0, 0] => {}
            [i, j, 0, 0] if i > 0 && j > 0 => {
                h[(i - 1, j - 1)] = value;
                h[(j - 1, i - 1)] = value;
            }
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => eri.set(i - 1, j - 1, k - 1, l - 1, value),
            _ => return Err(Error::Fcidump(format!("line {line_no}: invalid index pattern {idx:?}"))),
        }
    }
    MOIntegrals::from_spatial(h, eri, core, nelec)
}
