//! Text and JSON formats: complex numbers, sample files and representations.

use std::collections::BTreeMap;
use std::path::Path;

use dhp_core::automorphy::HalfPlanePoint;
use dhp_core::rep::{CMat, Rep};
use dhp_core::C64;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Parses `a+bi`, `a-bi`, `bi` or `a`.
pub fn parse_complex(s: &str) -> Result<C64, CliError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    t.parse::<C64>().map_err(|_| CliError::Usage(format!("not a complex number: {s:?}")))
}

/// Formats as `a+bi` with shortest round-trip decimals.
pub fn format_complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

/// A one-component value prints as a scalar, longer ones as `(a, b, ...)`.
pub fn format_vector(v: &[C64]) -> String {
    match v {
        [x] => format_complex(*x),
        _ => format!("({})", v.iter().map(|x| format_complex(*x)).collect::<Vec<_>>().join(", ")),
    }
}

pub fn parse_point(s: &str) -> Result<HalfPlanePoint, CliError> {
    Ok(HalfPlanePoint::new(parse_complex(s)?)?)
}

/// Sample file: a JSON array of `"a+bi"` strings.
pub fn parse_samples(json: &str) -> Result<Vec<HalfPlanePoint>, CliError> {
    let raw: Vec<String> = serde_json::from_str(json)?;
    raw.iter().map(|s| parse_point(s)).collect()
}

pub fn load_samples(path: &Path) -> Result<Vec<HalfPlanePoint>, CliError> {
    parse_samples(&std::fs::read_to_string(path)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct RepFile {
    group: String,
    dim: usize,
    images: BTreeMap<String, Vec<[f64; 2]>>,
}

fn matrix_to_pairs(m: &CMat) -> Vec<[f64; 2]> {
    // nalgebra stores column-major; the file is row-major
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push([m[(i, j)].re, m[(i, j)].im]);
        }
    }
    out
}

fn pairs_to_matrix(name: &str, dim: usize, pairs: &[[f64; 2]]) -> Result<CMat, CliError> {
    if pairs.len() != dim * dim {
        return Err(CliError::Usage(format!("image {name} has {} entries, expected {}", pairs.len(), dim * dim)));
    }
    Ok(CMat::from_row_iterator(dim, dim, pairs.iter().map(|[re, im]| C64::new(*re, *im))))
}

/// Representation file: `{"group": "SL"|"GL", "dim": n, "images": {"S": [[re,im],...], ...}}`.
pub fn rep_to_json(rep: &Rep) -> String {
    let mut images = BTreeMap::new();
    images.insert("S".to_string(), matrix_to_pairs(rep.s_image()));
    images.insert("T".to_string(), matrix_to_pairs(rep.t_image()));
    if let Some(r) = rep.r_image() {
        images.insert("R".to_string(), matrix_to_pairs(r));
    }
    let file = RepFile { group: rep.group().name().to_string(), dim: rep.dim(), images };
    serde_json::to_string_pretty(&file).expect("serializable")
}

pub fn rep_from_json(json: &str) -> Result<Rep, CliError> {
    let file: RepFile = serde_json::from_str(json)?;
    let get = |name: &str| {
        let pairs = file.images.get(name).ok_or_else(|| CliError::Usage(format!("missing image {name}")))?;
        pairs_to_matrix(name, file.dim, pairs)
    };
    if let Some(extra) = file.images.keys().find(|k| !["S", "T", "R"].contains(&k.as_str())) {
        return Err(CliError::Usage(format!("unknown generator {extra}")));
    }
    let rep = match file.group.as_str() {
        "SL" if file.images.contains_key("R") => return Err(CliError::Usage("SL representation with an R image".into())),
        "SL" => Rep::new_sl(get("S")?, get("T")?)?,
        "GL" => Rep::new_gl(get("S")?, get("T")?, get("R")?)?,
        other => return Err(CliError::Usage(format!("unknown group {other:?}"))),
    };
    Ok(rep)
}

pub fn load_rep(path: &Path) -> Result<Rep, CliError> {
    rep_from_json(&std::fs::read_to_string(path)?)
}
