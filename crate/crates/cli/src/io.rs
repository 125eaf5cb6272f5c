use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use divgeo::density_core::{CMatrix, CVector};
use divgeo::schema::{ComplexMatrixJson, ComplexVectorJson, ErrorJson};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Why a run stopped. Input problems exit with 1, library errors with 2.
#[derive(Debug)]
pub enum Failure {
    Input { kind: &'static str, detail: String },
    Library(divgeo::Error),
}

impl Failure {
    pub fn io(path: &Path, e: io::Error) -> Self {
        Failure::Input {
            kind: "IoError",
            detail: format!("{}: {e}", path.display()),
        }
    }

    pub fn parse(path: &Path, detail: impl std::fmt::Display) -> Self {
        Failure::Input {
            kind: "ParseError",
            detail: format!("{}: {detail}", path.display()),
        }
    }

    pub fn config(detail: impl Into<String>) -> Self {
        Failure::Input {
            kind: "InvalidConfig",
            detail: detail.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input { .. } => 1,
            Failure::Library(_) => 2,
        }
    }

    pub fn to_json(&self) -> ErrorJson {
        match self {
            Failure::Input { kind, detail } => ErrorJson::new(*kind, detail.clone()),
            Failure::Library(e) => e.into(),
        }
    }
}

impl From<divgeo::Error> for Failure {
    fn from(e: divgeo::Error) -> Self {
        Failure::Library(e)
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;

/// Reads and parses a JSON file; `-` reads standard input.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Outcome<T> {
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::io(path, e))?;
        buf
    } else {
        fs::read_to_string(path).map_err(|e| Failure::io(path, e))?
    };
    log::debug!("read {} bytes from {}", text.len(), path.display());
    serde_json::from_str(&text).map_err(|e| Failure::parse(path, e))
}

pub fn read_matrix(path: &Path) -> Outcome<CMatrix> {
    let m: ComplexMatrixJson = read_json(path)?;
    m.to_matrix().map_err(|e| Failure::parse(path, e))
}

pub fn read_vector(path: &Path) -> Outcome<CVector> {
    let v: ComplexVectorJson = read_json(path)?;
    v.to_vector().map_err(|e| Failure::parse(path, e))
}

pub fn write_report<T: Serialize>(report: &T, out: Option<&PathBuf>) -> Outcome<()> {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::io(path, e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::io(Path::new("<stdout>"), e)),
    }
}

/// Parses a grid such as `2^-10..2^-20` (powers of two, unit steps in the
/// exponent) or a comma list like `0.1,1e-3,2^-12`.
pub fn parse_grid(text: &str) -> Outcome<Vec<f64>> {
    let bad = |why: &str| Failure::config(format!("grid {text:?}: {why}"));
    if let Some((a, b)) = text.split_once("..") {
        let exponent = |s: &str| -> Outcome<i32> {
            s.trim()
                .strip_prefix("2^")
                .and_then(|e| e.parse().ok())
                .ok_or_else(|| bad("ranges are written 2^a..2^b with integer exponents"))
        };
        let (a, b) = (exponent(a)?, exponent(b)?);
        let step = if b >= a { 1 } else { -1 };
        let mut out = vec![];
        let mut k = a;
        loop {
            out.push(2f64.powi(k));
            if k == b {
                break;
            }
            k += step;
        }
        return Ok(out);
    }
    text.split(',')
        .map(|s| {
            let s = s.trim();
            let value = match s.strip_prefix("2^") {
                Some(e) => e.parse::<f64>().map(|e| 2f64.powf(e)),
                None => s.parse::<f64>(),
            };
            value.map_err(|_| bad(&format!("cannot read {s:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("2^-1..2^-3").unwrap(), vec![0.5, 0.25, 0.125]);
        assert_eq!(parse_grid("0.5, 2^-2,1e-3").unwrap(), vec![0.5, 0.25, 1e-3]);
        assert!(parse_grid("1..3").is_err());
        assert!(parse_grid("x").is_err());
    }
}
