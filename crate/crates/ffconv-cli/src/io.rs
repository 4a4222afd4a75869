//! Polynomial file/inline parsing and output plumbing.
//!
//! A polynomial is a JSON object carrying `degree` plus exactly one of
//! `roots` or `coeffs` (low order first, monic implied). Inline values are
//! comma-separated numbers. Ambiguous inputs — a file and an inline flag
//! for the same polynomial — are an error rather than a silent precedence
//! rule.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use ffconv::{FfcError, RealRootedPoly};

/// Process exit code carrier: 1 property violation, 2 parse/config,
/// 3 precondition, 4 numerical.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    pub fn violation(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<FfcError> for CliError {
    fn from(err: FfcError) -> Self {
        let code = match err {
            FfcError::NotRealRooted { .. } | FfcError::NearCollision { .. } => 4,
            FfcError::NonFiniteInput | FfcError::InvalidConfig(_) => 2,
            FfcError::DegreeMismatch { .. }
            | FfcError::DegreeUnderflow { .. }
            | FfcError::DegreeTooSmall { .. }
            | FfcError::InvalidParameter { .. }
            | FfcError::TooLarge { .. }
            | FfcError::MultipleRoots { .. }
            | FfcError::UnsupportedProbe { .. } => 3,
        };
        CliError {
            code,
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::parse(format!("i/o error: {err}"))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyFile {
    degree: usize,
    #[serde(default)]
    roots: Option<Vec<f64>>,
    #[serde(default)]
    coeffs: Option<Vec<f64>>,
}

/// Serialized form of a polynomial: both views, numbers at 17 significant
/// digits so the file reproduces the doubles exactly.
#[derive(Serialize)]
pub struct PolyOut<'a> {
    pub degree: usize,
    pub roots: &'a [f64],
    pub coeffs: &'a [f64],
}

pub fn poly_json(p: &RealRootedPoly) -> String {
    ffconv::json::to_string(&PolyOut {
        degree: p.degree(),
        roots: p.roots(),
        coeffs: p.coeffs(),
    })
}

/// Loads a polynomial from exactly one source: a JSON file, inline roots,
/// or inline coefficients.
pub fn load_poly(
    label: &str,
    file: Option<&PathBuf>,
    inline_roots: Option<&str>,
    inline_coeffs: Option<&str>,
) -> Result<RealRootedPoly, CliError> {
    let sources =
        usize::from(file.is_some()) + usize::from(inline_roots.is_some()) + usize::from(inline_coeffs.is_some());
    if sources == 0 {
        return Err(CliError::parse(format!(
            "no input for polynomial {label}: give a file, --{label}-roots or --{label}-coeffs"
        )));
    }
    if sources > 1 {
        return Err(CliError::parse(format!(
            "conflicting inputs for polynomial {label}: give exactly one of file, roots or coeffs"
        )));
    }
    if let Some(path) = file {
        return read_poly_file(path);
    }
    if let Some(list) = inline_roots {
        let roots = parse_number_list(list)?;
        return Ok(RealRootedPoly::from_roots(&roots)?);
    }
    let coeffs = parse_number_list(inline_coeffs.unwrap())?;
    Ok(RealRootedPoly::from_coeffs(&coeffs)?)
}

pub fn read_poly_file(path: &Path) -> Result<RealRootedPoly, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    let parsed: PolyFile = serde_json::from_str(&text)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    match (parsed.roots, parsed.coeffs) {
        // Files written by `convolve` carry both views. They are accepted
        // as long as they describe the same polynomial; anything
        // inconsistent is ambiguous and rejected.
        (Some(roots), Some(coeffs)) => {
            if roots.len() != parsed.degree || coeffs.len() != parsed.degree {
                return Err(CliError::parse(format!(
                    "{}: lengths do not match the degree {}",
                    path.display(),
                    parsed.degree
                )));
            }
            let p = RealRootedPoly::from_roots(&roots)?;
            let scale = 1.0 + coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
            for (expanded, given) in p.coeffs().iter().zip(&coeffs) {
                if (expanded - given).abs() > 1e-8 * scale {
                    return Err(CliError::parse(format!(
                        "{}: \"roots\" and \"coeffs\" disagree ({expanded} vs {given})",
                        path.display()
                    )));
                }
            }
            Ok(p)
        }
        (None, None) => Err(CliError::parse(format!(
            "{}: missing \"roots\" or \"coeffs\"",
            path.display()
        ))),
        (Some(roots), None) => {
            if roots.len() != parsed.degree {
                return Err(CliError::parse(format!(
                    "{}: degree {} does not match {} roots",
                    path.display(),
                    parsed.degree,
                    roots.len()
                )));
            }
            Ok(RealRootedPoly::from_roots(&roots)?)
        }
        (None, Some(coeffs)) => {
            if coeffs.len() != parsed.degree {
                return Err(CliError::parse(format!(
                    "{}: degree {} does not match {} coefficients",
                    path.display(),
                    parsed.degree,
                    coeffs.len()
                )));
            }
            Ok(RealRootedPoly::from_coeffs(&coeffs)?)
        }
    }
}

pub fn parse_number_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|piece| {
            piece
                .trim()
                .parse::<f64>()
                .map_err(|_| CliError::parse(format!("not a number: {piece:?}")))
        })
        .collect()
}

/// Writes to the path when given, otherwise to standard output.
pub fn write_output(out: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, content)
                .map_err(|e| CliError::parse(format!("cannot write {}: {e}", path.display())))?;
        }
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}
