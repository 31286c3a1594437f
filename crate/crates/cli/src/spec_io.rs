//! File formats consumed by the CLI: generator specs (JSON), tabulated
//! transforms (CSV `omega,phihat_sq`), and coefficient sequences
//! (CSV `gamma,re,im`).

use std::fs;
use std::path::Path;

use bernstein_core::{Complex64, EnvelopeMode, GeneratorSpec, SpectralEnvelope};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum SpecJson {
    Shannon,
    Bspline { order: u32 },
    Gaussian { sigma: f64 },
    Dilated { a: f64, inner: Box<SpecJson> },
    Orthonormalized { inner: Box<SpecJson> },
    Tensor { axes: Vec<SpecJson> },
    Tabulated { file: String, envelope: EnvelopeJson },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnvelopeJson {
    mode: EnvelopeModeJson,
    c: f64,
    p: f64,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum EnvelopeModeJson {
    Polynomial,
    SuperExponential,
}

/// Reads a generator spec file, resolving tabulated sample files relative to
/// the current working directory.
pub fn load_spec(path: &Path) -> Result<GeneratorSpec, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read generator spec {}: {e}", path.display())))?;
    let parsed: SpecJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("malformed generator spec {}: {e}", path.display())))?;
    resolve(parsed)
}

fn resolve(spec: SpecJson) -> Result<GeneratorSpec, CliError> {
    Ok(match spec {
        SpecJson::Shannon => GeneratorSpec::Shannon,
        SpecJson::Bspline { order } => GeneratorSpec::Bspline { order },
        SpecJson::Gaussian { sigma } => GeneratorSpec::Gaussian { sigma },
        SpecJson::Dilated { a, inner } => GeneratorSpec::Dilated {
            a,
            inner: Box::new(resolve(*inner)?),
        },
        SpecJson::Orthonormalized { inner } => GeneratorSpec::Orthonormalized {
            inner: Box::new(resolve(*inner)?),
        },
        SpecJson::Tensor { axes } => GeneratorSpec::Tensor {
            axes: axes.into_iter().map(resolve).collect::<Result<_, _>>()?,
        },
        SpecJson::Tabulated { file, envelope } => {
            let samples = read_tabulated_csv(Path::new(&file))?;
            let env = match envelope.mode {
                EnvelopeModeJson::Polynomial => SpectralEnvelope::polynomial(envelope.c, envelope.p),
                EnvelopeModeJson::SuperExponential => {
                    SpectralEnvelope::super_exponential(envelope.c, envelope.p)
                }
            };
            debug_assert!(matches!(env.mode, EnvelopeMode::Polynomial | EnvelopeMode::SuperExponential));
            GeneratorSpec::Tabulated { samples, envelope: env }
        }
    })
}

/// Two columns `omega,phihat_sq`; a non-numeric first row is treated as a
/// header.
pub fn read_tabulated_csv(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Input(format!("cannot read samples {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record =
            record.map_err(|e| CliError::Input(format!("{}: row {i}: {e}", path.display())))?;
        if record.len() != 2 {
            return Err(CliError::Input(format!(
                "{}: row {i} has {} fields, expected omega,phihat_sq",
                path.display(),
                record.len()
            )));
        }
        match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
            (Ok(w), Ok(q)) => out.push((w, q)),
            _ if i == 0 => continue, // header row
            _ => {
                return Err(CliError::Input(format!(
                    "{}: row {i} is not a numeric omega,phihat_sq pair",
                    path.display()
                )))
            }
        }
    }
    Ok(out)
}

/// Three columns `gamma,re,im`, densified over `[gamma_min, gamma_max]`.
pub fn read_coeffs_csv(path: &Path) -> Result<(i64, Vec<Complex64>), CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Input(format!("cannot read coefficients {}: {e}", path.display())))?;
    let mut entries: Vec<(i64, Complex64)> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record =
            record.map_err(|e| CliError::Input(format!("{}: row {i}: {e}", path.display())))?;
        if record.len() != 3 {
            return Err(CliError::Input(format!(
                "{}: row {i} has {} fields, expected gamma,re,im",
                path.display(),
                record.len()
            )));
        }
        match (
            record[0].parse::<i64>(),
            record[1].parse::<f64>(),
            record[2].parse::<f64>(),
        ) {
            (Ok(g), Ok(re), Ok(im)) => {
                if entries.iter().any(|&(seen, _)| seen == g) {
                    return Err(CliError::Input(format!(
                        "{}: duplicate coefficient index {g}",
                        path.display()
                    )));
                }
                entries.push((g, Complex64::new(re, im)));
            }
            _ if i == 0 => continue, // header row
            _ => {
                return Err(CliError::Input(format!(
                    "{}: row {i} is not a numeric gamma,re,im triple",
                    path.display()
                )))
            }
        }
    }
    if entries.is_empty() {
        return Err(CliError::Input(format!(
            "{}: no coefficients found",
            path.display()
        )));
    }
    let gamma_min = entries.iter().map(|&(g, _)| g).min().unwrap();
    let gamma_max = entries.iter().map(|&(g, _)| g).max().unwrap();
    let width = usize::try_from(gamma_max - gamma_min + 1)
        .map_err(|_| CliError::Input("coefficient index range too wide".into()))?;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); width];
    for (g, c) in entries {
        coeffs[(g - gamma_min) as usize] = c;
    }
    Ok((gamma_min, coeffs))
}
