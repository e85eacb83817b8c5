//! File formats of the command-line front end.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use tempfile::NamedTempFile;

use crate::channel::TransmissionRecord;
use crate::distfit::{Family, FitResult, SampleVector};

use super::{CliError, ExitKind};

pub const RECORD_HEADER: &str = "index,bit,tx_level,rx_sample";

/// The single-line record printed by `fit`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRecord {
    pub family: Family,
    pub sigma: f64,
    pub s: f64,
    pub log_likelihood: f64,
    pub bic: f64,
    pub n: usize,
}

impl From<&FitResult> for FitRecord {
    fn from(fit: &FitResult) -> Self {
        FitRecord {
            family: fit.family,
            sigma: fit.params.sigma(),
            s: fit.params.s(),
            log_likelihood: fit.log_likelihood,
            bic: fit.bic,
            n: fit.n,
        }
    }
}

impl FitRecord {
    pub fn to_json_line(&self) -> String {
        let mut line = serde_json::to_string(self).expect("plain struct serializes");
        line.push('\n');
        line
    }
}

pub(super) fn record_csv(record: &TransmissionRecord) -> String {
    let mut out = String::from(RECORD_HEADER);
    out.push('\n');
    for (i, ((bit, tx), rx)) in record
        .bits
        .iter()
        .zip(&record.tx_levels)
        .zip(record.rx_samples.iter())
        .enumerate()
    {
        let _ = writeln!(out, "{i},{},{tx},{rx}", u8::from(*bit));
    }
    out
}

pub(super) fn bits_text(bits: &[bool]) -> String {
    bits.iter()
        .map(|&b| if b { "1\n" } else { "0\n" })
        .collect()
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| {
        CliError::new(
            ExitKind::File,
            format!("cannot read {}: {e}", path.display()),
        )
    })
}

/// Values of one column: the `simulate` CSV column `column`, or every line
/// of a plain one-value-per-line file. Blank and `#` lines are skipped.
fn read_column(path: &Path, column: usize) -> Result<Vec<(usize, String)>, CliError> {
    let text = read_text(path)?;
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .peekable();
    let is_record = lines.peek().is_some_and(|(_, l)| *l == RECORD_HEADER);
    if !is_record {
        return Ok(lines.map(|(n, l)| (n, l.to_string())).collect());
    }
    lines
        .skip(1)
        .map(|(n, l)| {
            l.split(',')
                .nth(column)
                .map(|v| (n, v.to_string()))
                .ok_or_else(|| {
                    CliError::new(
                        ExitKind::Parse,
                        format!("{}:{n}: missing column {column}", path.display()),
                    )
                })
        })
        .collect()
}

/// Received samples, one per line or from the `rx_sample` column of a `simulate` CSV.
pub fn read_samples(path: &Path) -> Result<SampleVector, CliError> {
    let values = read_column(path, 3)?
        .into_iter()
        .map(|(n, v)| {
            v.parse::<f64>().map_err(|_| {
                CliError::new(
                    ExitKind::Parse,
                    format!("{}:{n}: not a number: `{v}`", path.display()),
                )
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SampleVector::new(values)?)
}

/// Bits (`0` / `1`), one per line or from the `bit` column of a `simulate` CSV.
pub fn read_bits(path: &Path) -> Result<Vec<bool>, CliError> {
    read_column(path, 1)?
        .into_iter()
        .map(|(n, v)| match v.as_str() {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(CliError::new(
                ExitKind::Parse,
                format!("{}:{n}: not a bit: `{v}`", path.display()),
            )),
        })
        .collect()
}

/// Write `contents` to `path` through a temporary file in the same directory,
/// or to standard output when `path` is `None`.
pub fn write_output(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    let Some(path) = path else {
        let mut stdout = std::io::stdout().lock();
        return stdout
            .write_all(contents.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|e| CliError::new(ExitKind::File, format!("cannot write to stdout: {e}")));
    };
    let file_error = |e: std::io::Error| {
        CliError::new(
            ExitKind::File,
            format!("cannot write {}: {e}", path.display()),
        )
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(file_error)?;
    tmp.write_all(contents.as_bytes()).map_err(file_error)?;
    tmp.persist(path).map_err(|e| file_error(e.error))?;
    Ok(())
}
