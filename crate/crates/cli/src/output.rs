//! Serialization helpers. Floats use the shortest representation that
//! round-trips; CSV rows end in LF.

use std::io::Write;
use std::path::Path;

use anyhow::Context;
use qdent_core::linalg::CMatrix;
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// A complex matrix as row-major real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexMatrix {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&CMatrix> for ComplexMatrix {
    fn from(m: &CMatrix) -> Self {
        let rows = |f: fn(&qdent_core::linalg::C64) -> f64| {
            (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|c| f(&m[(r, c)])).collect())
                .collect()
        };
        Self {
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut text = serde_json::to_string_pretty(value).map_err(CliError::internal)?;
    text.push('\n');
    Ok(text)
}

pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(f64::to_string).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    text
}

pub fn emit(text: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(CliError::internal),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .context("cannot write to stdout")
            .map_err(CliError::internal),
    }
}
