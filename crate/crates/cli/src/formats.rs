//! On-disk formats: JSON states and channels, CSV surfaces, number layout.

use std::io::Write;
use std::path::Path;

use lqu_core::channels::KrausChannel;
use lqu_core::{ComplexMatrix, DensityMatrix, C64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{io_err, CliError, Result};

/// Complex matrix as separate real and imaginary row arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let rows = |f: fn(&C64) -> f64| {
            (0..m.rows())
                .map(|r| (0..m.cols()).map(|c| f(&m[(r, c)])).collect())
                .collect()
        };
        Self {
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let rows = self.re.len();
        let cols = self.re.first().map_or(0, Vec::len);
        let shape_ok = self.im.len() == rows
            && self.re.iter().chain(&self.im).all(|row| row.len() == cols);
        if !shape_ok {
            return Err(CliError::Config(
                "`re` and `im` must be rectangular arrays of equal shape".into(),
            ));
        }
        let data = self
            .re
            .iter()
            .flatten()
            .zip(self.im.iter().flatten())
            .map(|(&a, &b)| C64::new(a, b))
            .collect();
        Ok(ComplexMatrix::new(rows, cols, data)?)
    }
}

/// `{dim_a, dim_b, re, im}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dim_a: usize,
    pub dim_b: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl StateFile {
    pub fn from_state(rho: &DensityMatrix) -> Self {
        let m = MatrixJson::from_matrix(rho.matrix());
        Self {
            dim_a: rho.dim_a(),
            dim_b: rho.dim_b(),
            re: m.re,
            im: m.im,
        }
    }

    pub fn to_state(&self) -> Result<DensityMatrix> {
        let m = MatrixJson {
            re: self.re.clone(),
            im: self.im.clone(),
        }
        .to_matrix()?;
        Ok(DensityMatrix::new(m, self.dim_a, self.dim_b)?)
    }
}

/// `{dim, label, ops: [{re, im}, …]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub dim: usize,
    #[serde(default)]
    pub label: String,
    pub ops: Vec<MatrixJson>,
}

impl ChannelFile {
    pub fn from_channel(ch: &KrausChannel) -> Self {
        Self {
            dim: ch.dim(),
            label: ch.label().to_owned(),
            ops: ch.kraus_ops().iter().map(MatrixJson::from_matrix).collect(),
        }
    }

    pub fn to_channel(&self) -> Result<KrausChannel> {
        let ops = self
            .ops
            .iter()
            .map(MatrixJson::to_matrix)
            .collect::<Result<Vec<_>>>()?;
        Ok(KrausChannel::new(self.dim, ops, self.label.clone())?)
    }
}

/// Deserializes JSON, reporting the failing key path and position.
pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &Path) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let parsed: T = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let key = e.path().to_string();
        let inner = e.into_inner();
        CliError::ConfigParse {
            path: origin.to_path_buf(),
            line: inner.line(),
            column: inner.column(),
            key,
            message: strip_position(&inner.to_string()),
        }
    })?;
    de.end().map_err(|e| CliError::ConfigParse {
        path: origin.to_path_buf(),
        line: e.line(),
        column: e.column(),
        key: ".".into(),
        message: strip_position(&e.to_string()),
    })?;
    Ok(parsed)
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_owned(),
        None => msg.to_owned(),
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    parse_json(&text, path)
}

pub fn read_state(path: &Path) -> Result<DensityMatrix> {
    read_json::<StateFile>(path)?.to_state()
}

pub fn read_channel(path: &Path) -> Result<KrausChannel> {
    read_json::<ChannelFile>(path)?.to_channel()
}

/// 17 significant digits: enough to round-trip any `f64`.
pub fn full(x: f64) -> String {
    format!("{x:.16e}")
}

/// 6 significant digits in positional notation, for human-readable tables.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let decimals = (5 - x.abs().log10().floor() as i32).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Writes rows as CSV with an LF-terminated header.
pub fn write_csv<W: Write>(out: W, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush().map_err(|e| CliError::Csv(e.into()))?;
    Ok(())
}
