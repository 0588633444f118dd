//! CSV and JSON writers. Numbers are written with 17 significant digits.

use crate::error::CliError;
use serde::Serialize;
use std::path::Path;
use uqhyp::diagnostics::{CellMoments, RunReport};
use uqhyp::solver::{GpcField, Mesh};

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Empty cell for undefined values.
pub fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let csv_error = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(source) => CliError::Io {
            path: path.to_path_buf(),
            source,
        },
        other => CliError::Io {
            path: path.to_path_buf(),
            source: std::io::Error::other(format!("{other:?}")),
        },
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    w.write_record(header).map_err(csv_error)?;
    for row in rows {
        w.write_record(row).map_err(csv_error)?;
    }
    w.flush().map_err(CliError::io(path))
}

/// Columns `k, i, j, component, value`.
pub fn write_field(path: &Path, field: &GpcField) -> Result<(), CliError> {
    let mut rows = Vec::with_capacity(field.data().len());
    for i in 0..field.n_cells() {
        for j in 0..field.n_elements() {
            for k in 0..field.n_modes() {
                for c in 0..field.n_components() {
                    rows.push(vec![
                        k.to_string(),
                        i.to_string(),
                        j.to_string(),
                        c.to_string(),
                        num(field.coeff(k, i, j, c)),
                    ]);
                }
            }
        }
    }
    write_table(path, &["k", "i", "j", "component", "value"], &rows)
}

/// Columns `x, mean_0, var_0, mean_1, var_1, ...`.
pub fn write_moments(path: &Path, moments: &CellMoments, mesh: &Mesh) -> Result<(), CliError> {
    let m = moments.n_components;
    let mut header = vec!["x".to_string()];
    for c in 0..m {
        header.push(format!("mean_{c}"));
        header.push(format!("var_{c}"));
    }
    let rows: Vec<Vec<String>> = mesh
        .centers()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let mut row = vec![num(x)];
            for c in 0..m {
                row.push(num(moments.mean[i * m + c]));
                row.push(num(moments.var[i * m + c]));
            }
            row
        })
        .collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    write_table(path, &header, &rows)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e.into(),
    })?;
    text.push('\n');
    std::fs::write(path, text).map_err(CliError::io(path))
}

pub fn write_report(path: &Path, report: &RunReport) -> Result<(), CliError> {
    write_json(path, report)
}
