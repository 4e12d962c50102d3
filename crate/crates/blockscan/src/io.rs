//! File formats: dataset CSV with a JSON sidecar, and critical-value tables.
//!
//! Datasets are plain CSV so fixtures stay diffable: one value per line for
//! d = 1, row-major n-column lines for d = 2. Floats print in Rust's
//! shortest-round-trip form, so reading a file back reproduces every bit.
//! The sidecar carries the generating configuration and the truth regions.
//! Table files open with `#`-prefixed header lines recording the parameters
//! that produced them.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Error;
use crate::mc::CritValue;
use crate::models::Dataset;
use crate::structured::GridData;
use crate::Result;

/// Sidecar path for a dataset CSV: same name, `.json` extension.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

#[derive(Serialize)]
struct Sidecar<'a> {
    config: &'a crate::models::SignalConfig,
    truth: &'a [crate::regions::Region],
}

/// Generating parameters as `# key=value` lines, so a dataset file alone
/// is enough to reproduce itself.
pub fn config_header(config: &crate::models::SignalConfig) -> String {
    let p = config.params();
    table_header(&[
        ("n", p.n.to_string()),
        ("d", p.d.to_string()),
        ("shape", p.shape.to_string()),
        ("alpha", p.alpha.to_string()),
        ("beta", p.beta.to_string()),
        ("regime", p.regime.to_string()),
        ("r", p.r.to_string()),
        ("placement", p.placement.to_string()),
        ("seed", p.seed.to_string()),
        ("block_cells", config.block_cells().to_string()),
        ("m", config.m().to_string()),
        ("mu", config.mu().to_string()),
    ])
}

/// Write the dataset CSV and its JSON sidecar.
pub fn write_dataset(csv: &Path, ds: &Dataset) -> Result<()> {
    let n = ds.config.n();
    let mut text = config_header(&ds.config);
    text.reserve(ds.cells.len() * 20);
    match ds.config.d() {
        1 => {
            for v in &ds.cells {
                writeln!(text, "{v}").expect("string write");
            }
        }
        _ => {
            for row in ds.cells.chunks(n) {
                let mut first = true;
                for v in row {
                    if !first {
                        text.push(',');
                    }
                    write!(text, "{v}").expect("string write");
                    first = false;
                }
                text.push('\n');
            }
        }
    }
    fs::write(csv, text)?;
    let sidecar = Sidecar {
        config: &ds.config,
        truth: &ds.truth,
    };
    let json = serde_json::to_string_pretty(&sidecar).expect("config serializes");
    fs::write(sidecar_path(csv), json + "\n")?;
    Ok(())
}

/// Read a dataset CSV back into a grid; the shape of the first line decides
/// the dimension.
pub fn read_dataset(csv: &Path) -> Result<GridData> {
    let text = fs::read_to_string(csv)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|tok| {
                tok.trim().parse::<f64>().map_err(|_| {
                    Error::parse(format!(
                        "{}:{}: '{tok}' is not a number",
                        csv.display(),
                        lineno + 1
                    ))
                })
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::parse(format!("{}: no data lines", csv.display())));
    }
    let width = rows[0].len();
    if let Some(bad) = rows.iter().position(|r| r.len() != width) {
        return Err(Error::parse(format!(
            "{}: line {} has {} columns, expected {width}",
            csv.display(),
            bad + 1,
            rows[bad].len()
        )));
    }
    if width == 1 {
        GridData::from_1d(rows.into_iter().map(|r| r[0]).collect())
    } else {
        if rows.len() != width {
            return Err(Error::parse(format!(
                "{}: {} rows of {width} columns is not a square grid",
                csv.display(),
                rows.len()
            )));
        }
        GridData::from_2d(rows.into_iter().flatten().collect(), width)
    }
}

/// `# key=value` header lines for reproducibility; every table writer
/// prepends these.
pub fn table_header(params: &[(&str, String)]) -> String {
    let mut out = format!("# blockscan {}\n", env!("CARGO_PKG_VERSION"));
    for (key, value) in params {
        writeln!(out, "# {key}={value}").expect("string write");
    }
    out
}

/// Write a critical-value table (CSV with reproducibility header).
pub fn write_critvals(path: &Path, rows: &[CritValue], params: &[(&str, String)]) -> Result<()> {
    let mut text = table_header(params);
    text.push_str("statistic,n,level,reps,critical_value\n");
    for cv in rows {
        writeln!(
            text,
            "{},{},{},{},{}",
            cv.statistic, cv.n, cv.level, cv.reps, cv.value
        )
        .expect("string write");
    }
    fs::write(path, text)?;
    Ok(())
}

/// Read a critical-value table written by `write_critvals`.
pub fn read_critvals(path: &Path) -> Result<Vec<CritValue>> {
    let text = fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("statistic,") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::parse(format!(
                "{}:{}: expected 5 fields, got {}",
                path.display(),
                lineno + 1,
                fields.len()
            )));
        }
        let bad = |what: &str| {
            Error::parse(format!(
                "{}:{}: bad {what} field",
                path.display(),
                lineno + 1
            ))
        };
        rows.push(CritValue {
            statistic: fields[0].to_string(),
            n: fields[1].parse().map_err(|_| bad("n"))?,
            level: fields[2].parse().map_err(|_| bad("level"))?,
            reps: fields[3].parse().map_err(|_| bad("reps"))?,
            value: fields[4].parse().map_err(|_| bad("critical_value"))?,
        });
    }
    if rows.is_empty() {
        return Err(Error::parse(format!(
            "{}: no critical values found",
            path.display()
        )));
    }
    Ok(rows)
}
