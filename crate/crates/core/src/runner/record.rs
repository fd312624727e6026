use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Header of every experiment CSV.
pub const CSV_HEADER: [&str; 7] = [
    "N",
    "j_lo",
    "j_hi",
    "fitted_limit",
    "residual",
    "analytic",
    "rel_gap",
];

/// JSON numbers cannot hold `inf` or `NaN`; those are written as the
/// strings `"inf"`, `"-inf"` and `"nan"`.
mod float {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("not a number: {other}"))),
            },
        }
    }
}

/// One cutoff of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub j_lo: usize,
    pub j_hi: usize,
    /// Fitted limit of `s_j j^p`; for `linfty_bound` the window sup, for
    /// `cut_decay` the decay exponent.
    #[serde(with = "float")]
    pub fitted_limit: f64,
    #[serde(with = "float")]
    pub residual: f64,
    pub analytic: Option<f64>,
    /// `|fitted - analytic| / analytic`; for `linfty_bound` the relative
    /// change from the previous cutoff, for `cut_decay` the margin `q - t`.
    pub rel_gap: Option<f64>,
}

/// Outcome of one experiment over all its cutoffs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub name: String,
    pub kind: String,
    pub config_digest: String,
    pub rows: Vec<ResultRow>,
    pub analytic: Option<f64>,
    pub quadrature_error: Option<f64>,
    pub tolerance: Option<f64>,
    pub passed: bool,
    pub diagnostic: Option<String>,
    pub seed: Option<u64>,
    pub wall_clock_s: f64,
    pub version: String,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Config(format!("{}: {e}", path.display()))
}

/// Shortest round-trip decimal, switching to exponent form for very large or
/// small magnitudes; `inf`, `-inf` and `NaN` otherwise.
fn float_cell(x: f64) -> String {
    format!("{x:?}")
}

fn cell(x: Option<f64>) -> String {
    x.map(float_cell).unwrap_or_default()
}

/// CSV with [`CSV_HEADER`]; absent values are empty cells.
pub fn write_csv(record: &ResultRecord, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    w.write_record(CSV_HEADER).map_err(|e| io_err(path, e))?;
    for r in &record.rows {
        w.write_record([
            r.n.to_string(),
            r.j_lo.to_string(),
            r.j_hi.to_string(),
            float_cell(r.fitted_limit),
            float_cell(r.residual),
            cell(r.analytic),
            cell(r.rel_gap),
        ])
        .map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Appends one JSON object per record, one per line.
pub fn append_jsonl(records: &[ResultRecord], path: &Path) -> Result<()> {
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| io_err(path, e))?;
    for r in records {
        let line = serde_json::to_string(r).map_err(|e| io_err(path, e))?;
        writeln!(f, "{line}").map_err(|e| io_err(path, e))?;
    }
    Ok(())
}

pub fn read_jsonl(path: &Path) -> Result<Vec<ResultRecord>> {
    let f = File::open(path).map_err(|e| io_err(path, e))?;
    BufReader::new(f)
        .lines()
        .enumerate()
        .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()))
        .map(|(i, line)| {
            let line = line.map_err(|e| io_err(path, e))?;
            serde_json::from_str(&line).map_err(|e| io_err(path, format!("line {}: {e}", i + 1)))
        })
        .collect()
}
