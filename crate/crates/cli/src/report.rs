//! Report rows and their CSV and JSON encodings.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use irrseq::search::ElementRecord;
use irrseq::Semigroup;

/// One analyzed element. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub element: String,
    pub h_class_size: usize,
    pub psi: usize,
    /// Invariant factors joined by `x`, or `1` for the trivial group.
    pub gamma_factors: String,
    /// `1/2` or `1`.
    pub epsilon: String,
    pub lower: usize,
    pub upper: usize,
    pub exact: usize,
    /// Space-separated element labels.
    pub witness: String,
    pub status: String,
}

impl ReportRow {
    pub fn new(s: &Semigroup, record: &ElementRecord) -> Self {
        let b = &record.bounds;
        let gamma_factors = if b.gamma_factors.is_empty() {
            "1".to_string()
        } else {
            b.gamma_factors
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join("x")
        };
        ReportRow {
            element: s.label(b.element),
            h_class_size: b.h_class_size,
            psi: b.psi,
            gamma_factors,
            epsilon: b.epsilon.to_string(),
            lower: b.lower,
            upper: b.upper,
            exact: record.exact,
            witness: s.format_sequence(&record.witness),
            status: record.status.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn write_rows<W: Write>(rows: &[ReportRow], format: Format, out: W) -> Result<(), String> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row).map_err(|e| e.to_string())?;
            }
            w.flush().map_err(|e| e.to_string())
        }
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, rows).map_err(|e| e.to_string())?;
            writeln!(out).map_err(|e| e.to_string())
        }
    }
}

pub fn read_rows<R: Read>(format: Format, input: R) -> Result<Vec<ReportRow>, String> {
    match format {
        Format::Csv => csv::Reader::from_reader(input)
            .deserialize()
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string()),
        Format::Json => serde_json::from_reader(input).map_err(|e| e.to_string()),
    }
}
