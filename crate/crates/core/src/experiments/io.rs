//! CSV and JSON output.
//!
//! CSV files have one header row with the record's field names in declared
//! order; floats carry 12 significant digits in scientific notation. JSON
//! files are the serde serialization of the same types.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use super::{CapacityRecord, SweepRecord, Table1Row};
use crate::error::Result;

/// A flat record with a fixed column layout.
pub trait CsvRow {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

/// `x` with 12 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

impl CsvRow for SweepRecord {
    const HEADER: &'static [&'static str] = &[
        "d",
        "trial",
        "seed",
        "purity",
        "kappa",
        "outcome",
        "fidelity_standard",
        "fidelity_hw",
        "fidelity_matched",
        "linear_fidelity_hw",
        "spectral_error_hw",
        "spectral_error_matched",
        "analytic_hw_fidelity",
        "outcome_probability",
        "born_collision",
        "ginibre_rank",
    ];

    fn fields(&self) -> Vec<String> {
        vec![
            self.d.to_string(),
            self.trial.to_string(),
            self.seed.to_string(),
            fmt_float(self.purity),
            fmt_float(self.kappa),
            self.outcome.to_string(),
            fmt_float(self.fidelity_standard),
            fmt_float(self.fidelity_hw),
            fmt_float(self.fidelity_matched),
            fmt_float(self.linear_fidelity_hw),
            fmt_float(self.spectral_error_hw),
            fmt_float(self.spectral_error_matched),
            fmt_float(self.analytic_hw_fidelity),
            fmt_float(self.outcome_probability),
            fmt_float(self.born_collision),
            self.ginibre_rank.to_string(),
        ]
    }
}

impl CsvRow for CapacityRecord {
    const HEADER: &'static [&'static str] =
        &["d", "index", "kind", "purity", "kappa", "von_neumann_entropy", "renyi2_entropy"];

    fn fields(&self) -> Vec<String> {
        vec![
            self.d.to_string(),
            self.index.to_string(),
            self.kind.as_str().to_string(),
            fmt_float(self.purity),
            fmt_float(self.kappa),
            fmt_float(self.von_neumann_entropy),
            fmt_float(self.renyi2_entropy),
        ]
    }
}

impl CsvRow for Table1Row {
    const HEADER: &'static [&'static str] = &[
        "d",
        "standard",
        "standard_reference",
        "standard_discrepancy",
        "standard_within_tolerance",
        "standard_analytic",
        "standard_standard_error",
        "hw",
        "hw_reference",
        "hw_discrepancy",
        "matched",
        "matched_reference",
        "matched_discrepancy",
        "ratio",
        "ratio_reference",
    ];

    fn fields(&self) -> Vec<String> {
        vec![
            self.d.to_string(),
            fmt_float(self.standard),
            fmt_float(self.standard_reference),
            fmt_float(self.standard_discrepancy),
            self.standard_within_tolerance.to_string(),
            fmt_float(self.standard_analytic),
            fmt_float(self.standard_standard_error),
            fmt_float(self.hw),
            fmt_float(self.hw_reference),
            fmt_float(self.hw_discrepancy),
            fmt_float(self.matched),
            fmt_float(self.matched_reference),
            fmt_float(self.matched_discrepancy),
            fmt_float(self.ratio),
            fmt_float(self.ratio_reference),
        ]
    }
}

pub fn write_csv_to<W: Write, T: CsvRow>(writer: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(T::HEADER)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string<T: CsvRow>(rows: &[T]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv_to(&mut buf, rows)?;
    Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
}

pub fn write_csv<T: CsvRow>(path: &Path, rows: &[T]) -> Result<()> {
    write_csv_to(BufWriter::new(File::create(path)?), rows)
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::StateKind;

    #[test]
    fn float_format() {
        assert_eq!(fmt_float(0.514), "5.14000000000e-1");
        assert_eq!(fmt_float(1.0 / 3.0).parse::<f64>().unwrap(), 3.33333333333e-1);
        assert_eq!(fmt_float(0.0), "0.00000000000e0");
    }

    #[test]
    fn capacity_csv_layout() {
        let rec = CapacityRecord {
            d: 2,
            index: 0,
            kind: StateKind::Pure,
            purity: 1.0,
            kappa: 2.0,
            von_neumann_entropy: 0.0,
            renyi2_entropy: 0.0,
        };
        let s = to_csv_string(&[rec]).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next().unwrap(), "d,index,kind,purity,kappa,von_neumann_entropy,renyi2_entropy");
        assert_eq!(lines.next().unwrap(), "2,0,pure,1.00000000000e0,2.00000000000e0,0.00000000000e0,0.00000000000e0");
        assert!(lines.next().is_none());
    }

    #[test]
    fn sweep_header_matches_serde_field_order() {
        let rec = SweepRecord {
            d: 2,
            trial: 0,
            seed: 1,
            purity: 0.7,
            kappa: 1.0 + 1.0 / 0.7,
            outcome: 1,
            fidelity_standard: 0.5,
            fidelity_hw: 0.9,
            fidelity_matched: 0.8,
            linear_fidelity_hw: 0.5,
            spectral_error_hw: 0.1,
            spectral_error_matched: 0.2,
            analytic_hw_fidelity: 0.9,
            outcome_probability: 0.5,
            born_collision: 0.55,
            ginibre_rank: 2,
        };
        let json = serde_json::to_string(&rec).unwrap();
        let mut last = 0;
        for name in SweepRecord::HEADER {
            let pos = json.find(&format!("\"{name}\":")).unwrap();
            assert!(pos >= last, "{name} out of order");
            last = pos;
        }
        assert_eq!(rec.fields().len(), SweepRecord::HEADER.len());
    }
}
