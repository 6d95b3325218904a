//! CSV and JSON output of result rows.
//!
//! The CSV has one line per checked bound (one line with empty bound
//! columns for a row without bounds) and omits the wall-clock time, so equal
//! configurations produce byte-identical files. Floats carry 17 significant
//! digits.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

use super::config::Format;
use super::experiment::ResultRow;

pub const CSV_COLUMNS: [&str; 14] = [
    "config_hash",
    "learner",
    "mode",
    "T",
    "d",
    "seed",
    "regret",
    "forward_regret",
    "stability",
    "bound_name",
    "bound_theoretical",
    "bound_empirical",
    "slack",
    "pass",
];

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Serde(format!("{other:?}")),
    }
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS).map_err(csv_err)?;
    for r in rows {
        let head = [
            r.config_hash.clone(),
            r.learner.clone(),
            r.mode.clone(),
            r.horizon.to_string(),
            r.d.to_string(),
            r.seed.to_string(),
            float(r.regret),
            float(r.forward_regret),
            float(r.stability),
        ];
        if r.bounds.is_empty() {
            let blank = [String::new(), String::new(), String::new(), String::new(), String::new()];
            w.write_record(head.iter().chain(blank.iter())).map_err(csv_err)?;
        }
        for b in &r.bounds {
            let tail = [
                b.bound_name.clone(),
                float(b.theoretical_value),
                float(b.empirical_value),
                float(b.slack_applied),
                b.pass.to_string(),
            ];
            w.write_record(head.iter().chain(tail.iter())).map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(rows: &[ResultRow], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, rows).map_err(|e| Error::Serde(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

pub fn read_json(text: &str) -> Result<Vec<ResultRow>> {
    serde_json::from_str(text).map_err(|e| Error::Serde(e.to_string()))
}

/// Writes rows to `path`, or to stdout when `path` is `None`.
pub fn emit(rows: &[ResultRow], format: Format, path: Option<&Path>) -> Result<()> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    };
    match format {
        Format::Csv => write_csv(rows, sink),
        Format::Json => write_json(rows, sink),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::BoundVerdict;

    fn row() -> ResultRow {
        ResultRow {
            config_hash: "abc".into(),
            learner: "ftl".into(),
            mode: "exact".into(),
            horizon: 16,
            d: 2,
            seed: 7,
            regret: 0.1 + 0.2,
            forward_regret: -1.0 / 3.0,
            stability: std::f64::consts::PI,
            bounds: vec![BoundVerdict::new("ftl_regret", 10.0, 0.3, 1e-12)],
            wall_clock_s: 0.01,
        }
    }

    #[test]
    fn empty_rows_give_a_header_only_csv() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{}\n", CSV_COLUMNS.join(",")));
    }

    #[test]
    fn json_round_trip_is_bit_identical() {
        let mut buf = Vec::new();
        write_json(&[row()], &mut buf).unwrap();
        let back = read_json(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].regret.to_bits(), row().regret.to_bits());
        assert_eq!(back[0].forward_regret.to_bits(), row().forward_regret.to_bits());
        assert_eq!(back[0], row());
    }

    #[test]
    fn csv_floats_carry_seventeen_digits() {
        let mut buf = Vec::new();
        write_csv(&[row()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let line = text.lines().nth(1).unwrap();
        let regret: &str = line.split(',').nth(6).unwrap();
        assert_eq!(regret, "3.0000000000000004e-1");
        assert_eq!(regret.parse::<f64>().unwrap().to_bits(), (0.1f64 + 0.2).to_bits());
    }
}
