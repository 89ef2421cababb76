//! Quarterly level CSVs.
//!
//! Layout: a header row whose first column is `period`, then one row per
//! quarter (`YYYYQn`, consecutive and increasing) with a numeric level per
//! series. Empty cells are missing values; anything else that is not a
//! finite number is rejected.

use std::io::Read;
use std::path::Path;

use gdpcast_core::preprocess::{Period, RawColumn, RawTable};

use crate::error::{CliError, Result};

pub fn ingest_csv(path: &Path) -> Result<RawTable> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    read_table(file, path)
}

/// Parses from any reader; `path` only labels errors.
pub fn read_table(input: impl Read, path: &Path) -> Result<RawTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let csv_error = |e: csv::Error| CliError::Csv {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let at = |row: usize, column: usize, message: String| CliError::Ingest {
        path: path.to_path_buf(),
        row,
        column,
        message,
    };

    let header = reader.headers().map_err(csv_error)?.clone();
    if header.get(0) != Some("period") {
        return Err(at(1, 1, "first column must be named `period`".into()));
    }
    let names: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    for (i, name) in names.iter().enumerate() {
        if name.is_empty() {
            return Err(at(1, i + 2, "empty series name".into()));
        }
        if names[..i].contains(name) {
            return Err(at(1, i + 2, format!("duplicate series `{name}`")));
        }
    }

    let mut periods: Vec<Period> = Vec::new();
    let mut columns: Vec<Vec<Option<f64>>> = vec![Vec::new(); names.len()];
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        let label = record.get(0).unwrap_or_default();
        let period: Period = label
            .parse()
            .map_err(|_| at(row, 1, format!("malformed period `{label}`, expected YYYYQn")))?;
        if let Some(prev) = periods.last() {
            if period != prev.next() {
                let message = if period > prev.next() {
                    format!("quarter sequence jumps from {prev} to {period}; {} is missing", prev.next())
                } else {
                    format!("period {period} does not follow {prev}")
                };
                return Err(at(row, 1, message));
            }
        }
        periods.push(period);
        for (j, column) in columns.iter_mut().enumerate() {
            let cell = record.get(j + 1).unwrap_or_default();
            let value = if cell.is_empty() {
                None
            } else {
                match cell.parse::<f64>() {
                    Ok(v) if v.is_finite() => Some(v),
                    _ => return Err(at(row, j + 2, format!("`{cell}` is not a finite number"))),
                }
            };
            column.push(value);
        }
    }
    if periods.is_empty() {
        return Err(CliError::Csv {
            path: path.to_path_buf(),
            message: "no data rows".into(),
        });
    }
    Ok(RawTable {
        periods,
        columns: names
            .into_iter()
            .zip(columns)
            .map(|(name, values)| RawColumn { name, values })
            .collect(),
    })
}

/// Writes a table in the layout [`read_table`] accepts. Values use the
/// shortest representation that parses back to the same `f64`.
pub fn write_table(table: &RawTable, out: impl std::io::Write) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["period".to_string()];
    header.extend(table.columns.iter().map(|c| c.name.clone()));
    w.write_record(&header)?;
    for (i, period) in table.periods.iter().enumerate() {
        let mut row = vec![period.to_string()];
        row.extend(
            table
                .columns
                .iter()
                .map(|c| c.values[i].map(|v| v.to_string()).unwrap_or_default()),
        );
        w.write_record(&row)?;
    }
    w.flush()
}
