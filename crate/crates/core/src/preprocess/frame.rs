use std::collections::BTreeMap;

use serde::Serialize;

use super::hampel::{hampel_filter, HampelConfig};
use super::period::Period;
use super::transform::{apply_transform, TransformSpec};
use crate::error::{Error, Result};
use crate::numkit::Matrix;

/// One named column of raw levels; `None` marks an empty cell.
#[derive(Debug, Clone, PartialEq)]
pub struct RawColumn {
    pub name: String,
    pub values: Vec<Option<f64>>,
}

/// Level data on a consecutive quarterly calendar.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub periods: Vec<Period>,
    pub columns: Vec<RawColumn>,
}

impl RawTable {
    pub fn column(&self, name: &str) -> Option<&RawColumn> {
        self.columns.iter().find(|c| c.name == name)
    }
}

/// Aligned model-ready data: one response and `q` predictors over `n` quarters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesFrame {
    pub periods: Vec<Period>,
    pub response_name: String,
    pub response: Vec<f64>,
    pub predictor_names: Vec<String>,
    pub predictors: Matrix,
    /// Periods clamped by the outlier filter, per column.
    pub outliers: BTreeMap<String, Vec<Period>>,
}

impl SeriesFrame {
    pub fn new(
        periods: Vec<Period>,
        response_name: impl Into<String>,
        response: Vec<f64>,
        predictor_names: Vec<String>,
        predictors: Matrix,
    ) -> Result<Self> {
        let n = periods.len();
        if response.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: response.len(),
            });
        }
        if predictors.nrows() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: predictors.nrows(),
            });
        }
        if predictor_names.len() != predictors.ncols() {
            return Err(Error::LengthMismatch {
                expected: predictors.ncols(),
                found: predictor_names.len(),
            });
        }
        if let Some(index) = response.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        if periods.windows(2).any(|w| w[1] != w[0].next()) {
            return Err(Error::Domain("frame periods are not consecutive quarters".into()));
        }
        Ok(Self {
            periods,
            response_name: response_name.into(),
            response,
            predictor_names,
            predictors,
            outliers: BTreeMap::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.periods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periods.is_empty()
    }

    pub fn n_predictors(&self) -> usize {
        self.predictors.ncols()
    }
}

struct Prepared {
    name: String,
    start: Period,
    values: Vec<f64>,
    flags: Vec<bool>,
}

fn observed_span(column: &RawColumn, periods: &[Period]) -> Result<(usize, usize)> {
    let first = column.values.iter().position(Option::is_some);
    let last = column.values.iter().rposition(Option::is_some);
    let (Some(first), Some(last)) = (first, last) else {
        return Err(Error::Gap {
            series: column.name.clone(),
            period: periods
                .first()
                .map_or_else(|| "(empty table)".to_string(), Period::to_string),
        });
    };
    if let Some(i) = (first..=last).find(|&i| column.values[i].is_none()) {
        return Err(Error::Gap {
            series: column.name.clone(),
            period: periods[i].to_string(),
        });
    }
    Ok((first, last))
}

/// Transforms, filters and aligns the columns named in `specs`.
///
/// Every selected series must be observed over exactly the response's span;
/// differencing then shortens some columns by a quarter and the frame keeps
/// the periods common to all of them. The outlier filter runs on each
/// transformed column before alignment. Columns without a spec are ignored.
pub fn build_frame(
    raw: &RawTable,
    specs: &BTreeMap<String, TransformSpec>,
    response: &str,
    hampel: Option<&HampelConfig>,
) -> Result<SeriesFrame> {
    if raw.columns.iter().any(|c| c.values.len() != raw.periods.len()) {
        return Err(Error::Domain("raw column lengths differ from the calendar".into()));
    }
    if !specs.contains_key(response) {
        return Err(Error::Config(format!("no transform given for response `{response}`")));
    }
    for name in specs.keys() {
        if raw.column(name).is_none() {
            return Err(Error::Config(format!("series `{name}` not found in the data")));
        }
    }
    if let Some(cfg) = hampel {
        cfg.validate()?;
    }

    // Response first, then predictors in table order.
    let mut selected: Vec<&RawColumn> = vec![raw.column(response).expect("checked above")];
    selected.extend(
        raw.columns
            .iter()
            .filter(|c| c.name != response && specs.contains_key(&c.name)),
    );

    let reference = observed_span(selected[0], &raw.periods)?;
    let mut prepared = Vec::with_capacity(selected.len());
    for column in &selected {
        let span = observed_span(column, &raw.periods)?;
        if span != reference {
            return Err(Error::Alignment {
                series: column.name.clone(),
                reference: response.to_string(),
                detail: format!(
                    "observed {}-{}, expected {}-{}",
                    raw.periods[span.0], raw.periods[span.1],
                    raw.periods[reference.0], raw.periods[reference.1],
                ),
            });
        }
        let spec = &specs[&column.name];
        let levels: Vec<f64> = column.values[span.0..=span.1]
            .iter()
            .map(|v| v.expect("span has no gaps"))
            .collect();
        let values = apply_transform(&levels, spec).map_err(|e| match e {
            Error::NonPositiveLevel { index, value } => Error::Domain(format!(
                "series `{}` has non-positive level {value} at {} under the log transform",
                column.name,
                raw.periods[span.0 + index]
            )),
            other => other,
        })?;
        let (values, flags) = match hampel {
            Some(cfg) => {
                let f = hampel_filter(&values, cfg)?;
                (f.values, f.flags)
            }
            None => {
                let flags = vec![false; values.len()];
                (values, flags)
            }
        };
        prepared.push(Prepared {
            name: column.name.clone(),
            start: raw.periods[span.0 + spec.lag()],
            values,
            flags,
        });
    }

    let start = prepared.iter().map(|p| p.start).max().expect("response present");
    let end = raw.periods[reference.1];
    if start > end {
        return Err(Error::Domain("no common periods after transformation".into()));
    }
    let n = (end.ordinal() - start.ordinal() + 1) as usize;
    let periods = start.range(n);

    let mut outliers = BTreeMap::new();
    let mut trimmed: Vec<Vec<f64>> = Vec::with_capacity(prepared.len());
    for p in &prepared {
        let skip = (start.ordinal() - p.start.ordinal()) as usize;
        trimmed.push(p.values[skip..skip + n].to_vec());
        let hits: Vec<Period> = p.flags[skip..skip + n]
            .iter()
            .zip(&periods)
            .filter_map(|(&f, &period)| f.then_some(period))
            .collect();
        if !hits.is_empty() {
            outliers.insert(p.name.clone(), hits);
        }
    }

    let response_values = trimmed.remove(0);
    let names: Vec<String> = prepared[1..].iter().map(|p| p.name.clone()).collect();
    let predictors = Matrix::from_columns(n, &trimmed)?;
    let mut frame = SeriesFrame::new(periods, response, response_values, names, predictors)?;
    frame.outliers = outliers;
    Ok(frame)
}
