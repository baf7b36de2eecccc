//! Tabular numeric input: CSV ingestion, validation and column scaling.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Which transform produced a dataset's values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scaling {
    Raw,
    Standardized,
    Minmax,
}

impl fmt::Display for Scaling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Scaling::Raw => "raw",
            Scaling::Standardized => "standardized",
            Scaling::Minmax => "minmax",
        })
    }
}

/// Immutable numeric feature matrix with named columns.
///
/// Every cell is finite, column names are unique and nonempty, there are at
/// least two rows and one column, and `key_features` names a subset of the
/// columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<String>,
    values: Matrix,
    key_features: Vec<String>,
    scaling: Scaling,
}

impl Dataset {
    pub fn new(columns: Vec<String>, values: Matrix) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::Schema("dataset has no columns".into()));
        }
        if values.cols() != columns.len() {
            return Err(Error::Schema(format!(
                "{} column names for {} value columns",
                columns.len(),
                values.cols()
            )));
        }
        check_column_names(&columns)?;
        if values.rows() < 2 {
            return Err(Error::InsufficientData { rows: values.rows() });
        }
        if let Some(pos) = values.as_slice().iter().position(|v| !v.is_finite()) {
            let (i, j) = (pos / values.cols(), pos % values.cols());
            return Err(Error::Domain(format!(
                "non-finite value at row index {i}, column {}",
                columns[j]
            )));
        }
        Ok(Self {
            columns,
            values,
            key_features: Vec::new(),
            scaling: Scaling::Raw,
        })
    }

    /// Designates the charted feature subset. Names are stored in dataset
    /// column order regardless of the order given.
    pub fn with_key_features<S: AsRef<str>>(mut self, names: &[S]) -> Result<Self> {
        let mut seen = HashSet::new();
        for n in names {
            let n = n.as_ref();
            if self.column_index(n).is_none() {
                return Err(Error::Config(format!("key feature {n:?} is not a dataset column")));
            }
            if !seen.insert(n.to_string()) {
                return Err(Error::Config(format!("key feature {n:?} listed twice")));
            }
        }
        self.key_features = self
            .columns
            .iter()
            .filter(|c| seen.contains(c.as_str()))
            .cloned()
            .collect();
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.values.rows()
    }

    pub fn cols(&self) -> usize {
        self.values.cols()
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn key_features(&self) -> &[String] {
        &self.key_features
    }

    pub fn scaling(&self) -> Scaling {
        self.scaling
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// z-scores every column using the population standard deviation
    /// (divisor n). Constant columns become all zeros.
    pub fn standardize(&self) -> Dataset {
        let mut values = self.values.clone();
        values.map_columns(|col| {
            if is_constant(col) {
                col.fill(0.0);
                return;
            }
            let (mean, std) = population_mean_std(col);
            for v in col.iter_mut() {
                *v = (*v - mean) / std;
            }
        });
        self.derived(values, Scaling::Standardized)
    }

    /// Maps every column affinely onto [0, 1]. Constant columns become 0.5.
    pub fn minmax_scale(&self) -> Dataset {
        let mut values = self.values.clone();
        values.map_columns(|col| {
            if is_constant(col) {
                col.fill(0.5);
                return;
            }
            let (lo, hi) = col
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
            let span = hi - lo;
            for v in col.iter_mut() {
                *v = ((*v - lo) / span).clamp(0.0, 1.0);
            }
        });
        self.derived(values, Scaling::Minmax)
    }

    fn derived(&self, values: Matrix, scaling: Scaling) -> Dataset {
        Dataset {
            columns: self.columns.clone(),
            values,
            key_features: self.key_features.clone(),
            scaling,
        }
    }
}

/// Result of [`load_csv`].
#[derive(Debug, Clone)]
pub struct LoadedCsv {
    pub dataset: Dataset,
    /// Data rows removed because of empty or unparseable cells.
    pub dropped_rows: usize,
    /// Data rows in the file, excluding the header.
    pub source_rows: usize,
}

/// Reads a comma-separated file whose first record is a header.
///
/// With `drop_na` unset, the first empty or unparseable cell aborts the load.
/// With it set, such rows are skipped and counted.
pub fn load_csv(path: impl AsRef<Path>, drop_na: bool) -> Result<LoadedCsv> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, drop_na)
}

/// [`load_csv`] over any reader.
pub fn read_csv<R: std::io::Read>(reader: R, drop_na: bool) -> Result<LoadedCsv> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let columns: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if columns.is_empty() || (columns.len() == 1 && columns[0].is_empty()) {
        return Err(Error::Schema("missing header row".into()));
    }
    check_column_names(&columns)?;

    let mut data = Vec::new();
    let mut kept = 0usize;
    let mut source_rows = 0usize;
    let mut dropped_rows = 0usize;
    let mut row_buf = Vec::with_capacity(columns.len());

    for record in rdr.records() {
        let record = record?;
        source_rows += 1;
        let line = record.position().map_or(source_rows as u64 + 1, |p| p.line());
        row_buf.clear();
        let mut bad = None;
        for (j, name) in columns.iter().enumerate() {
            let cell = record.get(j).unwrap_or("");
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => row_buf.push(v),
                _ => {
                    bad = Some((name, cell));
                    break;
                }
            }
        }
        if bad.is_none() && record.len() > columns.len() {
            return Err(Error::Schema(format!(
                "line {line} has {} fields, header has {}",
                record.len(),
                columns.len()
            )));
        }
        match bad {
            None => {
                data.extend_from_slice(&row_buf);
                kept += 1;
            }
            Some(_) if drop_na => dropped_rows += 1,
            Some((name, cell)) => {
                return Err(Error::Ingestion {
                    row: line,
                    column: name.clone(),
                    value: cell.to_string(),
                })
            }
        }
    }

    if kept < 2 {
        return Err(Error::InsufficientData { rows: kept });
    }
    let dataset = Dataset::new(columns.clone(), Matrix::from_vec(kept, columns.len(), data))?;
    Ok(LoadedCsv {
        dataset,
        dropped_rows,
        source_rows,
    })
}

fn check_column_names(columns: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for c in columns {
        if c.is_empty() {
            return Err(Error::Schema("empty column name".into()));
        }
        if !seen.insert(c.as_str()) {
            return Err(Error::Schema(format!("duplicate column name {c:?}")));
        }
    }
    Ok(())
}

fn is_constant(col: &[f64]) -> bool {
    col.windows(2).all(|w| w[0] == w[1])
}

/// Mean and population standard deviation (divisor n).
pub(crate) fn population_mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}
