//! Reading vectors and grids from CSV or JSON files.
//!
//! A vector file is a JSON array of numbers, a single comma-separated CSV
//! line, or one number per line. A grid file is a single CSV column (1-D) or a
//! CSV table whose rows are grid rows (2-D), or the JSON equivalents (a flat
//! array or an array of equally long arrays). All values must be finite.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Values laid out in rows; a 1-D grid has a single column.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }
}

fn parse_value(text: &str, line: usize) -> Result<f64> {
    let t = text.trim();
    let v: f64 = t
        .parse()
        .map_err(|_| Error::Data(format!("line {line}: `{t}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::Data(format!("line {line}: `{t}` is not finite")));
    }
    Ok(v)
}

fn looks_like_json(path: &Path, content: &str) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
        || content.trim_start().starts_with('[')
}

fn parse_json(content: &str) -> Result<Table> {
    let value: serde_json::Value =
        serde_json::from_str(content).map_err(|e| Error::Data(format!("invalid JSON: {e}")))?;
    let items = value
        .as_array()
        .ok_or_else(|| Error::Data("expected a JSON array".into()))?;
    let number = |v: &serde_json::Value| -> Result<f64> {
        v.as_f64()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::Data(format!("`{v}` is not a finite number")))
    };
    if items.iter().all(|v| v.is_array()) && !items.is_empty() {
        let rows = items
            .iter()
            .map(|row| {
                row.as_array()
                    .unwrap()
                    .iter()
                    .map(number)
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(Table { rows });
    }
    let rows = items
        .iter()
        .map(|v| number(v).map(|x| vec![x]))
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { rows })
}

fn parse_csv(content: &str) -> Result<Table> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(content.as_bytes());
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Data(format!("invalid CSV: {e}")))?;
        let fields: Vec<&str> = record.iter().filter(|f| !f.is_empty()).collect();
        if fields.is_empty() {
            continue;
        }
        rows.push(
            fields
                .iter()
                .map(|f| parse_value(f, i + 1))
                .collect::<Result<Vec<f64>>>()?,
        );
    }
    Ok(Table { rows })
}

/// Parses file contents as a table of finite numbers.
pub fn parse_table(path: &Path, content: &str) -> Result<Table> {
    let table = if looks_like_json(path, content) {
        parse_json(content)?
    } else {
        parse_csv(content)?
    };
    if table.rows.is_empty() {
        return Err(Error::Data(format!(
            "{} contains no values",
            path.display()
        )));
    }
    let width = table.n_cols();
    if table.rows.iter().any(|r| r.len() != width) {
        return Err(Error::Data(format!(
            "{}: rows have different lengths",
            path.display()
        )));
    }
    Ok(table)
}

pub fn read_table(path: &Path) -> Result<Table> {
    let content = fs::read_to_string(path)
        .map_err(|e| Error::Data(format!("cannot read {}: {e}", path.display())))?;
    parse_table(path, &content)
}

/// Flattens a single row or a single column into a vector.
pub fn table_to_vector(table: Table) -> Result<Vec<f64>> {
    if table.n_rows() == 1 {
        Ok(table.rows.into_iter().next().unwrap())
    } else if table.n_cols() == 1 {
        Ok(table.rows.into_iter().map(|r| r[0]).collect())
    } else {
        Err(Error::Data(format!(
            "expected a vector, found a {}x{} table",
            table.n_rows(),
            table.n_cols()
        )))
    }
}

pub fn read_vector(path: &Path) -> Result<Vec<f64>> {
    table_to_vector(read_table(path)?)
}
