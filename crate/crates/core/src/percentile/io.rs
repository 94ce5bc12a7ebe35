use std::path::Path;

use crate::error::{Error, Result};
use crate::percentile::NumericVector;

/// Parses one value per line, or a single-column CSV with a header row.
///
/// Blank lines are skipped; a non-numeric first line is taken as the header.
pub fn parse_numeric_values(text: &str, path: &Path, lambda: f64) -> Result<NumericVector> {
    let mut values = Vec::new();
    let mut first = true;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let line_no = i + 1;
        if line.contains(',') {
            return Err(Error::parse(path, line_no, "expected a single column"));
        }
        match line.parse::<f64>() {
            Ok(v) if v.is_finite() && (0.0..=lambda).contains(&v) => values.push(v),
            Ok(v) => {
                return Err(Error::parse(
                    path,
                    line_no,
                    format!("value {v} is outside [0, {lambda}]"),
                ));
            }
            Err(_) if first => {}
            Err(_) => {
                return Err(Error::parse(
                    path,
                    line_no,
                    format!("not a number: {line:?}"),
                ))
            }
        }
        first = false;
    }
    if values.is_empty() {
        return Err(Error::parse(path, 0, "no values"));
    }
    NumericVector::new(&values, lambda)
}

pub fn load_numeric_vector(path: &Path, lambda: f64) -> Result<NumericVector> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_numeric_values(&text, path, lambda)
}
