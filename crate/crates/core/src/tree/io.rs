use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::tree::{Attribute, AttributeKind, Cell, LabeledTable, Row, Schema};

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum ColumnSpec {
    Categorical(Vec<serde_json::Value>),
    Continuous { min: f64, max: f64, bins: usize },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemaFile {
    attributes: BTreeMap<String, ColumnSpec>,
    class: String,
}

fn value_text(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn column_kind(spec: &ColumnSpec) -> AttributeKind {
    match spec {
        ColumnSpec::Categorical(values) => {
            AttributeKind::Categorical(values.iter().map(value_text).collect())
        }
        ColumnSpec::Continuous { min, max, bins } => AttributeKind::Continuous {
            min: *min,
            max: *max,
            bins: *bins,
        },
    }
}

/// Rows kept from a CSV table.
#[derive(Clone, Debug)]
pub struct TableReport {
    pub table: LabeledTable,
    pub rows: usize,
}

/// Reads a CSV with a header row against a JSON schema.
///
/// The schema maps every column name to `{"categorical": [values]}` or
/// `{"continuous": {"min", "max", "bins"}}` and names the class column in
/// `"class"`. Attributes follow the CSV column order.
pub fn parse_table(
    csv_text: &str,
    schema_json: &str,
    csv_path: &Path,
    schema_path: &Path,
) -> Result<TableReport> {
    let spec: SchemaFile = serde_json::from_str(schema_json)
        .map_err(|e| Error::parse(schema_path, e.line(), e.to_string()))?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(csv_text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    for name in spec.attributes.keys() {
        if !header.contains(name) {
            return Err(Error::parse(
                schema_path,
                0,
                format!("column {name:?} is missing from the CSV header"),
            ));
        }
    }
    let mut attributes = Vec::new();
    let mut class = None;
    for (i, name) in header.iter().enumerate() {
        let column = spec.attributes.get(name).ok_or_else(|| {
            Error::parse(
                csv_path,
                1,
                format!("column {name:?} is not declared in the schema"),
            )
        })?;
        let attribute = Attribute {
            name: name.clone(),
            kind: column_kind(column),
        };
        if *name == spec.class {
            class = Some((i, attribute));
        } else {
            attributes.push((i, attribute));
        }
    }
    let (class_column, class_attribute) = class.ok_or_else(|| {
        Error::parse(
            schema_path,
            0,
            format!("class column {:?} is not in the CSV", spec.class),
        )
    })?;
    let schema = Arc::new(
        Schema::new(
            attributes.iter().map(|(_, a)| a.clone()).collect(),
            class_attribute.clone(),
        )
        .map_err(|e| Error::parse(schema_path, 0, e.to_string()))?,
    );
    let mut rows = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let line = k + 2;
        let record = record.map_err(|e| Error::parse(csv_path, line, e.to_string()))?;
        let cell = |column: usize, attribute: &Attribute| -> Result<Cell> {
            let raw = record.get(column).unwrap_or("");
            match &attribute.kind {
                AttributeKind::Categorical(values) => {
                    values.iter().position(|v| v == raw).map(Cell::Category)
                }
                AttributeKind::Continuous { min, max, .. } => raw
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v >= min && v <= max)
                    .map(Cell::Number),
            }
            .ok_or_else(|| {
                Error::parse(
                    csv_path,
                    line,
                    format!(
                        "value {raw:?} outside the domain of attribute {}",
                        attribute.name
                    ),
                )
            })
        };
        let cells = attributes
            .iter()
            .map(|(c, a)| cell(*c, a))
            .collect::<Result<Vec<_>>>()?;
        let label = cell(class_column, &class_attribute)?
            .category()
            .expect("categorical class");
        rows.push(Row::new(cells, label));
    }
    let count = rows.len();
    Ok(TableReport {
        table: LabeledTable::new(schema, rows)?,
        rows: count,
    })
}

pub fn load_table(csv_path: &Path, schema_path: &Path) -> Result<TableReport> {
    let csv_text = std::fs::read_to_string(csv_path).map_err(|e| Error::io(csv_path, e))?;
    let schema_json =
        std::fs::read_to_string(schema_path).map_err(|e| Error::io(schema_path, e))?;
    parse_table(&csv_text, &schema_json, csv_path, schema_path)
}
