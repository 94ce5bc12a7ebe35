use std::cmp::Ordering;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum AttributeKind {
    /// A finite, ordered value set.
    Categorical(Vec<String>),
    /// Values in `[min, max]`, to be cut into `bins` equal-width bins.
    Continuous { min: f64, max: f64, bins: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Attribute {
    pub name: String,
    pub kind: AttributeKind,
}

impl Attribute {
    pub fn categorical(name: impl Into<String>, values: &[&str]) -> Self {
        Self {
            name: name.into(),
            kind: AttributeKind::Categorical(values.iter().map(|v| v.to_string()).collect()),
        }
    }

    pub fn continuous(name: impl Into<String>, min: f64, max: f64, bins: usize) -> Self {
        Self {
            name: name.into(),
            kind: AttributeKind::Continuous { min, max, bins },
        }
    }

    /// Number of values of a categorical attribute.
    pub fn arity(&self) -> Option<usize> {
        match &self.kind {
            AttributeKind::Categorical(values) => Some(values.len()),
            AttributeKind::Continuous { .. } => None,
        }
    }

    pub fn values(&self) -> Option<&[String]> {
        match &self.kind {
            AttributeKind::Categorical(values) => Some(values),
            AttributeKind::Continuous { .. } => None,
        }
    }

    fn validate(&self) -> Result<()> {
        match &self.kind {
            AttributeKind::Categorical(values) => {
                if values.is_empty() {
                    return Err(Error::invalid(format!(
                        "attribute {} has an empty domain",
                        self.name
                    )));
                }
                for (i, v) in values.iter().enumerate() {
                    if values[..i].contains(v) {
                        return Err(Error::invalid(format!(
                            "attribute {} repeats value {v:?}",
                            self.name
                        )));
                    }
                }
            }
            AttributeKind::Continuous { min, max, bins } => {
                if !(min.is_finite() && max.is_finite() && min <= max) {
                    return Err(Error::invalid(format!(
                        "attribute {} has range [{min}, {max}]",
                        self.name
                    )));
                }
                if *bins < 2 {
                    return Err(Error::invalid(format!(
                        "attribute {} needs at least 2 bins",
                        self.name
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Ordered predictive attributes and a categorical class attribute.
#[derive(Clone, Debug, PartialEq)]
pub struct Schema {
    attributes: Vec<Attribute>,
    class: Attribute,
}

impl Schema {
    pub fn new(attributes: Vec<Attribute>, class: Attribute) -> Result<Self> {
        for a in &attributes {
            a.validate()?;
        }
        class.validate()?;
        if class.arity().is_none() {
            return Err(Error::invalid(format!(
                "class attribute {} must be categorical",
                class.name
            )));
        }
        for (i, a) in attributes.iter().enumerate() {
            if a.name == class.name || attributes[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::invalid(format!(
                    "attribute name {} is used twice",
                    a.name
                )));
            }
        }
        Ok(Self { attributes, class })
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn attribute(&self, index: usize) -> Result<&Attribute> {
        self.attributes
            .get(index)
            .ok_or_else(|| Error::invalid(format!("unknown attribute index {index}")))
    }

    pub fn class(&self) -> &Attribute {
        &self.class
    }

    /// `|C|`.
    pub fn class_count(&self) -> usize {
        self.class.arity().expect("class is categorical")
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }
}

/// One attribute value: a category index or a raw number.
#[derive(Clone, Copy, Debug)]
pub enum Cell {
    Category(usize),
    Number(f64),
}

impl Cell {
    pub fn category(self) -> Option<usize> {
        match self {
            Cell::Category(j) => Some(j),
            Cell::Number(_) => None,
        }
    }

    fn key(self) -> (u8, u64) {
        match self {
            Cell::Category(j) => (0, j as u64),
            Cell::Number(v) => (1, (v + 0.0).to_bits()),
        }
    }
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Cell {}

impl Hash for Cell {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Cell::Category(a), Cell::Category(b)) => a.cmp(b),
            (Cell::Number(a), Cell::Number(b)) => a.total_cmp(b),
            _ => self.key().0.cmp(&other.key().0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Row {
    pub cells: Vec<Cell>,
    pub class: usize,
}

impl Row {
    pub fn new(cells: Vec<Cell>, class: usize) -> Self {
        Self { cells, class }
    }

    /// A row of category indices.
    pub fn categories(cells: &[usize], class: usize) -> Self {
        Self::new(cells.iter().map(|&j| Cell::Category(j)).collect(), class)
    }
}

/// Rows over a shared schema. Equality and hashing treat rows as a multiset.
#[derive(Clone, Debug)]
pub struct LabeledTable {
    schema: Arc<Schema>,
    rows: Vec<Row>,
}

impl LabeledTable {
    pub fn new(schema: Arc<Schema>, rows: Vec<Row>) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            check_row(&schema, row).map_err(|e| Error::invalid(format!("row {i}: {e}")))?;
        }
        Ok(Self { schema, rows })
    }

    pub fn empty(schema: Arc<Schema>) -> Self {
        Self {
            schema,
            rows: Vec::new(),
        }
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn shared_schema(&self) -> Arc<Schema> {
        Arc::clone(&self.schema)
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// `τ`.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_categorical(&self) -> bool {
        self.schema.attributes.iter().all(|a| a.arity().is_some())
    }

    fn categorical(&self, attribute: usize) -> Result<usize> {
        self.schema.attribute(attribute)?.arity().ok_or_else(|| {
            Error::invalid(format!(
                "attribute {attribute} is continuous; discretize it first"
            ))
        })
    }

    /// `τ_c` for every class.
    pub fn class_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.schema.class_count()];
        for r in &self.rows {
            counts[r.class] += 1;
        }
        counts
    }

    /// `τ_{j,c}` indexed `[j][c]`; row sums give `τ_j`.
    pub fn contingency(&self, attribute: usize) -> Result<Vec<Vec<u64>>> {
        let arity = self.categorical(attribute)?;
        let mut counts = vec![vec![0u64; self.schema.class_count()]; arity];
        for r in &self.rows {
            let j = r.cells[attribute]
                .category()
                .expect("validated categorical cell");
            counts[j][r.class] += 1;
        }
        Ok(counts)
    }

    /// Sub-tables `T_j` in value order.
    pub fn partition(&self, attribute: usize) -> Result<Vec<LabeledTable>> {
        let arity = self.categorical(attribute)?;
        let mut parts = vec![Vec::new(); arity];
        for r in &self.rows {
            let j = r.cells[attribute]
                .category()
                .expect("validated categorical cell");
            parts[j].push(r.clone());
        }
        Ok(parts
            .into_iter()
            .map(|rows| LabeledTable {
                schema: Arc::clone(&self.schema),
                rows,
            })
            .collect())
    }

    /// Rows at the given indices, in that order.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            schema: Arc::clone(&self.schema),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    pub fn with_row(&self, row: Row) -> Result<Self> {
        check_row(&self.schema, &row)?;
        let mut rows = self.rows.clone();
        rows.push(row);
        Ok(Self {
            schema: Arc::clone(&self.schema),
            rows,
        })
    }

    pub fn without_row(&self, index: usize) -> Self {
        let mut rows = self.rows.clone();
        rows.remove(index);
        Self {
            schema: Arc::clone(&self.schema),
            rows,
        }
    }

    /// Same schema with the given rows.
    #[cfg(test)]
    pub(crate) fn with_rows(&self, rows: Vec<Row>) -> Self {
        Self {
            schema: Arc::clone(&self.schema),
            rows,
        }
    }

    fn sorted_rows(&self) -> Vec<&Row> {
        let mut rows: Vec<&Row> = self.rows.iter().collect();
        rows.sort();
        rows
    }
}

fn check_row(schema: &Schema, row: &Row) -> Result<()> {
    if row.cells.len() != schema.attributes.len() {
        return Err(Error::invalid(format!(
            "expected {} cells, got {}",
            schema.attributes.len(),
            row.cells.len()
        )));
    }
    for (a, cell) in schema.attributes.iter().zip(&row.cells) {
        match (&a.kind, *cell) {
            (AttributeKind::Categorical(values), Cell::Category(j)) if j < values.len() => {}
            (AttributeKind::Continuous { min, max, .. }, Cell::Number(v))
                if v >= *min && v <= *max => {}
            (_, cell) => {
                return Err(Error::invalid(format!(
                    "value {cell:?} outside the domain of attribute {}",
                    a.name
                )));
            }
        }
    }
    if row.class >= schema.class_count() {
        return Err(Error::invalid(format!(
            "class index {} out of range",
            row.class
        )));
    }
    Ok(())
}

impl PartialEq for LabeledTable {
    fn eq(&self, other: &Self) -> bool {
        self.schema == other.schema && self.sorted_rows() == other.sorted_rows()
    }
}

impl Eq for LabeledTable {}

impl Hash for LabeledTable {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.sorted_rows().hash(state);
    }
}

/// Replaces a continuous attribute by `bins` equal-width categories on `[min, max]`.
///
/// Bins are half-open `[e_i, e_{i+1})` except the last, which also holds `max`.
pub fn discretize(table: &LabeledTable, attribute: usize, bins: usize) -> Result<LabeledTable> {
    if bins < 2 {
        return Err(Error::invalid(format!("need at least 2 bins, got {bins}")));
    }
    let a = table.schema.attribute(attribute)?;
    let AttributeKind::Continuous { min, max, .. } = a.kind else {
        return Err(Error::invalid(format!(
            "attribute {} is not continuous",
            a.name
        )));
    };
    let width = (max - min) / bins as f64;
    let labels: Vec<String> = (0..bins)
        .map(|i| {
            format!(
                "[{}, {}{}",
                min + width * i as f64,
                min + width * (i + 1) as f64,
                if i + 1 == bins { "]" } else { ")" }
            )
        })
        .collect();
    let mut attributes = table.schema.attributes.clone();
    attributes[attribute].kind = AttributeKind::Categorical(labels);
    let schema = Arc::new(Schema::new(attributes, table.schema.class.clone())?);
    let rows = table
        .rows
        .iter()
        .map(|r| {
            let mut cells = r.cells.clone();
            let Cell::Number(v) = cells[attribute] else {
                unreachable!("validated continuous cell")
            };
            let bin = if width > 0.0 {
                ((v - min) / width).floor() as usize
            } else {
                0
            };
            cells[attribute] = Cell::Category(bin.min(bins - 1));
            Row::new(cells, r.class)
        })
        .collect();
    Ok(LabeledTable { schema, rows })
}

/// Discretizes every continuous attribute with its declared bin count.
pub fn discretize_all(table: &LabeledTable) -> Result<LabeledTable> {
    let mut out = table.clone();
    for (i, a) in table.schema.attributes.iter().enumerate() {
        if let AttributeKind::Continuous { bins, .. } = a.kind {
            out = discretize(&out, i, bins)?;
        }
    }
    Ok(out)
}
