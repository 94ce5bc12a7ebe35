use crate::error::Result;
use crate::graph::{load_edge_list, EdgeGraph};
use crate::harness::DatasetRef;
use crate::percentile::{load_numeric_vector, NumericVector};
use crate::tree::{discretize_all, load_table, LabeledTable};

/// A loaded database.
#[derive(Clone, Debug)]
pub enum DatasetModel {
    Numeric(NumericVector),
    Graph(EdgeGraph),
    /// Continuous attributes already discretized.
    Table(LabeledTable),
}

/// What ingestion kept and dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IngestionReport {
    pub kept: usize,
    pub dropped: usize,
    pub warnings: Vec<String>,
}

pub fn load_dataset(dataset: &DatasetRef) -> Result<(DatasetModel, IngestionReport)> {
    match dataset {
        DatasetRef::Values { path, lambda } => {
            let x = load_numeric_vector(path, *lambda)?;
            let report = IngestionReport {
                kept: x.len(),
                ..Default::default()
            };
            Ok((DatasetModel::Numeric(x), report))
        }
        DatasetRef::EdgeList { path, degree_bound } => {
            let (mut g, edges) = load_edge_list(path)?;
            if let Some(bound) = degree_bound {
                g = g.with_degree_bound(*bound)?;
            }
            let mut warnings = Vec::new();
            if edges.duplicates > 0 {
                warnings.push(format!("{} duplicate edges merged", edges.duplicates));
            }
            if edges.self_loops > 0 {
                warnings.push(format!("{} self-loops dropped", edges.self_loops));
            }
            let report = IngestionReport {
                kept: edges.edges,
                dropped: edges.duplicates + edges.self_loops,
                warnings,
            };
            Ok((DatasetModel::Graph(g), report))
        }
        DatasetRef::Table { data, schema } => {
            let loaded = load_table(data, schema)?;
            let report = IngestionReport {
                kept: loaded.rows,
                ..Default::default()
            };
            Ok((DatasetModel::Table(discretize_all(&loaded.table)?), report))
        }
    }
}
