use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::EdgeGraph;

/// What ingestion kept and dropped.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EdgeListReport {
    pub edges: usize,
    pub duplicates: usize,
    pub self_loops: usize,
}

/// Parses `u v` lines; `#` lines and blank lines are skipped.
///
/// Node ids are opaque tokens, indexed in order of first appearance.
pub fn parse_edge_list(text: &str, path: &Path) -> Result<(EdgeGraph, EdgeListReport)> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut ids = Vec::new();
    let mut pairs = Vec::new();
    let mut report = EdgeListReport::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(u), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::parse(
                path,
                i + 1,
                format!("expected two node ids, got {line:?}"),
            ));
        };
        let mut id = |s: &str| {
            *index.entry(s.to_string()).or_insert_with(|| {
                ids.push(s.to_string());
                ids.len() - 1
            })
        };
        let (a, b) = (id(u), id(v));
        if a == b {
            report.self_loops += 1;
        } else {
            pairs.push((a, b));
        }
    }
    let mut g = EdgeGraph::with_ids(ids);
    for (a, b) in pairs {
        if g.add_edge(a, b)? {
            report.edges += 1;
        } else {
            report.duplicates += 1;
        }
    }
    Ok((g, report))
}

pub fn load_edge_list(path: &Path) -> Result<(EdgeGraph, EdgeListReport)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text, path)
}
