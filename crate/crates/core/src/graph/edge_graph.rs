use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Undirected simple graph over a fixed node set, adjacency as bitsets.
#[derive(Clone, Debug)]
pub struct EdgeGraph {
    ids: Arc<Vec<String>>,
    words: usize,
    adjacency: Vec<Vec<u64>>,
    degree_bound: Option<usize>,
}

impl EdgeGraph {
    /// `n` nodes named `"0".."n-1"` and no edges.
    pub fn empty(n: usize) -> Self {
        Self::with_ids((0..n).map(|i| i.to_string()).collect())
    }

    /// Edgeless graph over the given node identifiers.
    pub fn with_ids(ids: Vec<String>) -> Self {
        let words = ids.len().div_ceil(64).max(1);
        Self {
            adjacency: vec![vec![0; words]; ids.len()],
            ids: Arc::new(ids),
            words,
            degree_bound: None,
        }
    }

    /// `n` anonymous nodes with the given edges; self-loops are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    fn check(&self, v: usize) -> Result<()> {
        if v < self.len() {
            Ok(())
        } else {
            Err(Error::invalid(format!("unknown node index {v}")))
        }
    }

    /// Adds an edge; returns `false` when it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(Error::invalid(format!("self-loop on node {}", self.ids[u])));
        }
        let fresh = !self.has_edge(u, v);
        self.set(u, v, true);
        Ok(fresh)
    }

    fn set(&mut self, u: usize, v: usize, on: bool) {
        let (wu, bu) = (u / 64, 1u64 << (u % 64));
        let (wv, bv) = (v / 64, 1u64 << (v % 64));
        if on {
            self.adjacency[u][wv] |= bv;
            self.adjacency[v][wu] |= bu;
        } else {
            self.adjacency[u][wv] &= !bv;
            self.adjacency[v][wu] &= !bu;
        }
    }

    /// Copy with the pair `{u, v}` toggled.
    pub fn with_flipped(&self, u: usize, v: usize) -> Self {
        let mut g = self.clone();
        let on = !g.has_edge(u, v);
        g.set(u, v, on);
        g
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u][v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub(crate) fn row(&self, v: usize) -> &[u64] {
        &self.adjacency[v]
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub fn edge_count(&self) -> usize {
        (0..self.len()).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Observed maximum degree.
    pub fn max_degree(&self) -> usize {
        (0..self.len()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Sets a public upper bound on the maximum degree.
    pub fn with_degree_bound(mut self, bound: usize) -> Result<Self> {
        if bound < self.max_degree() {
            return Err(Error::invalid(format!(
                "degree bound {bound} is below the observed maximum degree {}",
                self.max_degree()
            )));
        }
        self.degree_bound = Some(bound);
        Ok(self)
    }

    /// The public degree bound if configured, else the observed maximum.
    pub fn degree_bound(&self) -> usize {
        self.degree_bound.unwrap_or_else(|| self.max_degree())
    }

    /// `|V|(|V| - 1) / 2`, the largest edge-flip distance on this node set.
    pub fn pair_count(&self) -> usize {
        self.len() * self.len().saturating_sub(1) / 2
    }

    /// Map from identifier to index.
    pub fn index(&self) -> HashMap<&str, usize> {
        self.ids
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect()
    }
}

impl PartialEq for EdgeGraph {
    fn eq(&self, other: &Self) -> bool {
        self.adjacency == other.adjacency
    }
}

impl Eq for EdgeGraph {}

impl Hash for EdgeGraph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.adjacency.hash(state);
    }
}
