//! Egocentric betweenness centrality and its sensitivity.

use std::collections::VecDeque;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::EdgeGraph;
use crate::mechanism::SelectionProblem;
use crate::sensitivity::{
    bound_sensitivity, Monotonicity, NeighborEnumerator, SensitivityFunction,
};

fn check_node(g: &EdgeGraph, c: usize) -> Result<()> {
    if c < g.len() {
        Ok(())
    } else {
        Err(Error::invalid(format!("unknown node index {c}")))
    }
}

/// Sum over non-adjacent neighbour pairs `{u, v}` of `c` of `1 / q`, where
/// `q` counts their common neighbours inside the ego network (`c` included).
pub fn ebc(g: &EdgeGraph, c: usize) -> Result<f64> {
    check_node(g, c)?;
    let ego = g.row(c);
    let members: Vec<usize> = g.neighbors(c).collect();
    let mut total = 0.0;
    for (i, &u) in members.iter().enumerate() {
        let ru = g.row(u);
        for &v in &members[i + 1..] {
            if g.has_edge(u, v) {
                continue;
            }
            let rv = g.row(v);
            let shared: u32 = (0..g.words())
                .map(|w| (ru[w] & rv[w] & ego[w]).count_ones())
                .sum();
            total += 1.0 / f64::from(1 + shared);
        }
    }
    Ok(total)
}

/// EBC of every node, in index order.
pub fn ebc_all(g: &EdgeGraph) -> Vec<f64> {
    (0..g.len())
        .into_par_iter()
        .map(|c| ebc(g, c).expect("index in range"))
        .collect()
}

/// Largest ego network [`ebc_oracle`] accepts by default.
pub const ORACLE_DEGREE_CAP: usize = 64;

/// EBC by shortest-path counting on the ego network.
pub fn ebc_oracle(g: &EdgeGraph, c: usize, degree_cap: usize) -> Result<f64> {
    check_node(g, c)?;
    let mut members: Vec<usize> = g.neighbors(c).collect();
    if members.len() > degree_cap {
        return Err(Error::Resource(format!(
            "ego network of degree {} exceeds the oracle cap {degree_cap}",
            members.len()
        )));
    }
    members.push(c);
    let m = members.len();
    let centre = m - 1;
    let local: Vec<Vec<usize>> = (0..m)
        .map(|i| {
            (0..m)
                .filter(|&j| j != i && g.has_edge(members[i], members[j]))
                .collect()
        })
        .collect();
    let paths = |src: usize| -> (Vec<usize>, Vec<f64>) {
        let mut dist = vec![usize::MAX; m];
        let mut count = vec![0.0; m];
        dist[src] = 0;
        count[src] = 1.0;
        let mut queue = VecDeque::from([src]);
        while let Some(a) = queue.pop_front() {
            for &b in &local[a] {
                if dist[b] == usize::MAX {
                    dist[b] = dist[a] + 1;
                    queue.push_back(b);
                }
                if dist[b] == dist[a] + 1 {
                    count[b] += count[a];
                }
            }
        }
        (dist, count)
    };
    let (dist_c, count_c) = paths(centre);
    let mut total = 0.0;
    for u in 0..centre {
        let (dist_u, count_u) = paths(u);
        for v in u + 1..centre {
            if dist_u[v] != usize::MAX && dist_u[centre] + dist_c[v] == dist_u[v] {
                total += count_u[centre] * count_c[v] / count_u[v];
            }
        }
    }
    Ok(total)
}

/// `max(D(D - 1) / 4, D)` for a maximum degree `D`.
pub fn global_sensitivity_ebc(max_degree: usize) -> f64 {
    let d = max_degree as f64;
    (d * (d - 1.0) / 4.0).max(d)
}

/// `max((d + t)(d + t - 1) / 4, d + t)` for a node of degree `d`.
pub fn delta_ebc_value(degree: usize, t: usize) -> f64 {
    global_sensitivity_ebc(degree + t)
}

pub fn delta_ebc(g: &EdgeGraph, t: usize, v: usize) -> Result<f64> {
    check_node(g, v)?;
    Ok(delta_ebc_value(g.degree(v), t))
}

/// `δ^EBC` as a sensitivity function: admissible, unbounded, unclassified.
pub fn ebc_sensitivity() -> SensitivityFunction<EdgeGraph, usize> {
    SensitivityFunction::new(|g: &EdgeGraph, t, v: &usize| delta_ebc_value(g.degree(*v), t))
        .with_profile(|g: &EdgeGraph, v: &usize, len| {
            let d = g.degree(*v);
            (0..len).map(|t| delta_ebc_value(d, t)).collect()
        })
        .declare_admissible(true)
        .declare_monotonicity(Monotonicity::None)
}

/// `δ^EBC` capped at the graph's `Δu` and saturated at `|V|(|V| - 1) / 2`.
pub fn bounded_ebc_sensitivity(g: &EdgeGraph) -> SensitivityFunction<EdgeGraph, usize> {
    bound_sensitivity(
        &ebc_sensitivity(),
        global_sensitivity_ebc(g.degree_bound()),
        g.pair_count(),
    )
}

/// Selection of a node by EBC over `range`.
pub fn ebc_problem(
    g: &EdgeGraph,
    range: Vec<usize>,
) -> Result<SelectionProblem<'_, EdgeGraph, usize>> {
    ebc_problem_with_sensitivity(g, range, global_sensitivity_ebc(g.degree_bound()))
}

/// As [`ebc_problem`] with an explicit `Δu`.
pub fn ebc_problem_with_sensitivity(
    g: &EdgeGraph,
    range: Vec<usize>,
    global_sensitivity: f64,
) -> Result<SelectionProblem<'_, EdgeGraph, usize>> {
    if let Some(&bad) = range.iter().find(|&&v| v >= g.len()) {
        return Err(Error::invalid(format!("unknown node index {bad}")));
    }
    SelectionProblem::new(
        g,
        range,
        Arc::new(|h: &EdgeGraph, v: &usize| ebc(h, *v).unwrap_or(f64::NAN)),
        global_sensitivity,
        g.pair_count().max(1),
    )
}

/// Every graph one edge flip away.
#[derive(Clone, Copy, Debug, Default)]
pub struct EdgeFlipNeighbors;

impl NeighborEnumerator<EdgeGraph> for EdgeFlipNeighbors {
    fn neighbors(&self, g: &EdgeGraph) -> Vec<EdgeGraph> {
        let n = g.len();
        let mut out = Vec::with_capacity(g.pair_count());
        for u in 0..n {
            for v in u + 1..n {
                out.push(g.with_flipped(u, v));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `a`, `b` adjacent to `v0..v5` and to each other.
    fn worst_case() -> EdgeGraph {
        let mut edges = vec![(0, 1)];
        for v in 2..8 {
            edges.push((0, v));
            edges.push((1, v));
        }
        EdgeGraph::from_edges(8, &edges).unwrap()
    }

    #[test]
    fn worst_case_scores() {
        let g = worst_case();
        assert_eq!(ebc(&g, 0).unwrap(), 7.5);
        assert_eq!(ebc(&g.with_flipped(0, 1), 0).unwrap(), 15.0);
        assert_eq!(ebc_oracle(&g, 0, ORACLE_DEGREE_CAP).unwrap(), 7.5);
    }

    #[test]
    fn triangle_and_path() {
        let tri = EdgeGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(ebc_all(&tri), vec![0.0; 3]);
        let path = EdgeGraph::from_edges(3, &[(0, 2), (2, 1)]).unwrap();
        assert_eq!(ebc(&path, 2).unwrap(), 1.0);
        assert_eq!(ebc_oracle(&path, 2, 4).unwrap(), 1.0);
    }

    #[test]
    fn oracle_cap_is_enforced() {
        assert!(matches!(
            ebc_oracle(&worst_case(), 0, 3),
            Err(Error::Resource(_))
        ));
        assert!(ebc(&worst_case(), 9).is_err());
    }

    #[test]
    fn sensitivity_formulas() {
        assert_eq!(global_sensitivity_ebc(2), 2.0);
        assert_eq!(global_sensitivity_ebc(6), 7.5);
        assert_eq!(global_sensitivity_ebc(343), 29_326.5);
        assert_eq!(delta_ebc_value(0, 0), 0.0);
        assert_eq!(delta_ebc_value(5, 0), 5.0);
        assert_eq!(delta_ebc_value(5, 2), 10.5);
    }

    #[test]
    fn bounded_function_reaches_global_sensitivity() {
        let g = worst_case();
        let f = bounded_ebc_sensitivity(&g);
        assert!(f.is_admissible() && f.is_bounded());
        assert_eq!(f.eval(&g, 0, &2), 2.0);
        assert_eq!(f.eval(&g, 28, &2), 10.5);
        assert_eq!(f.eval(&g, 27, &0), 10.5);
    }

    #[test]
    fn flip_neighbours_cover_every_pair() {
        let g = EdgeGraph::from_edges(4, &[(0, 1)]).unwrap();
        let ns = EdgeFlipNeighbors.neighbors(&g);
        assert_eq!(ns.len(), 6);
        assert!(ns
            .iter()
            .all(|h| EdgeFlipNeighbors.neighbors(h).contains(&g)));
    }
}
