//! Admissibility, monotonicity and dominance checks of the degree-based EBC
//! sensitivity on a small graph.

use dampen::graph::{
    bounded_ebc_sensitivity, ebc_problem, ebc_sensitivity, EdgeFlipNeighbors, EdgeGraph,
};
use dampen::sensitivity::{
    check_admissibility, check_dominance, check_monotonicity, default_ts, SearchBudget,
    SensitivityFunction,
};

fn main() -> dampen::Result<()> {
    let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (3, 4), (4, 5)];
    let g = EdgeGraph::from_edges(6, &edges)?.with_degree_bound(5)?;
    let problem = ebc_problem(&g, (0..6).collect())?;

    let report = check_admissibility(
        &ebc_sensitivity(),
        &problem,
        &EdgeFlipNeighbors,
        2,
        SearchBudget::default(),
    )?;
    match report.witness {
        None => println!("admissible for t ≤ 2"),
        Some(w) => println!("not admissible: {w:?}"),
    }

    let bounded = bounded_ebc_sensitivity(&g);
    let ts = default_ts(g.pair_count());
    let mono = check_monotonicity(&bounded, &problem, &ts);
    println!(
        "monotonicity {:?}, rank correlation {:.3}",
        mono.class, mono.rank_correlation
    );

    let constant = SensitivityFunction::global(problem.global_sensitivity());
    let dominance = check_dominance(&bounded, &constant, &problem, &ts);
    println!(
        "dominates the constant Δu function: {}",
        dominance.dominates
    );
    Ok(())
}
