//! Egocentric betweenness, local sensitivity and the dampening function on an
//! eight-node graph, followed by exact LD and EM probabilities at ε = 2.

use dampen::graph::{ebc, ebc_problem, EdgeFlipNeighbors, EdgeGraph};
use dampen::mechanism::{dampen, exponential_distribution, local_dampening_distribution};
use dampen::sensitivity::{brute_ls_profiles, Monotonicity, SearchBudget, SensitivityFunction};

fn main() -> dampen::Result<()> {
    // a = 0, b = 1, v0..v5 = 2..7
    let edges = [
        (0, 1),
        (0, 2),
        (0, 3),
        (0, 4),
        (0, 5),
        (1, 4),
        (1, 5),
        (1, 6),
        (1, 7),
        (2, 3),
        (6, 7),
    ];
    let g = EdgeGraph::from_edges(8, &edges)?.with_degree_bound(6)?;
    let problem = ebc_problem(&g, (0..8).collect())?;
    println!(
        "ebc(a) = {}, Δu = {}",
        ebc(&g, 0)?,
        problem.global_sensitivity()
    );

    let profiles = brute_ls_profiles(&problem, &EdgeFlipNeighbors, 1, SearchBudget::default())?;
    let flat: Vec<f64> = (0..2)
        .map(|t| profiles.iter().map(|p| p[t]).fold(0.0, f64::max))
        .collect();
    println!("LS(G, 0) = {}, LS(G, 1) = {}", flat[0], flat[1]);

    let gs = problem.global_sensitivity();
    let ls = SensitivityFunction::new(move |_: &EdgeGraph, t, _: &usize| {
        flat.get(t).copied().unwrap_or(gs)
    })
    .declare_admissible(true)
    .declare_monotonicity(Monotonicity::Flat);
    println!("D(a) = {:.3}", dampen(&problem, &ls, &0, ebc(&g, 0)?)?);

    let ld = local_dampening_distribution(&problem, &ls, 2.0)?;
    let em = exponential_distribution(&problem, 2.0)?;
    println!("node  LD      EM");
    for (node, (p, q)) in ld
        .probabilities()
        .iter()
        .zip(em.probabilities())
        .enumerate()
    {
        println!("{node:>4}  {p:.4}  {q:.4}");
    }
    Ok(())
}
