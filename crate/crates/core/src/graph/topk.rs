//! Private top-k node selection by repeated single picks.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{bounded_ebc_sensitivity, ebc_all, ebc_problem, EdgeGraph};
use crate::mechanism::{
    exponential_distribution, local_dampening_distribution, select_permute_and_flip,
    shifted_local_dampening_distribution, BudgetAccountant, Composition, Epsilon, Mechanism,
    ScopeId, SelectionDistribution, SelectionProblem,
};
use crate::sensitivity::flatten_sensitivity;

#[derive(Clone, Debug)]
pub struct TopKResult {
    pub chosen: Vec<usize>,
    pub per_iteration_epsilon: Epsilon,
    /// Sequential scope holding the `k` spends.
    pub scope: ScopeId,
}

/// Exact single-pick distribution over `problem`'s range.
///
/// Local dampening uses the flattened bounded `δ^EBC`; shifted local
/// dampening uses the bounded `δ^EBC`. Permute-and-flip has no exact form.
pub fn ebc_pick_distribution(
    problem: &SelectionProblem<'_, EdgeGraph, usize>,
    mechanism: Mechanism,
    epsilon: f64,
) -> Result<SelectionDistribution<usize>> {
    let g = problem.database();
    match mechanism {
        Mechanism::Em => exponential_distribution(problem, epsilon),
        Mechanism::Ld => {
            let flat = flatten_sensitivity(&bounded_ebc_sensitivity(g), problem);
            local_dampening_distribution(problem, &flat, epsilon)
        }
        Mechanism::Sld => {
            shifted_local_dampening_distribution(problem, &bounded_ebc_sensitivity(g), epsilon)
        }
        Mechanism::Pf => Err(Error::invalid(
            "permute-and-flip has no closed-form distribution",
        )),
    }
}

/// Picks `k` distinct nodes, spending `ε/k` per pick in a sequential scope under `parent`.
pub fn priv_topk<R: Rng + ?Sized>(
    g: &EdgeGraph,
    epsilon: Epsilon,
    k: usize,
    mechanism: Mechanism,
    rng: &mut R,
    accountant: &mut BudgetAccountant,
    parent: ScopeId,
) -> Result<TopKResult> {
    if k == 0 || k > g.len() {
        return Err(Error::invalid(format!(
            "k must lie in 1..={}, got {k}",
            g.len()
        )));
    }
    let per = epsilon.split(k as u64)?;
    let scope = accountant.open_scope(parent, "topk", Composition::Sequential)?;
    let mut chosen = Vec::with_capacity(k);
    let mut taken = vec![false; g.len()];
    for _ in 0..k {
        let remaining: Vec<usize> = (0..g.len()).filter(|&v| !taken[v]).collect();
        let problem = ebc_problem(g, remaining)?;
        let pick = match mechanism {
            Mechanism::Pf => select_permute_and_flip(&problem, per.value(), rng)?,
            other => *ebc_pick_distribution(&problem, other, per.value())?.sample(rng),
        };
        accountant.account(scope, per)?;
        taken[pick] = true;
        chosen.push(pick);
    }
    Ok(TopKResult {
        chosen,
        per_iteration_epsilon: per,
        scope,
    })
}

/// The `k` highest-EBC nodes, ties broken by index.
pub fn true_topk(g: &EdgeGraph, k: usize) -> Vec<usize> {
    let scores = ebc_all(g);
    let mut order: Vec<usize> = (0..g.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order.truncate(k);
    order
}

/// `|retrieved ∩ true top-k| / k`.
pub fn topk_accuracy(retrieved: &[usize], g: &EdgeGraph, k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let truth = true_topk(g, k);
    retrieved.iter().filter(|v| truth.contains(v)).count() as f64 / k as f64
}
