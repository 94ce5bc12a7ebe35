//! Exhaustive local-sensitivity oracles over a neighbour relation.

use std::collections::HashSet;
use std::hash::Hash;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mechanism::{SelectionProblem, UtilityFn};
use crate::sensitivity::SensitivityFunction;

/// Databases at distance one.
pub trait NeighborEnumerator<D>: Send + Sync {
    fn neighbors(&self, database: &D) -> Vec<D>;
}

impl<D, F> NeighborEnumerator<D> for F
where
    F: Fn(&D) -> Vec<D> + Send + Sync,
{
    fn neighbors(&self, database: &D) -> Vec<D> {
        self(database)
    }
}

/// Cap on the number of distinct databases a search may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_states: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_states: 2_000_000,
        }
    }
}

/// `max_{z ~ y} |u(y, r) - u(z, r)|` for every candidate.
fn ls0_all<D, C>(
    utility: &UtilityFn<D, C>,
    range: &[C],
    enumerator: &dyn NeighborEnumerator<D>,
    y: &D,
) -> Vec<f64> {
    let base: Vec<f64> = range.iter().map(|r| utility(y, r)).collect();
    let mut best = vec![0.0f64; range.len()];
    for z in enumerator.neighbors(y) {
        for (i, r) in range.iter().enumerate() {
            best[i] = best[i].max((base[i] - utility(&z, r)).abs());
        }
    }
    best
}

/// Element local sensitivity for all candidates and `t = 0..=max_t`.
///
/// Breadth-first search over the ball of radius `max_t`; result `[r][t]`.
pub fn brute_ls_profiles<D, C>(
    problem: &SelectionProblem<'_, D, C>,
    enumerator: &dyn NeighborEnumerator<D>,
    max_t: usize,
    budget: SearchBudget,
) -> Result<Vec<Vec<f64>>>
where
    D: Clone + Eq + Hash,
{
    brute_profiles_raw(
        problem.utility_fn(),
        problem.range(),
        problem.database(),
        enumerator,
        max_t,
        budget,
    )
}

fn brute_profiles_raw<D, C>(
    utility: &UtilityFn<D, C>,
    range: &[C],
    database: &D,
    enumerator: &dyn NeighborEnumerator<D>,
    max_t: usize,
    budget: SearchBudget,
) -> Result<Vec<Vec<f64>>>
where
    D: Clone + Eq + Hash,
{
    let mut seen: HashSet<D> = HashSet::new();
    seen.insert(database.clone());
    let mut frontier = vec![database.clone()];
    let mut current = ls0_all(utility, range, enumerator, database);
    let mut out: Vec<Vec<f64>> = current.iter().map(|v| vec![*v]).collect();
    for _ in 0..max_t {
        let mut next = Vec::new();
        for y in &frontier {
            for z in enumerator.neighbors(y) {
                if seen.contains(&z) {
                    continue;
                }
                if seen.len() >= budget.max_states {
                    return Err(Error::Resource(format!(
                        "brute-force search exceeded {} databases",
                        budget.max_states
                    )));
                }
                seen.insert(z.clone());
                for (c, v) in current
                    .iter_mut()
                    .zip(ls0_all(utility, range, enumerator, &z))
                {
                    *c = c.max(v);
                }
                next.push(z);
            }
        }
        for (o, c) in out.iter_mut().zip(&current) {
            o.push(*c);
        }
        frontier = next;
    }
    Ok(out)
}

/// `LS(x, t, r)` by exhaustive search.
pub fn brute_element_ls<D, C>(
    problem: &SelectionProblem<'_, D, C>,
    enumerator: &dyn NeighborEnumerator<D>,
    t: usize,
    candidate: &C,
    budget: SearchBudget,
) -> Result<f64>
where
    D: Clone + Eq + Hash,
    C: PartialEq,
{
    let index = problem
        .range()
        .iter()
        .position(|r| r == candidate)
        .ok_or_else(|| Error::invalid("candidate is not in the problem's range"))?;
    let single = &problem.range()[index..=index];
    let profiles = brute_profiles_raw(
        problem.utility_fn(),
        single,
        problem.database(),
        enumerator,
        t,
        budget,
    )?;
    Ok(profiles[0][t])
}

/// `LS(x, t) = max_r LS(x, t, r)` by exhaustive search.
pub fn brute_flat_ls<D, C>(
    problem: &SelectionProblem<'_, D, C>,
    enumerator: &dyn NeighborEnumerator<D>,
    t: usize,
    budget: SearchBudget,
) -> Result<f64>
where
    D: Clone + Eq + Hash,
{
    let profiles = brute_ls_profiles(problem, enumerator, t, budget)?;
    Ok(profiles.iter().map(|p| p[t]).fold(0.0, f64::max))
}

/// Element local sensitivity as a sensitivity function.
///
/// Declared admissible. A search that exceeds its budget yields NaN, which
/// the mechanisms reject as a contract violation.
pub fn brute_sensitivity<D, C>(
    utility: UtilityFn<D, C>,
    enumerator: Arc<dyn NeighborEnumerator<D>>,
    budget: SearchBudget,
) -> SensitivityFunction<D, C>
where
    D: Clone + Eq + Hash + 'static,
    C: Clone + 'static,
{
    let (u1, e1) = (Arc::clone(&utility), Arc::clone(&enumerator));
    SensitivityFunction::new(move |x: &D, t, r: &C| {
        let single = std::slice::from_ref(r);
        brute_profiles_raw(&u1, single, x, e1.as_ref(), t, budget).map_or(f64::NAN, |p| p[0][t])
    })
    .with_profile(move |x: &D, r: &C, len| {
        if len == 0 {
            return Vec::new();
        }
        let single = std::slice::from_ref(r);
        brute_profiles_raw(&utility, single, x, enumerator.as_ref(), len - 1, budget)
            .map_or_else(|_| vec![f64::NAN; len], |mut p| p.swap_remove(0))
    })
    .declare_admissible(true)
}
