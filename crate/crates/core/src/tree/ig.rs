//! Information-gain utility and its element local sensitivity.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mechanism::SelectionProblem;
use crate::sensitivity::{
    bound_sensitivity, Monotonicity, NeighborEnumerator, SensitivityFunction,
};
use crate::tree::LabeledTable;

/// `Σ_j Σ_c τ_{j,c} · log2(τ_{j,c} / τ_j)`, i.e. `-τ · H_{C|A}`, with `0·log 0 = 0`.
///
/// Never positive; zero exactly when every branch is pure.
pub fn ig_from_counts(counts: &[Vec<u64>]) -> f64 {
    let mut total = 0.0;
    for branch in counts {
        let size: u64 = branch.iter().sum();
        if size == 0 {
            continue;
        }
        for &n in branch {
            if n > 0 {
                total += n as f64 * (n as f64 / size as f64).log2();
            }
        }
    }
    total
}

pub fn ig_utility(table: &LabeledTable, attribute: usize) -> Result<f64> {
    Ok(ig_from_counts(&table.contingency(attribute)?))
}

/// `log2(N + 1) + 1 / ln 2`.
pub fn global_sensitivity_ig(size: usize) -> f64 {
    (size as f64 + 1.0).log2() + std::f64::consts::LOG2_E
}

/// `x·log2((x + 1) / x) + log2(x + 1)`, and `0` for `x ≤ 0`.
pub fn ig_f(x: u64) -> f64 {
    if x == 0 {
        return 0.0;
    }
    let x = x as f64;
    x * ((x + 1.0) / x).log2() + (x + 1.0).log2()
}

/// `x·log2((x - 1) / x) - log2(x - 1)`, and `0` for `x ≤ 1`.
pub fn ig_g(x: u64) -> f64 {
    if x <= 1 {
        return 0.0;
    }
    let x = x as f64;
    x * ((x - 1.0) / x).log2() - (x - 1.0).log2()
}

/// `max(f(a) - f(b), g(b) - g(a))`.
pub fn ig_h(a: u64, b: u64) -> f64 {
    (ig_f(a) - ig_f(b)).max(ig_g(b) - ig_g(a))
}

fn branch_sizes(counts: &[Vec<u64>]) -> Vec<u64> {
    counts.iter().map(|b| b.iter().sum()).collect()
}

/// `max_{j,c} h(τ_j, τ_{j,c})` from a contingency table.
pub fn ls0_ig_counts(counts: &[Vec<u64>]) -> f64 {
    let sizes = branch_sizes(counts);
    let mut best = 0.0f64;
    for (branch, &a) in counts.iter().zip(&sizes) {
        for &b in branch {
            best = best.max(ig_h(a, b));
        }
    }
    best
}

pub fn ls0_ig(table: &LabeledTable, attribute: usize) -> Result<f64> {
    Ok(ls0_ig_counts(&table.contingency(attribute)?))
}

/// Memo of candidate sets keyed by `(t, j, c)`; valid for one contingency table.
#[derive(Clone, Debug, Default)]
pub struct CandidatesCache {
    sets: HashMap<(usize, usize, usize), Vec<(u64, u64)>>,
}

impl CandidatesCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// Count pairs produced at step `t` from `(τ_j, τ_{j,c})`.
///
/// Each step maps `(a, b)` to `(a - 1, b - 1)` when `a > 0 ∧ b > 0` and to
/// `(a + 1, b)` when `a < τ`, with `τ` the size of the original table.
/// Results are sorted and deduplicated.
pub fn candidates_ig(
    counts: &[Vec<u64>],
    t: usize,
    j: usize,
    c: usize,
    cache: &mut CandidatesCache,
) -> Result<Vec<(u64, u64)>> {
    let branch = counts
        .get(j)
        .ok_or_else(|| Error::invalid(format!("attribute value {j} out of range")))?;
    let b0 = *branch
        .get(c)
        .ok_or_else(|| Error::invalid(format!("class {c} out of range")))?;
    let tau: u64 = counts.iter().flatten().sum();
    let a0: u64 = branch.iter().sum();
    if let Some(hit) = cache.sets.get(&(t, j, c)) {
        return Ok(hit.clone());
    }
    let (mut level, mut current) = match (0..t).rev().find(|s| cache.sets.contains_key(&(*s, j, c)))
    {
        Some(s) => (s, cache.sets[&(s, j, c)].clone()),
        None => {
            let base = vec![(a0, b0)];
            cache.sets.insert((0, j, c), base.clone());
            (0, base)
        }
    };
    while level < t {
        let mut next = Vec::with_capacity(current.len() * 2);
        for &(a, b) in &current {
            if a > 0 && b > 0 {
                next.push((a - 1, b - 1));
            }
            if a < tau {
                next.push((a + 1, b));
            }
        }
        next.sort_unstable();
        next.dedup();
        level += 1;
        cache.sets.insert((level, j, c), next.clone());
        current = next;
    }
    Ok(current)
}

/// `max h` over the candidate sets of every `(j, c)` and step `t' ≤ t`.
///
/// The addition guard undershoots once edits grow the table; see
/// [`ls_t_ig_counts`] for the exact value.
pub fn ls_t_ig_candidates(
    counts: &[Vec<u64>],
    t: usize,
    cache: &mut CandidatesCache,
) -> Result<f64> {
    let mut best = 0.0f64;
    for (j, branch) in counts.iter().enumerate() {
        for c in 0..branch.len() {
            for step in 0..=t {
                for (a, b) in candidates_ig(counts, step, j, c, cache)? {
                    best = best.max(ig_h(a, b));
                }
            }
        }
    }
    Ok(best)
}

/// Exact `[LS(T, 0, A), …, LS(T, len - 1, A)]` from a contingency table.
///
/// `h` grows with `a` and shrinks with `b`, so within `t` edits the extreme
/// pairs for cell `(j, c)` come from removing `i ≤ τ_{j,c}` rows of that cell
/// and adding `t - i` rows to branch `j` under another class.
pub fn ls_profile_ig_counts(counts: &[Vec<u64>], len: usize) -> Vec<f64> {
    let sizes = branch_sizes(counts);
    let classes = counts.first().map_or(0, Vec::len);
    let mut best = vec![0.0f64; len];
    for (branch, &a0) in counts.iter().zip(&sizes) {
        for &b0 in branch {
            for (t, slot) in best.iter_mut().enumerate() {
                let removals = (b0 as usize).min(t);
                for i in 0..=removals {
                    let added = if classes >= 2 { t - i } else { 0 };
                    let v = ig_h(a0 - i as u64 + added as u64, b0 - i as u64);
                    if v > *slot {
                        *slot = v;
                    }
                }
            }
        }
    }
    for t in 1..len {
        best[t] = best[t].max(best[t - 1]);
    }
    best
}

pub fn ls_t_ig_counts(counts: &[Vec<u64>], t: usize) -> f64 {
    ls_profile_ig_counts(counts, t + 1)[t]
}

pub fn ls_t_ig(table: &LabeledTable, t: usize, attribute: usize) -> Result<f64> {
    Ok(ls_t_ig_counts(&table.contingency(attribute)?, t))
}

/// Exact IG element local sensitivity as an admissible sensitivity function over attributes.
pub fn ig_sensitivity() -> SensitivityFunction<LabeledTable, usize> {
    SensitivityFunction::new(|table: &LabeledTable, t, attribute: &usize| {
        ls_t_ig(table, t, *attribute).unwrap_or(f64::NAN)
    })
    .with_profile(|table: &LabeledTable, attribute: &usize, len| {
        match table.contingency(*attribute) {
            Ok(counts) => ls_profile_ig_counts(&counts, len),
            Err(_) => vec![f64::NAN; len],
        }
    })
    .declare_admissible(true)
    .declare_monotonicity(Monotonicity::None)
}

/// [`ig_sensitivity`] capped at `ΔIG(size)` and saturated at `size`.
pub fn bounded_ig_sensitivity(size: usize) -> SensitivityFunction<LabeledTable, usize> {
    bound_sensitivity(&ig_sensitivity(), global_sensitivity_ig(size), size.max(1))
}

/// Selection of a split attribute among `attributes`, with `ΔIG` and the
/// horizon taken from the public table size `size`.
pub fn ig_problem(
    table: &LabeledTable,
    attributes: Vec<usize>,
    size: usize,
) -> Result<SelectionProblem<'_, LabeledTable, usize>> {
    for &a in &attributes {
        if table.schema().attribute(a)?.arity().is_none() {
            return Err(Error::invalid(format!(
                "attribute {a} is continuous; discretize it first"
            )));
        }
    }
    SelectionProblem::new(
        table,
        attributes,
        Arc::new(|t: &LabeledTable, a: &usize| ig_utility(t, *a).unwrap_or(f64::NAN)),
        global_sensitivity_ig(size),
        size.max(1),
    )
}

/// One attribute's contingency table `[j][c]` as a database of its own.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Contingency(pub Vec<Vec<u64>>);

/// Tables one typed row addition or removal away.
#[derive(Clone, Copy, Debug, Default)]
pub struct ContingencyNeighbors;

impl NeighborEnumerator<Contingency> for ContingencyNeighbors {
    fn neighbors(&self, x: &Contingency) -> Vec<Contingency> {
        let mut out = Vec::new();
        for j in 0..x.0.len() {
            for c in 0..x.0[j].len() {
                let mut up = x.clone();
                up.0[j][c] += 1;
                out.push(up);
                if x.0[j][c] > 0 {
                    let mut down = x.clone();
                    down.0[j][c] -= 1;
                    out.push(down);
                }
            }
        }
        out
    }
}

/// Single-candidate IG problem over a [`Contingency`].
pub fn contingency_problem(
    x: &Contingency,
    size: usize,
) -> Result<SelectionProblem<'_, Contingency, usize>> {
    SelectionProblem::new(
        x,
        vec![0],
        Arc::new(|y: &Contingency, _: &usize| ig_from_counts(&y.0)),
        global_sensitivity_ig(size),
        size.max(1),
    )
}
