//! Percentile utility and its element local sensitivity.

use std::sync::Arc;

use crate::error::Result;
use crate::mechanism::SelectionProblem;
use crate::percentile::{NumericVector, PercentileQuery};
use crate::sensitivity::{bound_sensitivity, Monotonicity, SensitivityFunction};

/// `-|x_k - x_i|` where `i` is the rank of the labelled record.
pub fn utility_percentile(x: &NumericVector, query: PercentileQuery, label: usize) -> Result<f64> {
    let k = query.rank(x.len());
    Ok(-(x.value_at_rank(k) - x.value_of(label)?).abs())
}

/// `Λ`.
pub fn global_sensitivity_percentile(x: &NumericVector) -> f64 {
    x.lambda()
}

/// Exact `LS(x, 0, r)` from rank statistics.
///
/// `rank` is the record's rank (0 or `n + 1` when it only matters that it
/// lies below or above the pivot), `value` its value and `below`, `pivot`,
/// `above` the values at ranks `k - 1`, `k`, `k + 1` with `0`/`Λ` padding.
#[allow(clippy::too_many_arguments)]
fn ls0_from_stats(
    n: usize,
    k: usize,
    lambda: f64,
    rank: usize,
    value: f64,
    below: f64,
    pivot: f64,
    above: f64,
) -> f64 {
    let mut best = (pivot - value).abs();
    let mut push = |v: f64| best = best.max(v);
    if rank != k {
        push(above - pivot);
        push(pivot - below);
    } else {
        if k >= 2 {
            push(above - pivot);
        }
        if k < n {
            push(pivot - below);
        }
    }
    match rank.cmp(&k) {
        std::cmp::Ordering::Equal => {
            push(lambda - above);
            push(below);
        }
        std::cmp::Ordering::Less => {
            push(value);
            push((lambda + value - pivot - above).abs());
        }
        std::cmp::Ordering::Greater => {
            push(lambda - value);
            push((value - pivot - below).abs());
        }
    }
    best
}

/// Exact element local sensitivity at distance 0.
pub fn ls0_percentile(x: &NumericVector, query: PercentileQuery, label: usize) -> Result<f64> {
    let n = x.len();
    let k = query.rank(n);
    let i = x.rank_of(label)?;
    Ok(ls0_from_stats(
        n,
        k,
        x.lambda(),
        i,
        x.value_at_rank(i),
        x.value_at_rank(k - 1),
        x.value_at_rank(k),
        x.value_at_rank(k + 1),
    ))
}

/// A looser closed form for distance 0: never below [`ls0_percentile`], often above.
pub fn ls0_percentile_loose(
    x: &NumericVector,
    query: PercentileQuery,
    label: usize,
) -> Result<f64> {
    let n = x.len();
    let k = query.rank(n);
    let i = x.rank_of(label)?;
    let lambda = x.lambda();
    let (xi, xk) = (x.value_at_rank(i), x.value_at_rank(k));
    let (below, above) = (x.value_at_rank(k - 1), x.value_at_rank(k + 1));
    let (p, q) = match i.cmp(&k) {
        std::cmp::Ordering::Greater => (lambda - xi, xi),
        std::cmp::Ordering::Equal => (lambda - above, below),
        std::cmp::Ordering::Less => (lambda + xi - 3.0 * xk + above, 3.0 * xk - xi - below),
    };
    Ok([(xk - xi).abs(), above - xk, xk - below, p, q]
        .into_iter()
        .fold(0.0, f64::max))
}

/// Replacement schedule applied to the pivot at each recursion level.
const PIVOT_TARGETS: [bool; 6] = [false, true, false, true, false, true];

/// Databases whose distance-0 sensitivity is maximised over at distance `t`.
///
/// `t = 1` gives the labelled record moved to `Λ`, `x`, the record moved to
/// `0`, `x`, and the current pivot record moved to `Λ` and to `0`. Each
/// deeper level moves the pivot of the previous level's `i`-th vector to
/// `0` for even `i` and `Λ` for odd `i`.
pub fn candidates_percentile(
    x: &NumericVector,
    query: PercentileQuery,
    t: usize,
    label: usize,
) -> Result<Vec<NumericVector>> {
    let k = query.rank(x.len());
    let lambda = x.lambda();
    match t {
        0 => Ok(vec![x.clone()]),
        1 => {
            let pivot = x.label_at_rank(k);
            Ok(vec![
                x.with_value(label, lambda)?,
                x.clone(),
                x.with_value(label, 0.0)?,
                x.clone(),
                x.with_value(pivot, lambda)?,
                x.with_value(pivot, 0.0)?,
            ])
        }
        _ => candidates_percentile(x, query, t - 1, label)?
            .iter()
            .zip(PIVOT_TARGETS)
            .map(|(c, top)| c.with_value(c.label_at_rank(k), if top { lambda } else { 0.0 }))
            .collect(),
    }
}

/// Maximum distance-0 sensitivity over candidates at distances `0..=t`.
pub fn ls_t_percentile_candidates(
    x: &NumericVector,
    query: PercentileQuery,
    t: usize,
    label: usize,
) -> Result<f64> {
    let mut best = 0.0f64;
    for level in 0..=t {
        for c in candidates_percentile(x, query, level, label)? {
            best = best.max(ls0_percentile(&c, query, label)?);
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, PartialEq)]
enum Slot {
    /// A record that keeps its value.
    Kept,
    /// A record moved to this value.
    Moved,
    /// The labelled record.
    Target,
}

/// Exact `[LS(x, 0, r), …, LS(x, len - 1, r)]`.
///
/// A database at distance `t` matters only through the labelled record's
/// value and the values at ranks `k - 1..=k + 1`. Those come either from
/// records that keep their value or from records moved to `0`, `Λ` or the
/// labelled record's value, so the search enumerates which sorted slots form
/// the rank window and charges one edit per record that cannot stay.
///
/// With a `horizon`, distances past it report `Λ`.
pub fn ls_profile_percentile(
    x: &NumericVector,
    query: PercentileQuery,
    label: usize,
    len: usize,
    horizon: Option<usize>,
) -> Result<Vec<f64>> {
    let n = x.len();
    let lambda = x.lambda();
    let k = query.rank(n);
    let own_rank = x.rank_of(label)?;
    if len == 0 {
        return Ok(Vec::new());
    }
    let exact_len = (len - 1).min(n).min(horizon.unwrap_or(usize::MAX)) + 1;
    let tmax = exact_len - 1;
    let own_value = x.value_of(label)?;
    let others: Vec<f64> = x
        .records()
        .iter()
        .filter(|r| r.label != label)
        .map(|r| r.value)
        .collect();
    let m = others.len();
    let lo = k.saturating_sub(1).max(1);
    let hi = (k + 1).min(n);
    let window = hi - lo + 1;

    let mut placements = vec![(own_rank - 1, own_value, false)];
    for p in 0..=m {
        let left = if p > 0 { others[p - 1] } else { 0.0 };
        let right = if p < m { others[p] } else { lambda };
        if p > 0 && p < m && left == right {
            continue;
        }
        placements.push((p, left, true));
        if right != left {
            placements.push((p, right, true));
        }
    }

    let mut best = vec![0.0f64; exact_len];
    let mut slots: Vec<(Slot, f64)> = Vec::with_capacity(m + 13);
    let mut kept_prefix: Vec<usize> = Vec::with_capacity(m + 14);
    for &(at, value, moved) in &placements {
        slots.clear();
        slots.extend([(Slot::Moved, 0.0); 3]);
        for j in 0..=m {
            if j == at {
                slots.extend([(Slot::Moved, value); 3]);
                slots.push((Slot::Target, value));
                slots.extend([(Slot::Moved, value); 3]);
            }
            if j < m {
                slots.push((Slot::Kept, others[j]));
            }
        }
        slots.extend([(Slot::Moved, lambda); 3]);
        let target = slots
            .iter()
            .position(|s| s.0 == Slot::Target)
            .expect("target slot");
        kept_prefix.clear();
        kept_prefix.push(0);
        for s in &slots {
            kept_prefix.push(kept_prefix.last().unwrap() + usize::from(s.0 == Slot::Kept));
        }
        let total_kept = kept_prefix[slots.len()];
        let search = WindowSearch {
            slots: &slots,
            kept_prefix: &kept_prefix,
            target,
            n,
            k,
            lo,
            hi,
            lambda,
            value,
            moved,
            tmax,
            total_kept,
        };
        let mut chosen = [0usize; 3];
        for first in 0..slots.len() {
            if kept_prefix[first] > lo - 1 + tmax {
                break;
            }
            if kept_prefix[first] + tmax + 4 < lo {
                continue;
            }
            chosen[0] = first;
            search.extend(&mut chosen, 1, window, 0, &mut best);
        }
    }
    for t in 1..best.len() {
        best[t] = best[t].max(best[t - 1]);
    }
    let tail = if exact_len - 1 == n { best[n] } else { lambda };
    best.resize(len, tail);
    Ok(best)
}

struct WindowSearch<'s> {
    slots: &'s [(Slot, f64)],
    kept_prefix: &'s [usize],
    target: usize,
    n: usize,
    k: usize,
    lo: usize,
    hi: usize,
    lambda: f64,
    value: f64,
    moved: bool,
    tmax: usize,
    total_kept: usize,
}

impl WindowSearch<'_> {
    fn extend(
        &self,
        chosen: &mut [usize; 3],
        filled: usize,
        window: usize,
        skipped: usize,
        best: &mut [f64],
    ) {
        if filled == window {
            self.score(&chosen[..window], best);
            return;
        }
        let last = chosen[filled - 1];
        for next in last + 1..self.slots.len() {
            let gap = self.kept_prefix[next] - self.kept_prefix[last + 1];
            if skipped + gap > self.tmax {
                break;
            }
            chosen[filled] = next;
            self.extend(chosen, filled + 1, window, skipped + gap, best);
        }
    }

    fn score(&self, chosen: &[usize], best: &mut [f64]) {
        let (first, last) = (chosen[0], chosen[chosen.len() - 1]);
        let inside = chosen.contains(&self.target);
        if first < self.target && self.target < last && !inside {
            return;
        }
        let target_before = self.target < first;
        let target_after = self.target > last;
        let (Some(room_before), Some(room_after)) = (
            (self.lo - 1).checked_sub(usize::from(target_before)),
            (self.n - self.hi).checked_sub(usize::from(target_after)),
        ) else {
            return;
        };
        let kept_before = self.kept_prefix[first];
        let kept_after = self.total_kept - self.kept_prefix[last + 1];
        let kept_inside = chosen
            .iter()
            .filter(|&&c| self.slots[c].0 == Slot::Kept)
            .count();
        let kept = kept_inside
            + usize::from(!self.moved)
            + kept_before.min(room_before)
            + kept_after.min(room_after);
        let cost = self.n - kept;
        if cost > self.tmax {
            return;
        }
        let at = |rank: usize| -> Option<f64> {
            (rank >= self.lo && rank <= self.hi).then(|| self.slots[chosen[rank - self.lo]].1)
        };
        let rank = if let Some(p) = chosen.iter().position(|&c| c == self.target) {
            self.lo + p
        } else if target_before {
            0
        } else {
            self.n + 1
        };
        let below = if self.k >= 2 {
            at(self.k - 1).unwrap_or(0.0)
        } else {
            0.0
        };
        let pivot = at(self.k).expect("pivot inside window");
        let above = at(self.k + 1).unwrap_or(self.lambda);
        let v = ls0_from_stats(
            self.n,
            self.k,
            self.lambda,
            rank,
            self.value,
            below,
            pivot,
            above,
        );
        if v > best[cost] {
            best[cost] = v;
        }
    }
}

/// Exact `LS(x, t, r)`.
pub fn ls_t_percentile(
    x: &NumericVector,
    query: PercentileQuery,
    t: usize,
    label: usize,
) -> Result<f64> {
    Ok(ls_profile_percentile(x, query, label, t + 1, None)?[t])
}

/// Selection over record labels with utility `-|x_k - x_r|`.
pub fn percentile_problem(
    x: &NumericVector,
    query: PercentileQuery,
) -> SelectionProblem<'_, NumericVector, usize> {
    SelectionProblem::new(
        x,
        x.labels(),
        Arc::new(move |y: &NumericVector, label: &usize| {
            utility_percentile(y, query, *label).unwrap_or(f64::NAN)
        }),
        x.lambda(),
        x.len(),
    )
    .expect("labels are distinct and lambda is positive")
}

/// Exact element local sensitivity as an admissible sensitivity function.
pub fn percentile_sensitivity(
    query: PercentileQuery,
    horizon: Option<usize>,
) -> SensitivityFunction<NumericVector, usize> {
    SensitivityFunction::new(move |x: &NumericVector, t, label: &usize| {
        ls_profile_percentile(x, query, *label, t + 1, horizon).map_or(f64::NAN, |p| p[t])
    })
    .with_profile(move |x: &NumericVector, label: &usize, len| {
        ls_profile_percentile(x, query, *label, len, horizon)
            .unwrap_or_else(|_| vec![f64::NAN; len])
    })
    .declare_admissible(true)
    .declare_monotonicity(Monotonicity::None)
}

/// [`percentile_sensitivity`] capped at `Λ` and saturated at `n`.
pub fn bounded_percentile_sensitivity(
    x: &NumericVector,
    query: PercentileQuery,
    horizon: Option<usize>,
) -> SensitivityFunction<NumericVector, usize> {
    bound_sensitivity(&percentile_sensitivity(query, horizon), x.lambda(), x.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x026() -> NumericVector {
        NumericVector::new(&[0.0, 2.0, 6.0], 10.0).unwrap()
    }

    #[test]
    fn utility_examples() {
        let x = x026();
        let median = PercentileQuery::median();
        assert_eq!(utility_percentile(&x, median, 1).unwrap(), 0.0);
        assert_eq!(utility_percentile(&x, median, 2).unwrap(), -4.0);
        assert_eq!(
            utility_percentile(&x, PercentileQuery::new(99).unwrap(), 0).unwrap(),
            -6.0
        );
        assert!(utility_percentile(&x, median, 3).is_err());
        assert_eq!(global_sensitivity_percentile(&x), 10.0);
    }

    #[test]
    fn single_record_distance_zero() {
        // Moving the only record anywhere keeps its utility at 0.
        let x = NumericVector::new(&[3.0], 10.0).unwrap();
        assert_eq!(
            ls0_percentile(&x, PercentileQuery::median(), 0).unwrap(),
            0.0
        );
    }

    #[test]
    fn distance_zero_by_hand() {
        // Label 2 has utility -4; every single move lands on -8 or 0 at worst.
        let x = x026();
        let v = ls0_percentile(&x, PercentileQuery::median(), 2).unwrap();
        assert_eq!(v, 4.0);
        assert!(ls0_percentile_loose(&x, PercentileQuery::median(), 2).unwrap() >= v);
    }

    #[test]
    fn candidates_shapes() {
        let x = x026();
        let q = PercentileQuery::median();
        assert_eq!(candidates_percentile(&x, q, 0, 2).unwrap(), vec![x.clone()]);
        let c1 = candidates_percentile(&x, q, 1, 2).unwrap();
        assert_eq!(c1.len(), 6);
        assert_eq!(c1.iter().filter(|c| **c == x).count(), 2);
        assert_eq!(c1[0].value_of(2).unwrap(), 10.0);
        assert_eq!(c1[5].value_of(1).unwrap(), 0.0);
        let c2 = candidates_percentile(&x, q, 2, 2).unwrap();
        for (i, (a, b)) in c1.iter().zip(&c2).enumerate() {
            let pivot = a.label_at_rank(2);
            let target = if i % 2 == 1 { 10.0 } else { 0.0 };
            assert_eq!(*b, a.with_value(pivot, target).unwrap());
        }
    }

    #[test]
    fn profile_starts_at_distance_zero_and_grows() {
        let x = NumericVector::new(&[1.0, 4.0, 5.0, 9.0], 10.0).unwrap();
        let q = PercentileQuery::median();
        for label in 0..4 {
            let prof = ls_profile_percentile(&x, q, label, 7, None).unwrap();
            assert_eq!(prof[0], ls0_percentile(&x, q, label).unwrap());
            assert!(prof.windows(2).all(|w| w[0] <= w[1]));
            assert!(prof.iter().all(|v| *v <= 10.0));
        }
    }

    #[test]
    fn horizon_reports_lambda_beyond() {
        let x = NumericVector::new(&[1.0, 4.0, 5.0, 9.0], 10.0).unwrap();
        let q = PercentileQuery::median();
        let full = ls_profile_percentile(&x, q, 0, 5, None).unwrap();
        let cut = ls_profile_percentile(&x, q, 0, 5, Some(1)).unwrap();
        assert_eq!(cut[..2], full[..2]);
        assert_eq!(cut[2..], [10.0, 10.0, 10.0]);
    }

    #[test]
    fn bounded_function_saturates() {
        let x = x026();
        let q = PercentileQuery::median();
        let f = bounded_percentile_sensitivity(&x, q, None);
        assert!(f.is_admissible() && f.is_bounded());
        assert_eq!(f.eval(&x, 3, &0), 10.0);
        assert_eq!(f.eval(&x, 0, &2), 4.0);
    }
}
