use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use rayon::prelude::*;

use crate::mechanism::SelectionProblem;
use crate::sensitivity::{Monotonicity, Saturation, SensitivityFunction};

/// `min(δ, Δu)` for `t < size` and `Δu` from `size` on.
///
/// The cut-off makes the result bounded on any instance; `size` is the public
/// distance bound of the model. Admissibility and monotonicity carry over
/// because taking the minimum with a constant preserves order.
pub fn bound_sensitivity<D, C>(
    delta: &SensitivityFunction<D, C>,
    global_sensitivity: f64,
    size: usize,
) -> SensitivityFunction<D, C>
where
    D: ?Sized + 'static,
    C: 'static,
{
    let inner = Arc::clone(delta.eval_fn());
    let mut out = SensitivityFunction::new(move |x: &D, t, r: &C| {
        if t >= size {
            global_sensitivity
        } else {
            inner(x, t, r).min(global_sensitivity)
        }
    });
    if let Some(profile) = delta.profile_fn() {
        let profile = Arc::clone(profile);
        out = out.with_profile(move |x: &D, r: &C, len| {
            let head = profile(x, r, len.min(size));
            (0..len)
                .map(|t| {
                    head.get(t)
                        .map_or(global_sensitivity, |v| v.min(global_sensitivity))
                })
                .collect()
        });
    }
    out.declare_admissible(delta.is_admissible())
        .declare_monotonicity(delta.monotonicity())
        .with_saturation(Saturation {
            size,
            step: global_sensitivity,
        })
}

/// `max_{r'} δ(x, t, r')` over the problem's range: flat, and admissible when `δ` is.
pub fn flatten_sensitivity<D, C>(
    delta: &SensitivityFunction<D, C>,
    problem: &SelectionProblem<'_, D, C>,
) -> SensitivityFunction<D, C>
where
    D: ?Sized + 'static,
    C: Clone + Send + Sync + 'static,
{
    let range: Arc<[C]> = problem.range().to_vec().into();
    let inner = Arc::clone(delta.eval_fn());
    let eval_range = Arc::clone(&range);
    let mut out = SensitivityFunction::new(move |x: &D, t, _: &C| {
        eval_range
            .iter()
            .map(|r| inner(x, t, r))
            .fold(0.0, f64::max)
    });
    if let Some(profile) = delta.profile_fn() {
        let profile = Arc::clone(profile);
        out = out.with_profile(move |x: &D, _: &C, len| {
            let mut acc = vec![0.0f64; len];
            for r in range.iter() {
                for (a, v) in acc.iter_mut().zip(profile(x, r, len)) {
                    *a = a.max(v);
                }
            }
            acc
        });
    }
    let out = out
        .declare_admissible(delta.is_admissible())
        .declare_monotonicity(Monotonicity::Flat);
    match delta.saturation() {
        Some(s) => out.with_saturation(s),
        None => out.declare_bounded(delta.is_bounded()),
    }
}

/// `δ` with profiles of length `len` precomputed for every candidate of `problem`.
///
/// Lookups on the problem's own database read the table; any other database,
/// or a longer request, falls through to `δ`.
pub fn tabulate_sensitivity<D, C>(
    delta: &SensitivityFunction<D, C>,
    problem: &SelectionProblem<'_, D, C>,
    len: usize,
) -> SensitivityFunction<D, C>
where
    D: Clone + PartialEq + Send + Sync + 'static,
    C: Clone + Eq + Hash + Send + Sync + 'static,
{
    let database = problem.database().clone();
    let rows: Vec<Vec<f64>> = problem
        .range()
        .par_iter()
        .map(|r| delta.profile(&database, r, len))
        .collect();
    let table: HashMap<C, Vec<f64>> = problem.range().iter().cloned().zip(rows).collect();
    let shared = Arc::new((database, table));

    let (lookup, inner) = (Arc::clone(&shared), Arc::clone(delta.eval_fn()));
    let mut out = SensitivityFunction::new(move |x: &D, t, r: &C| {
        let (db, table) = &*lookup;
        match table.get(r).and_then(|row| row.get(t)) {
            Some(&v) if x == db => v,
            _ => inner(x, t, r),
        }
    });
    let fallback = delta.clone();
    out = out.with_profile(move |x: &D, r: &C, want| {
        let (db, table) = &*shared;
        match table.get(r) {
            Some(row) if want <= row.len() && x == db => row[..want].to_vec(),
            _ => fallback.profile(x, r, want),
        }
    });
    let out = out
        .declare_admissible(delta.is_admissible())
        .declare_monotonicity(delta.monotonicity());
    match delta.saturation() {
        Some(s) => out.with_saturation(s),
        None => out.declare_bounded(delta.is_bounded()),
    }
}

/// Pointwise maximum of two functions.
pub fn max_sensitivity<D, C>(
    a: &SensitivityFunction<D, C>,
    b: &SensitivityFunction<D, C>,
) -> SensitivityFunction<D, C>
where
    D: ?Sized + 'static,
    C: 'static,
{
    let (fa, fb) = (Arc::clone(a.eval_fn()), Arc::clone(b.eval_fn()));
    let out = SensitivityFunction::new(move |x: &D, t, r: &C| fa(x, t, r).max(fb(x, t, r)))
        .declare_admissible(a.is_admissible() && b.is_admissible())
        .declare_monotonicity(
            if a.monotonicity() == Monotonicity::Flat && b.monotonicity() == Monotonicity::Flat {
                Monotonicity::Flat
            } else {
                Monotonicity::None
            },
        );
    match (a.saturation(), b.saturation()) {
        (Some(sa), Some(sb)) if sa == sb => out.with_saturation(sa),
        (None, None) if a.is_bounded() && b.is_bounded() => out.declare_bounded(true),
        _ => out,
    }
    .drop_hooks()
}
