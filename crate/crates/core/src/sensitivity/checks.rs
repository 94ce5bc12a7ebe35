//! Empirical verification of sensitivity-function properties on one instance.

use std::cmp::Ordering;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::mechanism::{
    error_tail, expected_error, shifted_local_dampening_distribution, SelectionProblem,
};
use crate::sensitivity::brute::{brute_ls_profiles, NeighborEnumerator, SearchBudget};
use crate::sensitivity::{Monotonicity, SensitivityFunction};

const GAP_TOLERANCE: f64 = 1e-12;

/// Which admissibility condition failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdmissibilityCondition {
    /// `δ(x, 0, r) >= LS(x, 0, r)`.
    CoversLocalSensitivity,
    /// `δ(x, t + 1, r) >= δ(y, t, r)` for every neighbour `y`.
    DominatesNeighbors,
}

#[derive(Clone, Debug)]
pub struct AdmissibilityWitness<D, C> {
    pub condition: AdmissibilityCondition,
    pub t: usize,
    pub candidate: C,
    /// The neighbour involved, for the second condition.
    pub neighbor: Option<D>,
    pub required: f64,
    pub actual: f64,
}

#[derive(Clone, Debug)]
pub struct AdmissibilityReport<D, C> {
    pub max_t: usize,
    pub witness: Option<AdmissibilityWitness<D, C>>,
}

impl<D, C> AdmissibilityReport<D, C> {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Checks both admissibility conditions at `x` for `t = 0..=max_t`.
pub fn check_admissibility<D, C>(
    delta: &SensitivityFunction<D, C>,
    problem: &SelectionProblem<'_, D, C>,
    enumerator: &dyn NeighborEnumerator<D>,
    max_t: usize,
    budget: SearchBudget,
) -> Result<AdmissibilityReport<D, C>>
where
    D: Clone + Eq + Hash + 'static,
    C: Clone + 'static,
{
    let x = problem.database();
    let ls0 = brute_ls_profiles(problem, enumerator, 0, budget)?;
    let fail = |witness| {
        Ok(AdmissibilityReport {
            max_t,
            witness: Some(witness),
        })
    };
    for (r, ls) in problem.range().iter().zip(&ls0) {
        let actual = delta.eval(x, 0, r);
        if !(actual >= ls[0]) {
            return fail(AdmissibilityWitness {
                condition: AdmissibilityCondition::CoversLocalSensitivity,
                t: 0,
                candidate: r.clone(),
                neighbor: None,
                required: ls[0],
                actual,
            });
        }
    }
    let neighbors = enumerator.neighbors(x);
    for r in problem.range() {
        let here = delta.profile(x, r, max_t + 2);
        for y in &neighbors {
            let there = delta.profile(y, r, max_t + 1);
            for t in 0..=max_t {
                if !(here[t + 1] >= there[t]) {
                    return fail(AdmissibilityWitness {
                        condition: AdmissibilityCondition::DominatesNeighbors,
                        t,
                        candidate: r.clone(),
                        neighbor: Some(y.clone()),
                        required: there[t],
                        actual: here[t + 1],
                    });
                }
            }
        }
    }
    Ok(AdmissibilityReport {
        max_t,
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityReport {
    pub class: Monotonicity,
    /// Mean Spearman correlation between utility and `δ` over the tested `t`;
    /// 0 when undefined at every `t`.
    pub rank_correlation: f64,
}

/// Exact monotonicity class on the instance, over the given distances.
pub fn check_monotonicity<D: ?Sized + 'static, C: 'static>(
    delta: &SensitivityFunction<D, C>,
    problem: &SelectionProblem<'_, D, C>,
    ts: &[usize],
) -> MonotonicityReport {
    let utilities = problem.utilities();
    let x = problem.database();
    let len = ts.iter().max().map_or(0, |m| m + 1);
    let profiles: Vec<Vec<f64>> = problem
        .range()
        .iter()
        .map(|r| delta.profile(x, r, len))
        .collect();
    let (mut flat, mut up, mut down) = (true, true, true);
    let mut correlations = Vec::new();
    for &t in ts {
        let column: Vec<f64> = profiles.iter().map(|p| p[t]).collect();
        for i in 0..column.len() {
            for j in 0..column.len() {
                flat &= column[i] == column[j];
                if utilities[i] >= utilities[j] {
                    up &= column[i] >= column[j];
                    down &= column[i] <= column[j];
                }
            }
        }
        if let Some(rho) = spearman(&utilities, &column) {
            correlations.push(rho);
        }
    }
    let class = if flat {
        Monotonicity::Flat
    } else if up {
        Monotonicity::NonDecreasing
    } else if down {
        Monotonicity::NonIncreasing
    } else {
        Monotonicity::None
    };
    let rank_correlation = if correlations.is_empty() {
        0.0
    } else {
        correlations.iter().sum::<f64>() / correlations.len() as f64
    };
    MonotonicityReport {
        class,
        rank_correlation,
    }
}

/// Average ranks, ties sharing the mean rank.
fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let mean = (i + j) as f64 / 2.0;
        for k in i..=j {
            out[order[k]] = mean;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation; `None` when either side is constant.
pub fn spearman(a: &[f64], b: &[f64]) -> Option<f64> {
    let (ra, rb) = (ranks(a), ranks(b));
    let n = ra.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let mut cov = 0.0;
    let (mut va, mut vb) = (0.0, 0.0);
    for (x, y) in ra.iter().zip(&rb) {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    (va > 0.0 && vb > 0.0).then(|| cov / (va * vb).sqrt())
}

/// Gap table of `dominant` against `other`.
#[derive(Clone, Debug)]
pub struct DominanceReport<C> {
    /// Range sorted by utility, highest first, ties in range order.
    pub ordered_range: Vec<C>,
    pub ts: Vec<usize>,
    /// `gaps[i][j] = other(t_i, r_j) - dominant(t_i, r_j)` along `ordered_range`.
    pub gaps: Vec<Vec<f64>>,
    pub dominates: bool,
    /// `(t, position in ordered_range)` of the first broken link.
    pub first_violation: Option<(usize, usize)>,
}

/// `t = 0..=min(n, 8)`.
pub fn default_ts(database_size: usize) -> Vec<usize> {
    (0..=database_size.min(8)).collect()
}

/// Does `dominant` dominate `other` on the instance at the given distances?
pub fn check_dominance<D: ?Sized + 'static, C: Clone + 'static>(
    dominant: &SensitivityFunction<D, C>,
    other: &SensitivityFunction<D, C>,
    problem: &SelectionProblem<'_, D, C>,
    ts: &[usize],
) -> DominanceReport<C> {
    let utilities = problem.utilities();
    let mut order: Vec<usize> = (0..utilities.len()).collect();
    order.sort_by(|&a, &b| {
        utilities[b]
            .partial_cmp(&utilities[a])
            .unwrap_or(Ordering::Equal)
    });
    let x = problem.database();
    let len = ts.iter().max().map_or(0, |m| m + 1);
    let range = problem.range();
    let gap_profiles: Vec<Vec<f64>> = order
        .iter()
        .map(|&i| {
            let a = dominant.profile(x, &range[i], len);
            let b = other.profile(x, &range[i], len);
            b.iter().zip(&a).map(|(b, a)| b - a).collect()
        })
        .collect();
    let mut gaps = Vec::with_capacity(ts.len());
    let mut first_violation = None;
    for &t in ts {
        let column: Vec<f64> = gap_profiles.iter().map(|g| g[t]).collect();
        if first_violation.is_none() {
            let scale = column.iter().fold(1.0f64, |m, g| m.max(g.abs()));
            let tol = GAP_TOLERANCE * scale;
            for (j, g) in column.iter().enumerate() {
                let increases = j > 0 && *g > column[j - 1] + tol;
                if *g < -tol || increases {
                    first_violation = Some((t, j));
                    break;
                }
            }
        }
        gaps.push(column);
    }
    DominanceReport {
        ordered_range: order.iter().map(|&i| range[i].clone()).collect(),
        ts: ts.to_vec(),
        gaps,
        dominates: first_violation.is_none(),
        first_violation,
    }
}

/// Exact error comparison of two shifted-local-dampening instances.
#[derive(Clone, Debug)]
pub struct AccuracyOrderReport {
    pub expected_error_dominant: f64,
    pub expected_error_other: f64,
    /// `(θ, Pr_dominant[E >= θ], Pr_other[E >= θ])`.
    pub tails: Vec<(f64, f64, f64)>,
    pub passed: bool,
}

pub const ACCURACY_TOLERANCE: f64 = 1e-9;

/// Compares exact SLD errors when `dominant` dominates `other`.
///
/// Refuses with a contract error unless both functions are stable on the
/// instance and dominance holds at `t = 0..=min(n, 8)`.
pub fn accuracy_order_check<D, C>(
    dominant: &SensitivityFunction<D, C>,
    other: &SensitivityFunction<D, C>,
    problem: &SelectionProblem<'_, D, C>,
    epsilon: f64,
) -> Result<AccuracyOrderReport>
where
    D: ?Sized + Sync + 'static,
    C: Clone + PartialEq + Send + Sync + 'static,
{
    let ts = default_ts(problem.database_size());
    for (name, f) in [("dominant", dominant), ("other", other)] {
        if !f.is_stable() {
            return Err(Error::contract(format!(
                "{name} function is not declared admissible, bounded and monotonic"
            )));
        }
        let measured = check_monotonicity(f, problem, &ts).class;
        if !measured.is_monotonic() {
            return Err(Error::contract(format!(
                "{name} function is not monotonic on this instance"
            )));
        }
    }
    let report = check_dominance(dominant, other, problem, &ts);
    if let Some((t, j)) = report.first_violation {
        return Err(Error::contract(format!(
            "dominance fails at t = {t}, utility position {j}"
        )));
    }
    let da = shifted_local_dampening_distribution(problem, dominant, epsilon)?;
    let db = shifted_local_dampening_distribution(problem, other, epsilon)?;
    let expected_error_dominant = expected_error(&da, problem)?;
    let expected_error_other = expected_error(&db, problem)?;
    let utilities = problem.utilities();
    let best = utilities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut thresholds: Vec<f64> = utilities
        .iter()
        .map(|u| best - u)
        .filter(|e| *e > 0.0)
        .collect();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();
    let mut passed = expected_error_dominant <= expected_error_other + ACCURACY_TOLERANCE;
    let mut tails = Vec::with_capacity(thresholds.len());
    for theta in thresholds {
        let pa = error_tail(&da, problem, theta)?;
        let pb = error_tail(&db, problem, theta)?;
        passed &= pa <= pb + ACCURACY_TOLERANCE;
        tails.push((theta, pa, pb));
    }
    Ok(AccuracyOrderReport {
        expected_error_dominant,
        expected_error_other,
        tails,
        passed,
    })
}
