//! Exponential, permute-and-flip, local dampening and shifted local dampening.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mechanism::dampening::{check_delta, resolve_saturation, DampeningBreakpoints};
use crate::mechanism::problem::best_utility;
use crate::mechanism::{Mechanism, SelectionDistribution, SelectionProblem};
use crate::sensitivity::{Monotonicity, SensitivityFunction};

/// Which way shifted local dampening moves utilities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftDirection {
    /// `u - s`, for non-decreasing, flat or unclassified functions.
    Subtract,
    /// `u + s`, for non-increasing functions.
    Add,
}

impl ShiftDirection {
    pub fn for_monotonicity(m: Monotonicity) -> Self {
        match m {
            Monotonicity::NonIncreasing => ShiftDirection::Add,
            _ => ShiftDirection::Subtract,
        }
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon.is_finite() && epsilon > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "epsilon must be finite and positive, got {epsilon}"
        )))
    }
}

fn uniform<D: ?Sized, C: Clone + PartialEq>(
    problem: &SelectionProblem<'_, D, C>,
    epsilon: f64,
    mechanism: Mechanism,
) -> SelectionDistribution<C> {
    SelectionDistribution::from_scores(
        problem.range(),
        vec![0.0; problem.range().len()],
        epsilon,
        mechanism,
    )
}

/// Exact exponential-mechanism distribution, `∝ exp(ε·u / 2Δu)`.
pub fn exponential_distribution<D: ?Sized, C: Clone + PartialEq>(
    problem: &SelectionProblem<'_, D, C>,
    epsilon: f64,
) -> Result<SelectionDistribution<C>> {
    check_epsilon(epsilon)?;
    let gs = problem.global_sensitivity();
    if gs == 0.0 {
        return Ok(uniform(problem, epsilon, Mechanism::Em));
    }
    let scores = problem
        .utilities()
        .into_iter()
        .map(|u| epsilon * u / (2.0 * gs))
        .collect();
    Ok(SelectionDistribution::from_scores(
        problem.range(),
        scores,
        epsilon,
        Mechanism::Em,
    ))
}

pub fn select_exponential<D: ?Sized, C: Clone + PartialEq, R: Rng + ?Sized>(
    problem: &SelectionProblem<'_, D, C>,
    epsilon: f64,
    rng: &mut R,
) -> Result<(C, SelectionDistribution<C>)> {
    let dist = exponential_distribution(problem, epsilon)?;
    Ok((dist.sample(rng).clone(), dist))
}

/// Exact local-dampening distribution, `∝ exp(ε·D(x, r) / 2)`.
pub fn local_dampening_distribution<D, C>(
    problem: &SelectionProblem<'_, D, C>,
    delta: &SensitivityFunction<D, C>,
    epsilon: f64,
) -> Result<SelectionDistribution<C>>
where
    D: ?Sized + Sync,
    C: Clone + PartialEq + Send + Sync,
{
    check_epsilon(epsilon)?;
    if !delta.is_admissible() {
        return Err(Error::contract(
            "local dampening needs a sensitivity function declared admissible",
        ));
    }
    if problem.global_sensitivity() == 0.0 {
        return Ok(uniform(problem, epsilon, Mechanism::Ld));
    }
    let scores = problem
        .range()
        .par_iter()
        .map(|r| {
            let u = problem.utility(r);
            DampeningBreakpoints::new(problem, delta, r)?
                .dampen(u)
                .map(|d| epsilon * d / 2.0)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(SelectionDistribution::from_scores(
        problem.range(),
        scores,
        epsilon,
        Mechanism::Ld,
    ))
}

pub fn select_local_dampening<D, C, R>(
    problem: &SelectionProblem<'_, D, C>,
    delta: &SensitivityFunction<D, C>,
    epsilon: f64,
    rng: &mut R,
) -> Result<(C, SelectionDistribution<C>)>
where
    D: ?Sized + Sync,
    C: Clone + PartialEq + Send + Sync,
    R: Rng + ?Sized,
{
    let dist = local_dampening_distribution(problem, delta, epsilon)?;
    Ok((dist.sample(rng).clone(), dist))
}

fn check_shiftable<D: ?Sized, C>(delta: &SensitivityFunction<D, C>) -> Result<()> {
    if !delta.is_admissible() {
        return Err(Error::contract(
            "shifted local dampening needs a sensitivity function declared admissible",
        ));
    }
    if !delta.is_bounded() {
        return Err(Error::contract(
            "shifted local dampening needs a bounded sensitivity function; wrap it with bound_sensitivity",
        ));
    }
    Ok(())
}

/// Smallest shift after which the shifted distribution no longer changes.
///
/// `n·Δu + max u` when subtracting, `n·Δu - min u` when adding.
pub fn shift_constant<D: ?Sized, C>(
    problem: &SelectionProblem<'_, D, C>,
    delta: &SensitivityFunction<D, C>,
) -> Result<f64> {
    check_shiftable(delta)?;
    let sat = resolve_saturation(problem, delta)?.expect("bounded");
    let base = sat.size as f64 * sat.step;
    let utilities = problem.utilities();
    Ok(
        match ShiftDirection::for_monotonicity(delta.monotonicity()) {
            ShiftDirection::Subtract => base + best_utility(&utilities),
            ShiftDirection::Add => base - utilities.iter().copied().fold(f64::INFINITY, f64::min),
        },
    )
}

/// Exact shifted-local-dampening distribution (the `s → ∞` limit).
///
/// Past the shift constant every dampened score sits on the arithmetic tail,
/// so `D(u ∓ s) = (u ± b(n)) / Δu + const` and only `b(n) = Σ_{t<n} δ(t)` is
/// needed. Scores are taken relative to the first candidate so that equal
/// breakpoint sums cancel exactly.
pub fn shifted_local_dampening_distribution<D, C>(
    problem: &SelectionProblem<'_, D, C>,
    delta: &SensitivityFunction<D, C>,
    epsilon: f64,
) -> Result<SelectionDistribution<C>>
where
    D: ?Sized + Sync,
    C: Clone + PartialEq + Send + Sync,
{
    check_epsilon(epsilon)?;
    check_shiftable(delta)?;
    if problem.global_sensitivity() == 0.0 {
        return Ok(uniform(problem, epsilon, Mechanism::Sld));
    }
    let sat = resolve_saturation(problem, delta)?.expect("bounded");
    let sign = match ShiftDirection::for_monotonicity(delta.monotonicity()) {
        ShiftDirection::Subtract => 1.0,
        ShiftDirection::Add => -1.0,
    };
    let db = problem.database();
    let pairs = problem
        .range()
        .par_iter()
        .map(|r| {
            let sum = delta.prefix_sum(db, r, sat.size);
            check_delta(sum, sat.size)?;
            Ok((problem.utility(r), sum))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let (u0, b0) = pairs[0];
    let scores = pairs
        .iter()
        .map(|&(u, b)| epsilon / 2.0 * ((u - u0) + sign * (b - b0)) / sat.step)
        .collect();
    Ok(SelectionDistribution::from_scores(
        problem.range(),
        scores,
        epsilon,
        Mechanism::Sld,
    ))
}

/// Shifted local dampening evaluated by dampening `u ∓ shift` directly.
pub fn shifted_distribution_with_shift<D, C>(
    problem: &SelectionProblem<'_, D, C>,
    delta: &SensitivityFunction<D, C>,
    epsilon: f64,
    shift: f64,
) -> Result<SelectionDistribution<C>>
where
    D: ?Sized + Sync,
    C: Clone + PartialEq + Send + Sync,
{
    check_epsilon(epsilon)?;
    check_shiftable(delta)?;
    if problem.global_sensitivity() == 0.0 {
        return Ok(uniform(problem, epsilon, Mechanism::Sld));
    }
    let direction = ShiftDirection::for_monotonicity(delta.monotonicity());
    let scores = problem
        .range()
        .par_iter()
        .map(|r| {
            let u = problem.utility(r);
            let shifted = match direction {
                ShiftDirection::Subtract => u - shift,
                ShiftDirection::Add => u + shift,
            };
            DampeningBreakpoints::new(problem, delta, r)?
                .dampen(shifted)
                .map(|d| epsilon * d / 2.0)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(SelectionDistribution::from_scores(
        problem.range(),
        scores,
        epsilon,
        Mechanism::Sld,
    ))
}

pub fn select_shifted_local_dampening<D, C, R>(
    problem: &SelectionProblem<'_, D, C>,
    delta: &SensitivityFunction<D, C>,
    epsilon: f64,
    rng: &mut R,
) -> Result<(C, SelectionDistribution<C>)>
where
    D: ?Sized + Sync,
    C: Clone + PartialEq + Send + Sync,
    R: Rng + ?Sized,
{
    let dist = shifted_local_dampening_distribution(problem, delta, epsilon)?;
    Ok((dist.sample(rng).clone(), dist))
}

/// Reusable permute-and-flip sampler over fixed utilities.
#[derive(Clone, Debug)]
pub struct PermuteAndFlip {
    accept: Vec<f64>,
    order: Vec<usize>,
}

impl PermuteAndFlip {
    pub fn new(utilities: &[f64], global_sensitivity: f64, epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        if !(global_sensitivity > 0.0 && global_sensitivity.is_finite()) {
            return Err(Error::contract(
                "permute-and-flip needs a positive global sensitivity",
            ));
        }
        if utilities.is_empty() {
            return Err(Error::invalid("candidate range is empty"));
        }
        let best = best_utility(utilities);
        let accept = utilities
            .iter()
            .map(|u| (epsilon / (2.0 * global_sensitivity) * (u - best)).exp())
            .collect();
        Ok(Self {
            accept,
            order: (0..utilities.len()).collect(),
        })
    }

    /// Index of the selected candidate.
    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> usize {
        let m = self.order.len();
        for i in 0..m {
            let j = rng.gen_range(i..m);
            self.order.swap(i, j);
            let r = self.order[i];
            if rng.gen::<f64>() < self.accept[r] {
                return r;
            }
        }
        unreachable!("a maximiser is accepted with probability one")
    }
}

pub fn select_permute_and_flip<D: ?Sized, C: Clone, R: Rng + ?Sized>(
    problem: &SelectionProblem<'_, D, C>,
    epsilon: f64,
    rng: &mut R,
) -> Result<C> {
    let mut pf = PermuteAndFlip::new(&problem.utilities(), problem.global_sensitivity(), epsilon)?;
    Ok(problem.range()[pf.sample(rng)].clone())
}
