use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mechanism::problem::best_utility;
use crate::mechanism::SelectionProblem;

/// Which selection mechanism produced a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mechanism {
    /// Exponential mechanism.
    Em,
    /// Permute-and-flip.
    Pf,
    /// Local dampening.
    Ld,
    /// Shifted local dampening.
    Sld,
}

impl Mechanism {
    pub const ALL: [Mechanism; 4] = [Mechanism::Em, Mechanism::Pf, Mechanism::Ld, Mechanism::Sld];

    pub fn tag(self) -> &'static str {
        match self {
            Mechanism::Em => "em",
            Mechanism::Pf => "pf",
            Mechanism::Ld => "ld",
            Mechanism::Sld => "sld",
        }
    }
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Mechanism {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "em" => Ok(Mechanism::Em),
            "pf" => Ok(Mechanism::Pf),
            "ld" => Ok(Mechanism::Ld),
            "sld" => Ok(Mechanism::Sld),
            other => Err(Error::invalid(format!(
                "unknown mechanism {other:?} (expected em, pf, ld or sld)"
            ))),
        }
    }
}

/// One candidate's share of a distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateProbability<C> {
    pub candidate: C,
    pub probability: f64,
    /// Exponent before normalisation, e.g. `ε·D/2`.
    pub score: f64,
}

/// Exact output distribution of one mechanism run.
#[derive(Clone, Debug, PartialEq)]
pub struct SelectionDistribution<C> {
    entries: Vec<CandidateProbability<C>>,
    epsilon: f64,
    mechanism: Mechanism,
}

impl<C: Clone + PartialEq> SelectionDistribution<C> {
    /// Normalises `scores` with the largest exponent subtracted first.
    pub(crate) fn from_scores(
        candidates: &[C],
        scores: Vec<f64>,
        epsilon: f64,
        mechanism: Mechanism,
    ) -> Self {
        let probabilities = softmax(&scores);
        let entries = candidates
            .iter()
            .cloned()
            .zip(scores)
            .zip(probabilities)
            .map(|((candidate, score), probability)| CandidateProbability {
                candidate,
                probability,
                score,
            })
            .collect();
        Self {
            entries,
            epsilon,
            mechanism,
        }
    }

    pub fn entries(&self) -> &[CandidateProbability<C>] {
        &self.entries
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn mechanism(&self) -> Mechanism {
        self.mechanism
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.probability).collect()
    }

    pub fn probability_of(&self, candidate: &C) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| &e.candidate == candidate)
            .map(|e| e.probability)
    }

    /// Inverse-CDF draw in range order from a single uniform variate.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &C {
        let x: f64 = rng.gen();
        let mut acc = 0.0;
        for e in &self.entries {
            acc += e.probability;
            if x < acc {
                return &e.candidate;
            }
        }
        // Rounding left a sliver above the last cumulative sum.
        &self
            .entries
            .iter()
            .rev()
            .find(|e| e.probability > 0.0)
            .unwrap_or(&self.entries[self.entries.len() - 1])
            .candidate
    }
}

/// `exp(s_i - max s) / Σ exp(s_j - max s)`.
pub fn softmax(scores: &[f64]) -> Vec<f64> {
    let top = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = scores.iter().map(|s| (s - top).exp()).collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

/// `Σ_r Pr[r]·(u* - u(x, r))`.
pub fn expected_error<D: ?Sized, C: Clone + PartialEq>(
    distribution: &SelectionDistribution<C>,
    problem: &SelectionProblem<'_, D, C>,
) -> Result<f64> {
    let errors = candidate_errors(distribution, problem)?;
    Ok(errors
        .iter()
        .zip(distribution.entries())
        .map(|(err, e)| e.probability * err)
        .sum())
}

/// `Pr[u* - u(x, M(x)) >= threshold]`.
pub fn error_tail<D: ?Sized, C: Clone + PartialEq>(
    distribution: &SelectionDistribution<C>,
    problem: &SelectionProblem<'_, D, C>,
    threshold: f64,
) -> Result<f64> {
    let errors = candidate_errors(distribution, problem)?;
    Ok(errors
        .iter()
        .zip(distribution.entries())
        .filter(|(err, _)| **err >= threshold)
        .map(|(_, e)| e.probability)
        .sum())
}

fn candidate_errors<D: ?Sized, C: Clone + PartialEq>(
    distribution: &SelectionDistribution<C>,
    problem: &SelectionProblem<'_, D, C>,
) -> Result<Vec<f64>> {
    if distribution.entries().len() != problem.range().len()
        || distribution
            .entries()
            .iter()
            .zip(problem.range())
            .any(|(e, c)| &e.candidate != c)
    {
        return Err(Error::invalid(
            "distribution does not cover the problem's range in order",
        ));
    }
    let utilities = problem.utilities();
    let best = best_utility(&utilities);
    Ok(utilities.iter().map(|u| best - u).collect())
}
