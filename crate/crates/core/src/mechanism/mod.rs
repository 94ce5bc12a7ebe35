//! Selection mechanisms and their exact output distributions.

mod budget;
mod dampening;
mod distribution;
mod problem;
mod select;

pub use budget::{BudgetAccountant, Composition, Epsilon, LedgerEntry, ScopeId};
pub use dampening::{dampen, DampeningBreakpoints, MAX_UNBOUNDED_STEPS};
pub use distribution::{
    error_tail, expected_error, softmax, CandidateProbability, Mechanism, SelectionDistribution,
};
pub use problem::{SelectionProblem, UtilityFn};
pub(crate) use select::check_epsilon;
pub use select::{
    exponential_distribution, local_dampening_distribution, select_exponential,
    select_local_dampening, select_permute_and_flip, select_shifted_local_dampening,
    shift_constant, shifted_distribution_with_shift, shifted_local_dampening_distribution,
    PermuteAndFlip, ShiftDirection,
};
