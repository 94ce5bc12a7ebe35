//! Sensitivity functions, their wrappers, brute-force oracles and analysis checks.

mod brute;
mod checks;
mod function;
mod wrappers;

pub use brute::{
    brute_element_ls, brute_flat_ls, brute_ls_profiles, brute_sensitivity, NeighborEnumerator,
    SearchBudget,
};
pub use checks::{
    accuracy_order_check, check_admissibility, check_dominance, check_monotonicity, default_ts,
    spearman, AccuracyOrderReport, AdmissibilityCondition, AdmissibilityReport,
    AdmissibilityWitness, DominanceReport, MonotonicityReport, ACCURACY_TOLERANCE,
};
pub use function::{
    DeltaFn, Monotonicity, PrefixSumFn, ProfileFn, Saturation, SensitivityFunction,
};
pub use wrappers::{bound_sensitivity, flatten_sensitivity, max_sensitivity, tabulate_sensitivity};
