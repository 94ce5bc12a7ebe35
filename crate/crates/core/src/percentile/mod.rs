//! Percentile selection over values in `[0, Λ]`.

mod io;
mod neighbors;
mod select;
mod sensitivity;
mod vector;

pub use io::{load_numeric_vector, parse_numeric_values};
pub use neighbors::{CriticalGridNeighbors, IntegerNeighbors};
pub use select::PercentileSelection;
pub use sensitivity::{
    bounded_percentile_sensitivity, candidates_percentile, global_sensitivity_percentile,
    ls0_percentile, ls0_percentile_loose, ls_profile_percentile, ls_t_percentile,
    ls_t_percentile_candidates, percentile_problem, percentile_sensitivity, utility_percentile,
};
pub use vector::{NumericVector, PercentileQuery, Record};
