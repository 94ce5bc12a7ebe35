//! Private ID3 decision trees with an information-gain utility.

mod id3;
mod ig;
mod io;
mod table;

pub use id3::{
    build_diffp_id3, build_id3, cross_validate, noisy_count, tree_accuracy, CrossValidation,
    DecisionTree, PrivateTree, TreeParams, TreeVariant,
};
pub use ig::{
    bounded_ig_sensitivity, candidates_ig, contingency_problem, global_sensitivity_ig, ig_f,
    ig_from_counts, ig_g, ig_h, ig_problem, ig_sensitivity, ig_utility, ls0_ig, ls0_ig_counts,
    ls_profile_ig_counts, ls_t_ig, ls_t_ig_candidates, ls_t_ig_counts, CandidatesCache,
    Contingency, ContingencyNeighbors,
};
pub use io::{load_table, parse_table, TableReport};
pub use table::{
    discretize, discretize_all, Attribute, AttributeKind, Cell, LabeledTable, Row, Schema,
};
