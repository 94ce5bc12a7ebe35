//! Egocentric betweenness centrality and private top-k under edge privacy.

mod ebc;
mod edge_graph;
mod io;
mod topk;

pub use ebc::{
    bounded_ebc_sensitivity, delta_ebc, delta_ebc_value, ebc, ebc_all, ebc_oracle, ebc_problem,
    ebc_problem_with_sensitivity, ebc_sensitivity, global_sensitivity_ebc, EdgeFlipNeighbors,
    ORACLE_DEGREE_CAP,
};
pub use edge_graph::EdgeGraph;
pub use io::{load_edge_list, parse_edge_list, EdgeListReport};
pub use topk::{ebc_pick_distribution, priv_topk, topk_accuracy, true_topk, TopKResult};
