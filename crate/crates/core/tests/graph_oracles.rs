use dampen::graph::{
    bounded_ebc_sensitivity, ebc, ebc_oracle, ebc_problem, ebc_sensitivity, EdgeFlipNeighbors,
    EdgeGraph,
};
use dampen::sensitivity::{brute_ls_profiles, check_admissibility, SearchBudget};
use proptest::prelude::*;

fn graph(n: usize, bits: &[bool]) -> EdgeGraph {
    let mut g = EdgeGraph::empty(n);
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            if bits[k] {
                g.add_edge(u, v).unwrap();
            }
            k += 1;
        }
    }
    g.with_degree_bound(n - 1).unwrap()
}

fn arb_graph(max_nodes: usize) -> impl Strategy<Value = EdgeGraph> {
    (2..=max_nodes).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| graph(n, &bits))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ebc_matches_path_enumeration(g in arb_graph(9)) {
        for v in 0..g.len() {
            let fast = ebc(&g, v).unwrap();
            let slow = ebc_oracle(&g, v, 12).unwrap();
            prop_assert!((fast - slow).abs() < 1e-9, "node {v}: {fast} vs {slow}");
        }
    }

    #[test]
    fn degree_sensitivity_is_admissible(g in arb_graph(5)) {
        let problem = ebc_problem(&g, (0..g.len()).collect()).unwrap();
        let report = check_admissibility(&ebc_sensitivity(), &problem, &EdgeFlipNeighbors, 2, SearchBudget::default()).unwrap();
        prop_assert!(report.witness.is_none(), "{:?}", report.witness);
    }

    #[test]
    fn bounded_sensitivity_covers_brute_force(g in arb_graph(5)) {
        let problem = ebc_problem(&g, (0..g.len()).collect()).unwrap();
        let delta = bounded_ebc_sensitivity(&g);
        let brute = brute_ls_profiles(&problem, &EdgeFlipNeighbors, 2, SearchBudget::default()).unwrap();
        for (v, profile) in brute.iter().enumerate() {
            for (t, ls) in profile.iter().enumerate() {
                let d = delta.eval(&g, t, &v);
                prop_assert!(d + 1e-9 >= *ls, "node {v} t {t}: δ {d} < LS {ls}");
                prop_assert!(d <= problem.global_sensitivity() + 1e-12);
            }
        }
    }
}
