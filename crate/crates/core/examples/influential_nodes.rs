//! Private top-k influential nodes on the bundled star forest, with the budget
//! ledger of one run.

use std::path::Path;

use dampen::graph::{load_edge_list, priv_topk, topk_accuracy, true_topk};
use dampen::mechanism::{BudgetAccountant, Epsilon, Mechanism};
use dampen::rng::rng_from_seed;

fn main() -> dampen::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/star_forest.txt");
    let (g, report) = load_edge_list(&path)?;
    let k = 3;
    println!(
        "{} nodes, {} edges, true top-{k}: {:?}",
        g.len(),
        report.edges,
        true_topk(&g, k)
    );

    for mechanism in [Mechanism::Em, Mechanism::Ld, Mechanism::Sld, Mechanism::Pf] {
        let mut accountant = BudgetAccountant::new();
        let root = accountant.root();
        let mut rng = rng_from_seed(7);
        let picked = priv_topk(
            &g,
            Epsilon::new(3.0)?,
            k,
            mechanism,
            &mut rng,
            &mut accountant,
            root,
        )?;
        println!(
            "{mechanism:>3}: chose {:?}, accuracy {:.2}, ε per pick {}, total {}",
            picked.chosen,
            topk_accuracy(&picked.chosen, &g, k),
            picked.per_iteration_epsilon,
            accountant.total(root)?
        );
    }
    Ok(())
}
