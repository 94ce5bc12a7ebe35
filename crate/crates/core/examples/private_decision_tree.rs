//! Private ID3 on the bundled toy table: one tree per variant with its budget
//! ledger, then cross-validated accuracy.

use std::path::Path;

use dampen::mechanism::{BudgetAccountant, Epsilon};
use dampen::rng::rng_from_seed;
use dampen::tree::{
    build_diffp_id3, cross_validate, discretize_all, load_table, TreeParams, TreeVariant,
};

fn main() -> dampen::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let loaded = load_table(&dir.join("xor_toy.csv"), &dir.join("xor_toy.schema.json"))?;
    let table = discretize_all(&loaded.table)?;
    let attributes: Vec<usize> = (0..table.schema().attributes().len()).collect();

    for variant in TreeVariant::ALL {
        let params = TreeParams {
            depth: 2,
            epsilon: Epsilon::new(5.0)?,
            variant,
        };
        let mut accountant = BudgetAccountant::new();
        let root = accountant.root();
        let built = build_diffp_id3(
            &table,
            &attributes,
            params,
            &mut rng_from_seed(3),
            &mut accountant,
            root,
        )?;
        let cv = cross_validate(&table, 5, params, 3)?;
        println!(
            "{variant}: depth {}, {} leaves, ledger total {}, 5-fold accuracy {:.3}",
            built.tree.depth(),
            built.tree.leaf_count(),
            accountant.total(root)?,
            cv.mean_accuracy
        );
    }
    Ok(())
}
