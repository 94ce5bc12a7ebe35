//! Private ID3 induction, a non-private reference and cross-validation.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mechanism::{
    check_epsilon, exponential_distribution, local_dampening_distribution,
    shifted_local_dampening_distribution, BudgetAccountant, Composition, Epsilon, ScopeId,
};
use crate::rng::{derive_seed, rng_from_seed};
use crate::tree::{bounded_ig_sensitivity, ig_problem, ig_utility, LabeledTable, Row};

/// Which selection mechanism picks split attributes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TreeVariant {
    /// Exponential mechanism.
    Global,
    /// Local dampening with the bounded IG sensitivity.
    Local,
    /// Shifted local dampening with the bounded IG sensitivity.
    Shifted,
}

impl TreeVariant {
    pub const ALL: [TreeVariant; 3] = [
        TreeVariant::Global,
        TreeVariant::Local,
        TreeVariant::Shifted,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            TreeVariant::Global => "global",
            TreeVariant::Local => "local",
            TreeVariant::Shifted => "shifted",
        }
    }
}

impl fmt::Display for TreeVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for TreeVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TreeVariant::ALL
            .into_iter()
            .find(|v| v.tag() == s)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown tree variant {s:?}; expected global, local or shifted"
                ))
            })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TreeParams {
    pub depth: usize,
    pub epsilon: Epsilon,
    pub variant: TreeVariant,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DecisionTree {
    Leaf {
        label: usize,
    },
    Split {
        attribute: usize,
        /// One subtree per attribute value.
        children: Vec<DecisionTree>,
        /// Label for values without a subtree.
        fallback: usize,
    },
}

impl DecisionTree {
    /// The leaf label, or the fallback of a split.
    pub fn majority(&self) -> usize {
        match self {
            DecisionTree::Leaf { label } => *label,
            DecisionTree::Split { fallback, .. } => *fallback,
        }
    }

    pub fn classify(&self, row: &Row) -> usize {
        let mut node = self;
        loop {
            match node {
                DecisionTree::Leaf { label } => return *label,
                DecisionTree::Split {
                    attribute,
                    children,
                    fallback,
                } => match row
                    .cells
                    .get(*attribute)
                    .and_then(|c| c.category())
                    .and_then(|j| children.get(j))
                {
                    Some(child) => node = child,
                    None => return *fallback,
                },
            }
        }
    }

    /// Number of splits on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        match self {
            DecisionTree::Leaf { .. } => 0,
            DecisionTree::Split { children, .. } => {
                1 + children.iter().map(Self::depth).max().unwrap_or(0)
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            DecisionTree::Leaf { .. } => 1,
            DecisionTree::Split { children, .. } => children.iter().map(Self::leaf_count).sum(),
        }
    }

    /// Whether no attribute is split on twice along any path.
    pub fn has_distinct_paths(&self) -> bool {
        fn walk(node: &DecisionTree, used: &mut Vec<usize>) -> bool {
            match node {
                DecisionTree::Leaf { .. } => true,
                DecisionTree::Split {
                    attribute,
                    children,
                    ..
                } => {
                    if used.contains(attribute) {
                        return false;
                    }
                    used.push(*attribute);
                    let ok = children.iter().all(|c| walk(c, used));
                    used.pop();
                    ok
                }
            }
        }
        walk(self, &mut Vec::new())
    }

    /// Equal split attributes and leaf labels, ignoring fallbacks.
    pub fn same_decisions(&self, other: &DecisionTree) -> bool {
        match (self, other) {
            (DecisionTree::Leaf { label: a }, DecisionTree::Leaf { label: b }) => a == b,
            (
                DecisionTree::Split {
                    attribute: a,
                    children: ca,
                    ..
                },
                DecisionTree::Split {
                    attribute: b,
                    children: cb,
                    ..
                },
            ) => {
                a == b
                    && ca.len() == cb.len()
                    && ca.iter().zip(cb).all(|(x, y)| x.same_decisions(y))
            }
            _ => false,
        }
    }
}

/// `Lap(b)` by inverse CDF.
fn laplace<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> f64 {
    let u = rng.gen::<f64>() - 0.5;
    let tail = (1.0 - 2.0 * u.abs()).max(f64::MIN_POSITIVE);
    -scale * u.signum() * tail.ln()
}

/// `count + Lap(1/ε)`.
pub fn noisy_count<R: Rng + ?Sized>(count: u64, epsilon: f64, rng: &mut R) -> Result<f64> {
    check_epsilon(epsilon)?;
    Ok(count as f64 + laplace(1.0 / epsilon, rng))
}

fn first_argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Leaf when no attribute is left, the depth is spent, or `N / (t·|C|) < √2/2`.
fn stops(size: f64, remaining: &[usize], depth: usize, table: &LabeledTable) -> bool {
    if remaining.is_empty() || depth == 0 {
        return true;
    }
    let t = remaining
        .iter()
        .map(|&a| table.schema().attributes()[a].arity().expect("categorical"))
        .max()
        .expect("nonempty");
    let classes = table.schema().class_count();
    !(size / (t * classes) as f64 >= std::f64::consts::FRAC_1_SQRT_2)
}

fn check_attributes(table: &LabeledTable, attributes: &[usize]) -> Result<()> {
    for (i, &a) in attributes.iter().enumerate() {
        let attr = table.schema().attribute(a)?;
        match attr.arity() {
            None => {
                return Err(Error::invalid(format!(
                    "attribute {} is continuous; discretize it first",
                    attr.name
                )))
            }
            Some(0) => {
                return Err(Error::invalid(format!(
                    "attribute {} has an empty domain",
                    attr.name
                )))
            }
            Some(_) => {}
        }
        if attributes[..i].contains(&a) {
            return Err(Error::invalid(format!(
                "attribute {} listed twice",
                attr.name
            )));
        }
    }
    Ok(())
}

/// A private tree and the sequential scope holding its root's spends.
#[derive(Clone, Debug)]
pub struct PrivateTree {
    pub tree: DecisionTree,
    pub scope: ScopeId,
}

struct Builder<'a> {
    params: TreeParams,
    per_stage: Epsilon,
    public_size: usize,
    base_seed: u64,
    accountant: &'a mut BudgetAccountant,
}

impl Builder<'_> {
    fn node(
        &mut self,
        table: &LabeledTable,
        remaining: &[usize],
        depth: usize,
        path: &[u8],
        parent: ScopeId,
    ) -> Result<(DecisionTree, f64, ScopeId)> {
        let scope = self
            .accountant
            .open_scope(parent, "node", Composition::Sequential)?;
        let mut rng = rng_from_seed(derive_seed(self.base_seed, &[path]));
        let eps = self.per_stage.value();
        let size = noisy_count(table.len() as u64, eps, &mut rng)?;
        self.accountant.account(scope, self.per_stage)?;
        if stops(size, remaining, depth, table) {
            let counts =
                self.accountant
                    .open_scope(scope, "class-counts", Composition::Parallel)?;
            let mut noisy = Vec::with_capacity(table.schema().class_count());
            for n in table.class_counts() {
                noisy.push(noisy_count(n, eps, &mut rng)?);
                self.accountant.account(counts, self.per_stage)?;
            }
            let label = first_argmax(&noisy);
            return Ok((DecisionTree::Leaf { label }, size, scope));
        }
        let problem = ig_problem(table, remaining.to_vec(), self.public_size)?;
        let dist = match self.params.variant {
            TreeVariant::Global => exponential_distribution(&problem, eps)?,
            TreeVariant::Local => local_dampening_distribution(
                &problem,
                &bounded_ig_sensitivity(self.public_size),
                eps,
            )?,
            TreeVariant::Shifted => shifted_local_dampening_distribution(
                &problem,
                &bounded_ig_sensitivity(self.public_size),
                eps,
            )?,
        };
        let attribute = *dist.sample(&mut rng);
        self.accountant.account(scope, self.per_stage)?;
        let rest: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&a| a != attribute)
            .collect();
        let branches = self
            .accountant
            .open_scope(scope, "children", Composition::Parallel)?;
        let mut children = Vec::new();
        let mut sizes = Vec::new();
        for (j, part) in table.partition(attribute)?.iter().enumerate() {
            let mut child_path = path.to_vec();
            child_path.extend((j as u32).to_le_bytes());
            let (child, child_size, _) =
                self.node(part, &rest, depth - 1, &child_path, branches)?;
            children.push(child);
            sizes.push(child_size);
        }
        let fallback = children[first_argmax(&sizes)].majority();
        Ok((
            DecisionTree::Split {
                attribute,
                children,
                fallback,
            },
            size,
            scope,
        ))
    }
}

/// Private ID3 over `attributes` with budget `ε`, split as `ε / (2(d + 1))` per stage.
///
/// Each node spends one noisy count and then either one attribute selection
/// or a parallel round of per-class noisy counts. Children sit in a parallel
/// scope. `ΔIG` and the dampening horizon use the size of `table`, taken as
/// public. Randomness for each node is derived from one draw of `rng` and the
/// node's path.
pub fn build_diffp_id3<R: Rng + ?Sized>(
    table: &LabeledTable,
    attributes: &[usize],
    params: TreeParams,
    rng: &mut R,
    accountant: &mut BudgetAccountant,
    parent: ScopeId,
) -> Result<PrivateTree> {
    check_attributes(table, attributes)?;
    let per_stage = params.epsilon.split(2 * (params.depth as u64 + 1))?;
    let mut builder = Builder {
        params,
        per_stage,
        public_size: table.len(),
        base_seed: rng.gen(),
        accountant,
    };
    let (tree, _, scope) = builder.node(table, attributes, params.depth, &[], parent)?;
    Ok(PrivateTree { tree, scope })
}

/// Non-private ID3 with the same stopping rule on exact counts.
///
/// Ties go to the first attribute in `attributes` and the first class.
pub fn build_id3(table: &LabeledTable, attributes: &[usize], depth: usize) -> Result<DecisionTree> {
    check_attributes(table, attributes)?;
    if stops(table.len() as f64, attributes, depth, table) {
        let counts: Vec<f64> = table.class_counts().into_iter().map(|n| n as f64).collect();
        return Ok(DecisionTree::Leaf {
            label: first_argmax(&counts),
        });
    }
    let mut best = attributes[0];
    let mut best_gain = ig_utility(table, best)?;
    for &a in &attributes[1..] {
        let gain = ig_utility(table, a)?;
        if gain > best_gain {
            best = a;
            best_gain = gain;
        }
    }
    let rest: Vec<usize> = attributes.iter().copied().filter(|&a| a != best).collect();
    let parts = table.partition(best)?;
    let children = parts
        .iter()
        .map(|p| build_id3(p, &rest, depth - 1))
        .collect::<Result<Vec<_>>>()?;
    let sizes: Vec<f64> = parts.iter().map(|p| p.len() as f64).collect();
    let fallback = children[first_argmax(&sizes)].majority();
    Ok(DecisionTree::Split {
        attribute: best,
        children,
        fallback,
    })
}

/// Fraction of rows whose class the tree predicts.
pub fn tree_accuracy(tree: &DecisionTree, table: &LabeledTable) -> f64 {
    if table.is_empty() {
        return 0.0;
    }
    let hits = table
        .rows()
        .iter()
        .filter(|r| tree.classify(r) == r.class)
        .count();
    hits as f64 / table.len() as f64
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossValidation {
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
}

/// `folds`-fold cross-validated accuracy of private ID3 over every attribute.
///
/// Rows are shuffled by a stream derived from `seed`; row `i` of the shuffle
/// is tested in fold `i mod folds`. Each fold trains with its own derived
/// stream and a fresh accountant.
pub fn cross_validate(
    table: &LabeledTable,
    folds: usize,
    params: TreeParams,
    seed: u64,
) -> Result<CrossValidation> {
    if folds < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 folds, got {folds}"
        )));
    }
    if table.len() < folds {
        return Err(Error::invalid(format!(
            "{} rows cannot fill {folds} folds",
            table.len()
        )));
    }
    let attributes: Vec<usize> = (0..table.schema().attributes().len()).collect();
    check_attributes(table, &attributes)?;
    let mut order: Vec<usize> = (0..table.len()).collect();
    order.shuffle(&mut rng_from_seed(derive_seed(seed, &[b"folds"])));
    let fold_accuracies = (0..folds)
        .into_par_iter()
        .map(|f| {
            let (test, train): (Vec<(usize, usize)>, Vec<(usize, usize)>) = order
                .iter()
                .copied()
                .enumerate()
                .partition(|(i, _)| i % folds == f);
            let train = table.select(&train.into_iter().map(|(_, r)| r).collect::<Vec<_>>());
            let test = table.select(&test.into_iter().map(|(_, r)| r).collect::<Vec<_>>());
            let mut rng = rng_from_seed(derive_seed(seed, &[b"fold", &(f as u64).to_le_bytes()]));
            let mut accountant = BudgetAccountant::new();
            let root = accountant.root();
            let built =
                build_diffp_id3(&train, &attributes, params, &mut rng, &mut accountant, root)?;
            Ok(tree_accuracy(&built.tree, &test))
        })
        .collect::<Result<Vec<f64>>>()?;
    let mean_accuracy = fold_accuracies.iter().sum::<f64>() / folds as f64;
    Ok(CrossValidation {
        fold_accuracies,
        mean_accuracy,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::tree::{Attribute, Schema};

    fn xor_table() -> LabeledTable {
        let schema = Arc::new(
            Schema::new(
                vec![
                    Attribute::categorical("a1", &["0", "1"]),
                    Attribute::categorical("a2", &["0", "1"]),
                    Attribute::categorical("a3", &["0", "1", "2"]),
                ],
                Attribute::categorical("class", &["no", "yes"]),
            )
            .unwrap(),
        );
        let mut rows = Vec::new();
        for (a1, a2, n) in [(0, 0, 80), (0, 1, 20), (1, 0, 80), (1, 1, 20)] {
            for i in 0..n {
                rows.push(Row::categories(&[a1, a2, i % 3], a1 ^ a2));
            }
        }
        LabeledTable::new(schema, rows).unwrap()
    }

    fn params(depth: usize, epsilon: f64, variant: TreeVariant) -> TreeParams {
        TreeParams {
            depth,
            epsilon: Epsilon::new(epsilon).unwrap(),
            variant,
        }
    }

    #[test]
    fn variant_names_round_trip() {
        for v in TreeVariant::ALL {
            assert_eq!(v.tag().parse::<TreeVariant>().unwrap(), v);
        }
        assert!("gini".parse::<TreeVariant>().is_err());
    }

    #[test]
    fn noisy_count_is_reproducible_and_centred() {
        let a = noisy_count(10, 0.5, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        let b = noisy_count(10, 0.5, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        assert_eq!(a, b);
        assert!(noisy_count(10, 0.0, &mut ChaCha8Rng::seed_from_u64(4)).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let eps = 0.5;
        let draws: Vec<f64> = (0..100_000)
            .map(|_| noisy_count(10, eps, &mut rng).unwrap())
            .collect();
        let mean = draws.iter().sum::<f64>() / draws.len() as f64;
        let var = draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (draws.len() - 1) as f64;
        let sd = (2.0f64).sqrt() / eps;
        assert!((mean - 10.0).abs() < 3.0 * sd / (draws.len() as f64).sqrt());
        assert!((var / (2.0 / (eps * eps)) - 1.0).abs() < 0.05);
        let sharp = noisy_count(7, 1e12, &mut rng).unwrap();
        assert!((sharp - 7.0).abs() < 1e-9);
    }

    #[test]
    fn reference_tree_splits_on_a1_then_a2() {
        let t = xor_table();
        let tree = build_id3(&t, &[0, 1, 2], 2).unwrap();
        let DecisionTree::Split {
            attribute: 0,
            children,
            ..
        } = &tree
        else {
            panic!("{tree:?}")
        };
        assert!(children
            .iter()
            .all(|c| matches!(c, DecisionTree::Split { attribute: 1, .. })));
        assert_eq!(tree_accuracy(&tree, &t), 1.0);
        assert!(tree.has_distinct_paths());
        assert_eq!(tree.depth(), 2);
        assert_eq!(tree.leaf_count(), 4);
    }

    #[test]
    fn high_budget_variants_match_the_reference() {
        let t = xor_table();
        let reference = build_id3(&t, &[0, 1, 2], 2).unwrap();
        for v in TreeVariant::ALL {
            let mut acc = BudgetAccountant::new();
            let root = acc.root();
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            let built =
                build_diffp_id3(&t, &[0, 1, 2], params(2, 1e6, v), &mut rng, &mut acc, root)
                    .unwrap();
            assert!(
                built.tree.same_decisions(&reference),
                "{v}: {:?}",
                built.tree
            );
            assert!(acc.total(root).unwrap().equals_exactly(1e6), "{v}");
        }
    }

    #[test]
    fn depth_zero_is_a_leaf_with_the_majority() {
        let t = xor_table();
        let mut acc = BudgetAccountant::new();
        let root = acc.root();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let built = build_diffp_id3(
            &t,
            &[0, 1, 2],
            params(0, 1e6, TreeVariant::Global),
            &mut rng,
            &mut acc,
            root,
        )
        .unwrap();
        assert_eq!(built.tree, DecisionTree::Leaf { label: 0 });
        assert!(acc.total(root).unwrap().equals_exactly(1e6));
        let spends = acc.ledger();
        assert_eq!(spends.len(), 3);
        let half = Epsilon::new(1e6).unwrap().split(2).unwrap();
        assert!(spends.iter().all(|e| e.epsilon == half));
    }

    #[test]
    fn per_stage_budget_at_depth_two() {
        let t = xor_table();
        let mut acc = BudgetAccountant::new();
        let root = acc.root();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        build_diffp_id3(
            &t,
            &[0, 1, 2],
            params(2, 3.0, TreeVariant::Local),
            &mut rng,
            &mut acc,
            root,
        )
        .unwrap();
        let stage = Epsilon::new(3.0).unwrap().split(6).unwrap();
        assert!(acc.ledger().iter().all(|e| e.epsilon == stage));
    }

    #[test]
    fn low_budget_trees_stay_well_formed() {
        let t = xor_table();
        for seed in 0..20 {
            for v in TreeVariant::ALL {
                let mut acc = BudgetAccountant::new();
                let root = acc.root();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let built =
                    build_diffp_id3(&t, &[0, 1, 2], params(3, 0.05, v), &mut rng, &mut acc, root)
                        .unwrap();
                assert!(built.tree.has_distinct_paths());
                assert!(built.tree.depth() <= 3);
                assert!(acc.total(root).unwrap().value() <= 0.05 + 1e-12);
            }
        }
    }

    #[test]
    fn invalid_inputs() {
        let t = xor_table();
        let mut acc = BudgetAccountant::new();
        let root = acc.root();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let p = params(2, 1.0, TreeVariant::Global);
        assert!(build_diffp_id3(&t, &[0, 0], p, &mut rng, &mut acc, root).is_err());
        assert!(build_diffp_id3(&t, &[4], p, &mut rng, &mut acc, root).is_err());
        assert!(cross_validate(&t, 1, p, 0).is_err());
    }

    #[test]
    fn unseen_values_use_the_fallback() {
        let tree = DecisionTree::Split {
            attribute: 0,
            children: vec![DecisionTree::Leaf { label: 1 }],
            fallback: 0,
        };
        assert_eq!(tree.classify(&Row::categories(&[0], 0)), 1);
        assert_eq!(tree.classify(&Row::categories(&[3], 0)), 0);
    }

    #[test]
    fn cross_validation_is_reproducible_and_accurate() {
        let t = xor_table();
        let p = params(2, 1e6, TreeVariant::Shifted);
        let a = cross_validate(&t, 10, p, 7).unwrap();
        assert_eq!(a, cross_validate(&t, 10, p, 7).unwrap());
        assert_eq!(a.fold_accuracies.len(), 10);
        assert_eq!(a.mean_accuracy, 1.0);
    }

    #[test]
    fn constant_class_accuracy_is_the_prior() {
        let t = xor_table();
        let rows: Vec<Row> = t
            .rows()
            .iter()
            .map(|r| Row::new(r.cells.clone(), 1))
            .collect();
        let constant = t.with_rows(rows);
        let cv = cross_validate(&constant, 5, params(2, 1e6, TreeVariant::Global), 3).unwrap();
        assert_eq!(cv.mean_accuracy, 1.0);
    }
}
