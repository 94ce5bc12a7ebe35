//! Self-verification suites comparing closed forms against brute force.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{ebc, ebc_oracle, ebc_problem, ebc_sensitivity, EdgeFlipNeighbors, EdgeGraph};
use crate::mechanism::{
    dampen, exponential_distribution, local_dampening_distribution,
    shifted_local_dampening_distribution, BudgetAccountant, Composition, Epsilon, SelectionProblem,
};
use crate::percentile::{
    bounded_percentile_sensitivity, ls0_percentile, ls_profile_percentile, percentile_problem,
    percentile_sensitivity, CriticalGridNeighbors, IntegerNeighbors, NumericVector,
    PercentileQuery,
};
use crate::rng::{derive_seed, rng_from_seed};
use crate::sensitivity::{
    bound_sensitivity, brute_element_ls, brute_ls_profiles, check_admissibility,
    NeighborEnumerator, SearchBudget, SensitivityFunction,
};
use crate::tree::{
    build_diffp_id3, build_id3, contingency_problem, global_sensitivity_ig, ls0_ig_counts,
    ls_profile_ig_counts, Attribute, Contingency, ContingencyNeighbors, LabeledTable, Row, Schema,
    TreeParams, TreeVariant,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckSuite {
    Core,
    Sensitivity,
    Percentile,
    Graph,
    Tree,
    All,
}

impl CheckSuite {
    const EACH: [CheckSuite; 5] = [
        CheckSuite::Core,
        CheckSuite::Sensitivity,
        CheckSuite::Percentile,
        CheckSuite::Graph,
        CheckSuite::Tree,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            CheckSuite::Core => "core",
            CheckSuite::Sensitivity => "sensitivity",
            CheckSuite::Percentile => "percentile",
            CheckSuite::Graph => "graph",
            CheckSuite::Tree => "tree",
            CheckSuite::All => "all",
        }
    }
}

impl fmt::Display for CheckSuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for CheckSuite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckSuite::EACH
            .into_iter()
            .chain([CheckSuite::All])
            .find(|c| c.tag() == s)
            .ok_or_else(|| Error::invalid(format!("unknown check suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub seed: u64,
    /// Random instances per check.
    pub cases: usize,
    /// Replace the sensitivity function under test by `δ ≡ 0`.
    pub inject_zero_delta: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            cases: 25,
            inject_zero_delta: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub suite: CheckSuite,
    pub name: &'static str,
    pub cases: usize,
    /// Why the check failed; `None` when it passed.
    pub witness: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(
                f,
                "PASS {}/{} ({} cases)",
                self.suite, self.name, self.cases
            ),
            Some(w) => write!(
                f,
                "FAIL {}/{} ({} cases): {w}",
                self.suite, self.name, self.cases
            ),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(CheckOutcome::passed)
    }
}

type CheckFn = fn(&mut ChaCha8Rng, &CheckOptions) -> Result<Option<String>>;

fn checks(suite: CheckSuite) -> &'static [(&'static str, CheckFn)] {
    match suite {
        CheckSuite::Core => &[
            ("em-equality", em_equality),
            ("budget-composition", budget_composition),
        ],
        CheckSuite::Sensitivity => &[
            ("admissibility", admissibility),
            ("bounded-shift", bounded_shift),
        ],
        CheckSuite::Percentile => &[
            ("ls0-grid", percentile_ls0_grid),
            ("profile-bfs", percentile_profile_bfs),
        ],
        CheckSuite::Graph => &[
            ("ebc-oracle", ebc_matches_oracle),
            ("delta-ebc-admissible", delta_ebc_admissible),
        ],
        CheckSuite::Tree => &[
            ("ig-profile-bfs", ig_profile_bfs),
            ("ig-global-bound", ig_global_bound),
            ("high-budget-id3", high_budget_id3),
        ],
        CheckSuite::All => &[],
    }
}

/// Runs a suite; every check gets its own stream derived from `seed`.
pub fn run_checks(suite: CheckSuite, options: CheckOptions) -> CheckReport {
    let suites: Vec<CheckSuite> = match suite {
        CheckSuite::All => CheckSuite::EACH.to_vec(),
        one => vec![one],
    };
    let mut report = CheckReport::default();
    for s in suites {
        for (name, check) in checks(s) {
            let mut rng = rng_from_seed(derive_seed(
                options.seed,
                &[s.tag().as_bytes(), name.as_bytes()],
            ));
            let witness = match check(&mut rng, &options) {
                Ok(w) => w,
                Err(e) => Some(format!("error: {e}")),
            };
            report.outcomes.push(CheckOutcome {
                suite: s,
                name,
                cases: options.cases,
                witness,
            });
        }
    }
    report
}

fn vector_problem(
    utilities: &[f64],
    gs: f64,
    n: usize,
) -> Result<SelectionProblem<'_, [f64], usize>> {
    SelectionProblem::new(
        utilities,
        (0..utilities.len()).collect(),
        Arc::new(|u: &[f64], r: &usize| u[*r]),
        gs,
        n,
    )
}

fn em_equality(rng: &mut ChaCha8Rng, o: &CheckOptions) -> Result<Option<String>> {
    for case in 0..o.cases {
        let m = rng.gen_range(1..=12);
        let utilities: Vec<f64> = (0..m)
            .map(|_| f64::from(rng.gen_range(-40..=40)) / 4.0)
            .collect();
        let gs = f64::from(rng.gen_range(1..=20)) / 4.0;
        let n = rng.gen_range(1..=20);
        let eps = [0.5, 1.0, 2.0][case % 3];
        let problem = vector_problem(&utilities, gs, n)?;
        let flat = SensitivityFunction::global(gs);
        let em = exponential_distribution(&problem, eps)?.probabilities();
        let ld = local_dampening_distribution(&problem, &flat, eps)?.probabilities();
        let sld =
            shifted_local_dampening_distribution(&problem, &bound_sensitivity(&flat, gs, n), eps)?
                .probabilities();
        for (i, p) in em.iter().enumerate() {
            if (p - ld[i]).abs() > 1e-12 || (p - sld[i]).abs() > 1e-12 {
                return Ok(Some(format!(
                    "utilities {utilities:?}, Δu {gs}, ε {eps}: candidate {i} EM {p} LD {} SLD {}",
                    ld[i], sld[i]
                )));
            }
        }
        if (em.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Ok(Some(format!(
                "EM probabilities on {utilities:?} do not sum to 1"
            )));
        }
    }
    Ok(None)
}

fn budget_composition(rng: &mut ChaCha8Rng, o: &CheckOptions) -> Result<Option<String>> {
    for _ in 0..o.cases {
        let value = rng.gen_range(0.01..10.0);
        let k = rng.gen_range(1..=50u64);
        let eps = Epsilon::new(value)?;
        let part = eps.split(k)?;
        let mut acc = BudgetAccountant::new();
        let seq = acc.open_scope(acc.root(), "sequential", Composition::Sequential)?;
        let par = acc.open_scope(acc.root(), "parallel", Composition::Parallel)?;
        for _ in 0..k {
            acc.account(seq, part)?;
            acc.account(par, part)?;
        }
        if !acc.total(seq)?.equals_exactly(value) || acc.total(par)? != part {
            return Ok(Some(format!(
                "ε = {value} split {k} ways does not compose back"
            )));
        }
    }
    Ok(None)
}

fn random_vector(rng: &mut ChaCha8Rng, max_len: usize, lambda: u32) -> Result<NumericVector> {
    let n = rng.gen_range(1..=max_len);
    let values: Vec<f64> = (0..n)
        .map(|_| f64::from(rng.gen_range(0..=lambda)))
        .collect();
    NumericVector::new(&values, f64::from(lambda))
}

fn random_query(rng: &mut ChaCha8Rng) -> PercentileQuery {
    PercentileQuery::new(rng.gen_range(1..=100)).expect("in range")
}

fn admissibility(rng: &mut ChaCha8Rng, o: &CheckOptions) -> Result<Option<String>> {
    for _ in 0..o.cases {
        let x = random_vector(rng, 3, 6)?;
        let q = random_query(rng);
        let problem = percentile_problem(&x, q);
        let delta = if o.inject_zero_delta {
            SensitivityFunction::new(|_: &NumericVector, _, _: &usize| 0.0).declare_admissible(true)
        } else {
            percentile_sensitivity(q, None)
        };
        let report = check_admissibility(
            &delta,
            &problem,
            &IntegerNeighbors,
            1,
            SearchBudget::default(),
        )?;
        if let Some(w) = report.witness {
            return Ok(Some(format!(
                "x = {:?}, p = {}: {:?} fails at t = {}, candidate {}: needs {} but δ = {}",
                x.values(),
                q.p(),
                w.condition,
                w.t,
                w.candidate,
                w.required,
                w.actual
            )));
        }
    }
    Ok(None)
}

fn bounded_shift(rng: &mut ChaCha8Rng, o: &CheckOptions) -> Result<Option<String>> {
    for _ in 0..o.cases {
        let x = random_vector(rng, 3, 6)?;
        let q = random_query(rng);
        let delta = bounded_percentile_sensitivity(&x, q, None);
        let px = percentile_problem(&x, q);
        for y in IntegerNeighbors.neighbors(&x) {
            let py = percentile_problem(&y, q);
            for r in x.labels() {
                let dx = dampen(&px, &delta, &r, px.utility(&r))?;
                let dy = dampen(&py, &delta, &r, py.utility(&r))?;
                if (dx - dy).abs() > 1.0 + 1e-9 {
                    return Ok(Some(format!(
                        "x = {:?}, y = {:?}, label {r}: D moves by {}",
                        x.values(),
                        y.values(),
                        (dx - dy).abs()
                    )));
                }
            }
        }
    }
    Ok(None)
}

fn percentile_ls0_grid(rng: &mut ChaCha8Rng, o: &CheckOptions) -> Result<Option<String>> {
    for _ in 0..o.cases {
        let x = random_vector(rng, 6, 20)?;
        let q = random_query(rng);
        let problem = percentile_problem(&x, q);
        let grid = CriticalGridNeighbors { grid: 21 };
        for r in x.labels() {
            let brute = brute_element_ls(&problem, &grid, 0, &r, SearchBudget::default())?;
            let exact = ls0_percentile(&x, q, r)?;
            if (brute - exact).abs() > 1e-9 {
                return Ok(Some(format!(
                    "x = {:?}, p = {}, label {r}: closed form {exact}, brute force {brute}",
                    x.values(),
                    q.p()
                )));
            }
        }
    }
    Ok(None)
}

fn percentile_profile_bfs(rng: &mut ChaCha8Rng, o: &CheckOptions) -> Result<Option<String>> {
    for _ in 0..o.cases {
        let x = random_vector(rng, 3, 6)?;
        let q = random_query(rng);
        let problem = percentile_problem(&x, q);
        let brute = brute_ls_profiles(&problem, &IntegerNeighbors, 2, SearchBudget::default())?;
        for (r, b) in x.labels().into_iter().zip(&brute) {
            let exact = ls_profile_percentile(&x, q, r, 3, None)?;
            if exact.iter().zip(b).any(|(e, b)| (e - b).abs() > 1e-9) {
                return Ok(Some(format!(
                    "x = {:?}, p = {}, label {r}: window search {exact:?}, BFS {b:?}",
                    x.values(),
                    q.p()
                )));
            }
        }
    }
    Ok(None)
}

fn random_graph(rng: &mut ChaCha8Rng, max_nodes: usize, density: f64) -> Result<EdgeGraph> {
    let n = rng.gen_range(2..=max_nodes);
    let mut g = EdgeGraph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

fn ebc_matches_oracle(rng: &mut ChaCha8Rng, o: &CheckOptions) -> Result<Option<String>> {
    for _ in 0..o.cases {
        let g = random_graph(rng, 10, 0.4)?;
        for v in 0..g.len() {
            let (fast, slow) = (ebc(&g, v)?, ebc_oracle(&g, v, usize::MAX)?);
            if (fast - slow).abs() > 1e-9 {
                return Ok(Some(format!(
                    "node {v} of {} nodes: {fast} vs oracle {slow}",
                    g.len()
                )));
            }
        }
    }
    Ok(None)
}

fn delta_ebc_admissible(rng: &mut ChaCha8Rng, o: &CheckOptions) -> Result<Option<String>> {
    for _ in 0..o.cases {
        let g = random_graph(rng, 5, 0.5)?;
        let problem = ebc_problem(&g, (0..g.len()).collect())?;
        let report = check_admissibility(
            &ebc_sensitivity(),
            &problem,
            &EdgeFlipNeighbors,
            2,
            SearchBudget::default(),
        )?;
        if let Some(w) = report.witness {
            return Ok(Some(format!(
                "{} nodes, {} edges: {:?} at t = {}, node {}",
                g.len(),
                g.edge_count(),
                w.condition,
                w.t,
                w.candidate
            )));
        }
    }
    Ok(None)
}

fn random_counts(
    rng: &mut ChaCha8Rng,
    values: usize,
    classes: usize,
    max_rows: u64,
) -> Vec<Vec<u64>> {
    let mut counts = vec![vec![0u64; classes]; values];
    for _ in 0..rng.gen_range(0..=max_rows) {
        counts[rng.gen_range(0..values)][rng.gen_range(0..classes)] += 1;
    }
    counts
}

fn ig_profile_bfs(rng: &mut ChaCha8Rng, o: &CheckOptions) -> Result<Option<String>> {
    for _ in 0..o.cases {
        let (values, classes) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let counts = random_counts(rng, values, classes, 5);
        let x = Contingency(counts.clone());
        let problem = contingency_problem(&x, 8)?;
        let brute = brute_ls_profiles(&problem, &ContingencyNeighbors, 2, SearchBudget::default())?;
        let exact = ls_profile_ig_counts(&counts, 3);
        if exact
            .iter()
            .zip(&brute[0])
            .any(|(e, b)| (e - b).abs() > 1e-9)
        {
            return Ok(Some(format!(
                "counts {counts:?}: closed form {exact:?}, BFS {:?}",
                brute[0]
            )));
        }
    }
    Ok(None)
}

fn ig_global_bound(rng: &mut ChaCha8Rng, o: &CheckOptions) -> Result<Option<String>> {
    for _ in 0..o.cases {
        let (values, classes) = (rng.gen_range(1..=4), rng.gen_range(1..=3));
        let counts = random_counts(rng, values, classes, 200);
        let size: u64 = counts.iter().flatten().sum();
        let (ls, bound) = (ls0_ig_counts(&counts), global_sensitivity_ig(size as usize));
        if ls > bound + 1e-12 {
            return Ok(Some(format!(
                "counts {counts:?}: LS {ls} above ΔIG {bound}"
            )));
        }
    }
    Ok(None)
}

fn high_budget_id3(_: &mut ChaCha8Rng, _: &CheckOptions) -> Result<Option<String>> {
    let schema = Arc::new(Schema::new(
        vec![
            Attribute::categorical("a1", &["0", "1"]),
            Attribute::categorical("a2", &["0", "1"]),
            Attribute::categorical("a3", &["0", "1", "2"]),
        ],
        Attribute::categorical("class", &["0", "1"]),
    )?);
    let mut rows = Vec::new();
    for (a1, a2, n) in [(0, 0, 80), (0, 1, 20), (1, 0, 80), (1, 1, 20)] {
        rows.extend((0..n).map(|i| Row::categories(&[a1, a2, i % 3], a1 ^ a2)));
    }
    let table = LabeledTable::new(schema, rows)?;
    let reference = build_id3(&table, &[0, 1, 2], 2)?;
    for variant in TreeVariant::ALL {
        let mut acc = BudgetAccountant::new();
        let root = acc.root();
        let params = TreeParams {
            depth: 2,
            epsilon: Epsilon::new(1e6)?,
            variant,
        };
        let built = build_diffp_id3(
            &table,
            &[0, 1, 2],
            params,
            &mut rng_from_seed(1),
            &mut acc,
            root,
        )?;
        if !built.tree.same_decisions(&reference) {
            return Ok(Some(format!("{variant} built {:?}", built.tree)));
        }
        if !acc.total(root)?.equals_exactly(1e6) {
            return Ok(Some(format!("{variant} spent {}", acc.total(root)?)));
        }
    }
    Ok(None)
}
