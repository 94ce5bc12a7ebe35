//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::hash::Hash;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use dampen::graph::{
    bounded_ebc_sensitivity, ebc, ebc_pick_distribution, ebc_problem, ebc_sensitivity,
    EdgeFlipNeighbors, EdgeGraph,
};
use dampen::mechanism::{
    dampen, expected_error, exponential_distribution, local_dampening_distribution,
    shifted_local_dampening_distribution, BudgetAccountant, Epsilon, Mechanism, PermuteAndFlip,
    SelectionDistribution, SelectionProblem,
};
use dampen::percentile::{
    bounded_percentile_sensitivity, ls0_percentile, ls_profile_percentile, percentile_problem,
    CriticalGridNeighbors, IntegerNeighbors, NumericVector, PercentileQuery, PercentileSelection,
};
use dampen::rng::{derive_seed, rng_from_seed};
use dampen::sensitivity::{
    accuracy_order_check, bound_sensitivity, brute_element_ls, brute_ls_profiles,
    brute_sensitivity, check_admissibility, check_monotonicity, default_ts, Monotonicity,
    NeighborEnumerator, SearchBudget, SensitivityFunction,
};
use dampen::tree::{
    build_diffp_id3, build_id3, contingency_problem, global_sensitivity_ig, ls0_ig_counts,
    ls_profile_ig_counts, ls_t_ig_candidates, Attribute, CandidatesCache, Contingency,
    ContingencyNeighbors, LabeledTable, Row, Schema, TreeParams, TreeVariant,
};

type Outcome = Result<String, String>;

fn lib<T>(r: dampen::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn rng_for(criterion: &str) -> ChaCha8Rng {
    rng_from_seed(derive_seed(2024, &[b"acceptance", criterion.as_bytes()]))
}

fn close(actual: f64, expected: f64, tol: f64, what: &str) -> Result<(), String> {
    if (actual - expected).abs() <= tol {
        Ok(())
    } else {
        Err(format!("{what} = {actual:.6}, expected {expected} ± {tol}"))
    }
}

/// Nodes `a, b, v0..v5` with `a` and `b` joined to every `v` and to each other.
fn worst_case_graph() -> EdgeGraph {
    let mut edges = vec![(0, 1)];
    for v in 2..8 {
        edges.extend([(0, v), (1, v)]);
    }
    EdgeGraph::from_edges(8, &edges).expect("valid edges")
}

/// Nodes `a, b, v0..v5`: `a` sees `v0..v3`, `b` sees `v2..v5`, plus `a-b`, `v0-v1`, `v4-v5`.
fn usual_case_graph() -> EdgeGraph {
    let edges = [
        (0, 1),
        (0, 2),
        (0, 3),
        (0, 4),
        (0, 5),
        (1, 4),
        (1, 5),
        (1, 6),
        (1, 7),
        (2, 3),
        (6, 7),
    ];
    EdgeGraph::from_edges(8, &edges).expect("valid edges")
}

fn criterion_1() -> Outcome {
    let worst = worst_case_graph();
    close(lib(ebc(&worst, 0))?, 7.5, 0.005, "ebc(a) worst case")?;
    close(
        lib(ebc(&worst.with_flipped(0, 1), 0))?,
        15.0,
        0.005,
        "ebc(a) without a-b",
    )?;
    let g = lib(usual_case_graph().with_degree_bound(6))?;
    close(lib(ebc(&g, 0))?, 6.5, 0.005, "ebc(a) usual case")?;

    let problem = lib(ebc_problem(&g, (0..8).collect()))?;
    close(problem.global_sensitivity(), 7.5, 0.0, "Δu")?;
    let profiles = lib(brute_ls_profiles(
        &problem,
        &EdgeFlipNeighbors,
        1,
        SearchBudget::default(),
    ))?;
    let flat: Vec<f64> = (0..2)
        .map(|t| profiles.iter().map(|p| p[t]).fold(0.0, f64::max))
        .collect();
    close(flat[0], 3.0, 0.005, "LS(G, 0)")?;
    close(flat[1], 5.0, 0.005, "LS(G, 1)")?;
    close(profiles[6][0], 2.0, 0.005, "LS(G, 0, v4)")?;

    let gs = problem.global_sensitivity();
    let ls = SensitivityFunction::new(move |_: &EdgeGraph, t, _: &usize| {
        flat.get(t).copied().unwrap_or(gs)
    })
    .declare_admissible(true)
    .declare_monotonicity(Monotonicity::Flat);
    close(lib(dampen(&problem, &ls, &0, 6.5))?, 1.7, 0.005, "D(a)")?;

    let check_probs = |d: &SelectionDistribution<usize>, hub: f64, leaf: f64, name: &str| {
        let p = d.probabilities();
        close(p[0], hub, 0.005, &format!("{name} Pr[a]"))?;
        close(p[1], hub, 0.005, &format!("{name} Pr[b]"))?;
        for (i, q) in p.iter().enumerate().skip(2) {
            close(*q, leaf, 0.005, &format!("{name} Pr[v{}]", i - 2))?;
        }
        Ok::<_, String>(p)
    };
    let ld = check_probs(
        &lib(local_dampening_distribution(&problem, &ls, 2.0))?,
        0.32,
        0.06,
        "LD",
    )?;
    let em = check_probs(
        &lib(exponential_distribution(&problem, 2.0))?,
        0.22,
        0.09,
        "EM",
    )?;
    Ok(format!(
        "ebc 7.5/15/6.5, LS 3/5/2, D(a) 1.7, LD Pr[a] {:.4}, EM Pr[a] {:.4}",
        ld[0], em[0]
    ))
}

fn vector_problem(utilities: &[f64], gs: f64, n: usize) -> SelectionProblem<'_, [f64], usize> {
    SelectionProblem::new(
        utilities,
        (0..utilities.len()).collect(),
        Arc::new(|u: &[f64], r: &usize| u[*r]),
        gs,
        n,
    )
    .expect("valid problem")
}

fn criterion_2() -> Outcome {
    let mut rng = rng_for("2");
    let mut worst = 0.0f64;
    for case in 0..200 {
        let m = rng.gen_range(1..=12);
        let utilities: Vec<f64> = (0..m).map(|_| rng.gen_range(-50.0..50.0)).collect();
        let gs = rng.gen_range(0.5..20.0);
        let n = rng.gen_range(1..=30);
        let eps = rng.gen_range(0.05..5.0);
        let problem = vector_problem(&utilities, gs, n);
        let constant = SensitivityFunction::global(gs);
        let em = lib(exponential_distribution(&problem, eps))?.probabilities();
        let ld = lib(local_dampening_distribution(&problem, &constant, eps))?.probabilities();
        let sld = lib(shifted_local_dampening_distribution(
            &problem, &constant, eps,
        ))?
        .probabilities();
        for i in 0..m {
            let gap = (em[i] - ld[i]).abs().max((em[i] - sld[i]).abs());
            worst = worst.max(gap);
            if gap > 1e-12 {
                return Err(format!(
                    "case {case}, candidate {i}: EM {} LD {} SLD {}",
                    em[i], ld[i], sld[i]
                ));
            }
        }
    }
    Ok(format!("200 problems, max probability gap {worst:.2e}"))
}

/// Largest `|D(x, r) - D(y, r)|` over `y` one step from `x` and every candidate.
fn max_dampening_shift<D, C>(
    px: &SelectionProblem<'_, D, C>,
    neighbors: &[SelectionProblem<'_, D, C>],
    delta: &SensitivityFunction<D, C>,
) -> Result<f64, String>
where
    D: Clone + Eq + Hash + 'static,
    C: Clone + Eq + Hash + 'static,
{
    let mut worst = 0.0f64;
    for r in px.range() {
        let dx = lib(dampen(px, delta, r, px.utility(r)))?;
        for py in neighbors {
            let dy = lib(dampen(py, delta, r, py.utility(r)))?;
            worst = worst.max((dx - dy).abs());
        }
    }
    Ok(worst)
}

fn random_vector(rng: &mut ChaCha8Rng, max_len: usize, lambda: u32) -> NumericVector {
    let n = rng.gen_range(1..=max_len);
    let values: Vec<f64> = (0..n)
        .map(|_| f64::from(rng.gen_range(0..=lambda)))
        .collect();
    NumericVector::new(&values, f64::from(lambda)).expect("values inside the domain")
}

fn random_query(rng: &mut ChaCha8Rng) -> PercentileQuery {
    PercentileQuery::new(rng.gen_range(1..=100)).expect("valid percentile")
}

fn random_graph(rng: &mut ChaCha8Rng, nodes: std::ops::RangeInclusive<usize>) -> EdgeGraph {
    let n = rng.gen_range(nodes);
    let mut g = EdgeGraph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.5) {
                g.add_edge(u, v).expect("valid edge");
            }
        }
    }
    g.with_degree_bound(n.saturating_sub(1))
        .expect("bound covers every degree")
}

fn random_counts(rng: &mut ChaCha8Rng, max_rows: u64) -> Vec<Vec<u64>> {
    let (values, classes) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
    let mut counts = vec![vec![0u64; classes]; values];
    for _ in 0..rng.gen_range(0..=max_rows) {
        counts[rng.gen_range(0..values)][rng.gen_range(0..classes)] += 1;
    }
    counts
}

fn criterion_3() -> Outcome {
    let mut rng = rng_for("3");
    let budget = SearchBudget::default();
    let (mut pairs, mut worst) = (0usize, 0.0f64);
    let mut record = |shift: f64, count: usize, what: String| -> Result<(), String> {
        pairs += count;
        worst = worst.max(shift);
        if shift > 1.0 + 1e-9 {
            return Err(format!("{what}: |D(x,r) - D(y,r)| = {shift}"));
        }
        Ok(())
    };

    for _ in 0..100 {
        let x = random_vector(&mut rng, 3, 4);
        let q = random_query(&mut rng);
        let px = percentile_problem(&x, q);
        let delta = bound_sensitivity(
            &brute_sensitivity(
                Arc::clone(px.utility_fn()),
                Arc::new(IntegerNeighbors),
                budget,
            ),
            x.lambda(),
            x.len(),
        );
        let ys = IntegerNeighbors.neighbors(&x);
        let pys: Vec<_> = ys.iter().map(|y| percentile_problem(y, q)).collect();
        let shift = max_dampening_shift(&px, &pys, &delta)?;
        record(
            shift,
            ys.len(),
            format!("percentile x = {:?}, p = {}", x.values(), q.p()),
        )?;
    }

    for _ in 0..100 {
        let g = random_graph(&mut rng, 3..=4);
        let all: Vec<usize> = (0..g.len()).collect();
        let px = lib(ebc_problem(&g, all.clone()))?;
        let delta = bound_sensitivity(
            &brute_sensitivity(
                Arc::clone(px.utility_fn()),
                Arc::new(EdgeFlipNeighbors),
                budget,
            ),
            px.global_sensitivity(),
            g.pair_count(),
        );
        let ys = EdgeFlipNeighbors.neighbors(&g);
        let pys = ys
            .iter()
            .map(|y| lib(ebc_problem(y, all.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let shift = max_dampening_shift(&px, &pys, &delta)?;
        record(
            shift,
            ys.len(),
            format!("graph with {} edges", g.edge_count()),
        )?;
    }

    for _ in 0..100 {
        let x = Contingency(random_counts(&mut rng, 4));
        let px = lib(contingency_problem(&x, 8))?;
        let delta = brute_sensitivity(
            Arc::clone(px.utility_fn()),
            Arc::new(ContingencyNeighbors),
            budget,
        );
        let ys = ContingencyNeighbors.neighbors(&x);
        let pys = ys
            .iter()
            .map(|y| lib(contingency_problem(y, 8)))
            .collect::<Result<Vec<_>, _>>()?;
        let shift = max_dampening_shift(&px, &pys, &delta)?;
        record(shift, ys.len(), format!("counts {:?}", x.0))?;
    }
    Ok(format!(
        "300 instances, {pairs} neighbour pairs, max shift {worst:.6}"
    ))
}

/// Largest `ln(Pr_x[r] / Pr_y[r])` over the candidates.
fn max_log_ratio<C: Clone + PartialEq>(
    px: &SelectionDistribution<C>,
    py: &SelectionDistribution<C>,
) -> f64 {
    px.probabilities()
        .iter()
        .zip(py.probabilities())
        .map(|(a, b)| (a.ln() - b.ln()).abs())
        .fold(0.0, f64::max)
}

fn criterion_4() -> Outcome {
    let mut rng = rng_for("4");
    let (mut pairs, mut worst_fraction) = (0usize, 0.0f64);
    let mut judge = |ratio: f64, eps: f64, what: &dyn Fn() -> String| -> Result<(), String> {
        pairs += 1;
        worst_fraction = worst_fraction.max(ratio / eps);
        if ratio > eps * (1.0 + 1e-9) {
            return Err(format!("{}: log ratio {ratio} exceeds ε = {eps}", what()));
        }
        Ok(())
    };
    for _ in 0..100 {
        let x = random_vector(&mut rng, 3, 4);
        let q = random_query(&mut rng);
        let px = percentile_problem(&x, q);
        let delta = bounded_percentile_sensitivity(&x, q, None);
        for y in IntegerNeighbors.neighbors(&x) {
            let py = percentile_problem(&y, q);
            for eps in [0.5, 1.0, 2.0] {
                for mechanism in [Mechanism::Em, Mechanism::Ld] {
                    let (dx, dy) = match mechanism {
                        Mechanism::Em => (
                            lib(exponential_distribution(&px, eps))?,
                            lib(exponential_distribution(&py, eps))?,
                        ),
                        _ => (
                            lib(local_dampening_distribution(&px, &delta, eps))?,
                            lib(local_dampening_distribution(&py, &delta, eps))?,
                        ),
                    };
                    judge(max_log_ratio(&dx, &dy), eps, &|| {
                        format!("{mechanism} on {:?} vs {:?}", x.values(), y.values())
                    })?;
                }
            }
        }
    }
    for _ in 0..100 {
        let g = random_graph(&mut rng, 3..=4);
        let all: Vec<usize> = (0..g.len()).collect();
        let px = lib(ebc_problem(&g, all.clone()))?;
        let delta = bounded_ebc_sensitivity(&g);
        for y in EdgeFlipNeighbors.neighbors(&g) {
            let py = lib(ebc_problem(&y, all.clone()))?;
            for eps in [0.5, 1.0, 2.0] {
                for mechanism in [Mechanism::Em, Mechanism::Ld] {
                    let (dx, dy) = match mechanism {
                        Mechanism::Em => (
                            lib(exponential_distribution(&px, eps))?,
                            lib(exponential_distribution(&py, eps))?,
                        ),
                        _ => (
                            lib(local_dampening_distribution(&px, &delta, eps))?,
                            lib(local_dampening_distribution(&py, &delta, eps))?,
                        ),
                    };
                    judge(max_log_ratio(&dx, &dy), eps, &|| {
                        format!("{mechanism} on a {}-node graph", g.len())
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "{pairs} (pair, ε, mechanism) checks, largest log ratio {worst_fraction:.4}·ε"
    ))
}

fn beta_family(beta: f64, gs: f64, n: usize) -> SensitivityFunction<[f64], usize> {
    let raw = SensitivityFunction::new(move |u: &[f64], t, r: &usize| u[*r] * t as f64 / beta)
        .declare_admissible(true)
        .declare_monotonicity(Monotonicity::NonDecreasing);
    bound_sensitivity(&raw, gs, n)
}

fn criterion_5() -> Outcome {
    let (mut sweep, mut pairs, mut element_ls) = (Vec::new(), Vec::new(), Vec::new());
    let utilities = [10.0, 20.0, 30.0];
    let (gs, n) = (100.0, 10);
    let problem = vector_problem(&utilities, gs, n);
    let betas = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0];
    let family: Vec<_> = betas.iter().map(|&b| beta_family(b, gs, n)).collect();
    let mut errors = Vec::new();
    for delta in &family {
        let d = lib(shifted_local_dampening_distribution(&problem, delta, 1.0))?;
        errors.push(lib(expected_error(&d, &problem))?);
    }
    for (i, pair) in errors.windows(2).enumerate() {
        if pair[1] > pair[0] + 1e-9 {
            sweep.push(format!(
                "E[err] rises from {:.9} at β = {} to {:.9} at β = {}",
                pair[0],
                betas[i],
                pair[1],
                betas[i + 1]
            ));
        }
    }
    let (mut beta_checked, mut beta_refused) = (0usize, 0usize);
    for i in 0..family.len() {
        for j in 0..i {
            match accuracy_order_check(&family[i], &family[j], &problem, 1.0) {
                Ok(report) => {
                    beta_checked += 1;
                    if !report.passed {
                        pairs.push(format!(
                            "β {} vs {}: E[err] {:.9} vs {:.9}",
                            betas[i],
                            betas[j],
                            report.expected_error_dominant,
                            report.expected_error_other
                        ));
                    }
                }
                Err(_) => beta_refused += 1,
            }
        }
    }

    let mut rng = rng_for("5");
    let (mut stable, mut refused) = (0usize, 0usize);
    for _ in 0..200 {
        let g = random_graph(&mut rng, 3..=4);
        let all: Vec<usize> = (0..g.len()).collect();
        let p = lib(ebc_problem(&g, all))?;
        let gs = p.global_sensitivity();
        if gs <= 0.0 {
            continue;
        }
        let element = bound_sensitivity(
            &brute_sensitivity(
                Arc::clone(p.utility_fn()),
                Arc::new(EdgeFlipNeighbors),
                SearchBudget::default(),
            ),
            gs,
            g.pair_count(),
        );
        let class = check_monotonicity(&element, &p, &default_ts(g.pair_count())).class;
        let element = element.declare_monotonicity(class);
        match accuracy_order_check(&element, &SensitivityFunction::global(gs), &p, 1.0) {
            Ok(report) => {
                stable += 1;
                if !report.passed {
                    element_ls.push(format!(
                        "element LS vs Δu on {} edges: {:.9} vs {:.9}",
                        g.edge_count(),
                        report.expected_error_dominant,
                        report.expected_error_other
                    ));
                }
            }
            Err(_) => refused += 1,
        }
    }
    if stable == 0 {
        element_ls.push("no stable element-LS instance was generated".into());
    }
    let trend: Vec<String> = errors.iter().map(|e| format!("{e:.4}")).collect();
    let summary = format!(
        "β-family E[err] over β = {betas:?}: [{}], {beta_checked} pairs checked, {beta_refused} refused; \
         element LS vs Δu: {stable} stable instances, {refused} refused",
        trend.join(", ")
    );
    let violations: Vec<String> = [
        ("sweep", &sweep),
        ("β pairs", &pairs),
        ("element LS", &element_ls),
    ]
    .iter()
    .filter(|(_, v)| !v.is_empty())
    .map(|(name, v)| format!("{name}: {} violations, first {}", v.len(), v[0]))
    .collect();
    if violations.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; {}", violations.join("; ")))
    }
}

fn criterion_6() -> Outcome {
    let mut rng = rng_for("6");
    let grid = CriticalGridNeighbors { grid: 64 };
    let budget = SearchBudget::default();
    let mut labels = 0usize;
    for _ in 0..500 {
        let n = rng.gen_range(1..=8);
        let values: Vec<f64> = (0..n)
            .map(|_| (rng.gen_range(0.0..100.0f64) * 4.0).round() / 4.0)
            .collect();
        let x = NumericVector::new(&values, 100.0).expect("values inside the domain");
        let q = random_query(&mut rng);
        let problem = percentile_problem(&x, q);
        for r in x.labels() {
            let brute = lib(brute_element_ls(&problem, &grid, 0, &r, budget))?;
            let closed = lib(ls0_percentile(&x, q, r))?;
            labels += 1;
            if (brute - closed).abs() > 1e-9 {
                return Err(format!(
                    "x = {values:?}, p = {}, label {r}: ls0 {closed}, brute force {brute}",
                    q.p()
                ));
            }
        }
    }
    let mut profiles = 0usize;
    for _ in 0..100 {
        let x = random_vector(&mut rng, 5, 6);
        let q = random_query(&mut rng);
        let problem = percentile_problem(&x, q);
        let brute = lib(brute_ls_profiles(&problem, &IntegerNeighbors, 2, budget))?;
        for (r, b) in x.labels().into_iter().zip(&brute) {
            let exact = lib(ls_profile_percentile(&x, q, r, 3, None))?;
            profiles += 1;
            if exact.iter().zip(b).any(|(e, b)| (e - b).abs() > 1e-9) {
                return Err(format!(
                    "x = {:?}, p = {}, label {r}: profile {exact:?}, BFS {b:?}",
                    x.values(),
                    q.p()
                ));
            }
        }
    }
    Ok(format!(
        "{labels} labels at t = 0 on 500 vectors, {profiles} profiles for t ≤ 2"
    ))
}

/// Every `values × classes` table with exactly `rows` rows.
fn all_tables(values: usize, classes: usize, rows: u64) -> Vec<Vec<Vec<u64>>> {
    fn fill(cells: usize, left: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cells == 1 {
            acc.push(left);
            out.push(acc.clone());
            acc.pop();
            return;
        }
        for v in 0..=left {
            acc.push(v);
            fill(cells - 1, left - v, acc, out);
            acc.pop();
        }
    }
    let mut flat = Vec::new();
    fill(values * classes, rows, &mut Vec::new(), &mut flat);
    flat.into_iter()
        .map(|f| f.chunks(classes).map(<[u64]>::to_vec).collect())
        .collect()
}

fn criterion_7() -> Outcome {
    let mut rng = rng_for("7");
    let budget = SearchBudget::default();
    let mut undershoots = 0usize;
    for _ in 0..200 {
        let counts = random_counts(&mut rng, 6);
        let x = Contingency(counts.clone());
        let size = counts.iter().flatten().sum::<u64>() as usize;
        let problem = lib(contingency_problem(&x, size))?;
        let brute = lib(brute_ls_profiles(
            &problem,
            &ContingencyNeighbors,
            3,
            budget,
        ))?;
        let exact = ls_profile_ig_counts(&counts, 4);
        if exact
            .iter()
            .zip(&brute[0])
            .any(|(e, b)| (e - b).abs() > 1e-9)
        {
            return Err(format!(
                "counts {counts:?}: closed form {exact:?}, exhaustive {:?}",
                brute[0]
            ));
        }
        if ls0_ig_counts(&counts) > global_sensitivity_ig(size) + 1e-12 {
            return Err(format!("counts {counts:?}: LS above ΔIG"));
        }
        let mut cache = CandidatesCache::new();
        for t in 0..=3 {
            let cand = lib(ls_t_ig_candidates(&counts, t, &mut cache))?;
            if (cand - brute[0][t]).abs() > 1e-9 {
                undershoots += 1;
            }
        }
    }

    let n = 6u64;
    let mut worst = (0.0f64, Vec::new());
    for values in 1..=3 {
        for classes in 1..=3 {
            for counts in all_tables(values, classes, n) {
                let ls = ls0_ig_counts(&counts);
                if ls > worst.0 {
                    worst = (ls, counts);
                }
            }
        }
    }
    let bound = global_sensitivity_ig(n as usize);
    let detail = format!(
        "profiles match exhaustive search on 200 tables for t ≤ 3 ({undershoots} of 800 candidate-set values differ); \
         worst case over all 6-row tables up to 3×3: LS {:.6} at {:?} vs ΔIG {:.6}",
        worst.0, worst.1, bound
    );
    if (worst.0 - bound).abs() <= 1e-9 {
        Ok(detail)
    } else {
        Err(format!("{detail}; gap {:.6}", bound - worst.0))
    }
}

fn criterion_8() -> Outcome {
    let mut rng = rng_for("8");
    let delta = ebc_sensitivity();
    for case in 0..100 {
        let g = random_graph(&mut rng, 2..=6);
        let problem = lib(ebc_problem(&g, (0..g.len()).collect()))?;
        let report = lib(check_admissibility(
            &delta,
            &problem,
            &EdgeFlipNeighbors,
            2,
            SearchBudget::default(),
        ))?;
        if let Some(w) = report.witness {
            return Err(format!(
                "graph {case} ({} nodes): {:?} at t = {}, node {}",
                g.len(),
                w.condition,
                w.t,
                w.candidate
            ));
        }
    }
    Ok("100 graphs up to 6 nodes, t ≤ 2".into())
}

/// Five disjoint stars with 12, 10, 8, 6 and 4 leaves.
fn star_forest() -> EdgeGraph {
    let mut edges = Vec::new();
    let mut next = 0;
    for leaves in [12, 10, 8, 6, 4] {
        let hub = next;
        for l in 1..=leaves {
            edges.push((hub, hub + l));
        }
        next += leaves + 1;
    }
    EdgeGraph::from_edges(next, &edges).expect("valid edges")
}

/// Mean error and standard error of permute-and-flip over `runs` draws.
fn pf_mean_error(
    utilities: &[f64],
    gs: f64,
    eps: f64,
    runs: usize,
    stream: &str,
) -> Result<(f64, f64), String> {
    let best = utilities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sampler = lib(PermuteAndFlip::new(utilities, gs, eps))?;
    let mut rng = rng_for(stream);
    let errors: Vec<f64> = (0..runs)
        .map(|_| best - utilities[sampler.sample(&mut rng)])
        .collect();
    let mean = errors.iter().sum::<f64>() / runs as f64;
    let var = errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (runs as f64 - 1.0);
    Ok((mean, (var / runs as f64).sqrt()))
}

fn criterion_9() -> Outcome {
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    let mut order = |app: &str, eps: f64, sld: f64, ld: f64, em: f64, pf: (f64, f64)| {
        lines.push(format!(
            "{app} ε={eps}: SLD {sld:.4} LD {ld:.4} EM {em:.4} PF {:.4}±{:.4}",
            pf.0, pf.1
        ));
        if sld > ld + 1e-9 || ld > em + 1e-9 {
            failures.push(format!("{app} ε={eps}: SLD {sld:.6} LD {ld:.6} EM {em:.6}"));
        }
        if pf.0 > em + 3.0 * pf.1 {
            failures.push(format!("{app} ε={eps}: PF {} above EM {em} + 3σ", pf.0));
        }
    };

    let mut rng = rng_for("9-values");
    let values: Vec<f64> = (0..61)
        .map(|i| {
            if i % 10 == 0 {
                rng.gen_range(0.0..1000.0f64).round()
            } else {
                (500.0 + rng.gen_range(-20.0..20.0f64)).round()
            }
        })
        .collect();
    let x = NumericVector::new(&values, 1000.0).expect("values inside the domain");
    for p in [50, 90] {
        let query = PercentileQuery::new(p).expect("valid percentile");
        let selection = PercentileSelection::new(&x, query, None);
        let problem = selection.problem();
        let class = check_monotonicity(
            &bounded_percentile_sensitivity(&x, query, None),
            problem,
            &default_ts(x.len()),
        )
        .class;
        let app = format!("percentile p{p} (δ monotonicity {class:?})");
        for eps in [0.1, 1.0, 10.0] {
            let err = |m| lib(selection.expected_error(m, eps));
            let stream = format!("9-pf-percentile-{p}");
            let pf = pf_mean_error(
                &problem.utilities(),
                problem.global_sensitivity(),
                eps,
                100_000,
                &stream,
            )?;
            order(
                &app,
                eps,
                err(Mechanism::Sld)?,
                err(Mechanism::Ld)?,
                err(Mechanism::Em)?,
                pf,
            );
        }
    }

    let g = star_forest();
    let problem = lib(ebc_problem(&g, (0..g.len()).collect()))?;
    for eps in [0.1, 1.0, 10.0] {
        let err = |m| {
            lib(ebc_pick_distribution(&problem, m, eps).and_then(|d| expected_error(&d, &problem)))
        };
        let pf = pf_mean_error(
            &problem.utilities(),
            problem.global_sensitivity(),
            eps,
            100_000,
            "9-pf-ebc",
        )?;
        order(
            "single-pick EBC",
            eps,
            err(Mechanism::Sld)?,
            err(Mechanism::Ld)?,
            err(Mechanism::Em)?,
            pf,
        );
    }
    if failures.is_empty() {
        Ok(lines.join("; "))
    } else {
        Err(format!(
            "{} of {} orderings violated: {}",
            failures.len(),
            lines.len() * 2,
            failures.join("; ")
        ))
    }
}

fn xor_table() -> LabeledTable {
    let schema = Schema::new(
        vec![
            Attribute::categorical("a1", &["0", "1"]),
            Attribute::categorical("a2", &["0", "1"]),
            Attribute::categorical("a3", &["0", "1", "2"]),
        ],
        Attribute::categorical("class", &["no", "yes"]),
    )
    .expect("valid schema");
    let mut rows = Vec::new();
    for (a1, a2, count) in [(0, 0, 80), (0, 1, 20), (1, 0, 80), (1, 1, 20)] {
        rows.extend((0..count).map(|i| Row::categories(&[a1, a2, i % 3], a1 ^ a2)));
    }
    LabeledTable::new(Arc::new(schema), rows).expect("valid rows")
}

/// Six binary attributes, class = parity of the first three; 200 rows.
fn six_attribute_table() -> LabeledTable {
    let names = ["b1", "b2", "b3", "b4", "b5", "b6"];
    let schema = Schema::new(
        names
            .iter()
            .map(|n| Attribute::categorical(*n, &["0", "1"]))
            .collect(),
        Attribute::categorical("class", &["0", "1"]),
    )
    .expect("valid schema");
    let rows = (0..200usize)
        .map(|i| {
            let bits: Vec<usize> = (0..6).map(|b| ((i % 64) >> b) & 1).collect();
            Row::categories(&bits, bits[0] ^ bits[1] ^ bits[2])
        })
        .collect();
    LabeledTable::new(Arc::new(schema), rows).expect("valid rows")
}

fn criterion_10() -> Outcome {
    let eps = Epsilon::new(1e6).expect("positive");
    let toy = xor_table();
    let reference = lib(build_id3(&toy, &[0, 1, 2], 2))?;
    let wide = six_attribute_table();
    let attributes: Vec<usize> = (0..6).collect();
    for variant in TreeVariant::ALL {
        for (table, attrs, depth) in [
            (&toy, &[0usize, 1, 2][..], 2usize),
            (&wide, &attributes[..], 5),
        ] {
            let mut acc = BudgetAccountant::new();
            let root = acc.root();
            let params = TreeParams {
                depth,
                epsilon: eps,
                variant,
            };
            let mut rng =
                rng_from_seed(derive_seed(10, &[variant.tag().as_bytes(), &[depth as u8]]));
            let built = lib(build_diffp_id3(
                table, attrs, params, &mut rng, &mut acc, root,
            ))?;
            if depth == 2 && !built.tree.same_decisions(&reference) {
                return Err(format!("{variant} at depth 2 built {:?}", built.tree));
            }
            let total = lib(acc.total(root))?;
            if total != eps {
                return Err(format!(
                    "{variant} at depth {depth}: ledger total {total}, expected ε = 1e6"
                ));
            }
            if built.tree.depth() != depth {
                return Err(format!(
                    "{variant} at depth {depth}: tree depth {}",
                    built.tree.depth()
                ));
            }
        }
    }
    Ok(format!(
        "{} rows, all variants match ID3 at depth 2; ledger totals exactly ε at depths 2 and 5",
        toy.len()
    ))
}

struct Criterion {
    id: u8,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "worked-example replication",
            limit: Duration::from_secs(1),
            run: criterion_1,
        },
        Criterion {
            id: 2,
            name: "EM-instance equality",
            limit: Duration::from_secs(5),
            run: criterion_2,
        },
        Criterion {
            id: 3,
            name: "bounded-shift property",
            limit: Duration::from_secs(30),
            run: criterion_3,
        },
        Criterion {
            id: 4,
            name: "ε-indistinguishability",
            limit: Duration::from_secs(30),
            run: criterion_4,
        },
        Criterion {
            id: 5,
            name: "dominance implies accuracy order",
            limit: Duration::from_secs(10),
            run: criterion_5,
        },
        Criterion {
            id: 6,
            name: "percentile LS vs oracle",
            limit: Duration::from_secs(60),
            run: criterion_6,
        },
        Criterion {
            id: 7,
            name: "IG sensitivity",
            limit: Duration::from_secs(60),
            run: criterion_7,
        },
        Criterion {
            id: 8,
            name: "δ^EBC admissibility",
            limit: Duration::from_secs(60),
            run: criterion_8,
        },
        Criterion {
            id: 9,
            name: "desk-scale trends",
            limit: Duration::from_secs(120),
            run: criterion_9,
        },
        Criterion {
            id: 10,
            name: "tree end to end",
            limit: Duration::from_secs(30),
            run: criterion_10,
        },
    ];
    let only: Option<u8> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for c in criteria.iter().filter(|c| only.is_none_or(|id| id == c.id)) {
        let started = Instant::now();
        let outcome = (c.run)();
        let elapsed = started.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= c.limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("over the {:?} limit; {d}", c.limit)),
            Err(d) => ("FAIL", d),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {status} {} ({:.2}s): {detail}",
            c.id,
            c.name,
            elapsed.as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
