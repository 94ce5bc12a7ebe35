use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{ebc_pick_distribution, ebc_problem, priv_topk, topk_accuracy, EdgeGraph};
use crate::harness::{
    load_dataset, Application, DatasetModel, ExperimentSpec, MetricName, ResultRow, Selector,
};
use crate::mechanism::{
    expected_error, BudgetAccountant, Epsilon, Mechanism, PermuteAndFlip, SelectionProblem,
};
use crate::percentile::{PercentileQuery, PercentileSelection};
use crate::rng::{cell_rng, cell_seed};
use crate::tree::{cross_validate, LabeledTable, TreeParams};

/// Mean and standard error of the mean.
fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

struct Cell {
    selector: Selector,
    epsilon_index: usize,
    epsilon: f64,
}

struct Context<'a> {
    spec: &'a ExperimentSpec,
    runs: usize,
}

impl Context<'_> {
    fn app(&self) -> &'static str {
        self.spec.application.tag()
    }

    /// Exact error for closed-form mechanisms, Monte Carlo error for permute-and-flip.
    fn single_pick<D: ?Sized + Sync, F>(
        &self,
        cell: &Cell,
        problem: &SelectionProblem<'_, D, usize>,
        exact: F,
    ) -> Result<(MetricName, f64, f64)>
    where
        F: Fn(Mechanism) -> Result<f64>,
    {
        let Selector::Mechanism(mechanism) = cell.selector else {
            unreachable!("validated selector")
        };
        if mechanism != Mechanism::Pf {
            return Ok((MetricName::ExpectedError, exact(mechanism)?, 0.0));
        }
        let utilities = problem.utilities();
        let best = utilities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let errors = (0..self.runs)
            .into_par_iter()
            .map(|run| {
                let mut sampler =
                    PermuteAndFlip::new(&utilities, problem.global_sensitivity(), cell.epsilon)?;
                let mut rng = cell_rng(
                    self.spec.seed,
                    self.app(),
                    mechanism.tag(),
                    cell.epsilon_index,
                    run,
                );
                Ok(best - utilities[sampler.sample(&mut rng)])
            })
            .collect::<Result<Vec<f64>>>()?;
        let (mean, stderr) = mean_and_stderr(&errors);
        Ok((MetricName::MeanError, mean, stderr))
    }

    fn percentile(
        &self,
        cell: &Cell,
        selection: &PercentileSelection<'_>,
    ) -> Result<(MetricName, f64, f64)> {
        self.single_pick(cell, selection.problem(), |m| {
            selection.expected_error(m, cell.epsilon)
        })
    }

    fn single_node(&self, cell: &Cell, g: &EdgeGraph) -> Result<(MetricName, f64, f64)> {
        let problem = ebc_problem(g, (0..g.len()).collect())?;
        self.single_pick(cell, &problem, |m| {
            expected_error(&ebc_pick_distribution(&problem, m, cell.epsilon)?, &problem)
        })
    }

    fn topk(&self, cell: &Cell, g: &EdgeGraph) -> Result<(MetricName, f64, f64)> {
        let Selector::Mechanism(mechanism) = cell.selector else {
            unreachable!("validated selector")
        };
        let k = self.spec.params.k;
        if k > g.len() {
            return Err(Error::invalid(format!(
                "k = {k} exceeds the {} nodes",
                g.len()
            )));
        }
        let accuracies = (0..self.runs)
            .into_par_iter()
            .map(|run| {
                let mut rng = cell_rng(
                    self.spec.seed,
                    self.app(),
                    mechanism.tag(),
                    cell.epsilon_index,
                    run,
                );
                let mut accountant = BudgetAccountant::new();
                let root = accountant.root();
                let eps = Epsilon::new(cell.epsilon)?;
                let picked = priv_topk(g, eps, k, mechanism, &mut rng, &mut accountant, root)?;
                Ok(topk_accuracy(&picked.chosen, g, k))
            })
            .collect::<Result<Vec<f64>>>()?;
        let (mean, stderr) = mean_and_stderr(&accuracies);
        Ok((MetricName::TopkAccuracy, mean, stderr))
    }

    fn tree(&self, cell: &Cell, table: &LabeledTable) -> Result<(MetricName, f64, f64)> {
        let Selector::Tree(variant) = cell.selector else {
            unreachable!("validated selector")
        };
        let params = TreeParams {
            depth: self.spec.params.depth,
            epsilon: Epsilon::new(cell.epsilon)?,
            variant,
        };
        let accuracies = (0..self.runs)
            .into_par_iter()
            .map(|run| {
                let seed = cell_seed(
                    self.spec.seed,
                    self.app(),
                    variant.tag(),
                    cell.epsilon_index,
                    run,
                );
                Ok(cross_validate(table, self.spec.params.folds, params, seed)?.mean_accuracy)
            })
            .collect::<Result<Vec<f64>>>()?;
        let (mean, stderr) = mean_and_stderr(&accuracies);
        Ok((MetricName::CvAccuracy, mean, stderr))
    }
}

/// Runs every (mechanism, ε) cell of a spec.
///
/// Rows come out mechanism-major in the order of `spec.mechanisms`. Each repetition draws
/// from a stream seeded by the base seed, application, mechanism, ε index and
/// repetition index, so results do not depend on scheduling.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let selectors = spec.validate()?;
    let (model, _) = load_dataset(&spec.dataset)?;
    run_on_model(spec, &selectors, &model)
}

/// [`run_experiment`] on an already loaded dataset.
pub fn run_on_model(
    spec: &ExperimentSpec,
    selectors: &[Selector],
    model: &DatasetModel,
) -> Result<Vec<ResultRow>> {
    let ctx = Context {
        spec,
        runs: spec.runs(),
    };
    let dataset = spec.dataset.name();
    let selection = match model {
        DatasetModel::Numeric(x) => {
            let query = PercentileQuery::new(spec.params.percentile)?;
            Some(PercentileSelection::new(
                x,
                query,
                Some(spec.params.horizon),
            ))
        }
        _ => None,
    };
    let cells: Vec<Cell> = selectors
        .iter()
        .flat_map(|&selector| {
            spec.epsilons
                .iter()
                .enumerate()
                .map(move |(epsilon_index, &epsilon)| Cell {
                    selector,
                    epsilon_index,
                    epsilon,
                })
        })
        .collect();
    cells
        .iter()
        .map(|cell| {
            let started = Instant::now();
            let (metric_name, value, dispersion) = match (spec.application, model) {
                (
                    Application::Percentile | Application::MechanismCompare,
                    DatasetModel::Numeric(_),
                ) => ctx.percentile(cell, selection.as_ref().expect("numeric model"))?,
                (Application::MechanismCompare, DatasetModel::Graph(g)) => {
                    ctx.single_node(cell, g)?
                }
                (Application::Topk, DatasetModel::Graph(g)) => ctx.topk(cell, g)?,
                (Application::Tree, DatasetModel::Table(t)) => ctx.tree(cell, t)?,
                (app, _) => {
                    return Err(Error::invalid(format!(
                        "dataset kind does not fit application {app}"
                    )))
                }
            };
            let runtime_ms = if spec.timing {
                started.elapsed().as_millis() as u64
            } else {
                0
            };
            Ok(ResultRow {
                application: spec.application,
                dataset: dataset.clone(),
                mechanism: cell.selector.tag().to_string(),
                epsilon: cell.epsilon,
                metric_name,
                value,
                dispersion,
                runtime_ms,
            })
        })
        .collect()
}
