use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mechanism::Mechanism;
use crate::tree::TreeVariant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Application {
    Percentile,
    Topk,
    Tree,
    MechanismCompare,
}

impl Application {
    pub fn tag(self) -> &'static str {
        match self {
            Application::Percentile => "percentile",
            Application::Topk => "topk",
            Application::Tree => "tree",
            Application::MechanismCompare => "mechanismCompare",
        }
    }

    /// Monte Carlo repetitions used when a spec leaves `runs` unset.
    pub fn default_runs(self) -> usize {
        match self {
            Application::Percentile | Application::MechanismCompare => 100_000,
            Application::Topk => 100,
            Application::Tree => 10,
        }
    }
}

impl fmt::Display for Application {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Where a dataset lives and how to read it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum DatasetRef {
    /// One value per line in `[0, lambda]`.
    Values { path: PathBuf, lambda: f64 },
    /// Whitespace-separated node pairs.
    #[serde(rename_all = "camelCase")]
    EdgeList {
        path: PathBuf,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        degree_bound: Option<usize>,
    },
    /// CSV rows with a JSON schema.
    Table { data: PathBuf, schema: PathBuf },
}

impl DatasetRef {
    /// File stem of the data file.
    pub fn name(&self) -> String {
        let path = match self {
            DatasetRef::Values { path, .. } | DatasetRef::EdgeList { path, .. } => path,
            DatasetRef::Table { data, .. } => data,
        };
        path.file_stem().map_or_else(
            || path.display().to_string(),
            |s| s.to_string_lossy().into_owned(),
        )
    }
}

/// Application-specific knobs; unused ones are ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AppParams {
    /// Percentile `p` in `1..=100`.
    pub percentile: u32,
    /// Nodes picked by top-k.
    pub k: usize,
    /// Tree depth `d`.
    pub depth: usize,
    pub folds: usize,
    /// Exact percentile sensitivities up to this distance, `Λ` beyond;
    /// exact everywhere once it reaches the dataset size.
    #[serde(default = "default_horizon")]
    pub horizon: usize,
}

fn default_horizon() -> usize {
    16
}

impl Default for AppParams {
    fn default() -> Self {
        Self {
            percentile: 50,
            k: 10,
            depth: 5,
            folds: 10,
            horizon: default_horizon(),
        }
    }
}

/// A grid of mechanisms and budgets over one dataset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentSpec {
    pub application: Application,
    pub dataset: DatasetRef,
    pub epsilons: Vec<f64>,
    /// Mechanism tags, or tree variants for the tree application.
    pub mechanisms: Vec<String>,
    pub seed: u64,
    /// Repetitions per cell; `None` uses [`Application::default_runs`].
    pub runs: Option<usize>,
    #[serde(default)]
    pub params: AppParams,
    /// Record wall-clock time per cell instead of 0.
    #[serde(default)]
    pub timing: bool,
}

/// A parsed mechanism column entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selector {
    Mechanism(Mechanism),
    Tree(TreeVariant),
}

impl Selector {
    pub fn tag(self) -> &'static str {
        match self {
            Selector::Mechanism(m) => m.tag(),
            Selector::Tree(v) => v.tag(),
        }
    }
}

impl ExperimentSpec {
    pub fn runs(&self) -> usize {
        self.runs.unwrap_or_else(|| self.application.default_runs())
    }

    /// Checks the grid and parses the mechanism list.
    pub fn validate(&self) -> Result<Vec<Selector>> {
        if self.epsilons.is_empty() {
            return Err(Error::invalid("the epsilon list is empty"));
        }
        if let Some(bad) = self.epsilons.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
            return Err(Error::invalid(format!(
                "epsilon must be finite and positive, got {bad}"
            )));
        }
        if self.runs == Some(0) {
            return Err(Error::invalid("runs must be at least 1"));
        }
        if self.mechanisms.is_empty() {
            return Err(Error::invalid("the mechanism list is empty"));
        }
        let selectors = self
            .mechanisms
            .iter()
            .map(|m| match self.application {
                Application::Tree => TreeVariant::from_str(m).map(Selector::Tree),
                _ => Mechanism::from_str(m).map(Selector::Mechanism),
            })
            .collect::<Result<Vec<_>>>()?;
        match (&self.application, &self.dataset) {
            (Application::Percentile, DatasetRef::Values { .. })
            | (Application::Topk, DatasetRef::EdgeList { .. })
            | (Application::Tree, DatasetRef::Table { .. })
            | (
                Application::MechanismCompare,
                DatasetRef::Values { .. } | DatasetRef::EdgeList { .. },
            ) => {}
            (app, data) => {
                return Err(Error::invalid(format!(
                    "application {app} cannot use dataset {}",
                    data.name()
                )));
            }
        }
        if self.application == Application::Topk && self.params.k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if self.application == Application::Tree && self.params.folds < 2 {
            return Err(Error::invalid("need at least 2 folds"));
        }
        Ok(selectors)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum MetricName {
    /// Exact `E[u* - u(M(x))]`.
    ExpectedError,
    /// Monte Carlo mean of `u* - u(M(x))`.
    MeanError,
    TopkAccuracy,
    CvAccuracy,
}

/// One aggregated measurement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ResultRow {
    pub application: Application,
    pub dataset: String,
    pub mechanism: String,
    pub epsilon: f64,
    pub metric_name: MetricName,
    pub value: f64,
    /// Standard error of a Monte Carlo mean; 0 for exact values.
    pub dispersion: f64,
    pub runtime_ms: u64,
}
