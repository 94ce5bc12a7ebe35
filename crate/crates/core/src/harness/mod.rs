//! Dataset loading, experiment grids, result output and verification suites.

mod checks;
mod dataset;
mod emit;
mod run;
mod spec;

pub use checks::{run_checks, CheckOptions, CheckOutcome, CheckReport, CheckSuite};
pub use dataset::{load_dataset, DatasetModel, IngestionReport};
pub use emit::{emit, parse_csv_rows, parse_json_output, render, ExperimentOutput, OutputFormat};
pub use run::{run_experiment, run_on_model};
pub use spec::{
    AppParams, Application, DatasetRef, ExperimentSpec, MetricName, ResultRow, Selector,
};
