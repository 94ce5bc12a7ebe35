use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::mechanism::{
    expected_error, exponential_distribution, local_dampening_distribution,
    shifted_local_dampening_distribution, Mechanism, SelectionDistribution, SelectionProblem,
};
use crate::percentile::{
    bounded_percentile_sensitivity, percentile_problem, NumericVector, PercentileQuery,
};
use crate::sensitivity::{flatten_sensitivity, tabulate_sensitivity, SensitivityFunction};

/// Exact single-pick distributions over record labels for one vector and query.
///
/// Element sensitivities are computed once, on first use. Local dampening
/// uses their flattened maximum; shifted local dampening uses them per label.
pub struct PercentileSelection<'a> {
    problem: SelectionProblem<'a, NumericVector, usize>,
    query: PercentileQuery,
    horizon: Option<usize>,
    sensitivities: OnceLock<Sensitivities>,
}

struct Sensitivities {
    element: SensitivityFunction<NumericVector, usize>,
    flat: SensitivityFunction<NumericVector, usize>,
}

impl<'a> PercentileSelection<'a> {
    /// `horizon` caps the exact sensitivity search; later distances use `Λ`.
    pub fn new(x: &'a NumericVector, query: PercentileQuery, horizon: Option<usize>) -> Self {
        Self {
            problem: percentile_problem(x, query),
            query,
            horizon,
            sensitivities: OnceLock::new(),
        }
    }

    fn sensitivities(&self) -> &Sensitivities {
        self.sensitivities.get_or_init(|| {
            let x = self.problem.database();
            let bounded = bounded_percentile_sensitivity(x, self.query, self.horizon);
            let element = tabulate_sensitivity(&bounded, &self.problem, x.len());
            let flat = flatten_sensitivity(&element, &self.problem);
            Sensitivities { element, flat }
        })
    }

    pub fn problem(&self) -> &SelectionProblem<'a, NumericVector, usize> {
        &self.problem
    }

    /// Permute-and-flip has no closed form and is rejected.
    pub fn distribution(
        &self,
        mechanism: Mechanism,
        epsilon: f64,
    ) -> Result<SelectionDistribution<usize>> {
        match mechanism {
            Mechanism::Em => exponential_distribution(&self.problem, epsilon),
            Mechanism::Ld => {
                local_dampening_distribution(&self.problem, &self.sensitivities().flat, epsilon)
            }
            Mechanism::Sld => shifted_local_dampening_distribution(
                &self.problem,
                &self.sensitivities().element,
                epsilon,
            ),
            Mechanism::Pf => Err(Error::invalid(
                "permute-and-flip has no closed-form distribution",
            )),
        }
    }

    pub fn expected_error(&self, mechanism: Mechanism, epsilon: f64) -> Result<f64> {
        expected_error(&self.distribution(mechanism, epsilon)?, &self.problem)
    }
}
