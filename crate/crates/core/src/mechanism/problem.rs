use std::collections::HashSet;
use std::hash::Hash;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Score of a candidate on a database. Must be deterministic.
pub type UtilityFn<D, C> = Arc<dyn Fn(&D, &C) -> f64 + Send + Sync>;

/// A database, a finite candidate range and a utility over it.
pub struct SelectionProblem<'a, D: ?Sized, C> {
    database: &'a D,
    range: Vec<C>,
    utility: UtilityFn<D, C>,
    global_sensitivity: f64,
    database_size: usize,
}

impl<D: ?Sized, C: Clone> Clone for SelectionProblem<'_, D, C> {
    fn clone(&self) -> Self {
        Self {
            database: self.database,
            range: self.range.clone(),
            utility: Arc::clone(&self.utility),
            global_sensitivity: self.global_sensitivity,
            database_size: self.database_size,
        }
    }
}

impl<'a, D: ?Sized, C: Clone + Eq + Hash> SelectionProblem<'a, D, C> {
    pub fn new(
        database: &'a D,
        range: Vec<C>,
        utility: UtilityFn<D, C>,
        global_sensitivity: f64,
        database_size: usize,
    ) -> Result<Self> {
        if range.is_empty() {
            return Err(Error::invalid("candidate range is empty"));
        }
        let mut seen = HashSet::with_capacity(range.len());
        if !range.iter().all(|c| seen.insert(c)) {
            return Err(Error::invalid("candidate range contains duplicates"));
        }
        if !(global_sensitivity.is_finite() && global_sensitivity >= 0.0) {
            return Err(Error::invalid(format!(
                "global sensitivity must be finite and nonnegative, got {global_sensitivity}"
            )));
        }
        if database_size == 0 {
            return Err(Error::invalid("database size must be at least 1"));
        }
        Ok(Self {
            database,
            range,
            utility,
            global_sensitivity,
            database_size,
        })
    }

    /// Same problem with a smaller candidate range.
    pub fn with_range(&self, range: Vec<C>) -> Result<Self> {
        Self::new(
            self.database,
            range,
            Arc::clone(&self.utility),
            self.global_sensitivity,
            self.database_size,
        )
    }
}

impl<'a, D: ?Sized, C> SelectionProblem<'a, D, C> {
    /// Same utility and range evaluated on another database.
    pub fn rebind<'b>(&self, database: &'b D) -> SelectionProblem<'b, D, C>
    where
        C: Clone,
    {
        SelectionProblem {
            database,
            range: self.range.clone(),
            utility: Arc::clone(&self.utility),
            global_sensitivity: self.global_sensitivity,
            database_size: self.database_size,
        }
    }

    pub fn database(&self) -> &'a D {
        self.database
    }

    pub fn range(&self) -> &[C] {
        &self.range
    }

    pub fn global_sensitivity(&self) -> f64 {
        self.global_sensitivity
    }

    pub fn database_size(&self) -> usize {
        self.database_size
    }

    pub fn utility_fn(&self) -> &UtilityFn<D, C> {
        &self.utility
    }

    pub fn utility(&self, candidate: &C) -> f64 {
        (self.utility)(self.database, candidate)
    }

    pub fn utility_on(&self, database: &D, candidate: &C) -> f64 {
        (self.utility)(database, candidate)
    }

    /// Utilities in range order.
    pub fn utilities(&self) -> Vec<f64> {
        self.range.iter().map(|c| self.utility(c)).collect()
    }
}

/// Largest utility in a slice.
pub(crate) fn best_utility(utilities: &[f64]) -> f64 {
    utilities.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}
