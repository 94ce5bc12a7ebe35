//! Privacy budget bookkeeping under sequential and parallel composition.
//!
//! Budgets are stored as an exact rational fraction of a base value, so that
//! `ε/k` spent `k` times adds back to exactly `ε`.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// A privacy budget `base · fraction`.
#[derive(Clone, Copy, Debug)]
pub struct Epsilon {
    base: f64,
    fraction: Ratio<u64>,
}

impl Epsilon {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Self {
                base: value,
                fraction: Ratio::from_integer(1),
            })
        } else {
            Err(Error::invalid(format!(
                "epsilon must be finite and positive, got {value}"
            )))
        }
    }

    pub fn zero() -> Self {
        Self {
            base: 0.0,
            fraction: Ratio::from_integer(0),
        }
    }

    pub fn value(&self) -> f64 {
        if *self.fraction.numer() == *self.fraction.denom() {
            self.base
        } else {
            self.base * *self.fraction.numer() as f64 / *self.fraction.denom() as f64
        }
    }

    pub fn is_zero(&self) -> bool {
        *self.fraction.numer() == 0 || self.base == 0.0
    }

    /// `self / parts`.
    pub fn split(&self, parts: u64) -> Result<Self> {
        if parts == 0 {
            return Err(Error::invalid("cannot split a budget into zero parts"));
        }
        Ok(Self {
            base: self.base,
            fraction: self.fraction / parts,
        })
    }

    /// True when both budgets are exact fractions of the same base.
    fn commensurable(&self, other: &Self) -> bool {
        self.base.to_bits() == other.base.to_bits()
    }

    fn add(self, other: Self) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        if self.commensurable(&other) {
            if let (Some(n1), Some(n2)) = (
                self.fraction.numer().checked_mul(*other.fraction.denom()),
                other.fraction.numer().checked_mul(*self.fraction.denom()),
            ) {
                if let (Some(num), Some(den)) = (
                    n1.checked_add(n2),
                    self.fraction.denom().checked_mul(*other.fraction.denom()),
                ) {
                    return Self {
                        base: self.base,
                        fraction: Ratio::new(num, den),
                    };
                }
            }
        }
        Self {
            base: self.value() + other.value(),
            fraction: Ratio::from_integer(1),
        }
    }

    fn cmp_value(&self, other: &Self) -> Ordering {
        if self.commensurable(other) {
            self.fraction.cmp(&other.fraction)
        } else {
            self.value().total_cmp(&other.value())
        }
    }

    /// Exact equality with a plain value: the fraction is one and the base matches.
    pub fn equals_exactly(&self, value: f64) -> bool {
        (self.fraction == Ratio::from_integer(1) && self.base == value)
            || (self.is_zero() && value == 0.0)
    }

    pub fn sum<I: IntoIterator<Item = Epsilon>>(items: I) -> Self {
        items.into_iter().fold(Epsilon::zero(), Epsilon::add)
    }

    pub fn max<I: IntoIterator<Item = Epsilon>>(items: I) -> Self {
        items.into_iter().fold(Epsilon::zero(), |a, b| {
            if b.cmp_value(&a) == Ordering::Greater {
                b
            } else {
                a
            }
        })
    }
}

impl PartialEq for Epsilon {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.fraction == Ratio::from_integer(1) {
            write!(f, "{}", self.base)
        } else {
            write!(f, "{}·{}", self.base, self.fraction)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ScopeId(usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Composition {
    /// Mechanisms on the same data: budgets add up.
    Sequential,
    /// Mechanisms on disjoint partitions: the largest budget counts.
    Parallel,
}

#[derive(Clone, Debug)]
struct Scope {
    label: String,
    mode: Composition,
    entries: Vec<Epsilon>,
    children: Vec<ScopeId>,
}

/// One recorded spend, for reporting.
#[derive(Clone, Debug)]
pub struct LedgerEntry {
    pub scope: ScopeId,
    pub label: String,
    pub epsilon: Epsilon,
}

/// Tree of composition scopes with recorded spends.
#[derive(Clone, Debug)]
pub struct BudgetAccountant {
    scopes: Vec<Scope>,
}

impl Default for BudgetAccountant {
    fn default() -> Self {
        Self::new()
    }
}

impl BudgetAccountant {
    /// Starts with a sequential root scope.
    pub fn new() -> Self {
        Self {
            scopes: vec![Scope {
                label: "root".into(),
                mode: Composition::Sequential,
                entries: Vec::new(),
                children: Vec::new(),
            }],
        }
    }

    pub fn root(&self) -> ScopeId {
        ScopeId(0)
    }

    fn scope(&self, id: ScopeId) -> Result<&Scope> {
        self.scopes
            .get(id.0)
            .ok_or_else(|| Error::invalid(format!("unknown budget scope {}", id.0)))
    }

    pub fn open_scope(
        &mut self,
        parent: ScopeId,
        label: impl Into<String>,
        mode: Composition,
    ) -> Result<ScopeId> {
        self.scope(parent)?;
        let id = ScopeId(self.scopes.len());
        self.scopes.push(Scope {
            label: label.into(),
            mode,
            entries: Vec::new(),
            children: Vec::new(),
        });
        self.scopes[parent.0].children.push(id);
        Ok(id)
    }

    pub fn account(&mut self, scope: ScopeId, epsilon: Epsilon) -> Result<()> {
        self.scope(scope)?;
        if epsilon.is_zero() {
            return Err(Error::invalid("spent budget must be positive"));
        }
        self.scopes[scope.0].entries.push(epsilon);
        Ok(())
    }

    /// Composed total of a scope and everything under it.
    pub fn total(&self, scope: ScopeId) -> Result<Epsilon> {
        let s = self.scope(scope)?;
        let mut parts = s.entries.clone();
        for child in &s.children {
            parts.push(self.total(*child)?);
        }
        Ok(match s.mode {
            Composition::Sequential => Epsilon::sum(parts),
            Composition::Parallel => Epsilon::max(parts),
        })
    }

    pub fn mode(&self, scope: ScopeId) -> Result<Composition> {
        Ok(self.scope(scope)?.mode)
    }

    /// Every recorded spend in scope-creation order.
    pub fn ledger(&self) -> Vec<LedgerEntry> {
        self.scopes
            .iter()
            .enumerate()
            .flat_map(|(i, s)| {
                s.entries.iter().map(move |e| LedgerEntry {
                    scope: ScopeId(i),
                    label: s.label.clone(),
                    epsilon: *e,
                })
            })
            .collect()
    }
}
