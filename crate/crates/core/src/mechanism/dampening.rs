//! The dampening function `D_{u,δ}(x, r)`.
//!
//! Breakpoints are cumulative sums of `δ(x, t, r)`. They are generated on demand
//! in doubling chunks; a bounded function switches to the arithmetic tail
//! `b(n) + (i - n)·Δu` instead of iterating.

use crate::error::{Error, Result};
use crate::mechanism::SelectionProblem;
use crate::sensitivity::{Saturation, SensitivityFunction};

/// Hard cap on breakpoints generated for an unbounded function.
pub const MAX_UNBOUNDED_STEPS: usize = 1 << 22;

const FIRST_CHUNK: usize = 8;

/// Lazily generated breakpoints `b(x, i, r)` for one candidate.
pub struct DampeningBreakpoints<'p, D: ?Sized, C> {
    database: &'p D,
    candidate: &'p C,
    delta: &'p SensitivityFunction<D, C>,
    prefix: Vec<f64>,
    saturation: Option<Saturation>,
    chunk: usize,
}

impl<'p, D: ?Sized, C> DampeningBreakpoints<'p, D, C> {
    pub fn new(
        problem: &SelectionProblem<'p, D, C>,
        delta: &'p SensitivityFunction<D, C>,
        candidate: &'p C,
    ) -> Result<Self> {
        let saturation = resolve_saturation(problem, delta)?;
        Ok(Self {
            database: problem.database(),
            candidate,
            delta,
            prefix: vec![0.0],
            saturation,
            chunk: FIRST_CHUNK,
        })
    }

    /// Per-index increment once the function has saturated.
    pub fn tail_step(&self) -> Option<f64> {
        self.saturation.map(|s| s.step)
    }

    /// `b(x, i, r)`, mirrored for negative `i`.
    pub fn breakpoint(&mut self, i: i64) -> Result<f64> {
        let k = i.unsigned_abs() as usize;
        let b = match self.saturation {
            Some(s) if k >= s.size => {
                self.fill_to(s.size)?;
                self.prefix[s.size] + (k - s.size) as f64 * s.step
            }
            _ => {
                self.fill_to(k)?;
                self.prefix[k]
            }
        };
        Ok(if i < 0 { -b } else { b })
    }

    /// `D(u)` for a utility value of this candidate.
    pub fn dampen(&mut self, utility: f64) -> Result<f64> {
        if !utility.is_finite() {
            return Err(Error::invalid(format!(
                "utility must be finite, got {utility}"
            )));
        }
        if utility == 0.0 {
            return Ok(0.0);
        }
        let a = utility.abs();
        let mut i = 0usize;
        let magnitude = loop {
            if let Some(s) = self.saturation {
                if i == s.size {
                    break s.size as f64 + (a - self.prefix[i]) / s.step;
                }
            } else if i >= MAX_UNBOUNDED_STEPS {
                return Err(Error::Resource(format!(
                    "dampening needed more than {MAX_UNBOUNDED_STEPS} breakpoints for |u| = {a}"
                )));
            }
            self.fill_to(i + 1)?;
            let (lo, hi) = (self.prefix[i], self.prefix[i + 1]);
            if a < hi {
                break i as f64 + (a - lo) / (hi - lo);
            }
            i += 1;
        };
        Ok(if utility < 0.0 { -magnitude } else { magnitude })
    }

    fn fill_to(&mut self, index: usize) -> Result<()> {
        while self.prefix.len() <= index {
            let start = self.prefix.len() - 1;
            let mut end = start + self.chunk;
            if let Some(s) = self.saturation {
                end = end.min(s.size);
            }
            end = end.max(index);
            self.chunk = self.chunk.saturating_mul(2);
            let values = if self.delta.has_profile() {
                let mut all = self.delta.profile(self.database, self.candidate, end);
                if all.len() < end {
                    return Err(Error::contract(format!(
                        "sensitivity profile returned {} values, {end} requested",
                        all.len()
                    )));
                }
                all.drain(..start);
                all
            } else {
                (start..end)
                    .map(|t| self.delta.eval(self.database, t, self.candidate))
                    .collect()
            };
            for (offset, v) in values.into_iter().enumerate() {
                check_delta(v, start + offset)?;
                let last = *self.prefix.last().expect("prefix starts at b(0)");
                self.prefix.push(last + v);
            }
        }
        Ok(())
    }
}

/// Validates one sensitivity value.
pub(crate) fn check_delta(value: f64, t: usize) -> Result<()> {
    if value.is_nan() || value < 0.0 || value.is_infinite() {
        return Err(Error::contract(format!(
            "sensitivity function returned {value} at t = {t}"
        )));
    }
    Ok(())
}

/// Saturation used for a bounded function on this problem.
pub(crate) fn resolve_saturation<D: ?Sized, C>(
    problem: &SelectionProblem<'_, D, C>,
    delta: &SensitivityFunction<D, C>,
) -> Result<Option<Saturation>> {
    if !delta.is_bounded() {
        return Ok(None);
    }
    let s = delta.saturation().unwrap_or(Saturation {
        size: problem.database_size(),
        step: problem.global_sensitivity(),
    });
    if !(s.step > 0.0 && s.step.is_finite()) {
        return Err(Error::contract(
            "dampening a bounded function needs a positive global sensitivity",
        ));
    }
    Ok(Some(s))
}

/// `D_{u,δ}(x, r)` evaluated at an arbitrary utility value.
pub fn dampen<D: ?Sized, C>(
    problem: &SelectionProblem<'_, D, C>,
    delta: &SensitivityFunction<D, C>,
    candidate: &C,
    utility: f64,
) -> Result<f64> {
    DampeningBreakpoints::new(problem, delta, candidate)?.dampen(utility)
}
