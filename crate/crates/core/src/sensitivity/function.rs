use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// `δ(x, t, r)`.
pub type DeltaFn<D, C> = Arc<dyn Fn(&D, usize, &C) -> f64 + Send + Sync>;
/// `[δ(x, 0, r), …, δ(x, len - 1, r)]` in one call.
pub type ProfileFn<D, C> = Arc<dyn Fn(&D, &C, usize) -> Vec<f64> + Send + Sync>;
/// `Σ_{t < len} δ(x, t, r)`.
pub type PrefixSumFn<D, C> = Arc<dyn Fn(&D, &C, usize) -> f64 + Send + Sync>;

/// How a sensitivity function orders candidates relative to their utility.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Monotonicity {
    NonDecreasing,
    NonIncreasing,
    Flat,
    None,
}

impl Monotonicity {
    pub fn is_monotonic(self) -> bool {
        self != Monotonicity::None
    }
}

impl fmt::Display for Monotonicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Monotonicity::NonDecreasing => "nonDecreasing",
            Monotonicity::NonIncreasing => "nonIncreasing",
            Monotonicity::Flat => "flat",
            Monotonicity::None => "none",
        })
    }
}

impl FromStr for Monotonicity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nonDecreasing" => Ok(Monotonicity::NonDecreasing),
            "nonIncreasing" => Ok(Monotonicity::NonIncreasing),
            "flat" => Ok(Monotonicity::Flat),
            "none" => Ok(Monotonicity::None),
            other => Err(Error::invalid(format!("unknown monotonicity {other:?}"))),
        }
    }
}

/// Point after which a bounded function is constant.
///
/// `delta(x, t, r) = step` for every `t >= size`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Saturation {
    pub size: usize,
    pub step: f64,
}

/// A sensitivity function together with its declared classification.
pub struct SensitivityFunction<D: ?Sized, C> {
    eval: DeltaFn<D, C>,
    profile: Option<ProfileFn<D, C>>,
    prefix_sum: Option<PrefixSumFn<D, C>>,
    admissible: bool,
    bounded: bool,
    saturation: Option<Saturation>,
    monotonicity: Monotonicity,
}

impl<D: ?Sized, C> Clone for SensitivityFunction<D, C> {
    fn clone(&self) -> Self {
        Self {
            eval: Arc::clone(&self.eval),
            profile: self.profile.clone(),
            prefix_sum: self.prefix_sum.clone(),
            admissible: self.admissible,
            bounded: self.bounded,
            saturation: self.saturation,
            monotonicity: self.monotonicity,
        }
    }
}

impl<D: ?Sized, C> fmt::Debug for SensitivityFunction<D, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SensitivityFunction")
            .field("admissible", &self.admissible)
            .field("bounded", &self.bounded)
            .field("saturation", &self.saturation)
            .field("monotonicity", &self.monotonicity)
            .finish_non_exhaustive()
    }
}

impl<D: ?Sized + 'static, C: 'static> SensitivityFunction<D, C> {
    /// Wraps `eval` with no declared properties.
    pub fn new(eval: impl Fn(&D, usize, &C) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(eval),
            profile: None,
            prefix_sum: None,
            admissible: false,
            bounded: false,
            saturation: None,
            monotonicity: Monotonicity::None,
        }
    }

    /// The constant `Δu`: admissible, bounded and flat.
    pub fn global(global_sensitivity: f64) -> Self {
        Self::new(move |_, _, _| global_sensitivity)
            .declare_admissible(true)
            .declare_bounded(true)
            .declare_monotonicity(Monotonicity::Flat)
    }

    pub fn with_profile(
        mut self,
        profile: impl Fn(&D, &C, usize) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.profile = Some(Arc::new(profile));
        self
    }

    pub fn with_prefix_sum(
        mut self,
        prefix_sum: impl Fn(&D, &C, usize) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.prefix_sum = Some(Arc::new(prefix_sum));
        self
    }
}

impl<D: ?Sized, C> SensitivityFunction<D, C> {
    pub fn declare_admissible(mut self, admissible: bool) -> Self {
        self.admissible = admissible;
        self
    }

    pub fn declare_bounded(mut self, bounded: bool) -> Self {
        self.bounded = bounded;
        if !bounded {
            self.saturation = None;
        }
        self
    }

    pub fn declare_monotonicity(mut self, monotonicity: Monotonicity) -> Self {
        self.monotonicity = monotonicity;
        self
    }

    pub(crate) fn with_saturation(mut self, saturation: Saturation) -> Self {
        self.bounded = true;
        self.saturation = Some(saturation);
        self
    }

    pub(crate) fn drop_hooks(mut self) -> Self {
        self.profile = None;
        self.prefix_sum = None;
        self
    }

    pub fn eval(&self, database: &D, t: usize, candidate: &C) -> f64 {
        (self.eval)(database, t, candidate)
    }

    /// Values for `t = 0..len`.
    pub fn profile(&self, database: &D, candidate: &C, len: usize) -> Vec<f64> {
        match &self.profile {
            Some(p) => {
                let mut v = p(database, candidate, len);
                v.truncate(len);
                v
            }
            None => (0..len)
                .map(|t| self.eval(database, t, candidate))
                .collect(),
        }
    }

    pub fn has_profile(&self) -> bool {
        self.profile.is_some()
    }

    /// `Σ_{t < len} δ(x, t, r)`, using a closed form when one was attached.
    pub fn prefix_sum(&self, database: &D, candidate: &C, len: usize) -> f64 {
        match &self.prefix_sum {
            Some(s) => s(database, candidate, len),
            None => self.profile(database, candidate, len).iter().sum(),
        }
    }

    pub fn is_admissible(&self) -> bool {
        self.admissible
    }

    pub fn is_bounded(&self) -> bool {
        self.bounded
    }

    pub fn saturation(&self) -> Option<Saturation> {
        self.saturation
    }

    pub fn monotonicity(&self) -> Monotonicity {
        self.monotonicity
    }

    pub(crate) fn eval_fn(&self) -> &DeltaFn<D, C> {
        &self.eval
    }

    pub(crate) fn profile_fn(&self) -> Option<&ProfileFn<D, C>> {
        self.profile.as_ref()
    }

    /// Admissible, bounded and monotonic.
    pub fn is_stable(&self) -> bool {
        self.admissible && self.bounded && self.monotonicity.is_monotonic()
    }
}
