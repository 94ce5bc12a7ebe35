use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

/// One value with a stable label.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Record {
    pub label: usize,
    pub value: f64,
}

/// Values in `[0, Λ]`, kept sorted by `(value, label)`.
///
/// Labels are `0..n` and name the record at that rank in the vector the
/// labels were first assigned from; they survive value replacement.
#[derive(Clone, Debug)]
pub struct NumericVector {
    records: Vec<Record>,
    /// `position[label]` is the record's index in `records`.
    position: Vec<usize>,
    lambda: f64,
}

impl NumericVector {
    /// Labels records by their rank in `values`.
    pub fn new(values: &[f64], lambda: f64) -> Result<Self> {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let records = sorted
            .into_iter()
            .enumerate()
            .map(|(label, value)| Record { label, value })
            .collect();
        Self::from_records(records, lambda)
    }

    /// Takes records whose labels form a permutation of `0..n`.
    pub fn from_records(mut records: Vec<Record>, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::invalid(format!(
                "lambda must be finite and positive, got {lambda}"
            )));
        }
        if records.is_empty() {
            return Err(Error::invalid("a numeric vector needs at least one record"));
        }
        let n = records.len();
        let mut seen = vec![false; n];
        for r in &mut records {
            if !(r.value >= 0.0 && r.value <= lambda) {
                return Err(Error::invalid(format!(
                    "value {} of record {} is outside [0, {lambda}]",
                    r.value, r.label
                )));
            }
            if r.label >= n || std::mem::replace(&mut seen[r.label], true) {
                return Err(Error::invalid(format!(
                    "labels must be a permutation of 0..{n}"
                )));
            }
            // Collapses -0.0 so that hashing agrees with value order.
            r.value += 0.0;
        }
        records.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.label.cmp(&b.label)));
        let mut position = vec![0; n];
        for (i, r) in records.iter().enumerate() {
            position[r.label] = i;
        }
        Ok(Self {
            records,
            position,
            lambda,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Records in ascending order.
    pub fn records(&self) -> &[Record] {
        &self.records
    }

    /// Values in ascending order.
    pub fn values(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.value).collect()
    }

    /// Labels in ascending value order.
    pub fn labels(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.label).collect()
    }

    fn check_label(&self, label: usize) -> Result<()> {
        if label < self.len() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "record label {label} out of range 0..{}",
                self.len()
            )))
        }
    }

    pub fn value_of(&self, label: usize) -> Result<f64> {
        self.check_label(label)?;
        Ok(self.records[self.position[label]].value)
    }

    /// One-based rank of a record.
    pub fn rank_of(&self, label: usize) -> Result<usize> {
        self.check_label(label)?;
        Ok(self.position[label] + 1)
    }

    /// Value at a one-based rank, with `0` below and `Λ` above the ends.
    pub fn value_at_rank(&self, rank: usize) -> f64 {
        match rank {
            0 => 0.0,
            r if r > self.len() => self.lambda,
            r => self.records[r - 1].value,
        }
    }

    /// Label at a one-based rank in `1..=n`.
    pub fn label_at_rank(&self, rank: usize) -> usize {
        self.records[rank - 1].label
    }

    /// Copy with one record's value replaced, re-sorted.
    pub fn with_value(&self, label: usize, value: f64) -> Result<Self> {
        self.check_label(label)?;
        let mut records = self.records.clone();
        records[self.position[label]].value = value;
        Self::from_records(records, self.lambda)
    }
}

impl PartialEq for NumericVector {
    fn eq(&self, other: &Self) -> bool {
        self.lambda.to_bits() == other.lambda.to_bits()
            && self.records.len() == other.records.len()
            && self
                .records
                .iter()
                .zip(&other.records)
                .all(|(a, b)| a.label == b.label && a.value.to_bits() == b.value.to_bits())
    }
}

impl Eq for NumericVector {}

impl Hash for NumericVector {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.lambda.to_bits().hash(state);
        for r in &self.records {
            r.label.hash(state);
            r.value.to_bits().hash(state);
        }
    }
}

/// A percentile `p` in `1..=100`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PercentileQuery {
    p: u32,
}

impl PercentileQuery {
    pub fn new(p: u32) -> Result<Self> {
        if (1..=100).contains(&p) {
            Ok(Self { p })
        } else {
            Err(Error::invalid(format!(
                "percentile must lie in 1..=100, got {p}"
            )))
        }
    }

    pub fn median() -> Self {
        Self { p: 50 }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// `⌈p(n + 1) / 100⌉` clamped to `1..=n`.
    pub fn rank(&self, n: usize) -> usize {
        let k = (self.p as usize * (n + 1)).div_ceil(100);
        k.clamp(1, n.max(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_sorts_and_labels() {
        let x = NumericVector::new(&[6.0, 0.0, 2.0], 10.0).unwrap();
        assert_eq!(x.values(), vec![0.0, 2.0, 6.0]);
        assert_eq!(x.labels(), vec![0, 1, 2]);
        assert_eq!(x.value_at_rank(0), 0.0);
        assert_eq!(x.value_at_rank(4), 10.0);
    }

    #[test]
    fn replacement_keeps_labels() {
        let x = NumericVector::new(&[0.0, 2.0, 6.0], 10.0).unwrap();
        let y = x.with_value(0, 10.0).unwrap();
        assert_eq!(y.labels(), vec![1, 2, 0]);
        assert_eq!(y.rank_of(0).unwrap(), 3);
        assert_eq!(y.value_of(0).unwrap(), 10.0);
        assert_ne!(x, y);
        assert_eq!(y.with_value(0, 0.0).unwrap(), x);
    }

    #[test]
    fn domain_is_enforced() {
        assert!(NumericVector::new(&[11.0], 10.0).is_err());
        assert!(NumericVector::new(&[-1.0], 10.0).is_err());
        assert!(NumericVector::new(&[f64::NAN], 10.0).is_err());
        assert!(NumericVector::new(&[], 10.0).is_err());
        assert!(NumericVector::new(&[1.0], 0.0).is_err());
        let x = NumericVector::new(&[1.0], 10.0).unwrap();
        assert!(x.with_value(0, 12.0).is_err());
        assert!(x.with_value(3, 1.0).is_err());
    }

    #[test]
    fn rank_is_clamped() {
        assert_eq!(PercentileQuery::new(50).unwrap().rank(3), 2);
        assert_eq!(PercentileQuery::new(99).unwrap().rank(3), 3);
        assert_eq!(PercentileQuery::new(1).unwrap().rank(3), 1);
        assert_eq!(PercentileQuery::new(75).unwrap().rank(7), 6);
        assert!(PercentileQuery::new(0).is_err());
        assert!(PercentileQuery::new(101).is_err());
    }
}
