//! Validated, ascending-sorted positive observations.

use crate::error::{Error, Result};

/// Positive observations sorted ascending.
///
/// Order statistics are addressed 1-based as in `x_(1) <= ... <= x_(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
    abs_applied: bool,
}

impl Sample {
    /// Validates `raw`, optionally taking absolute values first, and sorts it.
    pub fn new(raw: &[f64], take_abs: bool) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut values = Vec::with_capacity(raw.len());
        for (index, &x) in raw.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFiniteValue { index });
            }
            let x = if take_abs { x.abs() } else { x };
            if x <= 0.0 {
                return Err(Error::NonPositiveValue { index });
            }
            values.push(x);
        }
        if values.len() < 2 {
            return Err(Error::SampleTooSmall { n: values.len() });
        }
        values.sort_by(f64::total_cmp);
        Ok(Self {
            values,
            abs_applied: take_abs,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn abs_applied(&self) -> bool {
        self.abs_applied
    }

    /// The `i`-th smallest value, `1 <= i <= n`.
    pub fn order_stat(&self, i: usize) -> f64 {
        self.values[i - 1]
    }

    /// The `m` largest values, ascending.
    pub fn top(&self, m: usize) -> &[f64] {
        &self.values[self.values.len() - m..]
    }

    /// Threshold order statistic `x_(n-m)` for an exceedance count `m`.
    pub fn threshold_for(&self, m: usize) -> f64 {
        self.order_stat(self.len() - m)
    }

    /// Number of observations strictly greater than `u`.
    pub fn count_above(&self, u: f64) -> usize {
        self.len() - self.values.partition_point(|&x| x <= u)
    }

    /// Every value multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::NonPositiveParameter {
                name: "scale",
                value: c,
            });
        }
        Ok(Self {
            values: self.values.iter().map(|x| x * c).collect(),
            abs_applied: self.abs_applied,
        })
    }

    pub(crate) fn check_exceedances(&self, m: usize) -> Result<()> {
        if m < 2 || m >= self.len() {
            return Err(Error::BadExceedanceCount { m, n: self.len() });
        }
        Ok(())
    }
}

/// Convenience wrapper matching the free-function form used across the crate.
pub fn make_sample(raw: &[f64], take_abs: bool) -> Result<Sample> {
    Sample::new(raw, take_abs)
}
