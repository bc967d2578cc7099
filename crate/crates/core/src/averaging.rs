//! Model averaging over a grid of candidate thresholds.
//!
//! Each candidate `m` contributes weight `exp(I_m / 2) / sum_j exp(I_j / 2)`
//! where `I_m` is its average log-likelihood criterion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{CandidateFit, Method};
use crate::sample::Sample;

/// Candidate exceedance counts `k_min, k_min + stride, ..., <= k_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdGrid {
    pub k_min: usize,
    pub k_max: usize,
    pub stride: usize,
}

impl Default for ThresholdGrid {
    fn default() -> Self {
        Self {
            k_min: 50,
            k_max: 500,
            stride: 1,
        }
    }
}

impl ThresholdGrid {
    /// Validated grid for a sample of size `n`.
    pub fn new(n: usize, k_min: usize, k_max: usize, stride: usize) -> Result<Self> {
        let grid = Self {
            k_min,
            k_max,
            stride,
        };
        grid.validate(n)?;
        Ok(grid)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.stride == 0 || self.k_min > self.k_max {
            return Err(Error::EmptyGrid);
        }
        if self.k_min < 2 || self.k_max >= n || self.k_min >= self.k_max {
            return Err(Error::GridOutOfRange {
                k_min: self.k_min,
                k_max: self.k_max,
                n,
            });
        }
        Ok(())
    }

    pub fn counts(&self) -> impl Iterator<Item = usize> + Clone {
        (self.k_min..=self.k_max).step_by(self.stride.max(1))
    }

    pub fn len(&self) -> usize {
        if self.stride == 0 || self.k_min > self.k_max {
            0
        } else {
            (self.k_max - self.k_min) / self.stride + 1
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Shorthand for [`ThresholdGrid::new`].
pub fn build_grid(n: usize, k_min: usize, k_max: usize, stride: usize) -> Result<ThresholdGrid> {
    ThresholdGrid::new(n, k_min, k_max, stride)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub m: usize,
    pub criterion: f64,
    pub weight: f64,
}

/// A candidate that could not be fitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skipped {
    pub m: usize,
    pub reason: String,
}

/// Normalized weights over the fitted candidates, ascending in `m`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct WeightTable {
    pub entries: Vec<WeightEntry>,
    pub skipped: Vec<Skipped>,
}

impl WeightTable {
    pub fn weight_sum(&self) -> f64 {
        self.entries.iter().map(|e| e.weight).sum()
    }
}

/// Softmax of `I_m / 2` over the given `(m, I_m)` pairs, stabilized by
/// subtracting the largest criterion.
pub fn compute_weights(criteria: &[(usize, f64)]) -> Result<WeightTable> {
    compute_weights_with_skipped(criteria, Vec::new())
}

/// As [`compute_weights`], carrying along the candidates that failed.
pub fn compute_weights_with_skipped(
    criteria: &[(usize, f64)],
    mut skipped: Vec<Skipped>,
) -> Result<WeightTable> {
    if criteria.is_empty() {
        return Err(Error::AllCandidatesFailed);
    }
    let mut sorted = criteria.to_vec();
    sorted.sort_by_key(|&(m, _)| m);
    if sorted.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::MisalignedInputs);
    }
    if sorted.iter().any(|&(_, c)| !c.is_finite()) {
        return Err(Error::MisalignedInputs);
    }
    let top = sorted
        .iter()
        .map(|&(_, c)| c)
        .fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = sorted
        .iter()
        .map(|&(_, c)| ((c - top) / 2.0).exp())
        .collect();
    let total: f64 = raw.iter().sum();
    let entries = sorted
        .iter()
        .zip(&raw)
        .map(|(&(m, criterion), &r)| WeightEntry {
            m,
            criterion,
            weight: r / total,
        })
        .collect();
    skipped.sort_by_key(|s| s.m);
    Ok(WeightTable { entries, skipped })
}

/// Aggregated estimate over the candidate grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedEstimate {
    pub alpha_bar: f64,
    /// `1 / alpha_bar`.
    pub xi_bar: f64,
    /// Weighted mean of the candidate thresholds.
    pub threshold_bar: f64,
    /// Observations strictly above `threshold_bar`.
    pub m_eff: usize,
    pub method: Method,
}

/// Weighted averages of the candidate indices and thresholds.
pub fn weighted_estimate(
    sample: &Sample,
    fits: &[CandidateFit],
    weights: &WeightTable,
    method: Method,
) -> Result<WeightedEstimate> {
    if fits.len() != weights.entries.len() || fits.is_empty() {
        return Err(Error::MisalignedInputs);
    }
    let (mut alpha_bar, mut threshold_bar) = (0.0, 0.0);
    for (fit, entry) in fits.iter().zip(&weights.entries) {
        if fit.m != entry.m {
            return Err(Error::MisalignedInputs);
        }
        alpha_bar += entry.weight * fit.alpha_hat;
        threshold_bar += entry.weight * fit.threshold;
    }
    Ok(WeightedEstimate {
        alpha_bar,
        xi_bar: alpha_bar.recip(),
        threshold_bar,
        m_eff: sample.count_above(threshold_bar),
        method,
    })
}

/// Everything produced by one run over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimation {
    pub estimate: WeightedEstimate,
    pub weights: WeightTable,
    /// Successful fits, ascending in `m`, aligned with `weights.entries`.
    pub fits: Vec<CandidateFit>,
}

fn fit_all(sample: &Sample, grid: &ThresholdGrid, method: Method) -> Vec<(usize, Result<CandidateFit>)> {
    let counts: Vec<usize> = grid.counts().collect();
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        counts
            .into_par_iter()
            .map(|m| (m, method.fit(sample, m)))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        counts.into_iter().map(|m| (m, method.fit(sample, m))).collect()
    }
}

/// Fits every grid candidate, weights the survivors and aggregates.
pub fn estimate(sample: &Sample, grid: &ThresholdGrid, method: Method) -> Result<Estimation> {
    grid.validate(sample.len())?;
    let mut fits = Vec::with_capacity(grid.len());
    let mut skipped = Vec::new();
    for (m, res) in fit_all(sample, grid, method) {
        match res {
            Ok(fit) => fits.push(fit),
            Err(e) => skipped.push(Skipped {
                m,
                reason: e.kind().to_string(),
            }),
        }
    }
    let criteria: Vec<(usize, f64)> = fits.iter().map(|f| (f.m, f.criterion)).collect();
    let weights = compute_weights_with_skipped(&criteria, skipped)?;
    let estimate = weighted_estimate(sample, &fits, &weights, method)?;
    Ok(Estimation {
        estimate,
        weights,
        fits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        assert_eq!(build_grid(2500, 50, 500, 1).unwrap().len(), 451);
        let g = build_grid(2500, 50, 500, 10).unwrap();
        assert_eq!(g.len(), 46);
        let counts: Vec<usize> = g.counts().collect();
        assert_eq!(counts.len(), 46);
        assert_eq!(counts[0], 50);
        assert_eq!(counts[1], 60);
        assert_eq!(*counts.last().unwrap(), 500);
        assert_eq!(build_grid(2500, 50, 505, 10).unwrap().counts().last(), Some(500));
    }

    #[test]
    fn grid_errors() {
        assert!(matches!(
            build_grid(400, 50, 500, 1),
            Err(Error::GridOutOfRange { .. })
        ));
        assert!(matches!(build_grid(400, 1, 50, 1), Err(Error::GridOutOfRange { .. })));
        assert_eq!(build_grid(400, 50, 100, 0), Err(Error::EmptyGrid));
        assert_eq!(build_grid(400, 100, 50, 1), Err(Error::EmptyGrid));
    }

    #[test]
    fn weight_examples() {
        let w = compute_weights(&[(10, -3.7)]).unwrap();
        assert_eq!(w.entries[0].weight, 1.0);

        let w = compute_weights(&[(10, 0.4), (20, 0.4)]).unwrap();
        assert_eq!(w.entries[0].weight, 0.5);
        assert_eq!(w.entries[1].weight, 0.5);

        let w = compute_weights(&[(20, 2.0 * 3f64.ln()), (10, 0.0)]).unwrap();
        assert_eq!(w.entries[0].m, 10);
        assert!((w.entries[0].weight - 0.25).abs() < 1e-15);
        assert!((w.entries[1].weight - 0.75).abs() < 1e-15);
    }

    #[test]
    fn weight_errors() {
        assert_eq!(compute_weights(&[]), Err(Error::AllCandidatesFailed));
        assert_eq!(
            compute_weights(&[(3, 0.0), (3, 1.0)]),
            Err(Error::MisalignedInputs)
        );
    }

    #[test]
    fn extreme_criteria_stay_finite() {
        let w = compute_weights(&[(2, 700.0), (3, -700.0), (4, 699.0)]).unwrap();
        assert!(w.entries.iter().all(|e| e.weight.is_finite()));
        assert!((w.weight_sum() - 1.0).abs() < 1e-12);
        assert!(w.entries[1].weight < 1e-300);
    }

    fn fit(m: usize, threshold: f64, alpha_hat: f64) -> CandidateFit {
        CandidateFit {
            m,
            threshold,
            alpha_hat,
            avg_loglik: 0.0,
            criterion: 0.0,
        }
    }

    #[test]
    fn weighted_arithmetic() {
        let s = Sample::new(&[1.0, 2.0, 3.0, 4.0, 5.0], false).unwrap();
        let fits = [fit(2, 3.0, 1.0), fit(3, 2.0, 2.0)];
        let w = compute_weights(&[(2, 0.0), (3, 2.0 * 3f64.ln())]).unwrap();
        let est = weighted_estimate(&s, &fits, &w, Method::Pareto).unwrap();
        assert!((est.alpha_bar - 1.75).abs() < 1e-15);
        assert!((est.xi_bar - 1.0 / 1.75).abs() < 1e-15);
        assert!((est.threshold_bar - 2.25).abs() < 1e-15);
        assert_eq!(est.m_eff, 3);
    }

    #[test]
    fn identical_alphas() {
        let s = Sample::new(&[1.0, 2.0, 3.0, 4.0, 5.0], false).unwrap();
        let fits = [fit(2, 3.0, 1.3), fit(3, 2.0, 1.3)];
        let w = compute_weights(&[(2, -0.3), (3, 5.0)]).unwrap();
        let est = weighted_estimate(&s, &fits, &w, Method::Pareto).unwrap();
        assert!((est.alpha_bar - 1.3).abs() < 1e-15);
    }

    #[test]
    fn misaligned() {
        let s = Sample::new(&[1.0, 2.0, 3.0, 4.0, 5.0], false).unwrap();
        let w = compute_weights(&[(2, 0.0), (3, 0.0)]).unwrap();
        assert_eq!(
            weighted_estimate(&s, &[fit(2, 3.0, 1.0)], &w, Method::Pareto),
            Err(Error::MisalignedInputs)
        );
        assert_eq!(
            weighted_estimate(&s, &[fit(2, 3.0, 1.0), fit(4, 1.0, 1.0)], &w, Method::Pareto),
            Err(Error::MisalignedInputs)
        );
    }

    #[test]
    fn all_candidates_failing() {
        let s = Sample::new(&[1.0, 2.0, 2.0, 2.0, 2.0, 2.0], false).unwrap();
        let grid = ThresholdGrid {
            k_min: 2,
            k_max: 4,
            stride: 1,
        };
        assert_eq!(
            estimate(&s, &grid, Method::Pareto),
            Err(Error::AllCandidatesFailed)
        );
    }

    #[test]
    fn skipped_candidates_renormalize() {
        let s = Sample::new(&[1.0, 1.5, 2.0, 3.0, 3.0, 3.0, 7.0, 9.0], false).unwrap();
        let grid = ThresholdGrid {
            k_min: 2,
            k_max: 6,
            stride: 1,
        };
        let est = estimate(&s, &grid, Method::Pareto).unwrap();
        // every m has a positive log-sum here
        assert!(est.weights.skipped.is_empty());
        let s = Sample::new(&[1.0, 1.5, 2.0, 9.0, 9.0, 9.0, 9.0, 9.0], false).unwrap();
        let est = estimate(&s, &grid, Method::Pareto).unwrap();
        let skipped: Vec<usize> = est.weights.skipped.iter().map(|s| s.m).collect();
        assert_eq!(skipped, vec![2, 3, 4]);
        assert_eq!(est.weights.skipped[0].reason, "degenerate_tail");
        assert_eq!(est.fits.len(), 2);
        assert!((est.weights.weight_sum() - 1.0).abs() < 1e-12);
    }
}
