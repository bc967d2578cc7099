//! Replicated Monte Carlo studies of the weighted estimator.

use serde::{Deserialize, Serialize};

use crate::averaging::{estimate, ThresholdGrid};
use crate::error::{Error, Result};
use crate::fit::Method;
use crate::sample::Sample;
use crate::sampling::{sample, DistributionSpec, SeededStream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub spec: DistributionSpec,
    pub n: usize,
    pub replicates: usize,
    pub grid: ThresholdGrid,
    pub method: Method,
    pub master_seed: u64,
    pub take_abs: bool,
}

impl StudyConfig {
    /// Config with the default grid and the family's absolute-value rule.
    pub fn new(spec: DistributionSpec, n: usize, replicates: usize, method: Method, master_seed: u64) -> Self {
        Self {
            spec,
            n,
            replicates,
            grid: ThresholdGrid::default(),
            method,
            master_seed,
            take_abs: spec.default_take_abs(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if self.replicates == 0 {
            return Err(Error::BadSpec("replicates must be at least 1".into()));
        }
        self.grid.validate(self.n)
    }
}

/// Aggregates over replicates, in replicate order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyResult {
    pub alpha_true: f64,
    pub mean_alpha: f64,
    pub bias: f64,
    pub mse: f64,
    pub mean_threshold: f64,
    pub per_replicate_alphas: Vec<f64>,
    pub per_replicate_thresholds: Vec<f64>,
    pub failures: usize,
}

impl StudyResult {
    /// Population variance of the per-replicate estimates.
    pub fn variance(&self) -> f64 {
        let n = self.per_replicate_alphas.len() as f64;
        self.per_replicate_alphas
            .iter()
            .map(|a| (a - self.mean_alpha).powi(2))
            .sum::<f64>()
            / n
    }
}

/// `(alpha_bar, threshold_bar)` for replicate `r`.
fn replicate(cfg: &StudyConfig, r: usize) -> Result<(f64, f64)> {
    let raw = sample(&cfg.spec, cfg.n, SeededStream::new(cfg.master_seed, r as u64))?;
    let s = Sample::new(&raw, cfg.take_abs)?;
    let est = estimate(&s, &cfg.grid, cfg.method)?;
    Ok((est.estimate.alpha_bar, est.estimate.threshold_bar))
}

fn aggregate(cfg: &StudyConfig, outcomes: Vec<Result<(f64, f64)>>) -> Result<StudyResult> {
    let total = outcomes.len();
    let mut alphas = Vec::with_capacity(total);
    let mut thresholds = Vec::with_capacity(total);
    for (a, t) in outcomes.into_iter().flatten() {
        alphas.push(a);
        thresholds.push(t);
    }
    let failures = total - alphas.len();
    if alphas.is_empty() || failures * 10 > total {
        return Err(Error::TooManyFailures { failed: failures, total });
    }
    let alpha_true = cfg.spec.true_index();
    let k = alphas.len() as f64;
    let mean_alpha = alphas.iter().sum::<f64>() / k;
    let mse = alphas.iter().map(|a| (a - alpha_true).powi(2)).sum::<f64>() / k;
    Ok(StudyResult {
        alpha_true,
        mean_alpha,
        bias: mean_alpha - alpha_true,
        mse,
        mean_threshold: thresholds.iter().sum::<f64>() / k,
        per_replicate_alphas: alphas,
        per_replicate_thresholds: thresholds,
        failures,
    })
}

/// Runs the study, in parallel when the `parallel` feature is on.
pub fn run_study(cfg: &StudyConfig) -> Result<StudyResult> {
    cfg.validate()?;
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let outcomes = (0..cfg.replicates)
            .into_par_iter()
            .map(|r| replicate(cfg, r))
            .collect();
        aggregate(cfg, outcomes)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_study_serial(cfg)
    }
}

/// Runs every replicate on the calling thread.
pub fn run_study_serial(cfg: &StudyConfig) -> Result<StudyResult> {
    cfg.validate()?;
    let outcomes = (0..cfg.replicates).map(|r| replicate(cfg, r)).collect();
    aggregate(cfg, outcomes)
}

/// Equal-width histogram of `values` over `[min, max]` as `(bin_center, count)`.
pub fn histogram(values: &[f64], bins: usize) -> Result<Vec<(f64, usize)>> {
    if values.is_empty() {
        return Err(Error::EmptyResult);
    }
    if bins == 0 {
        return Err(Error::BadSpec("bins must be at least 1".into()));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        let idx = if width > 0.0 {
            (((v - lo) / width) as usize).min(bins - 1)
        } else {
            0
        };
        counts[idx] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(i, c)| (lo + (i as f64 + 0.5) * width, c))
        .collect())
}

/// Histogram of a study's per-replicate index estimates.
pub fn histogram_data(result: &StudyResult, bins: usize) -> Result<Vec<(f64, usize)>> {
    histogram(&result.per_replicate_alphas, bins)
}
