use crate::error::{Error, Result};
use crate::sample::Sample;

use super::{criterion, CandidateFit};

/// Pareto maximum likelihood fit to the `m` largest observations.
///
/// The scale is pinned at `beta = x_(n-m)` and the index is
/// `alpha = m / sum(log(x / beta))` over the exceedances.
pub fn pareto_mle(sample: &Sample, m: usize) -> Result<CandidateFit> {
    sample.check_exceedances(m)?;
    let beta = sample.threshold_for(m);
    let sum_log: f64 = sample.top(m).iter().map(|&x| (x / beta).ln()).sum();
    if sum_log <= 0.0 {
        return Err(Error::DegenerateTail { m });
    }
    let alpha_hat = m as f64 / sum_log;
    let avg_loglik = pareto_avg_loglik(alpha_hat, beta)?;
    Ok(CandidateFit {
        m,
        threshold: beta,
        alpha_hat,
        avg_loglik,
        criterion: criterion(avg_loglik, m),
    })
}

/// Full-sample Pareto fit with `beta = x_(1)` and every observation in the
/// likelihood. Returns `(alpha, beta)`.
pub fn pareto_mle_full(sample: &Sample) -> Result<(f64, f64)> {
    let beta = sample.order_stat(1);
    let sum_log: f64 = sample.values().iter().map(|&x| (x / beta).ln()).sum();
    if sum_log <= 0.0 {
        return Err(Error::DegenerateTail { m: sample.len() });
    }
    Ok((sample.len() as f64 / sum_log, beta))
}

/// Maximized Pareto log-likelihood per observation:
/// `log(alpha) - log(beta) - (alpha + 1) / alpha`.
pub fn pareto_avg_loglik(alpha: f64, threshold: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::NonPositiveParameter {
            name: "alpha",
            value: alpha,
        });
    }
    if !(threshold > 0.0) {
        return Err(Error::NonPositiveParameter {
            name: "threshold",
            value: threshold,
        });
    }
    Ok(alpha.ln() - threshold.ln() - (alpha + 1.0) / alpha)
}

/// Hill estimator: reciprocal of the mean log-excess of the top `m` values
/// over `log x_(n-m)`.
pub fn hill_estimator(sample: &Sample, m: usize) -> Result<f64> {
    sample.check_exceedances(m)?;
    let mean_log = sample.top(m).iter().map(|x| x.ln()).sum::<f64>() / m as f64;
    let gap = mean_log - sample.threshold_for(m).ln();
    if gap <= 0.0 {
        return Err(Error::DegenerateTail { m });
    }
    Ok(gap.recip())
}
