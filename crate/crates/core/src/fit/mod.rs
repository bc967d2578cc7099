//! Per-candidate tail fits.
//!
//! Each fit uses the `m` largest order statistics above the threshold
//! `x_(n-m)` and scores itself with an average log-likelihood criterion
//! `avg_loglik - d/m`, which stays comparable across different `m`.

mod gpd;
mod pareto;
mod regression;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::sample::Sample;

pub use gpd::{gpd_excess_loglik, gpd_excess_mle, GpdFit};
pub use pareto::{hill_estimator, pareto_avg_loglik, pareto_mle, pareto_mle_full};
pub use regression::{ols_line, survival_regression, LineFit, RegressionFit, SIGMA_FLOOR};

/// Number of fitted parameters charged by the criterion, for every method.
pub const PENALTY_DIM: f64 = 2.0;

/// Criterion `avg_loglik - d/m`.
pub fn criterion(avg_loglik: f64, m: usize) -> f64 {
    avg_loglik - PENALTY_DIM / m as f64
}

/// Estimation method applied to every candidate threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Pareto,
    Regression,
    Gpd,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Pareto => "pareto",
            Method::Regression => "regression",
            Method::Gpd => "gpd",
        }
    }

    /// Fits the `m` largest observations and reduces the result to a [`CandidateFit`].
    pub fn fit(self, sample: &Sample, m: usize) -> Result<CandidateFit> {
        match self {
            Method::Pareto => pareto_mle(sample, m),
            Method::Regression => survival_regression(sample, m).map(CandidateFit::from),
            Method::Gpd => gpd_excess_mle(sample, m)?.to_candidate(),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "pareto" => Ok(Method::Pareto),
            "regression" => Ok(Method::Regression),
            "gpd" => Ok(Method::Gpd),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

/// One threshold candidate's fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CandidateFit {
    /// Number of largest observations used.
    pub m: usize,
    /// The order statistic `x_(n-m)`.
    pub threshold: f64,
    pub alpha_hat: f64,
    pub avg_loglik: f64,
    pub criterion: f64,
}
