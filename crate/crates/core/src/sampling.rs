//! Seeded variate generation for the simulation families.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{ChiSquared, Distribution, Open01, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Name recorded in report metadata for the generator behind [`SeededStream`].
pub const GENERATOR_NAME: &str = "ChaCha20 (rand_chacha), seed_from_u64(master_seed), stream = stream_id";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Stable,
    StudentT,
    Gpd,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Stable => "stable",
            Family::StudentT => "t",
            Family::Gpd => "gpd",
        }
    }
}

/// One of the three simulated families with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DistributionSpec {
    /// Stable with index `alpha`, skewness `beta` (must be 0), scale and location.
    Stable {
        alpha: f64,
        beta: f64,
        sigma: f64,
        mu: f64,
    },
    /// `mu + sigma * T` with `T` Student-t on `nu` degrees of freedom.
    StudentT { nu: f64, sigma: f64, mu: f64 },
    /// `mu` plus a GPD variate with shape `xi` and scale `sigma`.
    Gpd { xi: f64, sigma: f64, mu: f64 },
}

impl DistributionSpec {
    pub fn stable(alpha: f64, sigma: f64, mu: f64) -> Self {
        Self::Stable {
            alpha,
            beta: 0.0,
            sigma,
            mu,
        }
    }

    pub fn student_t(nu: f64, sigma: f64, mu: f64) -> Self {
        Self::StudentT { nu, sigma, mu }
    }

    pub fn gpd(xi: f64, sigma: f64, mu: f64) -> Self {
        Self::Gpd { xi, sigma, mu }
    }

    pub fn family(&self) -> Family {
        match self {
            Self::Stable { .. } => Family::Stable,
            Self::StudentT { .. } => Family::StudentT,
            Self::Gpd { .. } => Family::Gpd,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (sigma, mu) = match *self {
            Self::Stable {
                alpha,
                beta,
                sigma,
                mu,
            } => {
                if !(alpha > 0.0 && alpha <= 2.0) {
                    return Err(Error::BadSpec(format!("stable alpha {alpha} outside (0, 2]")));
                }
                if beta != 0.0 {
                    return Err(Error::BadSpec("only symmetric stable (beta = 0) is supported".into()));
                }
                (sigma, mu)
            }
            Self::StudentT { nu, sigma, mu } => {
                if !(nu > 0.0 && nu.is_finite()) {
                    return Err(Error::BadSpec(format!("t degrees of freedom {nu} must be positive")));
                }
                (sigma, mu)
            }
            Self::Gpd { xi, sigma, mu } => {
                if !(xi > 0.0 && xi.is_finite()) {
                    return Err(Error::BadSpec(format!("GPD shape {xi} must be positive")));
                }
                (sigma, mu)
            }
        };
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::BadSpec(format!("scale {sigma} must be positive")));
        }
        if !mu.is_finite() {
            return Err(Error::BadSpec(format!("location {mu} must be finite")));
        }
        Ok(())
    }

    /// Tail index the estimators target: `alpha` for stable, `nu` for t, `1/xi` for GPD.
    pub fn true_index(&self) -> f64 {
        match *self {
            Self::Stable { alpha, .. } => alpha,
            Self::StudentT { nu, .. } => nu,
            Self::Gpd { xi, .. } => xi.recip(),
        }
    }

    /// Whether the study takes absolute values before estimation.
    pub fn default_take_abs(&self) -> bool {
        !matches!(self, Self::Gpd { .. })
    }

    /// Compact parameter label, e.g. `alpha=1;sigma=1;mu=0`.
    pub fn params_label(&self) -> String {
        match *self {
            Self::Stable {
                alpha, sigma, mu, ..
            } => format!("alpha={alpha};sigma={sigma};mu={mu}"),
            Self::StudentT { nu, sigma, mu } => format!("nu={nu};sigma={sigma};mu={mu}"),
            Self::Gpd { xi, sigma, mu } => format!("xi={xi};sigma={sigma};mu={mu}"),
        }
    }
}

/// Reproducible generator keyed by `(master_seed, stream_id)`.
///
/// Each stream is a separate ChaCha20 stream under the same key, so
/// replicates never share output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeededStream {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl SeededStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        Self {
            master_seed,
            stream_id,
        }
    }

    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

fn uniform_open<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Open01.sample(rng)
}

/// One symmetric standard stable variate (Chambers-Mallows-Stuck).
fn cms_symmetric<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let v = FRAC_PI_2 * (2.0 * uniform_open(rng) - 1.0);
    if alpha == 1.0 {
        return v.tan();
    }
    let w = -uniform_open(rng).ln();
    let a = (alpha * v).sin() / v.cos().powf(alpha.recip());
    let b = (((1.0 - alpha) * v).cos() / w).powf((1.0 - alpha) / alpha);
    a * b
}

fn check_family(spec: &DistributionSpec, want: Family) -> Result<()> {
    spec.validate()?;
    if spec.family() != want {
        return Err(Error::BadSpec(format!(
            "expected a {} spec, got {}",
            want.as_str(),
            spec.family().as_str()
        )));
    }
    Ok(())
}

pub fn sample_stable(spec: &DistributionSpec, n: usize, stream: SeededStream) -> Result<Vec<f64>> {
    check_family(spec, Family::Stable)?;
    let DistributionSpec::Stable {
        alpha, sigma, mu, ..
    } = *spec
    else {
        unreachable!()
    };
    let mut rng = stream.rng();
    Ok((0..n).map(|_| mu + sigma * cms_symmetric(alpha, &mut rng)).collect())
}

pub fn sample_student_t(spec: &DistributionSpec, n: usize, stream: SeededStream) -> Result<Vec<f64>> {
    check_family(spec, Family::StudentT)?;
    let DistributionSpec::StudentT { nu, sigma, mu } = *spec else {
        unreachable!()
    };
    let chi = ChiSquared::new(nu).map_err(|e| Error::BadSpec(e.to_string()))?;
    let mut rng = stream.rng();
    Ok((0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            let c: f64 = chi.sample(&mut rng);
            mu + sigma * z / (c / nu).sqrt()
        })
        .collect())
}

/// GPD quantile `mu + sigma * ((1 - p)^-xi - 1) / xi`.
pub fn gpd_quantile(p: f64, xi: f64, sigma: f64, mu: f64) -> f64 {
    mu + sigma * ((1.0 - p).powf(-xi) - 1.0) / xi
}

pub fn sample_gpd(spec: &DistributionSpec, n: usize, stream: SeededStream) -> Result<Vec<f64>> {
    check_family(spec, Family::Gpd)?;
    let DistributionSpec::Gpd { xi, sigma, mu } = *spec else {
        unreachable!()
    };
    let mut rng = stream.rng();
    Ok((0..n)
        .map(|_| gpd_quantile(uniform_open(&mut rng), xi, sigma, mu))
        .collect())
}

/// Dispatches on the spec's family.
pub fn sample(spec: &DistributionSpec, n: usize, stream: SeededStream) -> Result<Vec<f64>> {
    match spec.family() {
        Family::Stable => sample_stable(spec, n, stream),
        Family::StudentT => sample_student_t(spec, n, stream),
        Family::Gpd => sample_gpd(spec, n, stream),
    }
}

/// First `n` raw 64-bit outputs of a stream.
pub fn raw_outputs(stream: SeededStream, n: usize) -> Vec<u64> {
    let mut rng = stream.rng();
    (0..n).map(|_| rng.next_u64()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stream(id: u64) -> SeededStream {
        SeededStream::new(20240601, id)
    }

    #[test]
    fn empty_request() {
        let spec = DistributionSpec::stable(1.5, 1.0, 0.0);
        assert!(sample_stable(&spec, 0, stream(0)).unwrap().is_empty());
    }

    #[test]
    fn gpd_median_closed_form() {
        assert_eq!(gpd_quantile(0.5, 1.0, 1.0, 1.0), 2.0);
    }

    #[test]
    fn bad_specs() {
        assert!(matches!(
            sample_student_t(&DistributionSpec::student_t(0.0, 1.0, 0.0), 5, stream(0)),
            Err(Error::BadSpec(_))
        ));
        assert!(matches!(
            sample_gpd(&DistributionSpec::gpd(0.0, 1.0, 0.0), 5, stream(0)),
            Err(Error::BadSpec(_))
        ));
        let skewed = DistributionSpec::Stable {
            alpha: 1.5,
            beta: 0.3,
            sigma: 1.0,
            mu: 0.0,
        };
        assert!(skewed.validate().is_err());
        assert!(DistributionSpec::stable(2.1, 1.0, 0.0).validate().is_err());
        assert!(DistributionSpec::stable(1.0, -1.0, 0.0).validate().is_err());
        assert!(matches!(
            sample_stable(&DistributionSpec::gpd(0.5, 1.0, 0.0), 5, stream(0)),
            Err(Error::BadSpec(_))
        ));
    }

    #[test]
    fn reproducible() {
        let spec = DistributionSpec::student_t(3.0, 2.0, 0.0);
        let a = sample(&spec, 500, stream(4)).unwrap();
        let b = sample(&spec, 500, stream(4)).unwrap();
        let c = sample(&spec, 500, stream(5)).unwrap();
        assert_eq!(
            a.iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
            b.iter().map(|x| x.to_bits()).collect::<Vec<_>>()
        );
        assert_ne!(a, c);
    }

    #[test]
    fn true_indices() {
        assert_eq!(DistributionSpec::stable(1.2, 2.0, 0.0).true_index(), 1.2);
        assert_eq!(DistributionSpec::student_t(5.0, 2.0, 0.0).true_index(), 5.0);
        assert_eq!(DistributionSpec::gpd(0.25, 1.0, 1.0).true_index(), 4.0);
        assert!(!DistributionSpec::gpd(0.25, 1.0, 1.0).default_take_abs());
        assert!(DistributionSpec::student_t(5.0, 2.0, 0.0).default_take_abs());
    }
}
