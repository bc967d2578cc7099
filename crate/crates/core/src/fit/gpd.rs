//! Generalized Pareto fit to threshold excesses.
//!
//! The two-parameter likelihood is profiled onto `tau = xi / sigma`: for a
//! fixed `tau` the shape maximizing the likelihood is
//! `xi(tau) = mean(log(1 + tau * y))` and `sigma = xi / tau`, leaving a
//! one-dimensional search. `xi(tau)` is increasing in `tau`, so the shape
//! bounds translate into a `tau` bracket.

use crate::error::{Error, Result};
use crate::sample::Sample;

use super::{criterion, CandidateFit};

const XI_MIN: f64 = -0.5;
const XI_MAX: f64 = 5.0;
const SCAN_POINTS: usize = 120;
const GOLDEN_ITERS: usize = 200;

/// GPD fit to the `k` excesses over `u = x_(n-k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpdFit {
    pub xi_hat: f64,
    pub sigma_hat: f64,
    pub threshold: f64,
    pub k: usize,
    pub avg_loglik: f64,
    pub criterion: f64,
}

impl GpdFit {
    /// Converts to a candidate with `alpha = 1 / xi`; needs `xi > 0`.
    pub fn to_candidate(&self) -> Result<CandidateFit> {
        if !(self.xi_hat > 0.0) {
            return Err(Error::NonPositiveShape { xi: self.xi_hat });
        }
        Ok(CandidateFit {
            m: self.k,
            threshold: self.threshold,
            alpha_hat: self.xi_hat.recip(),
            avg_loglik: self.avg_loglik,
            criterion: self.criterion,
        })
    }
}

/// GPD log-likelihood of `excesses` at `(xi, sigma)`.
///
/// Returns `-inf` outside the support or for `sigma <= 0`.
pub fn gpd_excess_loglik(excesses: &[f64], xi: f64, sigma: f64) -> f64 {
    if !(sigma > 0.0) {
        return f64::NEG_INFINITY;
    }
    let k = excesses.len() as f64;
    let tau = xi / sigma;
    if xi.abs() < 1e-12 {
        return -k * sigma.ln() - excesses.iter().sum::<f64>() / sigma;
    }
    let mut sum = 0.0;
    for &y in excesses {
        let t = tau * y;
        if t <= -1.0 {
            return f64::NEG_INFINITY;
        }
        sum += t.ln_1p();
    }
    -k * sigma.ln() - (1.0 / xi + 1.0) * sum
}

struct Profile<'a> {
    excesses: &'a [f64],
    mean: f64,
}

impl Profile<'_> {
    fn xi(&self, tau: f64) -> f64 {
        let k = self.excesses.len() as f64;
        self.excesses.iter().map(|&y| (tau * y).ln_1p()).sum::<f64>() / k
    }

    /// `(xi, sigma)` on the profile at `tau`; the exponential limit at `tau = 0`.
    fn params(&self, tau: f64) -> (f64, f64) {
        if tau == 0.0 {
            return (0.0, self.mean);
        }
        let xi = self.xi(tau);
        (xi, xi / tau)
    }

    fn loglik(&self, tau: f64) -> f64 {
        let k = self.excesses.len() as f64;
        if tau == 0.0 {
            return -k * self.mean.ln() - k;
        }
        let xi = self.xi(tau);
        let sigma = xi / tau;
        if !(sigma > 0.0) || !xi.is_finite() {
            return f64::NEG_INFINITY;
        }
        -k * sigma.ln() - k - k * xi
    }
}

/// Bisects for `tau` with `xi(tau) = target` inside `(lo, hi)`.
fn solve_tau(p: &Profile<'_>, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if p.xi(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERS {
        if (b - a).abs() <= 1e-12 * (a.abs() + b.abs()) + 1e-300 {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        c
    } else {
        d
    }
}

/// Maximum likelihood GPD fit to the excesses of the `k` largest values
/// over `u = x_(n-k)`.
///
/// The search is confined to shapes in `(-0.5, 5]`. An optimum pinned on
/// either end of that range is reported as [`Error::ConvergenceFailure`]
/// so that callers can drop the candidate.
pub fn gpd_excess_mle(sample: &Sample, k: usize) -> Result<GpdFit> {
    sample.check_exceedances(k)?;
    let u = sample.threshold_for(k);
    let excesses: Vec<f64> = sample.top(k).iter().map(|&x| x - u).collect();
    let y_max = excesses[k - 1];
    if !(y_max > 0.0) {
        return Err(Error::DegenerateExcesses { k });
    }
    let mean = excesses.iter().sum::<f64>() / k as f64;
    let profile = Profile {
        excesses: &excesses,
        mean,
    };

    // shape bounds as a tau bracket
    let support = -1.0 / y_max;
    let tau_lo = solve_tau(&profile, XI_MIN, support, 0.0);
    let mut hi = 1.0 / mean;
    while profile.xi(hi) < XI_MAX {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::ConvergenceFailure {
                k,
                reason: "shape bracket diverged".into(),
            });
        }
    }
    let tau_hi = solve_tau(&profile, XI_MAX, 0.0, hi);

    // coarse scan: linear on the negative side, log-spaced on the positive side
    let half = SCAN_POINTS / 2;
    let mut taus = Vec::with_capacity(SCAN_POINTS + 1);
    for i in 0..half {
        taus.push(tau_lo * (1.0 - i as f64 / half as f64));
    }
    taus.push(0.0);
    let pos_lo = (1e-6 / y_max).min(tau_hi * 1e-6);
    let ratio = (tau_hi / pos_lo).ln();
    for i in 0..half {
        taus.push(pos_lo * (ratio * i as f64 / (half - 1) as f64).exp());
    }
    let values: Vec<f64> = taus.iter().map(|&t| profile.loglik(t)).collect();
    let (best, best_ll) = values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    if !best_ll.is_finite() {
        return Err(Error::ConvergenceFailure {
            k,
            reason: "profile likelihood is not finite".into(),
        });
    }
    if best == 0 || best == taus.len() - 1 {
        return Err(Error::ConvergenceFailure {
            k,
            reason: "optimum on the shape search boundary".into(),
        });
    }

    let tau = golden_max(|t| profile.loglik(t), taus[best - 1], taus[best + 1]);
    let tau = if profile.loglik(tau) >= best_ll { tau } else { taus[best] };
    let (xi_hat, sigma_hat) = profile.params(tau);
    let loglik = gpd_excess_loglik(&excesses, xi_hat, sigma_hat);
    if !loglik.is_finite() || !(sigma_hat > 0.0) {
        return Err(Error::ConvergenceFailure {
            k,
            reason: "refined optimum left the support".into(),
        });
    }
    let avg_loglik = loglik / k as f64;
    Ok(GpdFit {
        xi_hat,
        sigma_hat,
        threshold: u,
        k,
        avg_loglik,
        criterion: criterion(avg_loglik, k),
    })
}
