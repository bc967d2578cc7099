use crate::error::{Error, Result};
use crate::sample::Sample;

use super::{criterion, CandidateFit};

/// Residual RMS below which a candidate's criterion saturates.
pub const SIGMA_FLOOR: f64 = 1e-12;

/// Ordinary least squares line with intercept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// `sqrt(sum(residual^2) / n)`.
    pub rms: f64,
}

/// Fits `y = intercept + slope * x` by least squares.
///
/// Returns `None` when `xs` has zero spread or fewer than two points.
pub fn ols_line(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - mx;
        sxx += dx * dx;
        sxy += dx * (y - my);
    }
    if !(sxx > 0.0) {
        return None;
    }
    let slope = sxy / sxx;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let e = (y - my) - slope * (x - mx);
            e * e
        })
        .sum();
    Some(LineFit {
        slope,
        intercept: my - slope * mx,
        rms: (ss / nf).sqrt(),
    })
}

/// Power-tail regression over the `m` largest observations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressionFit {
    pub m: usize,
    /// The order statistic `x_(n-m)`.
    pub threshold: f64,
    pub slope: f64,
    /// Estimate of `log c` in `S(x) = c x^-alpha`.
    pub intercept: f64,
    pub alpha_hat: f64,
    pub sigma_hat: f64,
    /// `-log(max(sigma_hat, SIGMA_FLOOR))`.
    pub avg_loglik_proxy: f64,
    pub criterion: f64,
}

/// Regresses the log empirical survival on log x for the `m` largest values.
///
/// The `j`-th largest observation gets the Hazen plotting position
/// `(j - 0.5) / n`. The fit is scored by the Gaussian profile likelihood
/// of its residuals, `-log(sigma_hat)`, up to constants.
pub fn survival_regression(sample: &Sample, m: usize) -> Result<RegressionFit> {
    let n = sample.len();
    if m < 3 || m >= n {
        return Err(Error::BadPointCount { m, n });
    }
    let top = sample.top(m);
    if top[0] == top[m - 1] {
        return Err(Error::DegeneratePoints { m });
    }
    let nf = n as f64;
    // top is ascending, so the j-th largest sits at top[m - j]
    let (xs, ys): (Vec<f64>, Vec<f64>) = (1..=m)
        .map(|j| (top[m - j].ln(), ((j as f64 - 0.5) / nf).ln()))
        .unzip();
    let line = ols_line(&xs, &ys).ok_or(Error::DegeneratePoints { m })?;
    let avg_loglik_proxy = -line.rms.max(SIGMA_FLOOR).ln();
    Ok(RegressionFit {
        m,
        threshold: sample.threshold_for(m),
        slope: line.slope,
        intercept: line.intercept,
        alpha_hat: -line.slope,
        sigma_hat: line.rms,
        avg_loglik_proxy,
        criterion: criterion(avg_loglik_proxy, m),
    })
}

impl From<RegressionFit> for CandidateFit {
    fn from(r: RegressionFit) -> Self {
        CandidateFit {
            m: r.m,
            threshold: r.threshold,
            alpha_hat: r.alpha_hat,
            avg_loglik: r.avg_loglik_proxy,
            criterion: r.criterion,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_point_hand_case() {
        // frozen from the normal equations: sxx = 2, sxy = -2.2,
        // residuals (-1/30, 2/30, -1/30)
        let line = ols_line(&[0.0, 1.0, 2.0], &[0.0, -1.0, -2.2]).unwrap();
        assert!((line.slope + 1.1).abs() < 1e-14);
        assert!((line.intercept - 1.0 / 30.0).abs() < 1e-14);
        let ss = (1.0 + 4.0 + 1.0) / 900.0;
        assert!((line.rms * line.rms - ss / 3.0).abs() < 1e-15);
    }

    #[test]
    fn exact_power_line_hits_floor() {
        // x_j chosen so that log((j - 0.5)/n) = log c - 2 log x_j exactly up to rounding
        let n = 40usize;
        let c = 3.0f64;
        let mut raw: Vec<f64> = (1..=n)
            .map(|j| (c * n as f64 / (j as f64 - 0.5)).sqrt())
            .collect();
        raw.reverse();
        let s = Sample::new(&raw, false).unwrap();
        let fit = survival_regression(&s, 20).unwrap();
        assert!((fit.alpha_hat - 2.0).abs() < 1e-10);
        assert!((fit.intercept - c.ln()).abs() < 1e-9);
        assert!(fit.sigma_hat < 1e-10);
        // near-exact line: rms carries only rounding noise
        assert!(fit.criterion > 20.0);

        let zero = ols_line(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]).unwrap();
        assert_eq!(zero.rms, 0.0);
        assert_eq!(-zero.rms.max(SIGMA_FLOOR).ln(), -SIGMA_FLOOR.ln());
    }

    #[test]
    fn floor_caps_criterion() {
        let mut raw: Vec<f64> = (1..=10).map(f64::from).collect();
        raw.extend([50.0; 4]);
        raw.push(49.0);
        let s = Sample::new(&raw, false).unwrap();
        let fit = survival_regression(&s, 5).unwrap();
        assert!(fit.criterion <= -SIGMA_FLOOR.ln() - 2.0 / 5.0);
    }

    #[test]
    fn uses_one_over_m_normalization() {
        let s = Sample::new(&[1.0, 1.5, 2.2, 3.9, 4.1, 7.7, 9.0], false).unwrap();
        let fit = survival_regression(&s, 5).unwrap();
        let top = s.top(5);
        let n = s.len() as f64;
        let ss: f64 = (1..=5)
            .map(|j| {
                let x = top[5 - j].ln();
                let y = ((j as f64 - 0.5) / n).ln();
                let e = y - (fit.intercept + fit.slope * x);
                e * e
            })
            .sum();
        assert!((fit.sigma_hat.powi(2) - ss / 5.0).abs() < 1e-14);
        assert_eq!(fit.alpha_hat, -fit.slope);
        assert!(fit.alpha_hat > 0.0);
    }

    #[test]
    fn degenerate_and_bad_counts() {
        let s = Sample::new(&[1.0, 2.0, 5.0, 5.0, 5.0], false).unwrap();
        assert_eq!(
            survival_regression(&s, 3),
            Err(Error::DegeneratePoints { m: 3 })
        );
        assert_eq!(
            survival_regression(&s, 2),
            Err(Error::BadPointCount { m: 2, n: 5 })
        );
        assert_eq!(
            survival_regression(&s, 5),
            Err(Error::BadPointCount { m: 5, n: 5 })
        );
        assert!(ols_line(&[1.0, 1.0], &[0.0, 1.0]).is_none());
    }
}
