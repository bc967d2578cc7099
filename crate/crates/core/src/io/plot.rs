use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use super::format::fmt_real;
use crate::averaging::WeightedEstimate;
use crate::error::{Error, Result};
use crate::sample::Sample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlotKind {
    SurvivalFit,
    Qq,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlotRow {
    pub x: f64,
    pub observed: f64,
    pub fitted: f64,
}

/// Plot data, rows ascending in `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotSeries {
    pub kind: PlotKind,
    pub rows: Vec<PlotRow>,
}

/// Log-scale data comparing the exceedances over `threshold_bar` with the
/// fitted Pareto tail.
///
/// Returns `(survival_fit, qq)`. Both use the `m_eff` exceedances, with the
/// `j`-th largest assigned survival `(j - 0.5) / m_eff` above the threshold.
///
/// * survival_fit rows are `(log x, log S_empirical, alpha * (log u - log x))`.
/// * qq rows are `(log q, log x, log q)` with `q = u * p^(-1/alpha)` the fitted
///   quantile at the same plotting position, so `fitted` is the reference diagonal.
pub fn plot_survival_fit(sample: &Sample, est: &WeightedEstimate) -> Result<(PlotSeries, PlotSeries)> {
    let u = est.threshold_bar;
    let m = sample.count_above(u);
    if m == 0 || est.m_eff == 0 {
        return Err(Error::NoExceedances);
    }
    let alpha = est.alpha_bar;
    let log_u = u.ln();
    let mf = m as f64;
    let top = sample.top(m);
    let mut survival = Vec::with_capacity(m);
    let mut qq = Vec::with_capacity(m);
    // top ascending: index i holds the (m - i)-th largest
    for (i, &x) in top.iter().enumerate() {
        let j = (m - i) as f64;
        let p = (j - 0.5) / mf;
        let lx = x.ln();
        survival.push(PlotRow {
            x: lx,
            observed: p.ln(),
            fitted: alpha * (log_u - lx),
        });
        let lq = log_u - p.ln() / alpha;
        qq.push(PlotRow {
            x: lq,
            observed: lx,
            fitted: lq,
        });
    }
    Ok((
        PlotSeries {
            kind: PlotKind::SurvivalFit,
            rows: survival,
        },
        PlotSeries {
            kind: PlotKind::Qq,
            rows: qq,
        },
    ))
}

/// `x,observed,fitted` CSV with a header row.
pub fn emit_plot_csv(series: &PlotSeries) -> Vec<u8> {
    let mut out = String::from("x,observed,fitted\n");
    for r in &series.rows {
        let _ = writeln!(out, "{},{},{}", fmt_real(r.x), fmt_real(r.observed), fmt_real(r.fitted));
    }
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::Method;

    fn est(alpha: f64, u: f64, m_eff: usize) -> WeightedEstimate {
        WeightedEstimate {
            alpha_bar: alpha,
            xi_bar: alpha.recip(),
            threshold_bar: u,
            m_eff,
            method: Method::Pareto,
        }
    }

    #[test]
    fn quantile_sample_matches_fit() {
        // x_(i) = (1 - (i - 0.5)/n)^(-1/alpha): an exact Pareto(alpha, 1) sample
        let n = 100_000;
        let alpha = 1.5;
        let raw: Vec<f64> = (1..=n)
            .map(|i| (1.0 - (i as f64 - 0.5) / n as f64).powf(-1.0 / alpha))
            .collect();
        let s = Sample::new(&raw, false).unwrap();
        let u = s.threshold_for(400);
        let e = est(alpha, u, s.count_above(u));
        let (surv, qq) = plot_survival_fit(&s, &e).unwrap();
        assert_eq!(surv.rows.len(), 400);
        let gap = surv
            .rows
            .iter()
            .map(|r| (r.observed - r.fitted).abs())
            .fold(0.0, f64::max);
        assert!(gap < 0.1, "gap {gap}");
        let qgap = qq
            .rows
            .iter()
            .map(|r| (r.observed - r.fitted).abs())
            .fold(0.0, f64::max);
        assert!(qgap < 0.1, "qq gap {qgap}");
        assert!(surv.rows.windows(2).all(|w| w[0].x <= w[1].x && w[0].fitted >= w[1].fitted));
        assert!(qq.rows.windows(2).all(|w| w[0].x <= w[1].x));
    }

    #[test]
    fn no_exceedances() {
        let s = Sample::new(&[1.0, 2.0, 3.0], false).unwrap();
        assert_eq!(plot_survival_fit(&s, &est(1.0, 3.0, 0)), Err(Error::NoExceedances));
    }

    #[test]
    fn csv_header() {
        let s = Sample::new(&[1.0, 2.0, 4.0], false).unwrap();
        let (surv, _) = plot_survival_fit(&s, &est(1.0, 1.5, 2)).unwrap();
        let text = String::from_utf8(emit_plot_csv(&surv)).unwrap();
        assert!(text.starts_with("x,observed,fitted\n"));
        assert_eq!(text.lines().count(), 3);
    }
}
