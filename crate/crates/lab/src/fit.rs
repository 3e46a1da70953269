//! Log-log least-squares scaling fits.

use std::collections::BTreeMap;

use crate::error::{LabError, Result};
use crate::record::ExperimentRecord;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingFit {
    /// Exponent `b` in `y = a x^b`.
    pub slope: f64,
    /// `ln a`.
    pub intercept: f64,
    pub r2: f64,
    pub points: usize,
}

/// Minimum number of distinct `x` values.
pub const MIN_POINTS: usize = 4;
/// Minimum ratio between the largest and smallest `x`.
pub const MIN_SPAN: f64 = 4.0;

/// Fits `ln y = intercept + slope ln x`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite())) {
        return Err(LabError::Fit("coordinates must be positive and finite".into()));
    }
    let mut xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < MIN_POINTS {
        return Err(LabError::Fit(format!("need {MIN_POINTS} distinct x values, got {}", xs.len())));
    }
    let span = xs[xs.len() - 1] / xs[0];
    if span < MIN_SPAN {
        return Err(LabError::Fit(format!("x spans only {span:.3}x, need {MIN_SPAN}x")));
    }
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(ScalingFit { slope, intercept, r2, points: points.len() })
}

/// `(1/d_H, mean cost)` per grid point for one series, in grid order.
pub fn scaling_points(records: &[ExperimentRecord], series: &str) -> Vec<(f64, f64)> {
    let mut order: Vec<(&str, &str)> = Vec::new();
    let mut acc: BTreeMap<(&str, &str), (f64, f64, u32)> = BTreeMap::new();
    for r in records.iter().filter(|r| r.error.is_none() && r.series() == series) {
        let (Some(d_h), Some(cost)) = (r.d_h, r.queries_or_samples) else { continue };
        let key = r.point_key();
        let e = acc.entry(key).or_insert_with(|| {
            order.push(key);
            (1.0 / d_h, 0.0, 0)
        });
        e.1 += cost as f64;
        e.2 += 1;
    }
    order.iter().map(|k| acc[k]).map(|(x, total, n)| (x, total / n as f64)).collect()
}

/// Fits cost against `1/d_H` for one series.
pub fn fit_scaling(records: &[ExperimentRecord], series: &str) -> Result<ScalingFit> {
    fit_power_law(&scaling_points(records, series))
}
