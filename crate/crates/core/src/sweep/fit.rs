use super::SweepTable;
use crate::models::Model;
use crate::{Error, Result};

/// The tail window starts at least this many model energy scales up.
pub const TAIL_SCALE_FACTOR: f64 = 20.0;
const MIN_FIT_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub exponent: f64,
    pub prefactor: f64,
    /// RMS of the residuals of `ln C`.
    pub rms_residual: f64,
    pub window: (f64, f64),
    pub n_points: usize,
}

/// Top decade of the table, but never below 20x the largest model parameter.
pub fn default_tail_window(table: &SweepTable, model: &Model) -> Result<(f64, f64)> {
    let t_max = *table
        .temperatures
        .last()
        .ok_or_else(|| Error::Fit("empty table".into()))?;
    let lo = (t_max / 10.0).max(TAIL_SCALE_FACTOR * model.energy_scale());
    if lo >= t_max {
        return Err(Error::Fit(format!(
            "sweep ends at T = {t_max}, below the tail threshold {lo}; extend tmax"
        )));
    }
    Ok((lo, t_max))
}

/// Least-squares line through `(ln T, ln C)` for rows with T inside `window`.
pub fn fit_power_tail(table: &SweepTable, site: usize, window: (f64, f64)) -> Result<FitResult> {
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(Error::InvalidParameter(format!("bad fit window ({lo}, {hi})")));
    }
    let column = table.column(site)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&t, &c) in table.temperatures.iter().zip(&column) {
        if t < lo || t > hi {
            continue;
        }
        if !(c > 0.0) {
            return Err(Error::Fit(format!(
                "non-positive coherence {c:e} at T = {t} in the fit window"
            )));
        }
        xs.push(t.ln());
        ys.push(c.ln());
    }
    if xs.len() < MIN_FIT_POINTS {
        return Err(Error::Fit(format!(
            "{} points in window ({lo}, {hi}); need at least {MIN_FIT_POINTS}",
            xs.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Ok(FitResult {
        exponent: slope,
        prefactor: intercept.exp(),
        rms_residual: (ss / n).sqrt(),
        window,
        n_points: xs.len(),
    })
}
