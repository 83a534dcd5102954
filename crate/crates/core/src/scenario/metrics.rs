use crate::error::{Error, Result};

/// Actuals with `|y|` below this are left out of MAPE.
pub const MAPE_FLOOR: f64 = 1e-6;

fn check_lengths(actual: &[f64], forecast: &[f64]) -> Result<()> {
    if actual.len() != forecast.len() {
        return Err(Error::LengthMismatch {
            left: actual.len(),
            right: forecast.len(),
        });
    }
    if actual.is_empty() {
        return Err(Error::EmptyInput("metric over an empty series"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapeOutcome {
    /// Percent.
    pub value: f64,
    /// Points skipped because the actual was below the floor.
    pub excluded: usize,
}

/// Mean absolute percentage error in percent, over points with
/// `|actual| >= floor`.
pub fn mape_with_floor(actual: &[f64], forecast: &[f64], floor: f64) -> Result<MapeOutcome> {
    check_lengths(actual, forecast)?;
    let mut sum = 0.0;
    let mut used = 0usize;
    for (y, f) in actual.iter().zip(forecast) {
        if y.abs() < floor {
            continue;
        }
        sum += (y - f).abs() / y.abs();
        used += 1;
    }
    if used == 0 {
        return Err(Error::AllPointsExcluded(floor));
    }
    Ok(MapeOutcome {
        value: sum / used as f64 * 100.0,
        excluded: actual.len() - used,
    })
}

pub fn mape(actual: &[f64], forecast: &[f64]) -> Result<f64> {
    mape_with_floor(actual, forecast, MAPE_FLOOR).map(|m| m.value)
}

/// Root mean squared error, in the units of the series.
pub fn rmse(actual: &[f64], forecast: &[f64]) -> Result<f64> {
    check_lengths(actual, forecast)?;
    let sse: f64 = actual
        .iter()
        .zip(forecast)
        .map(|(y, f)| (y - f) * (y - f))
        .sum();
    Ok((sse / actual.len() as f64).sqrt())
}

/// Demand minus generation, element-wise. Negative values are kept.
pub fn net_load(load: &[f64], pv: &[f64]) -> Result<Vec<f64>> {
    if load.len() != pv.len() {
        return Err(Error::LengthMismatch {
            left: load.len(),
            right: pv.len(),
        });
    }
    Ok(load.iter().zip(pv).map(|(l, p)| l - p).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricPair {
    pub mape_pct: f64,
    pub rmse: f64,
}

impl MetricPair {
    pub fn compute(actual: &[f64], forecast: &[f64]) -> Result<Self> {
        Ok(Self {
            mape_pct: mape(actual, forecast)?,
            rmse: rmse(actual, forecast)?,
        })
    }
}
