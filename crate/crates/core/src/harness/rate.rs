use crate::{Error, Result};

/// A fitted geometric rate: least-squares slope of `ln(series)` against the
/// iteration index over a window, exponentiated, with the R² of the log-linear
/// fit attached. A constant series fits exactly with rate 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub rho: f64,
    pub r_squared: f64,
    /// Inclusive index window the fit used.
    pub window: (usize, usize),
}

/// Fits `series[k] ≈ C·ρ̂ᵏ` over `window = (k0, k1)` (inclusive indices).
///
/// The window must hold at least 10 strictly positive entries.
pub fn fit_geometric_rate(series: &[f64], window: (usize, usize)) -> Result<RateFit> {
    let (k0, k1) = window;
    if k1 >= series.len() || k0 > k1 {
        return Err(Error::Domain(format!(
            "window ({k0}, {k1}) out of range for a series of {}",
            series.len()
        )));
    }
    if k1 - k0 + 1 < 10 {
        return Err(Error::Domain("fit window must hold at least 10 points".into()));
    }
    let slice = &series[k0..=k1];
    if slice.iter().any(|&s| s.is_nan() || s <= 0.0) {
        return Err(Error::NonPositiveSeries);
    }

    let n = slice.len() as f64;
    let logs: Vec<f64> = slice.iter().map(|s| s.ln()).collect();
    let mean_x = (k0 + k1) as f64 / 2.0;
    let mean_y = logs.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (i, y) in logs.iter().enumerate() {
        let dx = (k0 + i) as f64 - mean_x;
        sxy += dx * (y - mean_y);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;

    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (i, y) in logs.iter().enumerate() {
        let pred = intercept + slope * (k0 + i) as f64;
        ss_res += (y - pred) * (y - pred);
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    let r_squared = if ss_tot <= f64::MIN_POSITIVE {
        // Flat series: the fit is exact by construction.
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };

    Ok(RateFit {
        rho: slope.exp(),
        r_squared,
        window,
    })
}

/// Post-transient window for rate fitting on a decaying distance series:
/// starts at `max(50, 2·K)` where `K` is the first index at or below half the
/// initial value, and ends just before the series has decayed by ten orders
/// of magnitude (past which floating-point noise dominates). `None` when the
/// series gives no usable window.
pub fn post_transient_window(series: &[f64]) -> Option<(usize, usize)> {
    let first = *series.first()?;
    if first.is_nan() || first <= 0.0 {
        return None;
    }
    let transient = series.iter().position(|&s| s <= 0.5 * first)?;
    let k0 = 50usize.max(2 * transient);
    let k1 = series
        .iter()
        .position(|&s| s <= first * 1e-10)
        .map(|i| i.saturating_sub(1))
        .unwrap_or(series.len() - 1);
    (k1 > k0 && k1 - k0 >= 10).then_some((k0, k1))
}
