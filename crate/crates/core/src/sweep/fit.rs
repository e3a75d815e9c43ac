//! Entanglement length from the approach of `G(2,n)` to its plateau, and
//! correlation length from the decay of `p^xx_n − M²`.

use std::path::Path;

use super::fmt_f64;
use crate::correlators::ChainCorrelators;
use crate::error::{Error, Result};
use crate::measures::g2n;
use crate::params::{ModelParams, StateKind};

/// Series with a spread below this are constant.
const CONSTANT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Entanglement length; infinite for a constant series.
    pub xi_e: f64,
    /// Correlation length from `p^xx_n − M²`.
    pub xi_c: f64,
    /// `ξ_C / ξ_E`.
    pub ratio: f64,
    /// Fitted plateau `G∞`.
    pub plateau: f64,
    /// RMS residual of the `log|G∞ − G(2,n)|` regression.
    pub residual_e: f64,
    /// RMS residual of the `log|p^xx_n − M²|` regression.
    pub residual_c: f64,
    /// Residual sums of squares of the exponential and power-law fits to
    /// `log|ΔG(2,n)|`.
    pub exponential_rss: f64,
    pub power_law_rss: f64,
    /// Inclusive `(n_min, n_max)`.
    pub window: (usize, usize),
    pub accepted: bool,
    pub rejection: Option<String>,
}

/// Writes one row per `(γ, λ, fit)`.
pub fn write_fit_csv(path: &Path, fits: &[(f64, f64, FitResult)]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "gamma", "lambda", "n_min", "n_max", "xi_E", "xi_C", "ratio", "plateau", "residual_E", "residual_C",
        "exp_rss", "power_rss", "accepted", "rejection",
    ])?;
    for (g, l, f) in fits {
        w.write_record([
            fmt_f64(*g),
            fmt_f64(*l),
            f.window.0.to_string(),
            f.window.1.to_string(),
            fmt_f64(f.xi_e),
            fmt_f64(f.xi_c),
            fmt_f64(f.ratio),
            fmt_f64(f.plateau),
            fmt_f64(f.residual_e),
            fmt_f64(f.residual_c),
            fmt_f64(f.exponential_rss),
            fmt_f64(f.power_law_rss),
            f.accepted.to_string(),
            f.rejection.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `G(2,n)` for `n` in `n_min..=n_max`. Broken-state intervals contribute
/// their midpoint.
pub fn g2_series(params: &ModelParams, kind: StateKind, n_min: usize, n_max: usize) -> Result<Vec<(usize, f64)>> {
    let chain = ChainCorrelators::new(params, n_max)?;
    (n_min..=n_max).map(|n| Ok((n, g2n(&chain.set(n, kind)?).mid()))).collect()
}

/// Least squares of `y ≈ a + b x`; returns `(a, b, rss)`.
fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - b * mx;
    let rss = x.iter().zip(y).map(|(xi, yi)| (yi - a - b * xi).powi(2)).sum();
    (a, b, rss)
}

/// Fits the approach of `G(2,n)` to its plateau.
///
/// The increments `ΔG_n = G(2,n+1) − G(2,n)` are regressed on `n`
/// (exponential) and on `ln n` (power law) in log space; the fit is rejected
/// when the power law leaves the smaller residual. The plateau `G∞` is
/// `G(2,n_max)` plus the summed exponential tail, and `ξ_E` is `−1/slope` of
/// the `log|G∞ − G(2,n)|` regression. `ξ_C` comes from `log|p^xx_n − M²|`
/// over the same window.
pub fn fit_entanglement_length(series: &[(usize, f64)], params: &ModelParams) -> Result<FitResult> {
    if series.len() < 3 {
        return Err(Error::InvalidInput("entanglement-length fit needs at least three points".into()));
    }
    let mut series = series.to_vec();
    series.sort_by_key(|p| p.0);
    if series.windows(2).any(|w| w[1].0 != w[0].0 + 1) {
        return Err(Error::InvalidInput("entanglement-length fit needs consecutive separations".into()));
    }
    let ns: Vec<f64> = series.iter().map(|p| p.0 as f64).collect();
    let ys: Vec<f64> = series.iter().map(|p| p.1).collect();
    let window = (series[0].0, series[series.len() - 1].0);
    let (xi_c, residual_c) = correlation_length(params, window)?;
    let result = |xi_e: f64, plateau: f64, residual_e: f64, rss: (f64, f64), rejection: Option<String>| FitResult {
        xi_e,
        xi_c,
        ratio: xi_c / xi_e,
        plateau,
        residual_e,
        residual_c,
        exponential_rss: rss.0,
        power_law_rss: rss.1,
        window,
        accepted: rejection.is_none(),
        rejection,
    };

    let (lo, hi) = ys.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if hi - lo < CONSTANT_TOL {
        return Ok(result(f64::INFINITY, ys[0], 0.0, (0.0, 0.0), Some("constant series: ξ_E = ∞".into())));
    }
    let diffs: Vec<f64> = ys.windows(2).map(|w| w[1] - w[0]).collect();
    let dn = &ns[..diffs.len()];
    let monotone = diffs.iter().all(|d| *d > 0.0) || diffs.iter().all(|d| *d < 0.0);
    if !monotone {
        return Ok(result(f64::NAN, f64::NAN, f64::NAN, (f64::NAN, f64::NAN), Some("non-monotone approach".into())));
    }
    let sign = diffs[0].signum();
    let logs: Vec<f64> = diffs.iter().map(|d| d.abs().ln()).collect();
    let (a, slope, exponential_rss) = linear_fit(dn, &logs);
    let log_n: Vec<f64> = dn.iter().map(|n| n.ln()).collect();
    let (_, _, power_law_rss) = linear_fit(&log_n, &logs);
    let rss = (exponential_rss, power_law_rss);
    if slope >= 0.0 {
        return Ok(result(f64::INFINITY, f64::NAN, f64::NAN, rss, Some("increments do not decay".into())));
    }
    let rate = -slope;
    let tail = sign * (a - rate * ns[ns.len() - 1]).exp() / (1.0 - (-rate).exp());
    let plateau = ys[ys.len() - 1] + tail;
    let gaps: Vec<f64> = ys.iter().map(|y| (plateau - y).abs().ln()).collect();
    let (_, gap_slope, gap_rss) = linear_fit(&ns, &gaps);
    let xi_e = -1.0 / gap_slope;
    let residual_e = (gap_rss / ns.len() as f64).sqrt();
    let rejection = if power_law_rss < exponential_rss {
        Some(format!("power law fits better (rss {power_law_rss:.3e} vs {exponential_rss:.3e})"))
    } else if !(xi_e > 0.0 && xi_e.is_finite()) {
        Some(format!("non-decaying approach (ξ_E = {xi_e})"))
    } else {
        None
    };
    Ok(result(xi_e, plateau, residual_e, rss, rejection))
}

/// `ξ_C` and the RMS log residual from `p^xx_n − M²` over `window`.
fn correlation_length(params: &ModelParams, window: (usize, usize)) -> Result<(f64, f64)> {
    let chain = ChainCorrelators::new(params, window.1)?;
    let m2 = chain.magnetization().value.powi(2);
    let mut ns = Vec::new();
    let mut logs = Vec::new();
    for n in window.0..=window.1 {
        let d = (chain.table().pxx(n) - m2).abs();
        if d > 0.0 {
            ns.push(n as f64);
            logs.push(d.ln());
        }
    }
    if ns.len() < 2 {
        return Ok((f64::NAN, f64::NAN));
    }
    let (_, slope, rss) = linear_fit(&ns, &logs);
    Ok((-1.0 / slope, (rss / ns.len() as f64).sqrt()))
}
