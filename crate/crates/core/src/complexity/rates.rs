//! Growth-rate fits over count grids.

use serde::Serialize;

use super::{count_grid, Budget, CountGrid, Mode};
use crate::error::{Error, Result};
use crate::ifs::FunctionSystem;
use crate::orbit::SigmaGenerator;

/// Least-squares slope and RMS residual of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return (0.0, 0.0);
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - my - slope * (x - mx)).powi(2)).sum();
    (slope, (rss / n).sqrt())
}

#[derive(Clone, Debug, Serialize)]
pub struct RateReport {
    /// Radii, descending.
    pub eps: Vec<f64>,
    /// Slope of `ln s(n, ε)` against `n`, per radius.
    pub rates: Vec<f64>,
    pub residuals: Vec<f64>,
    /// `rate / |ln ε|`, absent for `ε >= 1`.
    pub ratios: Vec<Option<f64>>,
    pub entropy: f64,
    /// Max and min of the ratio over the two smallest radii below 1.
    pub umdim: Option<f64>,
    pub lmdim: Option<f64>,
    /// Every count used was certified exact.
    pub exact: bool,
    /// Some radius had an empty node set; its rate is reported as 0.
    pub empty: bool,
}

/// Fits rates on `grid`. With `fit_last = Some(k)` only the `k` largest
/// horizons enter each fit.
pub fn rate_report(grid: &CountGrid, fit_last: Option<usize>) -> Result<RateReport> {
    let mut ns = grid.ns();
    if ns.len() < 2 {
        return Err(Error::Config("rate fits need at least two horizons".into()));
    }
    if let Some(k) = fit_last {
        if k < 2 {
            return Err(Error::Config("fit_last must be at least 2".into()));
        }
        ns = ns[ns.len().saturating_sub(k)..].to_vec();
    }
    let eps = grid.epsilons();
    let (mut rates, mut residuals, mut ratios) = (vec![], vec![], vec![]);
    let (mut exact, mut empty) = (true, false);
    for &e in &eps {
        let mut xs = vec![];
        let mut ys = vec![];
        let mut zero = false;
        for &n in &ns {
            let c = &grid
                .get(n, e)
                .ok_or_else(|| Error::Config(format!("grid is missing the cell n={n}, eps={e}")))?
                .separated;
            exact &= c.exact;
            if c.value == 0 {
                zero = true;
            }
            xs.push(n as f64);
            ys.push((c.value.max(1) as f64).ln());
        }
        let (rate, res) = if zero { (0.0, 0.0) } else { fit_slope(&xs, &ys) };
        empty |= zero;
        rates.push(rate);
        residuals.push(res);
        ratios.push((e < 1.0).then(|| rate / e.ln().abs()));
    }
    let entropy = rates.iter().copied().fold(0.0, f64::max);
    let small: Vec<f64> = ratios.iter().rev().flatten().take(2).copied().collect();
    let umdim = small.iter().copied().reduce(f64::max);
    let lmdim = small.iter().copied().reduce(f64::min);
    Ok(RateReport { eps, rates, residuals, ratios, entropy, umdim, lmdim, exact, empty })
}

/// Entropy from separated counts over the grid.
pub fn entropy_estimate(
    fs: &FunctionSystem,
    n_grid: &[usize],
    eps_grid: &[f64],
    mode: Mode,
    budget: &Budget,
) -> Result<(CountGrid, RateReport)> {
    let grid = count_grid(fs, None, n_grid, eps_grid, mode, budget, false)?;
    let report = rate_report(&grid, None)?;
    Ok((grid, report))
}

#[derive(Clone, Debug, Serialize)]
pub struct SigmaRate {
    pub sigma: String,
    pub report: RateReport,
    /// `omdim(σ)`: the lower ratio at the smallest radii.
    pub omdim: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MmdimReport {
    pub report: RateReport,
    pub per_sigma: Vec<SigmaRate>,
    /// Max of `omdim(σ)` over the sample, absent for an empty sample.
    pub omdim: Option<f64>,
    #[serde(skip)]
    pub grid: CountGrid,
    #[serde(skip)]
    pub sigma_grids: Vec<CountGrid>,
}

/// Upper/lower metric mean dimension, plus the orbit version over a declared
/// sample of sequences. The radius grid must hold at least three values, all
/// below 1.
pub fn mmdim_estimate(
    fs: &FunctionSystem,
    n_grid: &[usize],
    eps_grid: &[f64],
    sigmas: &[SigmaGenerator],
    mode: Mode,
    budget: &Budget,
) -> Result<MmdimReport> {
    if eps_grid.len() < 3 || eps_grid.iter().any(|&e| e >= 1.0) {
        return Err(Error::Config("mean dimension needs at least three radii, all below 1".into()));
    }
    let grid = count_grid(fs, None, n_grid, eps_grid, mode, budget, false)?;
    let report = rate_report(&grid, None)?;
    let mut per_sigma = Vec::new();
    let mut sigma_grids = Vec::new();
    for s in sigmas {
        let g = count_grid(fs, Some(s), n_grid, eps_grid, mode, budget, false)?;
        let r = rate_report(&g, None)?;
        per_sigma.push(SigmaRate { sigma: s.to_string(), omdim: r.lmdim.unwrap_or(0.0), report: r });
        sigma_grids.push(g);
    }
    let omdim = per_sigma.iter().map(|s| s.omdim).reduce(f64::max);
    Ok(MmdimReport { report, per_sigma, omdim, grid, sigma_grids })
}
