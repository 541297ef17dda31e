use rayon::prelude::*;
use serde::Serialize;

use super::least_squares_slope;
use crate::error::{invalid, Result};
use crate::evolver::{
    evolve, mean_mode_ode_check, random_zero_mean_field, EquationDescriptor, MeanModeCheck,
    RunStatus, SolverConfig, MAX_SNAPSHOT_SPACING,
};
use crate::spectral::SpectralGrid;
use crate::symbols::{alpha_critical, SymbolTable};

/// Measured rates with `|rate|` below this are called neutral.
pub const NEUTRAL_RATE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Stable,
    Neutral,
    Unstable,
}

impl Verdict {
    pub fn from_rate(rate: f64) -> Self {
        if rate > NEUTRAL_RATE {
            Verdict::Unstable
        } else if rate < -NEUTRAL_RATE {
            Verdict::Stable
        } else {
            Verdict::Neutral
        }
    }
}

#[derive(Debug, Clone)]
pub struct StabilityScanConfig {
    pub ell: f64,
    pub n_modes: usize,
    pub alphas: Vec<f64>,
    pub amplitude: f64,
    pub t_end: f64,
    pub dt: f64,
    pub seed: u64,
    /// Fraction of the run (at its end) used for the rate fit.
    pub fit_fraction: f64,
}

impl StabilityScanConfig {
    /// 0.1-spaced scan of `[α_c − 1, α_c + 1] ∩ (0, ∞)`.
    pub fn default_alphas(ell: f64) -> Result<Vec<f64>> {
        let ac = alpha_critical(ell)?;
        Ok((-10..=10)
            .map(|i| ac + i as f64 / 10.0)
            .filter(|&a| a > 0.0)
            .collect())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityCell {
    pub alpha: f64,
    /// Late-time slope of `ln |(I − Π)φ|₂`.
    pub measured_rate: f64,
    /// `max_{k≥1} l_k`.
    pub predicted_rate: f64,
    pub verdict: Verdict,
    /// Relative rate mismatch, when `|predicted| > NEUTRAL_RATE`.
    pub rate_rel_error: Option<f64>,
    /// Largest zero-mean coefficient at the final time.
    pub dominant_mode: usize,
    pub dominant_mode_rate: f64,
    /// Audit of the mean-mode law along the run.
    pub mean_mode: Option<MeanModeCheck>,
    pub anomaly: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityScanReport {
    pub ell: f64,
    pub alpha_critical: f64,
    pub amplitude: f64,
    pub t_end: f64,
    pub cells: Vec<StabilityCell>,
    /// Consecutive `(α_lo, α_hi)` pairs whose verdicts differ.
    pub transitions: Vec<(f64, f64)>,
}

impl StabilityScanReport {
    pub fn alphas(&self) -> Vec<f64> {
        self.cells.iter().map(|c| c.alpha).collect()
    }
}

/// Least-squares slope of `ln values` over the last `fraction` of `times`.
pub fn late_time_rate(times: &[f64], values: &[f64], fraction: f64) -> f64 {
    let t_end = *times.last().unwrap_or(&0.0);
    let t_start = t_end * (1.0 - fraction);
    let (xs, ys): (Vec<f64>, Vec<f64>) = times
        .iter()
        .zip(values)
        .filter(|(&t, &v)| t >= t_start && v > 0.0)
        .map(|(&t, &v)| (t, v.ln()))
        .unzip();
    if xs.len() < 2 {
        return f64::NAN;
    }
    least_squares_slope(&xs, &ys)
}

fn run_cell(cfg: &StabilityScanConfig, grid: &SpectralGrid, alpha: f64) -> Result<StabilityCell> {
    let table = SymbolTable::new(alpha, grid)?;
    let (_, predicted) = table.max_nonzero_rate();
    let descriptor = EquationDescriptor::front(alpha, grid)?;
    let solver = SolverConfig {
        dt: cfg.dt,
        t_end: cfg.t_end,
        output_stride: ((MAX_SNAPSHOT_SPACING / cfg.dt) * (1.0 + 1e-9))
            .floor()
            .max(1.0) as usize,
        descriptor,
        initial_condition: random_zero_mean_field(grid, cfg.amplitude, cfg.seed),
    };
    let traj = evolve(&solver)?;
    let norms: Vec<f64> = traj
        .diagnostics
        .iter()
        .map(|d| d.zero_mean_l2_norm)
        .collect();
    let measured = late_time_rate(&traj.times, &norms, cfg.fit_fraction);
    let last = traj.final_state();
    let dominant_mode = (1..grid.n_modes())
        .max_by(|&a, &b| {
            last.coeffs()[a]
                .abs()
                .partial_cmp(&last.coeffs()[b].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap_or(1);
    let anomaly = match traj.status {
        RunStatus::Blowup { time } => Some(format!("blowup at t = {time}")),
        RunStatus::Completed if !measured.is_finite() => Some("rate fit failed".to_string()),
        RunStatus::Completed => None,
    };
    let rate_rel_error =
        (predicted.abs() > NEUTRAL_RATE).then(|| ((measured - predicted) / predicted).abs());
    Ok(StabilityCell {
        alpha,
        measured_rate: measured,
        predicted_rate: predicted,
        verdict: Verdict::from_rate(measured),
        rate_rel_error,
        dominant_mode,
        dominant_mode_rate: table.l()[dominant_mode],
        mean_mode: mean_mode_ode_check(&traj).ok(),
        anomaly,
    })
}

/// Runs the front equation from small seeded zero-mean data for each `α` and
/// compares the late-time decay/growth rate with `max_{k≥1} l_k`.
pub fn run_stability_scan(cfg: &StabilityScanConfig) -> Result<StabilityScanReport> {
    if cfg.alphas.is_empty() || cfg.alphas.iter().any(|&a| !(a > 0.0)) {
        return invalid("alphas must be a non-empty list of positive values");
    }
    if !(cfg.fit_fraction > 0.0 && cfg.fit_fraction <= 1.0) {
        return invalid("fit_fraction must lie in (0, 1]");
    }
    let grid = SpectralGrid::new(cfg.ell, cfg.n_modes)?;
    let cells = cfg
        .alphas
        .par_iter()
        .map(|&alpha| run_cell(cfg, &grid, alpha))
        .collect::<Result<Vec<_>>>()?;
    let transitions = cells
        .windows(2)
        .filter(|w| w[0].verdict != w[1].verdict)
        .map(|w| (w[0].alpha, w[1].alpha))
        .collect();
    Ok(StabilityScanReport {
        ell: cfg.ell,
        alpha_critical: alpha_critical(cfg.ell)?,
        amplitude: cfg.amplitude,
        t_end: cfg.t_end,
        cells,
        transitions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_thresholds() {
        assert_eq!(Verdict::from_rate(-0.01), Verdict::Stable);
        assert_eq!(Verdict::from_rate(5e-4), Verdict::Neutral);
        assert_eq!(Verdict::from_rate(0.01), Verdict::Unstable);
    }

    #[test]
    fn rate_of_exponential() {
        let times: Vec<f64> = (0..100).map(|i| i as f64 * 0.1).collect();
        let vals: Vec<f64> = times.iter().map(|t| 3.0 * (-0.7 * t).exp()).collect();
        assert!((late_time_rate(&times, &vals, 0.2) + 0.7).abs() < 1e-12);
    }

    #[test]
    fn default_alpha_grid() {
        let a = StabilityScanConfig::default_alphas(4.0 * std::f64::consts::PI).unwrap();
        assert_eq!(a.len(), 21);
        assert_eq!(a[10], 2.0);
        let small = StabilityScanConfig::default_alphas(100.0).unwrap();
        assert!(small.iter().all(|&x| x > 0.0));
    }
}
