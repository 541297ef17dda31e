use rayon::prelude::*;
use serde::Serialize;

use super::late_time_rate;
use crate::error::{invalid, Result};
use crate::evolver::{evolve, EquationDescriptor, RunStatus, SolverConfig};
use crate::spectral::{SpectralField, SpectralGrid};

/// Differences below this fraction of the state norm count as converged to
/// rounding and are exempt from the shrink test.
const ROUNDING_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "equation", rename_all = "snake_case")]
pub enum GalerkinEquation {
    Ks,
    Front { alpha: f64 },
    Rescaled { epsilon: f64 },
}

impl GalerkinEquation {
    pub fn descriptor(&self, grid: &SpectralGrid, linear_only: bool) -> Result<EquationDescriptor> {
        let d = match *self {
            GalerkinEquation::Ks => EquationDescriptor::ks(grid),
            GalerkinEquation::Front { alpha } => EquationDescriptor::front(alpha, grid)?,
            GalerkinEquation::Rescaled { epsilon } => EquationDescriptor::rescaled(epsilon, grid)?,
        };
        Ok(if linear_only { d.linearized() } else { d })
    }
}

#[derive(Debug, Clone)]
pub struct GalerkinConfig {
    pub equation: GalerkinEquation,
    pub linear_only: bool,
    /// Initial data; truncated or padded onto each level.
    pub initial: SpectralField,
    pub n_list: Vec<usize>,
    pub dt: f64,
    pub t_end: f64,
    pub output_stride: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct GalerkinLevel {
    pub n_modes: usize,
    pub status: RunStatus,
    pub final_l2: f64,
    /// `max_t |u_N(t)|₂`, the per-level energy diagnostic.
    pub max_l2: f64,
    /// Late-time log-slope of the zero-mean norm (last 20%).
    pub growth_rate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GalerkinReport {
    pub levels: Vec<GalerkinLevel>,
    /// `|u_{N_{i+1}} − u_{N_i}|₂` at `t_end`, coarse state padded.
    pub differences: Vec<f64>,
    /// `differences[i] / differences[i+1]`.
    pub shrink_factors: Vec<f64>,
    /// Every shrink factor is ≥ 10 once the difference is below 1e−3.
    pub spectral_ok: bool,
    /// `(max − min) / |mean|` of the growth rates.
    pub growth_rate_spread: f64,
}

pub fn run_galerkin_refinement(cfg: &GalerkinConfig) -> Result<GalerkinReport> {
    if cfg.n_list.len() < 2 || cfg.n_list.windows(2).any(|w| w[1] <= w[0]) {
        return invalid("n_list must hold at least two strictly increasing sizes");
    }
    let period = cfg.initial.grid().period();
    let runs = cfg
        .n_list
        .par_iter()
        .map(|&n| {
            let grid = SpectralGrid::new(period, n)?;
            evolve(&SolverConfig {
                dt: cfg.dt,
                t_end: cfg.t_end,
                output_stride: cfg.output_stride,
                descriptor: cfg.equation.descriptor(&grid, cfg.linear_only)?,
                initial_condition: cfg.initial.resample(&grid)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let levels: Vec<GalerkinLevel> = runs
        .iter()
        .zip(&cfg.n_list)
        .map(|(traj, &n)| {
            let norms: Vec<f64> = traj
                .diagnostics
                .iter()
                .map(|d| d.zero_mean_l2_norm)
                .collect();
            GalerkinLevel {
                n_modes: n,
                status: traj.status,
                final_l2: traj.final_state().l2_norm(),
                max_l2: traj
                    .diagnostics
                    .iter()
                    .map(|d| d.l2_norm)
                    .fold(0.0, f64::max),
                growth_rate: late_time_rate(&traj.times, &norms, 0.2),
            }
        })
        .collect();

    let mut differences = Vec::new();
    for w in runs.windows(2) {
        let fine = w[1].final_state();
        let coarse = w[0].final_state().resample(fine.grid())?;
        let d = if w[0].completed() && w[1].completed() {
            fine.axpy(-1.0, &coarse)?.l2_norm()
        } else {
            f64::NAN
        };
        differences.push(d);
    }
    let shrink_factors: Vec<f64> = differences.windows(2).map(|w| w[0] / w[1]).collect();
    let scale = levels.last().map_or(1.0, |l| l.final_l2.max(1.0));
    let spectral_ok = differences.iter().all(|d| d.is_finite())
        && differences
            .windows(2)
            .all(|w| w[0] >= 1e-3 || w[1] <= ROUNDING_FLOOR * scale || w[0] >= 10.0 * w[1]);
    let rates: Vec<f64> = levels.iter().map(|l| l.growth_rate).collect();
    let mean_rate = rates.iter().sum::<f64>() / rates.len() as f64;
    let spread = rates.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - rates.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(GalerkinReport {
        levels,
        differences,
        shrink_factors,
        spectral_ok,
        growth_rate_spread: spread / mean_rate.abs(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DtRefinementReport {
    pub dts: Vec<f64>,
    /// `|u_{dt_i} − u_{dt_{i+1}}|₂` at `t_end`.
    pub errors: Vec<f64>,
    /// `errors[i] / errors[i+1]`; about 16 for a fourth-order scheme.
    pub ratios: Vec<f64>,
}

/// Successive step halvings from `dt`, `levels` runs in total.
pub fn run_dt_refinement(
    descriptor: &EquationDescriptor,
    initial: &SpectralField,
    t_end: f64,
    dt: f64,
    levels: usize,
) -> Result<DtRefinementReport> {
    if levels < 3 {
        return invalid("dt refinement needs at least three levels");
    }
    let dts: Vec<f64> = (0..levels).map(|i| dt / (1u64 << i) as f64).collect();
    let finals = dts
        .par_iter()
        .map(|&h| {
            let cfg = SolverConfig {
                dt: h,
                t_end,
                output_stride: usize::MAX,
                descriptor: descriptor.clone(),
                initial_condition: initial.clone(),
            };
            let traj = evolve(&cfg)?;
            match traj.status {
                RunStatus::Completed => Ok(traj.final_state().clone()),
                RunStatus::Blowup { time } => Err(crate::Error::NumericalBlowup { time }),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let errors: Vec<f64> = finals
        .windows(2)
        .map(|w| w[0].axpy(-1.0, &w[1]).map(|d| d.l2_norm()))
        .collect::<Result<_>>()?;
    let ratios = errors.windows(2).map(|w| w[0] / w[1]).collect();
    Ok(DtRefinementReport {
        dts,
        errors,
        ratios,
    })
}
