use rayon::prelude::*;
use serde::Serialize;

use super::least_squares_slope;
use crate::error::{invalid, Result};
use crate::evolver::{evolve, EquationDescriptor, RunStatus, SolverConfig, Trajectory};
use crate::spectral::SpectralField;

/// Both equations are integrated in the rescaled frame (period `ℓ_0`, time
/// `τ`), so `ψ_ε` and `Φ` share one grid and one snapshot schedule.
#[derive(Debug, Clone)]
pub struct ConvergenceConfig {
    /// `Φ_0`; its grid fixes `ℓ_0` and `N`.
    pub initial: SpectralField,
    pub t_end: f64,
    pub dt: f64,
    pub output_stride: usize,
    /// Strictly decreasing, in `(0, 1]`.
    pub epsilons: Vec<f64>,
}

impl ConvergenceConfig {
    fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.initial.grid().period() <= 4.0 * std::f64::consts::PI {
            problems.push("ell0 must exceed 4*pi".to_string());
        }
        if self.epsilons.is_empty() {
            problems.push("epsilons must be non-empty".to_string());
        }
        if self.epsilons.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
            problems.push("epsilons must lie in (0, 1]".to_string());
        }
        if self.epsilons.windows(2).any(|w| w[1] >= w[0]) {
            problems.push("epsilons must be strictly decreasing".to_string());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            invalid(problems.join("; "))
        }
    }

    fn solver(&self, descriptor: EquationDescriptor) -> SolverConfig {
        SolverConfig {
            dt: self.dt,
            t_end: self.t_end,
            output_stride: self.output_stride,
            descriptor,
            initial_condition: self.initial.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub ell0: f64,
    pub n_modes: usize,
    pub t_end: f64,
    pub dt: f64,
    pub epsilons: Vec<f64>,
    /// `sup_{τ,η} |ψ_ε − Φ|` over snapshots and collocation points.
    pub sup_errors: Vec<f64>,
    /// `sup_errors / ε`, the observed `sup |ρ_ε|`.
    pub ratios: Vec<f64>,
    /// `max(ratios) / min(ratios)`.
    pub ratio_spread: f64,
    /// Log-log slope of `sup_errors` against `ε`.
    pub fitted_order: f64,
    /// `sup_τ |ζ(τ)|₂` with `ζ = ∂_η(ψ_ε − Φ)/ε`.
    pub zeta_sup: Vec<f64>,
    /// Error of the original variables, `sup |φ − εΦ| = ε · sup_errors`.
    pub unscaled_errors: Vec<f64>,
    pub ks_status: RunStatus,
    pub rescaled_status: Vec<RunStatus>,
    /// True if any run stopped early; the affected errors cover only the
    /// common completed window.
    pub partial: bool,
}

/// Report plus the trajectories, kept for the energy and a priori studies.
#[derive(Debug, Clone)]
pub struct ConvergenceOutcome {
    pub report: ConvergenceReport,
    pub ks: Trajectory,
    pub rescaled: Vec<Trajectory>,
}

fn compare(psi: &Trajectory, phi: &Trajectory, eps: f64) -> Result<(f64, f64)> {
    let n = psi.states.len().min(phi.states.len());
    let mut sup_err: f64 = 0.0;
    let mut zeta_sup: f64 = 0.0;
    for i in 0..n {
        let diff = psi.states[i].axpy(-1.0, &phi.states[i])?;
        sup_err = sup_err.max(diff.sup_norm());
        zeta_sup = zeta_sup.max(diff.differentiate(1)?.l2_norm() / eps);
    }
    Ok((sup_err, zeta_sup))
}

pub fn run_convergence_study(cfg: &ConvergenceConfig) -> Result<ConvergenceOutcome> {
    cfg.validate()?;
    let grid = cfg.initial.grid().clone();
    let ks = evolve(&cfg.solver(EquationDescriptor::ks(&grid)))?;
    let rescaled = cfg
        .epsilons
        .par_iter()
        .map(|&eps| evolve(&cfg.solver(EquationDescriptor::rescaled(eps, &grid)?)))
        .collect::<Result<Vec<_>>>()?;

    let mut sup_errors = Vec::new();
    let mut zeta_sup = Vec::new();
    for (traj, &eps) in rescaled.iter().zip(&cfg.epsilons) {
        let (e, z) = compare(traj, &ks, eps)?;
        sup_errors.push(e);
        zeta_sup.push(z);
    }
    let ratios: Vec<f64> = sup_errors
        .iter()
        .zip(&cfg.epsilons)
        .map(|(e, eps)| e / eps)
        .collect();
    let ratio_max = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ratio_min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let fitted_order = if cfg.epsilons.len() >= 2 {
        let xs: Vec<f64> = cfg.epsilons.iter().map(|e| e.ln()).collect();
        let ys: Vec<f64> = sup_errors.iter().map(|e| e.ln()).collect();
        least_squares_slope(&xs, &ys)
    } else {
        f64::NAN
    };
    let unscaled_errors = sup_errors
        .iter()
        .zip(&cfg.epsilons)
        .map(|(e, eps)| e * eps)
        .collect();
    let partial = !ks.completed() || rescaled.iter().any(|t| !t.completed());
    let report = ConvergenceReport {
        ell0: grid.period(),
        n_modes: grid.n_modes(),
        t_end: cfg.t_end,
        dt: cfg.dt,
        epsilons: cfg.epsilons.clone(),
        sup_errors,
        ratios,
        ratio_spread: ratio_max / ratio_min,
        fitted_order,
        zeta_sup,
        unscaled_errors,
        ks_status: ks.status,
        rescaled_status: rescaled.iter().map(|t| t.status).collect(),
        partial,
    };
    Ok(ConvergenceOutcome {
        report,
        ks,
        rescaled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SpectralGrid;
    use std::f64::consts::PI;

    fn config(epsilons: Vec<f64>) -> ConvergenceConfig {
        let grid = SpectralGrid::new(10.0 * PI, 17).unwrap();
        ConvergenceConfig {
            initial: grid.basis_field(1, 0.1),
            t_end: 0.1,
            dt: 1e-2,
            output_stride: 1,
            epsilons,
        }
    }

    #[test]
    fn rejects_bad_sweeps() {
        assert!(run_convergence_study(&config(vec![0.01, 0.02])).is_err());
        assert!(run_convergence_study(&config(vec![])).is_err());
        assert!(run_convergence_study(&config(vec![2.0])).is_err());
        let mut small = config(vec![0.1]);
        small.initial = SpectralGrid::new(2.0 * PI, 9).unwrap().zeros();
        assert!(run_convergence_study(&small).is_err());
    }

    #[test]
    fn tiny_epsilon_matches_ks() {
        let out = run_convergence_study(&config(vec![1e-300])).unwrap();
        assert_eq!(out.report.sup_errors[0], 0.0);
    }

    #[test]
    fn short_sweep_is_first_order() {
        let out = run_convergence_study(&config(vec![0.04, 0.02])).unwrap();
        let r = &out.report;
        assert!(!r.partial);
        assert!(r.fitted_order > 0.9, "{r:?}");
        assert!(r.sup_errors.iter().all(|e| e.is_finite() && *e > 0.0));
    }
}
