//! Desk-scale studies built on the solvers: linear stability threshold,
//! convergence of the rescaled front equation to K–S, remainder energy,
//! K–S a priori bounds, and Galerkin / time-step refinement.
//!
//! Every study returns a serializable report; nothing here writes files.

mod apriori;
mod convergence;
mod energy;
mod galerkin;
mod stability;

pub use apriori::{run_ks_apriori_check, KsAprioriReport};
pub use convergence::{
    run_convergence_study, ConvergenceConfig, ConvergenceOutcome, ConvergenceReport,
};
pub use energy::{energy_functional, energy_functional_grouped, run_energy_monitor, EnergyTrace};
pub use galerkin::{
    run_dt_refinement, run_galerkin_refinement, DtRefinementReport, GalerkinConfig,
    GalerkinEquation, GalerkinLevel, GalerkinReport,
};
pub use stability::{
    late_time_rate, run_stability_scan, StabilityCell, StabilityScanConfig, StabilityScanReport,
    Verdict, NEUTRAL_RATE,
};

/// Ordinary least-squares slope of `ys` against `xs`.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}
