use serde::Serialize;

use crate::error::{invalid, Result};
use crate::evolver::Trajectory;

/// Snapshot-wise check of the K–S slope and mean bounds, in the RMS norm:
///
/// * `|Φ_η(τ)|₂ ≤ e^{13τ/6} |Φ_0'|₂`
/// * `|ΠΦ(τ)| ≤ |ΠΦ_0| + (3/26) |Φ_0'|₂² e^{13τ/3}`
#[derive(Debug, Clone, Serialize)]
pub struct KsAprioriReport {
    pub times: Vec<f64>,
    pub slope_norms: Vec<f64>,
    pub slope_bounds: Vec<f64>,
    pub means: Vec<f64>,
    pub mean_bounds: Vec<f64>,
    /// `min (bound − value)` over snapshots.
    pub slope_margin: f64,
    pub mean_margin: f64,
    pub slope_ok: bool,
    pub mean_ok: bool,
    /// Times at which either bound fails.
    pub violations: Vec<f64>,
}

impl KsAprioriReport {
    pub fn all_ok(&self) -> bool {
        self.slope_ok && self.mean_ok
    }
}

pub fn run_ks_apriori_check(traj: &Trajectory) -> Result<KsAprioriReport> {
    if traj.label != "ks" {
        return invalid(format!(
            "a priori bounds apply to K-S trajectories, got '{}'",
            traj.label
        ));
    }
    let slope = |i: usize| -> Result<f64> { Ok(traj.states[i].differentiate(1)?.l2_norm()) };
    let s0 = slope(0)?;
    let p0 = traj.diagnostics[0].mean;
    let n = traj.times.len();
    let mut r = KsAprioriReport {
        times: traj.times.clone(),
        slope_norms: Vec::with_capacity(n),
        slope_bounds: Vec::with_capacity(n),
        means: Vec::with_capacity(n),
        mean_bounds: Vec::with_capacity(n),
        slope_margin: f64::INFINITY,
        mean_margin: f64::INFINITY,
        slope_ok: true,
        mean_ok: true,
        violations: Vec::new(),
    };
    for (i, &t) in traj.times.iter().enumerate() {
        let s = slope(i)?;
        let sb = (13.0 * t / 6.0).exp() * s0;
        let p = traj.diagnostics[i].mean;
        let pb = p0.abs() + 3.0 / 26.0 * s0 * s0 * (13.0 * t / 3.0).exp();
        r.slope_margin = r.slope_margin.min(sb - s);
        r.mean_margin = r.mean_margin.min(pb - p.abs());
        // Equality at τ = 0 is exact up to rounding of the bound.
        let tol = 1e-14 * (1.0 + sb);
        let slope_ok = s <= sb + tol;
        let mean_ok = p.abs() <= pb + 1e-14 * (1.0 + pb);
        if !(slope_ok && mean_ok) {
            r.violations.push(t);
        }
        r.slope_ok &= slope_ok;
        r.mean_ok &= mean_ok;
        r.slope_norms.push(s);
        r.slope_bounds.push(sb);
        r.means.push(p);
        r.mean_bounds.push(pb);
    }
    Ok(r)
}
