use serde::Serialize;

use crate::error::{invalid, Result};
use crate::evolver::Trajectory;
use crate::spectral::SpectralField;
use crate::symbols::RescaledSymbolTable;

/// Remainder energy over a trajectory pair.
#[derive(Debug, Clone, Serialize)]
pub struct EnergyTrace {
    pub times: Vec<f64>,
    pub a_values: Vec<f64>,
    pub n: usize,
    pub epsilon: f64,
    /// `max_τ A_ε(τ)`, the observed `K_n`.
    pub k_bound_observed: f64,
}

fn nth_derivative(f: &SpectralField, n: usize) -> Result<SpectralField> {
    if n == 0 {
        Ok(f.clone())
    } else {
        f.differentiate(n)
    }
}

fn check_pair(table: &RescaledSymbolTable, zeta: &SpectralField, n: usize) -> Result<()> {
    if n > 2 {
        return invalid(format!("derivative order must be 0, 1 or 2, got {n}"));
    }
    if zeta.grid() != table.grid() {
        return invalid("remainder and symbol table live on different grids");
    }
    Ok(())
}

/// `A_ε = |Dⁿζ|² + 4ε|Dⁿ⁺¹ζ|² + (1+ε)|√R_ε Dⁿζ|²` in the coefficient norm.
pub fn energy_functional(
    table: &RescaledSymbolTable,
    zeta: &SpectralField,
    n: usize,
) -> Result<f64> {
    check_pair(table, zeta, n)?;
    let eps = table.epsilon();
    let dn = nth_derivative(zeta, n)?;
    let dn1 = zeta.differentiate(n + 1)?;
    let r_term: f64 = dn
        .coeffs()
        .iter()
        .zip(table.r())
        .map(|(a, r)| r * a * a)
        .sum();
    Ok(dn.l2_norm().powi(2) + 4.0 * eps * dn1.l2_norm().powi(2) + (1.0 + eps) * r_term)
}

/// The same sum regrouped per mode, `Σ λ_kⁿ (1 + 4ελ_k + (1+ε) r_k) ζ̂_k²`.
pub fn energy_functional_grouped(
    table: &RescaledSymbolTable,
    zeta: &SpectralField,
    n: usize,
) -> Result<f64> {
    check_pair(table, zeta, n)?;
    let eps = table.epsilon();
    let grid = zeta.grid();
    Ok(zeta
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let w = grid.derivative_weight(k);
            let weight = w.powi(n as i32) * (1.0 + 4.0 * eps * w + (1.0 + eps) * table.r()[k]);
            weight * a * a
        })
        .sum())
}

/// `A_ε(τ)` along `ζ = ∂_η(ψ_ε − Φ)/ε` for trajectories sharing a schedule.
pub fn run_energy_monitor(
    psi: &Trajectory,
    phi: &Trajectory,
    epsilon: f64,
    n: usize,
) -> Result<EnergyTrace> {
    if psi.times.len() != phi.times.len()
        || psi
            .times
            .iter()
            .zip(&phi.times)
            .any(|(a, b)| (a - b).abs() > 1e-12 * (1.0 + b.abs()))
    {
        return invalid("trajectories do not share snapshot times");
    }
    let grid = psi.final_state().grid();
    if grid != phi.final_state().grid() {
        return invalid("trajectories live on different grids");
    }
    let table = RescaledSymbolTable::new(epsilon, grid)?;
    let mut a_values = Vec::with_capacity(psi.times.len());
    for (p, f) in psi.states.iter().zip(&phi.states) {
        let zeta = p.axpy(-1.0, f)?.differentiate(1)?.scaled(1.0 / epsilon);
        a_values.push(energy_functional(&table, &zeta, n)?);
    }
    let k_bound_observed = a_values.iter().cloned().fold(0.0, f64::max);
    Ok(EnergyTrace {
        times: psi.times.clone(),
        a_values,
        n,
        epsilon,
        k_bound_observed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolver::random_zero_mean_field;
    use crate::spectral::SpectralGrid;

    #[test]
    fn grouped_matches_three_term() {
        for n_modes in [16, 17] {
            let grid = SpectralGrid::new(30.0, n_modes).unwrap();
            let zeta = random_zero_mean_field(&grid, 1.0, 7)
                .differentiate(1)
                .unwrap();
            for eps in [1.0, 0.04, 1e-6] {
                let table = RescaledSymbolTable::new(eps, &grid).unwrap();
                for n in 0..=2 {
                    let a = energy_functional(&table, &zeta, n).unwrap();
                    let b = energy_functional_grouped(&table, &zeta, n).unwrap();
                    assert!((a - b).abs() <= 1e-12 * a.max(1.0), "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn rejects_high_order() {
        let grid = SpectralGrid::new(30.0, 9).unwrap();
        let table = RescaledSymbolTable::new(0.1, &grid).unwrap();
        assert!(energy_functional(&table, &grid.zeros(), 3).is_err());
    }
}
