//! Quasi-steady temperature and enthalpy profiles behind a front mode.
//!
//! For each Fourier mode `k` of the front, the perturbations `û(x)` and
//! `v̂(x)` solve linear constant-coefficient ODEs in the normal coordinate
//! `x`, driven by `E = φ̂_t + (φ_y)²^(k)` and `D = E + λ_kφ̂`. The closed forms
//! below are rebuilt here and audited against the interface conditions
//!
//! ```text
//! u(0) = [v] = 0,   v(0) − u_x(0) = ½(φ_y)²,   [v_x] = −α u_x(0).
//! ```
//!
//! The third condition only holds when `φ̂_t` follows the front equation,
//! which is how the front equation is obtained in the first place.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::spectral::SpectralGrid;
use crate::symbols::SymbolTable;

/// Front data of one mode at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrontModeData {
    pub k: usize,
    pub lambda: f64,
    pub phi: f64,
    pub phi_t: f64,
    /// `(φ_y)²^(k)`.
    pub phiy_sq: f64,
    pub alpha: f64,
}

impl FrontModeData {
    pub fn new(
        k: usize,
        lambda: f64,
        phi: f64,
        phi_t: f64,
        phiy_sq: f64,
        alpha: f64,
    ) -> Result<Self> {
        let d = Self {
            k,
            lambda,
            phi,
            phi_t,
            phiy_sq,
            alpha,
        };
        d.validate()?;
        Ok(d)
    }

    /// Data for mode `k` of `grid` with `φ̂_t` taken from the front equation.
    pub fn on_front_equation(
        grid: &SpectralGrid,
        k: usize,
        alpha: f64,
        phi: f64,
        phiy_sq: f64,
    ) -> Result<Self> {
        if k >= grid.n_modes() {
            return invalid(format!(
                "mode {k} outside the grid ({} modes)",
                grid.n_modes()
            ));
        }
        let table = SymbolTable::new(alpha, grid)?;
        let phi_t = table.l()[k] * phi + table.g()[k] * phiy_sq;
        Self::new(k, grid.eigenvalues()[k], phi, phi_t, phiy_sq, alpha)
    }

    fn validate(&self) -> Result<()> {
        let vals = [self.lambda, self.phi, self.phi_t, self.phiy_sq, self.alpha];
        if vals.iter().any(|v| !v.is_finite()) {
            return invalid("front mode data must be finite");
        }
        if self.lambda < 0.0 {
            return invalid(format!("lambda must be non-negative, got {}", self.lambda));
        }
        if self.k == 0 && self.lambda != 0.0 {
            return invalid("mode 0 carries lambda = 0");
        }
        if self.k >= 1 && self.lambda <= 0.0 {
            return invalid(format!("mode {} needs lambda > 0", self.k));
        }
        Ok(())
    }

    /// `E = φ̂_t + (φ_y)²^`.
    pub fn forcing(&self) -> f64 {
        self.phi_t + self.phiy_sq
    }

    /// `D = E + λφ̂`.
    pub fn driving(&self) -> f64 {
        self.forcing() + self.lambda * self.phi
    }

    fn nu(&self) -> f64 {
        0.5 + 0.5 * (1.0 + 4.0 * self.lambda).sqrt()
    }
}

/// Free constants of the enthalpy profile for a mode `k ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub nu: f64,
}

pub fn profile_coefficients(data: &FrontModeData) -> Result<ProfileCoefficients> {
    data.validate()?;
    if data.k == 0 {
        return invalid("profile coefficients are defined for k >= 1; use reconstruct_mode0");
    }
    let lam = data.lambda;
    let nu = data.nu();
    let den = 1.0 - 2.0 * nu;
    let a = data.alpha / den;
    let e = data.forcing();
    let phi = data.phi;
    let c1 = a * (1.0 + nu + nu / den + lam / nu) * phi
        + a * (1.0 / lam + 2.0 * nu / lam + 1.0 / nu + nu / (lam * den)) * e;
    let c2 = a * (2.0 + nu / den + lam / nu - nu) * phi
        - a * (2.0 * nu / lam - 3.0 / lam - nu / (lam * den) - 1.0 / nu) * e;
    Ok(ProfileCoefficients { c1, c2, nu })
}

/// Sampled profiles plus one-sided limits at the front `x = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileSlice {
    pub k: usize,
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub u_at_zero: f64,
    pub u_x_left: f64,
    pub v_left: f64,
    pub v_right: f64,
    pub v_x_left: f64,
    pub v_x_right: f64,
}

fn check_points(x_points: &[f64]) -> Result<()> {
    if x_points.iter().any(|x| !(x.is_finite() && x.abs() <= 30.0)) {
        return invalid("profile abscissae must lie in [-30, 30]");
    }
    Ok(())
}

/// Mode-0 profiles `û = −E x eˣ`, `v̂ = −αE x(x+1)eˣ` for `x < 0`, zero beyond.
pub fn reconstruct_mode0(data: &FrontModeData, x_points: &[f64]) -> Result<ProfileSlice> {
    data.validate()?;
    if data.k != 0 {
        return invalid(format!("reconstruct_mode0 called with k = {}", data.k));
    }
    check_points(x_points)?;
    let e = data.forcing();
    let alpha = data.alpha;
    let mut u = Vec::with_capacity(x_points.len());
    let mut v = Vec::with_capacity(x_points.len());
    for &x in x_points {
        if x < 0.0 {
            let ex = x.exp();
            u.push(-e * x * ex);
            v.push(-alpha * e * x * (x + 1.0) * ex);
        } else {
            u.push(0.0);
            v.push(0.0);
        }
    }
    Ok(ProfileSlice {
        k: 0,
        x: x_points.to_vec(),
        u,
        v,
        u_at_zero: 0.0,
        u_x_left: -e,
        v_left: 0.0,
        v_right: 0.0,
        v_x_left: -alpha * e,
        v_x_right: 0.0,
    })
}

/// Profiles of a mode `k ≥ 1`.
///
/// `û = (D/λ)(eˣ − e^{νx})` is the solution of `û_x − û_xx + λû = D eˣ` that
/// vanishes at 0 and decays as `x → −∞`; `v̂` uses the constants `c1, c2`.
pub fn reconstruct_mode(
    data: &FrontModeData,
    coeffs: &ProfileCoefficients,
    x_points: &[f64],
) -> Result<ProfileSlice> {
    data.validate()?;
    if data.k == 0 {
        return invalid("reconstruct_mode needs k >= 1; use reconstruct_mode0");
    }
    check_points(x_points)?;
    let lam = data.lambda;
    let alpha = data.alpha;
    let nu = coeffs.nu;
    let den = 1.0 - 2.0 * nu;
    let e = data.forcing();
    let d = data.driving();
    let phi = data.phi;
    let (c1, c2) = (coeffs.c1, coeffs.c2);
    let tail = alpha / lam * nu / den * d;

    let mut u = Vec::with_capacity(x_points.len());
    let mut v = Vec::with_capacity(x_points.len());
    for &x in x_points {
        if x < 0.0 {
            let ex = x.exp();
            let enx = (nu * x).exp();
            // eˣ − e^{νx} = −eˣ·expm1((ν − 1)x)
            u.push(-d / lam * ex * ((nu - 1.0) * x).exp_m1());
            v.push(
                c1 * enx
                    + alpha / lam * e * (x + 2.0) * ex
                    + alpha * phi * (x + 1.0) * ex
                    + tail * x * enx,
            );
        } else {
            u.push(0.0);
            v.push(c2 * ((1.0 - nu) * x).exp());
        }
    }
    Ok(ProfileSlice {
        k: data.k,
        x: x_points.to_vec(),
        u,
        v,
        u_at_zero: 0.0,
        u_x_left: d / lam * (1.0 - nu),
        v_left: c1 + 2.0 * alpha * e / lam + alpha * phi,
        v_right: c2,
        v_x_left: nu * c1 + 3.0 * alpha * e / lam + 2.0 * alpha * phi + tail,
        v_x_right: (1.0 - nu) * c2,
    })
}

/// Convenience: coefficients and profiles in one call, any `k`.
pub fn reconstruct(data: &FrontModeData, x_points: &[f64]) -> Result<ProfileSlice> {
    if data.k == 0 {
        reconstruct_mode0(data, x_points)
    } else {
        let c = profile_coefficients(data)?;
        reconstruct_mode(data, &c, x_points)
    }
}

/// Residuals of the interface conditions at `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JumpResiduals {
    /// `|v(0) − u_x(0⁻) − ½(φ_y)²^|`; vanishes on the front equation.
    pub front_condition: f64,
    /// `|[v_x] + α u_x(0⁻)|`.
    pub flux_jump: f64,
    /// `|[v]|`.
    pub continuity: f64,
    /// `|u(0)|`.
    pub dirichlet: f64,
}

impl JumpResiduals {
    pub fn max(&self) -> f64 {
        self.front_condition
            .max(self.flux_jump)
            .max(self.continuity)
            .max(self.dirichlet)
    }
}

pub fn jump_residuals(slice: &ProfileSlice, data: &FrontModeData) -> JumpResiduals {
    JumpResiduals {
        front_condition: (slice.v_right - slice.u_x_left - 0.5 * data.phiy_sq).abs(),
        flux_jump: (slice.v_x_right - slice.v_x_left + data.alpha * slice.u_x_left).abs(),
        continuity: (slice.v_right - slice.v_left).abs(),
        dirichlet: slice.u_at_zero.abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn mode0_elementary_profile() {
        let data = FrontModeData::new(0, 0.0, 0.0, 1.0, 0.0, 1.0).unwrap();
        let xs: Vec<f64> = (0..=3000).map(|i| -3.0 + i as f64 * 1e-3).collect();
        let s = reconstruct_mode0(&data, &xs).unwrap();
        let (imax, umax) =
            s.u.iter()
                .enumerate()
                .fold((0, f64::MIN), |b, (i, &u)| if u > b.1 { (i, u) } else { b });
        assert!((xs[imax] + 1.0).abs() < 1e-3);
        assert!((umax - (-1.0f64).exp()).abs() < 1e-6);
        assert_eq!(s.u_x_left, -1.0);
        assert!(s.x.iter().zip(&s.u).all(|(&x, &u)| x < 0.0 || u == 0.0));
    }

    #[test]
    fn mode0_zero_forcing() {
        let data = FrontModeData::new(0, 0.0, 3.0, -0.25, 0.25, 2.0).unwrap();
        let s = reconstruct_mode0(&data, &[-2.0, -1.0, 0.0, 1.0]).unwrap();
        assert!(s.u.iter().chain(&s.v).all(|&a| a == 0.0));
    }

    #[test]
    fn mode0_front_relation() {
        let q = 0.8;
        let data = FrontModeData::new(0, 0.0, 1.0, -0.5 * q, q, 1.3).unwrap();
        let s = reconstruct_mode0(&data, &[-1.0]).unwrap();
        let r = jump_residuals(&s, &data);
        assert!(r.max() < 1e-15);
        let off = FrontModeData::new(0, 0.0, 1.0, -0.5 * q + 0.1, q, 1.3).unwrap();
        let r_off = jump_residuals(&reconstruct_mode0(&off, &[]).unwrap(), &off);
        assert!((r_off.front_condition - 0.1).abs() < 1e-15);
        assert!(r_off.flux_jump < 1e-15);
    }

    #[test]
    fn wrong_mode_is_rejected() {
        let m0 = FrontModeData::new(0, 0.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        let m1 = FrontModeData::new(1, 1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        assert!(profile_coefficients(&m0).is_err());
        assert!(reconstruct_mode0(&m1, &[]).is_err());
        assert!(FrontModeData::new(1, 0.0, 1.0, 0.0, 0.0, 1.0).is_err());
        assert!(FrontModeData::new(0, 1.0, 1.0, 0.0, 0.0, 1.0).is_err());
        assert!(reconstruct(&m1, &[-31.0]).is_err());
    }

    #[test]
    fn unit_mode_coefficients() {
        // 50-digit evaluation of the printed displays at λ = 1, α = 1,
        // φ̂ = 1, φ̂_t = (φ_y)²^ = 0.
        let data = FrontModeData::new(1, 1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        let c = profile_coefficients(&data).unwrap();
        assert!((c.c1 + 1.123_606_797_749_979).abs() < 1e-14);
        assert!((c.c2 + 0.123_606_797_749_979).abs() < 1e-14);
    }

    #[test]
    fn coefficients_are_linear() {
        let d1 = FrontModeData::new(3, 2.5, 0.7, -0.3, 0.4, 1.7).unwrap();
        let d2 = FrontModeData::new(3, 2.5, 1.4, -0.6, 0.8, 1.7).unwrap();
        let (c1, c2) = (
            profile_coefficients(&d1).unwrap(),
            profile_coefficients(&d2).unwrap(),
        );
        assert!((2.0 * c1.c1 - c2.c1).abs() < 1e-14);
        assert!((2.0 * c1.c2 - c2.c2).abs() < 1e-14);
        let zero_alpha = FrontModeData::new(3, 2.5, 0.7, -0.3, 0.4, 0.0).unwrap();
        let cz = profile_coefficients(&zero_alpha).unwrap();
        assert_eq!((cz.c1, cz.c2), (0.0, 0.0));
    }

    #[test]
    fn front_equation_data_closes_interface_conditions() {
        let g = SpectralGrid::new(TAU, 5).unwrap();
        let data = FrontModeData::on_front_equation(&g, 1, 1.0, 1.0, 0.3).unwrap();
        let s = reconstruct(&data, &[-1.0, 0.0, 1.0]).unwrap();
        let r = jump_residuals(&s, &data);
        assert!(r.max() < 1e-12, "{r:?}");
        assert_eq!(s.u[1], 0.0);
    }

    #[test]
    fn zero_data_zero_residuals() {
        let data = FrontModeData::new(2, 4.0, 0.0, 0.0, 0.0, 1.0).unwrap();
        let s = reconstruct(&data, &[-1.0, 1.0]).unwrap();
        assert_eq!(jump_residuals(&s, &data).max(), 0.0);
    }
}
