//! Per-mode symbols of the front operators, unrescaled and ε-rescaled.
//!
//! All symbols are written through `δ = X − 1 = 4λ/(X + 1)` so that nothing
//! cancels near `λ = 0` or `ε → 0`:
//!
//! ```text
//! b = 1 + 4λ + αδ
//! f = ¼(δ³ − (3 + 4α)δ) − ½
//! h = 4λ + (1 + ε)d,      d = δ/ε = 4λ/(X + 1)
//! m = ¼d(ε²d² − 7 − 4ε)
//! ```

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::spectral::SpectralGrid;

/// `α_c = 1 + 16π²/ℓ²`: the null front is linearly stable for `α < α_c`.
pub fn alpha_critical(ell: f64) -> Result<f64> {
    if !(ell.is_finite() && ell > 0.0) {
        return invalid(format!("period must be positive, got {ell}"));
    }
    let r = 4.0 * PI / ell;
    Ok(1.0 + r * r)
}

/// Linear symbol of the K–S operator `−4D⁴ − D²`: `s = −λ(4λ − 1)`.
#[inline]
pub fn ks_linear_symbol(lambda: f64) -> f64 {
    -lambda * (4.0 * lambda - 1.0)
}

/// Symbols of `ℬ, 𝒮, ℱ, ℒ = ℬ⁻¹𝒮, 𝒢 = ℬ⁻¹ℱ` for one `α` on one grid.
#[derive(Debug, Clone)]
pub struct SymbolTable {
    alpha: f64,
    grid: SpectralGrid,
    x: Vec<f64>,
    nu: Vec<f64>,
    b: Vec<f64>,
    s: Vec<f64>,
    f: Vec<f64>,
    l: Vec<f64>,
    g: Vec<f64>,
}

impl SymbolTable {
    pub fn new(alpha: f64, grid: &SpectralGrid) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return invalid(format!("alpha must be positive, got {alpha}"));
        }
        let n = grid.n_modes();
        let mut t = Self {
            alpha,
            grid: grid.clone(),
            x: Vec::with_capacity(n),
            nu: Vec::with_capacity(n),
            b: Vec::with_capacity(n),
            s: Vec::with_capacity(n),
            f: Vec::with_capacity(n),
            l: Vec::with_capacity(n),
            g: Vec::with_capacity(n),
        };
        for &lam in grid.eigenvalues() {
            let x = (1.0 + 4.0 * lam).sqrt();
            let delta = 4.0 * lam / (x + 1.0);
            let b = 1.0 + 4.0 * lam + alpha * delta;
            let s = -4.0 * lam * lam + (alpha - 1.0) * lam;
            let f = 0.25 * delta * (delta * delta - 3.0 - 4.0 * alpha) - 0.5;
            t.x.push(x);
            t.nu.push(0.5 + 0.5 * x);
            t.b.push(b);
            t.s.push(s);
            t.f.push(f);
            t.l.push(s / b);
            t.g.push(f / b);
        }
        Ok(t)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn lambda(&self) -> &[f64] {
        self.grid.eigenvalues()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn nu(&self) -> &[f64] {
        &self.nu
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn f(&self) -> &[f64] {
        &self.f
    }

    pub fn l(&self) -> &[f64] {
        &self.l
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    /// `(k, l_k)` maximizing `l_k` over `k ≥ 1`.
    pub fn max_nonzero_rate(&self) -> (usize, f64) {
        self.l
            .iter()
            .enumerate()
            .skip(1)
            .fold((1, f64::NEG_INFINITY), |(bk, bl), (k, &l)| {
                if l > bl {
                    (k, l)
                } else {
                    (bk, bl)
                }
            })
    }
}

/// Symbols of the ε-rescaled operators on a grid of period `ℓ_0`.
///
/// `α = 1 + ε`, and the eigenvalues are those of `ℓ_0` (the rescaling maps
/// `λ_k(ℓ_ε)` to `ελ_k(ℓ_0)`).
#[derive(Debug, Clone)]
pub struct RescaledSymbolTable {
    epsilon: f64,
    grid: SpectralGrid,
    x: Vec<f64>,
    b: Vec<f64>,
    s: Vec<f64>,
    f: Vec<f64>,
    h: Vec<f64>,
    m: Vec<f64>,
    r: Vec<f64>,
}

impl RescaledSymbolTable {
    pub fn new(epsilon: f64, grid: &SpectralGrid) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return invalid(format!("epsilon must lie in (0, 1], got {epsilon}"));
        }
        let n = grid.n_modes();
        let mut t = Self {
            epsilon,
            grid: grid.clone(),
            x: Vec::with_capacity(n),
            b: Vec::with_capacity(n),
            s: Vec::with_capacity(n),
            f: Vec::with_capacity(n),
            h: Vec::with_capacity(n),
            m: Vec::with_capacity(n),
            r: Vec::with_capacity(n),
        };
        let eps = epsilon;
        for &lam in grid.eigenvalues() {
            let x = (1.0 + 4.0 * eps * lam).sqrt();
            let d = 4.0 * lam / (x + 1.0);
            let r = eps * d;
            let h = 4.0 * lam + (1.0 + eps) * d;
            let m = 0.25 * d * (eps * eps * d * d - 7.0 - 4.0 * eps);
            let b = 1.0 + 4.0 * eps * lam + (1.0 + eps) * r;
            let f = 0.25 * r * (r * r - 7.0 - 4.0 * eps) - 0.5;
            t.x.push(x);
            t.b.push(b);
            t.s.push(ks_linear_symbol(lam));
            t.f.push(f);
            t.h.push(h);
            t.m.push(m);
            t.r.push(r);
        }
        Ok(t)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn lambda(&self) -> &[f64] {
        self.grid.eigenvalues()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn f(&self) -> &[f64] {
        &self.f
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn m(&self) -> &[f64] {
        &self.m
    }

    /// Symbol of `R_ε`, `X_{ε,k} − 1`.
    pub fn r(&self) -> &[f64] {
        &self.r
    }

    /// Observed constants of the uniform symbol bounds.
    pub fn verify_bounds(&self) -> SymbolBoundReport {
        let eps = self.epsilon;
        let mut max_h_ratio: f64 = 0.0;
        let mut max_m_ratio: f64 = 0.0;
        let mut min_b_margin = f64::INFINITY;
        let mut min_b_margin_rel = f64::INFINITY;
        for (k, &lam) in self.lambda().iter().enumerate() {
            let margin = self.b[k] - 4.0 * eps * lam - 1.0;
            min_b_margin = min_b_margin.min(margin);
            min_b_margin_rel = min_b_margin_rel.min(margin / self.b[k]);
            if lam > 0.0 {
                max_h_ratio = max_h_ratio.max(self.h[k].abs() / lam);
                let bound = 2.0 * eps.sqrt() * lam.powf(1.5) + 25.0 * lam;
                max_m_ratio = max_m_ratio.max(self.m[k].abs() / bound);
            }
        }
        let h_bound = 6.0 + 2.0 * eps;
        SymbolBoundReport {
            epsilon: eps,
            max_h_ratio,
            h_bound,
            h_ok: max_h_ratio <= h_bound,
            max_m_ratio,
            m_ok: max_m_ratio <= 1.0,
            min_b_margin,
            // b − 4ελ − 1 = (1 + ε)(X − 1) ≥ 0 up to one rounding of b
            b_ok: min_b_margin_rel >= -4.0 * f64::EPSILON,
        }
    }
}

/// Observed ratios against the uniform bounds `|h| ≤ (6+2ε)λ`,
/// `|m| ≤ 2√ε λ^{3/2} + 25λ`, `b ≥ 4ελ + 1`.
#[derive(Debug, Clone, Serialize)]
pub struct SymbolBoundReport {
    pub epsilon: f64,
    pub max_h_ratio: f64,
    pub h_bound: f64,
    pub h_ok: bool,
    pub max_m_ratio: f64,
    pub m_ok: bool,
    pub min_b_margin: f64,
    pub b_ok: bool,
}

impl SymbolBoundReport {
    pub fn all_ok(&self) -> bool {
        self.h_ok && self.m_ok && self.b_ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    // Extended-precision (50-digit) evaluation of the printed formulas at
    // λ = 1, α = 1.
    const X1: f64 = 2.236_067_977_499_789_7;
    const B1: f64 = 6.236_067_977_499_789_7;
    const F1: f64 = -2.190_983_005_625_052_6;
    const L1: f64 = -0.641_429_826_363_712_8;
    const G1: f64 = -0.351_340_462_215_980_8;

    #[test]
    fn unit_mode_values() {
        let g = SpectralGrid::new(TAU, 5).unwrap();
        let t = SymbolTable::new(1.0, &g).unwrap();
        for k in [1, 2] {
            assert!((t.x()[k] - X1).abs() < 1e-15);
            assert!((t.b()[k] - B1).abs() < 4e-15);
            assert_eq!(t.s()[k], -4.0);
            assert!((t.f()[k] - F1).abs() < 4e-15);
            assert!((t.l()[k] - L1).abs() < 2e-15);
            assert!((t.g()[k] - G1).abs() < 2e-15);
            assert!((t.nu()[k] - 0.5 * (1.0 + X1)).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_mode_is_exact() {
        let g = SpectralGrid::new(3.0, 5).unwrap();
        for alpha in [0.1, 1.0, 7.5] {
            let t = SymbolTable::new(alpha, &g).unwrap();
            assert_eq!(
                (t.b()[0], t.s()[0], t.f()[0], t.l()[0], t.g()[0]),
                (1.0, 0.0, -0.5, 0.0, -0.5)
            );
        }
    }

    #[test]
    fn rejects_nonpositive_alpha() {
        let g = SpectralGrid::new(3.0, 5).unwrap();
        assert!(SymbolTable::new(0.0, &g).is_err());
        assert!(SymbolTable::new(-1.0, &g).is_err());
    }

    #[test]
    fn quotient_identities() {
        let g = SpectralGrid::new(TAU, 256).unwrap();
        for alpha in [0.5, 1.0, 3.0] {
            let t = SymbolTable::new(alpha, &g).unwrap();
            for k in 0..g.n_modes() {
                assert!((t.l()[k] * t.b()[k] - t.s()[k]).abs() < 1e-12 * (t.s()[k].abs() + 1.0));
                assert!((t.g()[k] * t.b()[k] - t.f()[k]).abs() < 1e-12 * (t.f()[k].abs() + 1.0));
                let x2 = 1.0 + 4.0 * t.lambda()[k];
                let s_alt = 0.25 * (1.0 - x2) * (x2 - alpha);
                assert!((s_alt - t.s()[k]).abs() < 1e-12 * (t.s()[k].abs() + 1.0));
            }
        }
    }

    #[test]
    fn critical_alpha_values() {
        assert_eq!(alpha_critical(4.0 * PI).unwrap(), 2.0);
        assert_eq!(alpha_critical(2.0 * PI).unwrap(), 5.0);
        assert!(alpha_critical(0.0).is_err());
    }

    #[test]
    fn first_rate_changes_sign_at_threshold() {
        let g = SpectralGrid::new(TAU, 9).unwrap();
        assert!(SymbolTable::new(4.999, &g).unwrap().l()[1] < 0.0);
        assert!(SymbolTable::new(5.001, &g).unwrap().l()[1] > 0.0);
    }

    #[test]
    fn large_mode_asymptotics() {
        let g = SpectralGrid::new(TAU, 256).unwrap();
        let t = SymbolTable::new(1.0, &g).unwrap();
        let k = 255;
        let lam = t.lambda()[k];
        let b_ratio = t.b()[k] / (4.0 * lam);
        let f_ratio = t.f()[k] / (2.0 * lam.powf(1.5));
        let g_ratio = t.g()[k] / (0.5 * lam.sqrt());
        assert!((0.9..=1.1).contains(&b_ratio));
        assert!((0.8..=1.2).contains(&f_ratio));
        assert!((0.8..=1.2).contains(&g_ratio));
        let l_split = (t.l()[k] + lam) / (0.5 * t.alpha() * lam.sqrt());
        assert!((0.9..=1.1).contains(&l_split), "{l_split}");
    }

    #[test]
    fn rescaled_zero_mode() {
        let g = SpectralGrid::new(10.0 * PI, 5).unwrap();
        let t = RescaledSymbolTable::new(0.3, &g).unwrap();
        assert_eq!(
            (t.h()[0], t.m()[0], t.b()[0], t.f()[0], t.r()[0]),
            (0.0, 0.0, 1.0, -0.5, 0.0)
        );
    }

    #[test]
    fn rescaled_rejects_bad_epsilon() {
        let g = SpectralGrid::new(10.0, 5).unwrap();
        for eps in [0.0, -0.1, 1.5, f64::NAN] {
            assert!(RescaledSymbolTable::new(eps, &g).is_err());
        }
        assert!(RescaledSymbolTable::new(1.0, &g).is_ok());
    }

    #[test]
    fn rescaled_unit_mode() {
        let g = SpectralGrid::new(TAU, 3).unwrap();
        let t = RescaledSymbolTable::new(1.0, &g).unwrap();
        // h = X² + 2X − 3 = 2 + 2√5 at ε = 1, λ = 1
        assert!((t.h()[1] - (2.0 + 2.0 * X1)).abs() < 1e-14);
        assert!(t.h()[1] <= 8.0);
        assert_eq!(t.s()[1], -3.0);
    }

    #[test]
    fn rescaled_identities() {
        let g = SpectralGrid::new(10.0 * PI, 256).unwrap();
        for eps in [1.0, 0.1, 1e-3, 1e-6] {
            let t = RescaledSymbolTable::new(eps, &g).unwrap();
            for k in 0..g.n_modes() {
                let scale = t.b()[k].abs() + 1.0;
                assert!((t.b()[k] - eps * t.h()[k] - 1.0).abs() < 1e-12 * scale);
                assert!((t.f()[k] - eps * t.m()[k] + 0.5).abs() < 1e-12 * (t.f()[k].abs() + 1.0));
                assert!(t.r()[k] >= 0.0);
                assert!((t.x()[k] - 1.0 - t.r()[k]).abs() < 1e-15 * t.x()[k]);
            }
        }
    }

    #[test]
    fn bounds_hold() {
        let g = SpectralGrid::new(10.0 * PI, 128).unwrap();
        let rep = RescaledSymbolTable::new(0.01, &g).unwrap().verify_bounds();
        assert!(rep.all_ok(), "{rep:?}");
        let rep1 = RescaledSymbolTable::new(1.0, &g).unwrap().verify_bounds();
        assert!(rep1.max_h_ratio <= 8.0);
        assert!(rep1.all_ok());
        let tiny = SpectralGrid::new(1.0, 3).unwrap();
        assert!(RescaledSymbolTable::new(0.5, &tiny)
            .unwrap()
            .verify_bounds()
            .all_ok());
    }
}
