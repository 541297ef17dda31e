//! Exponential time differencing for `û_t(k) = L_k û(k) + G_k P_N((∂u)²)(k)`.
//!
//! All three equations in scope share this shape: the front equation in its
//! divided form, the Kuramoto–Sivashinsky equation, and the ε-rescaled front
//! equation. The stepper is the fourth-order ETDRK4 scheme of Cox and
//! Matthews with φ-functions evaluated by contour averaging (Kassam and
//! Trefethen), which stays accurate at `L_k = 0` and near-neutral modes.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

use crate::error::{invalid, Error, Result};
use crate::spectral::{SpectralField, SpectralGrid};
use crate::symbols::{ks_linear_symbol, RescaledSymbolTable, SymbolTable};

/// L2 norm above which a run is declared blown up.
pub const BLOWUP_NORM: f64 = 1e8;

const CONTOUR_POINTS: usize = 16;

/// Diagonal linear symbol plus filtered `(∂u)²` nonlinearity.
#[derive(Debug, Clone)]
pub struct EquationDescriptor {
    label: String,
    grid: SpectralGrid,
    linear: Vec<f64>,
    nonlinear: Vec<f64>,
}

impl EquationDescriptor {
    /// Arbitrary symbols on `grid`.
    pub fn new(
        label: impl Into<String>,
        grid: &SpectralGrid,
        linear: Vec<f64>,
        nonlinear: Vec<f64>,
    ) -> Result<Self> {
        let n = grid.n_modes();
        if linear.len() != n || nonlinear.len() != n {
            return invalid(format!(
                "symbol lengths ({}, {}) do not match n_modes {n}",
                linear.len(),
                nonlinear.len()
            ));
        }
        if linear.iter().chain(&nonlinear).any(|v| !v.is_finite()) {
            return invalid("symbols must be finite");
        }
        Ok(Self {
            label: label.into(),
            grid: grid.clone(),
            linear,
            nonlinear,
        })
    }

    /// Front equation `φ_t = ℒφ + 𝒢((φ_y)²)` with `L_k = l_k`, `G_k = g_k`.
    pub fn front(alpha: f64, grid: &SpectralGrid) -> Result<Self> {
        let t = SymbolTable::new(alpha, grid)?;
        Self::new(
            format!("front(alpha={alpha})"),
            grid,
            t.l().to_vec(),
            t.g().to_vec(),
        )
    }

    /// `Φ_τ = −4Φ'''' − Φ'' − ½(Φ')²`.
    pub fn ks(grid: &SpectralGrid) -> Self {
        let linear = grid
            .eigenvalues()
            .iter()
            .map(|&l| ks_linear_symbol(l))
            .collect();
        Self {
            label: "ks".into(),
            grid: grid.clone(),
            linear,
            nonlinear: vec![-0.5; grid.n_modes()],
        }
    }

    /// `∂_τ ℬ_ε ψ = 𝒮ψ + ℱ_ε((ψ_η)²)` divided by `b_{ε,k}`.
    pub fn rescaled(epsilon: f64, grid: &SpectralGrid) -> Result<Self> {
        let t = RescaledSymbolTable::new(epsilon, grid)?;
        let linear = t.s().iter().zip(t.b()).map(|(s, b)| s / b).collect();
        let nonlinear = t.f().iter().zip(t.b()).map(|(f, b)| f / b).collect();
        Self::new(
            format!("rescaled(epsilon={epsilon})"),
            grid,
            linear,
            nonlinear,
        )
    }

    /// Same linear part with the nonlinearity switched off.
    pub fn linearized(&self) -> Self {
        Self {
            label: format!("{}-linear", self.label),
            grid: self.grid.clone(),
            linear: self.linear.clone(),
            nonlinear: vec![0.0; self.nonlinear.len()],
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn linear_symbol(&self) -> &[f64] {
        &self.linear
    }

    pub fn nonlinear_symbol(&self) -> &[f64] {
        &self.nonlinear
    }

    fn has_nonlinearity(&self) -> bool {
        self.nonlinear.iter().any(|&g| g != 0.0)
    }

    /// `G_k P_N((∂u)²)(k)`.
    pub fn nonlinear_term(&self, state: &SpectralField) -> SpectralField {
        if !self.has_nonlinearity() {
            return self.grid.zeros();
        }
        let mut q = state.square_of_derivative();
        for (c, g) in q.coeffs_mut().iter_mut().zip(&self.nonlinear) {
            *c *= g;
        }
        q
    }

    /// Full right-hand side `L_k û + G_k P_N((∂u)²)`.
    pub fn rhs(&self, state: &SpectralField) -> SpectralField {
        let mut out = self.nonlinear_term(state);
        for ((o, l), a) in out
            .coeffs_mut()
            .iter_mut()
            .zip(&self.linear)
            .zip(state.coeffs())
        {
            *o += l * a;
        }
        out
    }
}

/// Residual of the undivided form `b_k φ_t = s_k φ + f_k Q` where `φ_t` is the
/// divided right-hand side. Returns `max_k |b_k φ_t − s_k φ − f_k Q| / (1 + |s_k φ| + |f_k Q|)`.
pub fn undivided_residual(table: &SymbolTable, state: &SpectralField) -> Result<f64> {
    if table.grid() != state.grid() {
        return invalid("symbol table and state use different grids");
    }
    let desc = EquationDescriptor::front(table.alpha(), table.grid())?;
    let phi_t = desc.rhs(state);
    let q = state.square_of_derivative();
    let mut worst: f64 = 0.0;
    for k in 0..state.coeffs().len() {
        let sphi = table.s()[k] * state.coeffs()[k];
        let fq = table.f()[k] * q.coeffs()[k];
        let r = table.b()[k] * phi_t.coeffs()[k] - sphi - fq;
        worst = worst.max(r.abs() / (1.0 + sphi.abs() + fq.abs()));
    }
    Ok(worst)
}

/// Per-mode ETDRK4 coefficients for one descriptor and step size.
#[derive(Debug, Clone)]
pub struct Etdrk4 {
    dt: f64,
    e: Vec<f64>,
    e2: Vec<f64>,
    q: Vec<f64>,
    f1: Vec<f64>,
    f2: Vec<f64>,
    f3: Vec<f64>,
}

impl Etdrk4 {
    pub fn new(descriptor: &EquationDescriptor, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return invalid(format!("dt must be positive, got {dt}"));
        }
        let n = descriptor.linear.len();
        let mut s = Self {
            dt,
            e: Vec::with_capacity(n),
            e2: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
            f1: Vec::with_capacity(n),
            f2: Vec::with_capacity(n),
            f3: Vec::with_capacity(n),
        };
        let roots: Vec<Complex64> = (0..CONTOUR_POINTS)
            .map(|j| {
                Complex64::from_polar(1.0, PI * (2.0 * j as f64 + 1.0) / CONTOUR_POINTS as f64)
            })
            .collect();
        for &l in &descriptor.linear {
            let lh = l * dt;
            s.e.push(lh.exp());
            s.e2.push((0.5 * lh).exp());
            let (mut q, mut f1, mut f2, mut f3) = (0.0, 0.0, 0.0, 0.0);
            for &r in &roots {
                let z = r + lh;
                let ez = z.exp();
                let z3 = z * z * z;
                q += (((0.5 * z).exp() - 1.0) / z).re;
                f1 += ((-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3).re;
                f2 += ((2.0 + z + ez * (z - 2.0)) / z3).re;
                f3 += ((-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3).re;
            }
            let w = dt / CONTOUR_POINTS as f64;
            s.q.push(w * q);
            s.f1.push(w * f1);
            s.f2.push(w * f2);
            s.f3.push(w * f3);
        }
        Ok(s)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advances `state` from time `t` by one step.
    pub fn advance(
        &self,
        descriptor: &EquationDescriptor,
        state: &SpectralField,
        t: f64,
    ) -> Result<SpectralField> {
        if !state.is_finite() {
            return Err(Error::NumericalBlowup { time: t });
        }
        let u = state.coeffs();
        let nu = descriptor.nonlinear_term(state);
        let nu = nu.coeffs();

        let mut a = state.clone();
        for k in 0..u.len() {
            a.coeffs_mut()[k] = self.e2[k] * u[k] + self.q[k] * nu[k];
        }
        let na = descriptor.nonlinear_term(&a);
        let na = na.coeffs();

        let mut b = state.clone();
        for k in 0..u.len() {
            b.coeffs_mut()[k] = self.e2[k] * u[k] + self.q[k] * na[k];
        }
        let nb = descriptor.nonlinear_term(&b);
        let nb = nb.coeffs();

        let mut c = a.clone();
        for k in 0..u.len() {
            c.coeffs_mut()[k] = self.e2[k] * a.coeffs()[k] + self.q[k] * (2.0 * nb[k] - nu[k]);
        }
        let nc = descriptor.nonlinear_term(&c);
        let nc = nc.coeffs();

        let mut next = c;
        for k in 0..u.len() {
            next.coeffs_mut()[k] = self.e[k] * u[k]
                + self.f1[k] * nu[k]
                + 2.0 * self.f2[k] * (na[k] + nb[k])
                + self.f3[k] * nc[k];
        }
        let t_next = t + self.dt;
        if !next.is_finite() || next.l2_norm() > BLOWUP_NORM {
            return Err(Error::NumericalBlowup { time: t_next });
        }
        Ok(next)
    }
}

/// One ETDRK4 step of size `dt` starting at time 0.
pub fn step(
    state: &SpectralField,
    descriptor: &EquationDescriptor,
    dt: f64,
) -> Result<SpectralField> {
    if state.grid() != descriptor.grid() {
        return invalid("state and descriptor use different grids");
    }
    Etdrk4::new(descriptor, dt)?.advance(descriptor, state, 0.0)
}

/// Default step `10⁻³ (ℓ/2π)²`.
pub fn default_dt(period: f64) -> f64 {
    let r = period / TAU;
    1e-3 * r * r
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_end: f64,
    pub output_stride: usize,
    pub descriptor: EquationDescriptor,
    pub initial_condition: SpectralField,
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !(self.dt.is_finite() && self.dt > 0.0) {
            problems.push(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.t_end.is_finite() && self.t_end >= self.dt) {
            problems.push(format!("t_end must be at least dt, got {}", self.t_end));
        }
        if self.output_stride == 0 {
            problems.push("output_stride must be positive".to_string());
        }
        if self.initial_condition.grid() != self.descriptor.grid() {
            problems.push("initial condition lives on a different grid".to_string());
        }
        if !self.initial_condition.is_finite() {
            problems.push("initial condition is not finite".to_string());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            invalid(problems.join("; "))
        }
    }

    /// Number of steps; the step is shrunk so that the last one lands on
    /// `t_end`.
    pub fn n_steps(&self) -> usize {
        ((self.t_end / self.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize
    }
}

/// Per-snapshot scalars.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostics {
    pub l2_norm: f64,
    pub mean: f64,
    pub zero_mean_l2_norm: f64,
    /// `Π((∂u)²)`, the mean of the squared slope.
    pub mean_square_slope: f64,
}

impl Diagnostics {
    pub fn of(state: &SpectralField) -> Self {
        let (mean, rest) = state.mean_projection();
        Self {
            l2_norm: state.l2_norm(),
            mean,
            zero_mean_l2_norm: rest.l2_norm(),
            mean_square_slope: state.square_of_derivative().coeffs()[0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    Blowup { time: f64 },
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub label: String,
    pub times: Vec<f64>,
    pub states: Vec<SpectralField>,
    pub diagnostics: Vec<Diagnostics>,
    pub status: RunStatus,
}

impl Trajectory {
    pub fn completed(&self) -> bool {
        self.status == RunStatus::Completed
    }

    pub fn final_state(&self) -> &SpectralField {
        self.states
            .last()
            .expect("trajectory holds the initial state")
    }

    fn push(&mut self, t: f64, state: SpectralField) {
        self.diagnostics.push(Diagnostics::of(&state));
        self.times.push(t);
        self.states.push(state);
    }
}

/// Integrates the configured problem; a blowup ends the run early and is
/// recorded in [`Trajectory::status`].
pub fn evolve(config: &SolverConfig) -> Result<Trajectory> {
    config.validate()?;
    let n_steps = config.n_steps();
    let dt = config.t_end / n_steps as f64;
    let stepper = Etdrk4::new(&config.descriptor, dt)?;
    let mut traj = Trajectory {
        label: config.descriptor.label().to_string(),
        times: Vec::new(),
        states: Vec::new(),
        diagnostics: Vec::new(),
        status: RunStatus::Completed,
    };
    let mut state = config.initial_condition.clone();
    traj.push(0.0, state.clone());
    for n in 1..=n_steps {
        let t0 = (n - 1) as f64 * dt;
        match stepper.advance(&config.descriptor, &state, t0) {
            Ok(next) => state = next,
            Err(Error::NumericalBlowup { time }) => {
                traj.status = RunStatus::Blowup { time };
                return Ok(traj);
            }
            Err(e) => return Err(e),
        }
        if n % config.output_stride == 0 || n == n_steps {
            let t = if n == n_steps {
                config.t_end
            } else {
                n as f64 * dt
            };
            traj.push(t, state.clone());
        }
    }
    Ok(traj)
}

/// Seeded zero-mean field with coefficients `∝ u_k λ_k^{-2}`, `u_k` uniform
/// in `[-1, 1]`, scaled to L2 norm `amplitude`.
pub fn random_zero_mean_field(grid: &SpectralGrid, amplitude: f64, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = grid.zeros();
    for (k, &lam) in grid.eigenvalues().iter().enumerate().skip(1) {
        let u: f64 = rng.gen_range(-1.0..=1.0);
        f.coeffs_mut()[k] = u / (lam * lam);
    }
    let norm = f.l2_norm();
    if norm > 0.0 {
        f = f.scaled(amplitude / norm);
    }
    f
}

/// Finite-difference audit of the mean-mode law `p' = −½Π((∂u)²)`.
#[derive(Debug, Clone, Serialize)]
pub struct MeanModeCheck {
    /// `max |p'_fd − (−½Π((∂u)²))|` over interior snapshots.
    pub max_residual: f64,
    /// Number of snapshot pairs where the mean increased.
    pub monotonicity_violations: usize,
    /// Largest increase of the mean between consecutive snapshots.
    pub max_increase: f64,
}

/// Largest snapshot spacing accepted by [`mean_mode_ode_check`].
pub const MAX_SNAPSHOT_SPACING: f64 = 0.01;

pub fn mean_mode_ode_check(traj: &Trajectory) -> Result<MeanModeCheck> {
    let times = &traj.times;
    if times.len() < 3 {
        return invalid("mean-mode check needs at least three snapshots");
    }
    if times
        .windows(2)
        .any(|w| w[1] - w[0] > MAX_SNAPSHOT_SPACING * (1.0 + 1e-9))
    {
        return invalid(format!(
            "snapshot spacing exceeds {MAX_SNAPSHOT_SPACING}; lower output_stride"
        ));
    }
    let p: Vec<f64> = traj.diagnostics.iter().map(|d| d.mean).collect();
    let mut max_residual: f64 = 0.0;
    for i in 1..p.len() - 1 {
        let h1 = times[i] - times[i - 1];
        let h2 = times[i + 1] - times[i];
        let dp = -h2 / (h1 * (h1 + h2)) * p[i - 1]
            + (h2 - h1) / (h1 * h2) * p[i]
            + h1 / (h2 * (h1 + h2)) * p[i + 1];
        let rhs = -0.5 * traj.diagnostics[i].mean_square_slope;
        max_residual = max_residual.max((dp - rhs).abs());
    }
    let mut violations = 0;
    let mut max_increase: f64 = 0.0;
    for w in p.windows(2) {
        if w[1] > w[0] {
            violations += 1;
            max_increase = max_increase.max(w[1] - w[0]);
        }
    }
    Ok(MeanModeCheck {
        max_residual,
        monotonicity_violations: violations,
        max_increase,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(ell: f64, n: usize) -> SpectralGrid {
        SpectralGrid::new(ell, n).unwrap()
    }

    #[test]
    fn descriptor_symbols() {
        let g = grid(TAU, 9);
        let front = EquationDescriptor::front(1.0, &g).unwrap();
        assert!((front.linear_symbol()[1] + 0.641_429_826_363_712_8).abs() < 1e-14);
        assert!((front.nonlinear_symbol()[1] + 0.351_340_462_215_980_8).abs() < 1e-14);
        assert_eq!(front.linear_symbol()[0], 0.0);
        assert_eq!(front.nonlinear_symbol()[0], -0.5);

        let ks = EquationDescriptor::ks(&grid(4.0 * PI, 5));
        assert_eq!(ks.linear_symbol()[1], 0.0);
        assert_eq!(ks.linear_symbol()[2], 0.0);
        assert!(ks.nonlinear_symbol().iter().all(|&g| g == -0.5));

        assert!(EquationDescriptor::front(-1.0, &g).is_err());
        assert!(EquationDescriptor::rescaled(0.0, &g).is_err());
        assert!(EquationDescriptor::new("x", &g, vec![0.0; 3], vec![0.0; 9]).is_err());
    }

    #[test]
    fn zero_is_fixed_point() {
        let g = grid(TAU, 16);
        let d = EquationDescriptor::front(2.0, &g).unwrap();
        let next = step(&g.zeros(), &d, 0.01).unwrap();
        assert!(next.coeffs().iter().all(|&a| a == 0.0));
    }

    #[test]
    fn linear_problem_is_exact() {
        let g = grid(TAU, 33);
        let d = EquationDescriptor::ks(&g).linearized();
        let u0 = random_zero_mean_field(&g, 1.0, 3);
        let u1 = step(&u0, &d, 0.05).unwrap();
        for k in 0..33 {
            let expected = (d.linear_symbol()[k] * 0.05).exp() * u0.coeffs()[k];
            assert!((u1.coeffs()[k] - expected).abs() <= 1e-12 * expected.abs().max(1e-300));
        }
    }

    #[test]
    fn phi_functions_at_zero() {
        let g = grid(TAU, 3);
        let d = EquationDescriptor::new("zero", &g, vec![0.0; 3], vec![0.0; 3]).unwrap();
        let s = Etdrk4::new(&d, 1.0).unwrap();
        assert!((s.q[0] - 0.5).abs() < 1e-14);
        assert!((s.f1[0] - 1.0 / 6.0).abs() < 1e-14);
        assert!((s.f2[0] - 1.0 / 6.0).abs() < 1e-14);
        assert!((s.f3[0] - 1.0 / 6.0).abs() < 1e-14);
        assert_eq!(s.e[0], 1.0);
    }

    #[test]
    fn phi_functions_match_closed_form() {
        // Away from zero the direct formulas are accurate.
        let g = grid(TAU, 3);
        for &lh in &[-30.0, -2.5, 0.7] {
            let d = EquationDescriptor::new("c", &g, vec![lh; 3], vec![0.0; 3]).unwrap();
            let s = Etdrk4::new(&d, 1.0).unwrap();
            let z: f64 = lh;
            let ez = z.exp();
            let f1 = (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z.powi(3);
            let f2 = (2.0 + z + ez * (z - 2.0)) / z.powi(3);
            let f3 = (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z.powi(3);
            let q = ((0.5 * z).exp() - 1.0) / z;
            for (a, b) in [(s.f1[0], f1), (s.f2[0], f2), (s.f3[0], f3), (s.q[0], q)] {
                assert!(
                    (a - b).abs() < 1e-13 * b.abs().max(1e-3),
                    "{lh}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn non_finite_state_is_blowup() {
        let g = grid(TAU, 5);
        let d = EquationDescriptor::ks(&g);
        let mut u = g.zeros();
        u.coeffs_mut()[1] = f64::NAN;
        assert!(matches!(
            step(&u, &d, 0.1),
            Err(Error::NumericalBlowup { .. })
        ));
        assert!(step(&g.zeros(), &d, 0.0).is_err());
    }

    #[test]
    fn blowup_is_reported_with_partial_trajectory() {
        let g = grid(TAU, 5);
        let d = EquationDescriptor::new("grow", &g, vec![50.0; 5], vec![0.0; 5]).unwrap();
        let cfg = SolverConfig {
            dt: 0.01,
            t_end: 10.0,
            output_stride: 1,
            descriptor: d,
            initial_condition: g.basis_field(1, 1.0),
        };
        let traj = evolve(&cfg).unwrap();
        match traj.status {
            RunStatus::Blowup { time } => assert!(time > 0.3 && time < 0.45, "{time}"),
            _ => panic!("expected blowup"),
        }
        assert!(traj.times.len() > 1);
    }

    #[test]
    fn config_validation() {
        let g = grid(TAU, 5);
        let other = grid(2.0, 5);
        let cfg = SolverConfig {
            dt: -1.0,
            t_end: -3.0,
            output_stride: 0,
            descriptor: EquationDescriptor::ks(&g),
            initial_condition: other.zeros(),
        };
        let err = cfg.validate().unwrap_err().to_string();
        for needle in ["dt", "t_end", "output_stride", "grid"] {
            assert!(err.contains(needle), "{err}");
        }
    }

    #[test]
    fn ks_zero_stays_zero() {
        let g = grid(10.0 * PI, 32);
        let cfg = SolverConfig {
            dt: 0.01,
            t_end: 1.0,
            output_stride: 10,
            descriptor: EquationDescriptor::ks(&g),
            initial_condition: g.zeros(),
        };
        let traj = evolve(&cfg).unwrap();
        assert!(traj.completed());
        assert_eq!(traj.times.len(), 11);
        assert_eq!(*traj.times.last().unwrap(), 1.0);
        assert!(traj
            .states
            .iter()
            .all(|s| s.coeffs().iter().all(|&a| a == 0.0)));
    }

    #[test]
    fn random_field_is_seeded_and_normalized() {
        let g = grid(4.0 * PI, 32);
        let a = random_zero_mean_field(&g, 1e-3, 7);
        let b = random_zero_mean_field(&g, 1e-3, 7);
        let c = random_zero_mean_field(&g, 1e-3, 8);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.mean(), 0.0);
        assert!((a.l2_norm() - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn undivided_form_residual_is_small() {
        let g = grid(TAU, 33);
        let table = SymbolTable::new(1.5, &g).unwrap();
        let u = random_zero_mean_field(&g, 0.5, 11);
        assert!(undivided_residual(&table, &u).unwrap() < 1e-13);
    }

    #[test]
    fn mean_mode_check_rejects_sparse_and_accepts_zero() {
        let g = grid(TAU, 9);
        let d = EquationDescriptor::front(1.0, &g).unwrap();
        let mk = |dt: f64, stride: usize| SolverConfig {
            dt,
            t_end: 0.5,
            output_stride: stride,
            descriptor: d.clone(),
            initial_condition: g.zeros(),
        };
        let sparse = evolve(&mk(0.01, 5)).unwrap();
        assert!(mean_mode_ode_check(&sparse).is_err());
        let dense = evolve(&mk(0.01, 1)).unwrap();
        let chk = mean_mode_ode_check(&dense).unwrap();
        assert_eq!(chk.max_residual, 0.0);
        assert_eq!(chk.monotonicity_violations, 0);
    }
}
