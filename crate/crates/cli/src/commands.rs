use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use flamefront::evolver::{
    default_dt, evolve, mean_mode_ode_check, random_zero_mean_field, EquationDescriptor, RunStatus,
    SolverConfig, Trajectory,
};
use flamefront::experiments::{
    run_convergence_study, run_dt_refinement, run_energy_monitor, run_galerkin_refinement,
    run_ks_apriori_check, run_stability_scan, ConvergenceConfig, ConvergenceOutcome,
    GalerkinConfig, GalerkinEquation, StabilityScanConfig,
};
use flamefront::profiles::{
    jump_residuals, profile_coefficients, reconstruct, FrontModeData, ProfileCoefficients,
};
use flamefront::spectral::wavenumber_index;
use flamefront::{alpha_critical, RescaledSymbolTable, SpectralField, SpectralGrid, SymbolTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::{optional, required, with_default, Key, Kind, Params};
use crate::output::{num, write_json, Table};
use crate::CliError;

/// Files written by a command, and whether a requested run blew up.
pub struct Artifacts {
    pub files: Vec<PathBuf>,
    pub blowup: Option<f64>,
}

type CmdResult = Result<Artifacts, CliError>;

const OUT_DIR: Key = optional("out_dir", Kind::Path);
const ELL: Key = required("ell", Kind::Float);
const EQUATIONS: &[&str] = &["ks", "front", "rescaled"];

pub fn schema(subcommand: &str) -> &'static [Key] {
    match subcommand {
        "symbols" => {
            const {
                &[
                    ELL,
                    with_default("n_modes", Kind::Int, "32"),
                    required("alpha", Kind::Float),
                    optional("epsilon", Kind::Float),
                    OUT_DIR,
                ]
            }
        }
        "evolve-front" => {
            const {
                &[
                    ELL,
                    with_default("n_modes", Kind::Int, "32"),
                    required("alpha", Kind::Float),
                    optional("dt", Kind::Float),
                    with_default("t_end", Kind::Float, "1"),
                    with_default("output_stride", Kind::Int, "10"),
                    with_default("amplitude", Kind::Float, "0.1"),
                    with_default("seed", Kind::Int, "0"),
                    optional("init_mode", Kind::Int),
                    OUT_DIR,
                ]
            }
        }
        "evolve-ks" => {
            const {
                &[
                    ELL,
                    with_default("n_modes", Kind::Int, "32"),
                    optional("dt", Kind::Float),
                    with_default("t_end", Kind::Float, "1"),
                    with_default("output_stride", Kind::Int, "10"),
                    with_default("amplitude", Kind::Float, "0.1"),
                    with_default("seed", Kind::Int, "0"),
                    optional("init_mode", Kind::Int),
                    OUT_DIR,
                ]
            }
        }
        "evolve-rescaled" => {
            const {
                &[
                    ELL,
                    with_default("n_modes", Kind::Int, "32"),
                    required("epsilon", Kind::Float),
                    optional("dt", Kind::Float),
                    with_default("t_end", Kind::Float, "1"),
                    with_default("output_stride", Kind::Int, "10"),
                    with_default("amplitude", Kind::Float, "0.1"),
                    with_default("seed", Kind::Int, "0"),
                    optional("init_mode", Kind::Int),
                    OUT_DIR,
                ]
            }
        }
        "profiles" => {
            const {
                &[
                    ELL,
                    with_default("n_modes", Kind::Int, "32"),
                    required("alpha", Kind::Float),
                    with_default("modes", Kind::IntList, "0,1,2"),
                    optional("phi", Kind::Float),
                    with_default("phiy_sq", Kind::Float, "0"),
                    with_default("amplitude", Kind::Float, "0.1"),
                    with_default("seed", Kind::Int, "0"),
                    with_default("x_min", Kind::Float, "-10"),
                    with_default("x_max", Kind::Float, "10"),
                    with_default("n_x", Kind::Int, "201"),
                    OUT_DIR,
                ]
            }
        }
        "stability-scan" => {
            const {
                &[
                    ELL,
                    with_default("n_modes", Kind::Int, "32"),
                    optional("alphas", Kind::FloatList),
                    with_default("amplitude", Kind::Float, "1e-4"),
                    with_default("t_end", Kind::Float, "50"),
                    with_default("dt", Kind::Float, "0.01"),
                    with_default("seed", Kind::Int, "0"),
                    with_default("fit_fraction", Kind::Float, "0.2"),
                    OUT_DIR,
                ]
            }
        }
        "convergence" => {
            const {
                &[
                    ELL,
                    with_default("n_modes", Kind::Int, "65"),
                    with_default("amplitude", Kind::Float, "0.1"),
                    with_default("t_end", Kind::Float, "1"),
                    with_default("dt", Kind::Float, "1e-3"),
                    with_default("output_stride", Kind::Int, "10"),
                    with_default("epsilons", Kind::FloatList, "0.08,0.04,0.02,0.01"),
                    OUT_DIR,
                ]
            }
        }
        "energy" => {
            const {
                &[
                    ELL,
                    with_default("n_modes", Kind::Int, "65"),
                    with_default("amplitude", Kind::Float, "0.1"),
                    with_default("t_end", Kind::Float, "1"),
                    with_default("dt", Kind::Float, "1e-3"),
                    with_default("output_stride", Kind::Int, "10"),
                    with_default("epsilons", Kind::FloatList, "0.08,0.04,0.02,0.01"),
                    with_default("order", Kind::Int, "0"),
                    OUT_DIR,
                ]
            }
        }
        "ks-apriori" => {
            const {
                &[
                    ELL,
                    with_default("n_modes", Kind::Int, "65"),
                    with_default("amplitude", Kind::Float, "0.1"),
                    with_default("t_end", Kind::Float, "2"),
                    with_default("dt", Kind::Float, "1e-3"),
                    with_default("output_stride", Kind::Int, "10"),
                    OUT_DIR,
                ]
            }
        }
        "galerkin" => {
            const {
                &[
                    ELL,
                    with_default("equation", Kind::Choice(EQUATIONS), "ks"),
                    optional("alpha", Kind::Float),
                    optional("epsilon", Kind::Float),
                    with_default("n_list", Kind::IntList, "32,64,128,256"),
                    with_default("dt", Kind::Float, "0.01"),
                    with_default("t_end", Kind::Float, "1"),
                    with_default("output_stride", Kind::Int, "10"),
                    with_default("amplitude", Kind::Float, "1"),
                    with_default("seed", Kind::Int, "0"),
                    with_default("decay", Kind::Float, "0.4"),
                    with_default("linear_only", Kind::Bool, "false"),
                    with_default("dt_levels", Kind::Int, "0"),
                    with_default("dt_n_modes", Kind::Int, "64"),
                    with_default("dt_start", Kind::Float, "1"),
                    with_default("dt_t_end", Kind::Float, "50"),
                    OUT_DIR,
                ]
            }
        }
        _ => &[],
    }
}

pub fn run(subcommand: &str, p: &Params, dir: &Path) -> CmdResult {
    match subcommand {
        "symbols" => symbols(p, dir),
        "evolve-front" | "evolve-ks" | "evolve-rescaled" => evolve_cmd(subcommand, p, dir),
        "profiles" => profiles(p, dir),
        "stability-scan" => stability_scan(p, dir),
        "convergence" => convergence(p, dir),
        "energy" => energy(p, dir),
        "ks-apriori" => ks_apriori(p, dir),
        "galerkin" => galerkin(p, dir),
        other => Err(CliError::Config(vec![format!(
            "unknown subcommand {other}"
        )])),
    }
}

fn grid(p: &Params) -> Result<SpectralGrid, CliError> {
    Ok(SpectralGrid::new(p.float("ell"), p.usize("n_modes"))?)
}

fn finish(files: Vec<PathBuf>, blowup: Option<f64>) -> CmdResult {
    Ok(Artifacts { files, blowup })
}

fn save(dir: &Path, name: &str, table: &Table, files: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let path = dir.join(name);
    table.write(&path)?;
    files.push(path);
    Ok(())
}

fn save_json(
    dir: &Path,
    value: &serde_json::Value,
    files: &mut Vec<PathBuf>,
) -> Result<(), CliError> {
    let path = dir.join("report.json");
    write_json(&path, value)?;
    files.push(path);
    Ok(())
}

fn blowup_time(status: RunStatus) -> Option<f64> {
    match status {
        RunStatus::Completed => None,
        RunStatus::Blowup { time } => Some(time),
    }
}

fn symbols(p: &Params, dir: &Path) -> CmdResult {
    let grid = grid(p)?;
    let alpha = p.float("alpha");
    let t = SymbolTable::new(alpha, &grid)?;
    let mut files = Vec::new();
    let mut table = Table::new(["k", "lambda", "x", "nu", "b", "s", "f", "l", "g"]);
    for k in 0..grid.n_modes() {
        table.push(vec![
            k.to_string(),
            num(t.lambda()[k]),
            num(t.x()[k]),
            num(t.nu()[k]),
            num(t.b()[k]),
            num(t.s()[k]),
            num(t.f()[k]),
            num(t.l()[k]),
            num(t.g()[k]),
        ]);
    }
    save(dir, "symbols.csv", &table, &mut files)?;
    let (kmax, rate) = t.max_nonzero_rate();
    let mut report = json!({
        "params": p.to_json(),
        "alpha_critical": alpha_critical(grid.period())?,
        "max_rate_mode": kmax,
        "max_rate": rate,
        "null_front": if rate < 0.0 { "stable" } else if rate > 0.0 { "unstable" } else { "neutral" },
    });
    if let Some(eps) = p.opt_float("epsilon") {
        let r = RescaledSymbolTable::new(eps, &grid)?;
        let mut table = Table::new(["k", "lambda", "x", "b", "s", "f", "h", "m", "r"]);
        for k in 0..grid.n_modes() {
            table.push(vec![
                k.to_string(),
                num(r.lambda()[k]),
                num(r.x()[k]),
                num(r.b()[k]),
                num(r.s()[k]),
                num(r.f()[k]),
                num(r.h()[k]),
                num(r.m()[k]),
                num(r.r()[k]),
            ]);
        }
        save(dir, "rescaled_symbols.csv", &table, &mut files)?;
        report["rescaled_bounds"] = json!(r.verify_bounds());
    }
    save_json(dir, &report, &mut files)?;
    finish(files, None)
}

fn initial_field(p: &Params, grid: &SpectralGrid) -> Result<SpectralField, CliError> {
    let amp = p.float("amplitude");
    match p.opt_int("init_mode") {
        Some(k) if k as usize >= grid.n_modes() => Err(CliError::Config(vec![format!(
            "init_mode {k} is outside the grid ({} modes)",
            grid.n_modes()
        )])),
        Some(k) => Ok(grid.basis_field(k as usize, amp)),
        None => Ok(random_zero_mean_field(grid, amp, p.int("seed"))),
    }
}

fn write_trajectory(
    dir: &Path,
    traj: &Trajectory,
    files: &mut Vec<PathBuf>,
) -> Result<(), CliError> {
    let mut diag = Table::new([
        "time",
        "l2_norm",
        "mean",
        "zero_mean_l2_norm",
        "mean_square_slope",
    ]);
    for (t, d) in traj.times.iter().zip(&traj.diagnostics) {
        diag.push(vec![
            num(*t),
            num(d.l2_norm),
            num(d.mean),
            num(d.zero_mean_l2_norm),
            num(d.mean_square_slope),
        ]);
    }
    save(dir, "diagnostics.csv", &diag, files)?;
    let n = traj.final_state().coeffs().len();
    let mut coeffs =
        Table::new(std::iter::once("time".to_string()).chain((0..n).map(|k| format!("a{k}"))));
    for (t, s) in traj.times.iter().zip(&traj.states) {
        coeffs.push(
            std::iter::once(num(*t))
                .chain(s.coeffs().iter().map(|&a| num(a)))
                .collect(),
        );
    }
    save(dir, "coefficients.csv", &coeffs, files)
}

fn evolve_cmd(subcommand: &str, p: &Params, dir: &Path) -> CmdResult {
    let grid = grid(p)?;
    let descriptor = match subcommand {
        "evolve-front" => EquationDescriptor::front(p.float("alpha"), &grid)?,
        "evolve-ks" => EquationDescriptor::ks(&grid),
        _ => EquationDescriptor::rescaled(p.float("epsilon"), &grid)?,
    };
    let cfg = SolverConfig {
        dt: p
            .opt_float("dt")
            .unwrap_or_else(|| default_dt(grid.period())),
        t_end: p.float("t_end"),
        output_stride: p.usize("output_stride"),
        descriptor,
        initial_condition: initial_field(p, &grid)?,
    };
    let traj = evolve(&cfg)?;
    let mut files = Vec::new();
    write_trajectory(dir, &traj, &mut files)?;
    let report = json!({
        "params": p.to_json(),
        "label": traj.label,
        "status": traj.status,
        "dt": cfg.dt,
        "snapshots": traj.times.len(),
        "final_time": traj.times.last(),
        "mean_mode": mean_mode_ode_check(&traj).ok(),
    });
    save_json(dir, &report, &mut files)?;
    finish(files, blowup_time(traj.status))
}

fn profiles(p: &Params, dir: &Path) -> CmdResult {
    let grid = grid(p)?;
    let alpha = p.float("alpha");
    let modes = p.ints("modes").unwrap_or_default();
    if let Some(&bad) = modes.iter().find(|&&k| k >= grid.n_modes()) {
        return Err(CliError::Config(vec![format!(
            "mode {bad} is outside the grid ({} modes)",
            grid.n_modes()
        )]));
    }
    let n_x = p.usize("n_x");
    let (x_min, x_max) = (p.float("x_min"), p.float("x_max"));
    if n_x < 2 || x_min >= x_max {
        return Err(CliError::Config(vec![
            "profiles need n_x >= 2 and x_min < x_max".to_string(),
        ]));
    }
    let xs: Vec<f64> = (0..n_x)
        .map(|i| x_min + (x_max - x_min) * i as f64 / (n_x - 1) as f64)
        .collect();
    // Either one explicit (φ̂, (φ_y)²^) pair for every mode, or a seeded front.
    let state = random_zero_mean_field(&grid, p.float("amplitude"), p.int("seed"));
    let slope_sq = state.square_of_derivative();
    let mut table = Table::new(["k", "x", "u", "v"]);
    let mut modes_json = Vec::new();
    for &k in &modes {
        let (phi, q) = match p.opt_float("phi") {
            Some(phi) => (phi, p.float("phiy_sq")),
            None => (state.coeffs()[k], slope_sq.coeffs()[k]),
        };
        let data = FrontModeData::on_front_equation(&grid, k, alpha, phi, q)?;
        let slice = reconstruct(&data, &xs)?;
        for ((x, u), v) in xs.iter().zip(&slice.u).zip(&slice.v) {
            table.push(vec![k.to_string(), num(*x), num(*u), num(*v)]);
        }
        let coeffs: Option<ProfileCoefficients> = if k > 0 {
            Some(profile_coefficients(&data)?)
        } else {
            None
        };
        modes_json.push(json!({
            "k": k,
            "data": data,
            "coefficients": coeffs.map(|c| json!({"c1": c.c1, "c2": c.c2, "nu": c.nu})),
            "u_x_left": slice.u_x_left,
            "v_left": slice.v_left,
            "v_right": slice.v_right,
            "v_x_left": slice.v_x_left,
            "v_x_right": slice.v_x_right,
            "residuals": jump_residuals(&slice, &data),
        }));
    }
    let mut files = Vec::new();
    save(dir, "profiles.csv", &table, &mut files)?;
    save_json(
        dir,
        &json!({"params": p.to_json(), "modes": modes_json}),
        &mut files,
    )?;
    finish(files, None)
}

fn stability_scan(p: &Params, dir: &Path) -> CmdResult {
    let ell = p.float("ell");
    let alphas = match p.floats("alphas") {
        Some(a) => a,
        None => StabilityScanConfig::default_alphas(ell)?,
    };
    let report = run_stability_scan(&StabilityScanConfig {
        ell,
        n_modes: p.usize("n_modes"),
        alphas,
        amplitude: p.float("amplitude"),
        t_end: p.float("t_end"),
        dt: p.float("dt"),
        seed: p.int("seed"),
        fit_fraction: p.float("fit_fraction"),
    })?;
    let mut table = Table::new([
        "alpha",
        "measured_rate",
        "predicted_rate",
        "verdict",
        "rate_rel_error",
        "dominant_mode",
        "dominant_mode_rate",
        "mean_mode_residual",
        "anomaly",
    ]);
    for c in &report.cells {
        let verdict = serde_json::to_value(c.verdict)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default();
        table.push(vec![
            num(c.alpha),
            num(c.measured_rate),
            num(c.predicted_rate),
            verdict,
            c.rate_rel_error.map(num).unwrap_or_default(),
            c.dominant_mode.to_string(),
            num(c.dominant_mode_rate),
            c.mean_mode
                .as_ref()
                .map(|m| num(m.max_residual))
                .unwrap_or_default(),
            c.anomaly.clone().unwrap_or_default(),
        ]);
    }
    let mut files = Vec::new();
    save(dir, "stability_scan.csv", &table, &mut files)?;
    save_json(
        dir,
        &json!({"params": p.to_json(), "report": report}),
        &mut files,
    )?;
    finish(files, None)
}

fn convergence_outcome(p: &Params) -> Result<ConvergenceOutcome, CliError> {
    let grid = grid(p)?;
    let amp = p.float("amplitude");
    let ell = grid.period();
    Ok(run_convergence_study(&ConvergenceConfig {
        initial: grid.sample(|eta| amp * (TAU * eta / ell).cos()),
        t_end: p.float("t_end"),
        dt: p.float("dt"),
        output_stride: p.usize("output_stride"),
        epsilons: p.floats("epsilons").unwrap_or_default(),
    })?)
}

fn first_blowup(out: &ConvergenceOutcome) -> Option<f64> {
    std::iter::once(&out.ks)
        .chain(&out.rescaled)
        .find_map(|t| blowup_time(t.status))
}

fn convergence(p: &Params, dir: &Path) -> CmdResult {
    let out = convergence_outcome(p)?;
    let r = &out.report;
    let mut table = Table::new([
        "epsilon",
        "sup_error",
        "ratio",
        "zeta_sup",
        "unscaled_error",
        "completed",
    ]);
    for i in 0..r.epsilons.len() {
        table.push(vec![
            num(r.epsilons[i]),
            num(r.sup_errors[i]),
            num(r.ratios[i]),
            num(r.zeta_sup[i]),
            num(r.unscaled_errors[i]),
            (r.rescaled_status[i] == RunStatus::Completed).to_string(),
        ]);
    }
    let mut files = Vec::new();
    save(dir, "convergence.csv", &table, &mut files)?;
    save_json(
        dir,
        &json!({"params": p.to_json(), "report": r}),
        &mut files,
    )?;
    finish(files, first_blowup(&out))
}

fn energy(p: &Params, dir: &Path) -> CmdResult {
    let out = convergence_outcome(p)?;
    let order = p.usize("order");
    let mut table = Table::new(["epsilon", "time", "a_value"]);
    let mut traces = Vec::new();
    for (traj, &eps) in out.rescaled.iter().zip(&out.report.epsilons) {
        // A blown-up run has fewer snapshots; compare on the common prefix.
        let mut ks = out.ks.clone();
        let mut psi = traj.clone();
        let n = ks.times.len().min(psi.times.len());
        for t in [&mut ks, &mut psi] {
            t.times.truncate(n);
            t.states.truncate(n);
            t.diagnostics.truncate(n);
        }
        let trace = run_energy_monitor(&psi, &ks, eps, order)?;
        for (t, a) in trace.times.iter().zip(&trace.a_values) {
            table.push(vec![num(eps), num(*t), num(*a)]);
        }
        traces.push(json!({
            "epsilon": eps,
            "a_at_zero": trace.a_values.first(),
            "k_bound_observed": trace.k_bound_observed,
        }));
    }
    let bounds: Vec<f64> = traces
        .iter()
        .filter_map(|t| t["k_bound_observed"].as_f64())
        .collect();
    let spread = bounds.iter().cloned().fold(0.0, f64::max)
        / bounds.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut files = Vec::new();
    save(dir, "energy.csv", &table, &mut files)?;
    save_json(
        dir,
        &json!({"params": p.to_json(), "order": order, "traces": traces, "k_bound_spread": spread}),
        &mut files,
    )?;
    finish(files, first_blowup(&out))
}

fn ks_apriori(p: &Params, dir: &Path) -> CmdResult {
    let grid = grid(p)?;
    let amp = p.float("amplitude");
    let ell = grid.period();
    let traj = evolve(&SolverConfig {
        dt: p.float("dt"),
        t_end: p.float("t_end"),
        output_stride: p.usize("output_stride"),
        descriptor: EquationDescriptor::ks(&grid),
        initial_condition: grid.sample(|eta| amp * (TAU * eta / ell).cos()),
    })?;
    let r = run_ks_apriori_check(&traj)?;
    let mut table = Table::new(["time", "slope_norm", "slope_bound", "mean", "mean_bound"]);
    for i in 0..r.times.len() {
        table.push(vec![
            num(r.times[i]),
            num(r.slope_norms[i]),
            num(r.slope_bounds[i]),
            num(r.means[i]),
            num(r.mean_bounds[i]),
        ]);
    }
    let mut files = Vec::new();
    save(dir, "ks_apriori.csv", &table, &mut files)?;
    save_json(
        dir,
        &json!({
            "params": p.to_json(),
            "status": traj.status,
            "slope_ok": r.slope_ok,
            "mean_ok": r.mean_ok,
            "slope_margin": r.slope_margin,
            "mean_margin": r.mean_margin,
            "violations": r.violations,
        }),
        &mut files,
    )?;
    finish(files, blowup_time(traj.status))
}

fn galerkin(p: &Params, dir: &Path) -> CmdResult {
    let need = |key: &str, eq: &str| -> Result<f64, CliError> {
        p.opt_float(key).ok_or_else(|| {
            CliError::Config(vec![format!(
                "missing required key '{key}' for equation = {eq}"
            )])
        })
    };
    let equation = match p.text("equation").unwrap_or("ks") {
        "front" => GalerkinEquation::Front {
            alpha: need("alpha", "front")?,
        },
        "rescaled" => GalerkinEquation::Rescaled {
            epsilon: need("epsilon", "rescaled")?,
        },
        _ => GalerkinEquation::Ks,
    };
    let ell = p.float("ell");
    let n_list = p.ints("n_list").unwrap_or_default();
    let n_max = n_list.iter().copied().max().unwrap_or(3).max(3);
    let finest = SpectralGrid::new(ell, n_max)?;
    // Seeded coefficients uniform in [-1, 1] times e^{-decay·j}, normalized to `amplitude`.
    let decay = p.float("decay");
    let mut rng = ChaCha8Rng::seed_from_u64(p.int("seed"));
    let mut initial = finest.zeros();
    for k in 1..n_max {
        let j = wavenumber_index(k) as f64;
        initial.coeffs_mut()[k] = rng.gen_range(-1.0..1.0) * (-decay * j).exp();
    }
    let norm = initial.l2_norm();
    if norm > 0.0 {
        initial = initial.scaled(p.float("amplitude") / norm);
    }
    let report = run_galerkin_refinement(&GalerkinConfig {
        equation,
        linear_only: p.flag("linear_only"),
        initial: initial.clone(),
        n_list,
        dt: p.float("dt"),
        t_end: p.float("t_end"),
        output_stride: p.usize("output_stride"),
    })?;
    let mut table = Table::new([
        "n_modes",
        "completed",
        "final_l2",
        "max_l2",
        "growth_rate",
        "difference_to_next",
    ]);
    for (i, l) in report.levels.iter().enumerate() {
        table.push(vec![
            l.n_modes.to_string(),
            (l.status == RunStatus::Completed).to_string(),
            num(l.final_l2),
            num(l.max_l2),
            num(l.growth_rate),
            report
                .differences
                .get(i)
                .map(|&d| num(d))
                .unwrap_or_default(),
        ]);
    }
    let mut files = Vec::new();
    save(dir, "galerkin.csv", &table, &mut files)?;
    let mut json_report = json!({"params": p.to_json(), "report": report});
    let levels = p.usize("dt_levels");
    if levels > 0 {
        let grid = SpectralGrid::new(ell, p.usize("dt_n_modes"))?;
        let desc = equation.descriptor(&grid, p.flag("linear_only"))?;
        let dt_report = run_dt_refinement(
            &desc,
            &initial.resample(&grid)?,
            p.float("dt_t_end"),
            p.float("dt_start"),
            levels,
        )?;
        let mut t = Table::new(["dt", "error_to_next", "ratio"]);
        for (i, &dt) in dt_report.dts.iter().enumerate() {
            t.push(vec![
                num(dt),
                dt_report.errors.get(i).map(|&e| num(e)).unwrap_or_default(),
                dt_report.ratios.get(i).map(|&q| num(q)).unwrap_or_default(),
            ]);
        }
        save(dir, "dt_refinement.csv", &t, &mut files)?;
        json_report["dt_refinement"] = json!(dt_report);
    }
    save_json(dir, &json_report, &mut files)?;
    finish(files, None)
}
