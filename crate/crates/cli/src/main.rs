//! `flamefront` command-line driver.
//!
//! Every subcommand takes `--config <file.toml>` plus per-key flag overrides,
//! writes CSV tables and a `report.json` into a run directory, and prints the
//! directory on stdout.

mod commands;
mod config;
mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use config::{ConfigErrors, Raw};

#[derive(Parser)]
#[command(
    name = "flamefront",
    version,
    about = "Flame front and Kuramoto-Sivashinsky solvers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate per-mode symbols of the front (and rescaled) operators.
    Symbols(Flags),
    /// Evolve the front equation.
    EvolveFront(Flags),
    /// Evolve the Kuramoto-Sivashinsky equation.
    EvolveKs(Flags),
    /// Evolve the rescaled front equation.
    EvolveRescaled(Flags),
    /// Reconstruct temperature/enthalpy profiles and interface residuals.
    Profiles(Flags),
    /// Linear stability scan over alpha.
    StabilityScan(Flags),
    /// Convergence of the rescaled equation to K-S as epsilon shrinks.
    Convergence(Flags),
    /// Energy functional along the convergence runs.
    Energy(Flags),
    /// A priori slope and mean bounds along a K-S run.
    KsApriori(Flags),
    /// Mode-count and step-size refinement.
    Galerkin(Flags),
}

macro_rules! flags {
    ($($field:ident),* $(,)?) => {
        /// Shared options. A flag not in the subcommand's schema is rejected.
        #[derive(Args)]
        struct Flags {
            /// Flat TOML file of parameters; flags override its keys.
            #[arg(long)]
            config: Option<PathBuf>,
            $(
                #[arg(long, value_name = "VALUE", allow_hyphen_values = true)]
                $field: Option<String>,
            )*
        }

        impl Flags {
            fn raw(&self) -> BTreeMap<String, Raw> {
                let mut m = BTreeMap::new();
                $(
                    if let Some(v) = &self.$field {
                        m.insert(stringify!($field).to_string(), Raw::Flag(v.clone()));
                    }
                )*
                m
            }
        }
    };
}

flags!(
    ell,
    n_modes,
    alpha,
    alphas,
    epsilon,
    epsilons,
    dt,
    t_end,
    output_stride,
    amplitude,
    seed,
    init_mode,
    modes,
    phi,
    phiy_sq,
    x_min,
    x_max,
    n_x,
    fit_fraction,
    order,
    equation,
    n_list,
    decay,
    linear_only,
    dt_levels,
    dt_n_modes,
    dt_start,
    dt_t_end,
    out_dir,
);

#[derive(Debug)]
pub enum CliError {
    Config(Vec<String>),
    Blowup(f64),
    Io(String),
}

impl From<ConfigErrors> for CliError {
    fn from(e: ConfigErrors) -> Self {
        CliError::Config(e.0)
    }
}

impl From<flamefront::Error> for CliError {
    fn from(e: flamefront::Error) -> Self {
        match e {
            flamefront::Error::InvalidArgument(m) => CliError::Config(vec![m]),
            flamefront::Error::NumericalBlowup { time } => CliError::Blowup(time),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Blowup(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn report(&self) -> serde_json::Value {
        match self {
            CliError::Config(m) => json!({"error": "config", "messages": m}),
            CliError::Blowup(t) => {
                json!({"error": "blowup", "messages": [format!("numerical blowup at t = {t}")], "time": t})
            }
            CliError::Io(m) => json!({"error": "io", "messages": [m]}),
        }
    }
}

fn split(command: &Command) -> (&'static str, &Flags) {
    match command {
        Command::Symbols(f) => ("symbols", f),
        Command::EvolveFront(f) => ("evolve-front", f),
        Command::EvolveKs(f) => ("evolve-ks", f),
        Command::EvolveRescaled(f) => ("evolve-rescaled", f),
        Command::Profiles(f) => ("profiles", f),
        Command::StabilityScan(f) => ("stability-scan", f),
        Command::Convergence(f) => ("convergence", f),
        Command::Energy(f) => ("energy", f),
        Command::KsApriori(f) => ("ks-apriori", f),
        Command::Galerkin(f) => ("galerkin", f),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let (name, flags) = split(&cli.command);
    let file = match &flags.config {
        Some(path) => config::read_file(path)?,
        None => BTreeMap::new(),
    };
    let params = config::resolve(name, commands::schema(name), file, flags.raw())?;
    let dir = output::run_dir(name, params.text("out_dir"))?;
    let artifacts = commands::run(name, &params, &dir)?;
    println!("{}", dir.display());
    for f in &artifacts.files {
        eprintln!("wrote {}", f.display());
    }
    match artifacts.blowup {
        Some(t) => Err(CliError::Blowup(t)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.report());
            ExitCode::from(e.code())
        }
    }
}
