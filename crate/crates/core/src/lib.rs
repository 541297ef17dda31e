//! Pseudospectral solvers and a verification harness for the quasi-steady
//! flame front equation and its Kuramoto–Sivashinsky limit.
//!
//! - [`spectral`]: periodic fields in the eigenbasis of `D_yy`.
//! - [`symbols`]: per-mode operator symbols and the critical parameter.
//! - [`evolver`]: ETDRK4 time stepping for the front, K–S and rescaled
//!   equations.
//! - [`profiles`]: closed-form temperature/enthalpy profiles and interface
//!   residuals.
//! - [`experiments`]: stability scans, convergence to K–S, energy and a
//!   priori monitoring, Galerkin refinement.

pub mod error;
pub mod evolver;
pub mod experiments;
pub mod profiles;
pub mod spectral;
pub mod symbols;

pub use error::{Error, Result};
pub use evolver::{EquationDescriptor, SolverConfig, Trajectory};
pub use spectral::{SpectralField, SpectralGrid};
pub use symbols::{alpha_critical, RescaledSymbolTable, SymbolTable};
