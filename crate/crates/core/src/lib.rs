//! Characteristics toolkit for the one-dimensional compressible Euler
//! equations in Lagrangian (mass) coordinates.
//!
//! The crate simulates smooth gas flow in the `(a, u, Shat)` sound-variable
//! form, traces forward/backward characteristics, integrates Riccati
//! equations for weighted gradient variables along them to predict gradient
//! blowup, certifies global smoothness or guaranteed singularity formation
//! from initial data, and constructs decompression / de-rarefaction wave
//! patterns by solving Goursat problems on characteristic angular domains.
//!
//! Layout:
//! - [`gas`]: equation-of-state transforms and Riemann-variable algebra
//! - [`wavefields`]: gradient variables, Riccati coefficients, wave characters
//! - [`profile`]: initial-data profiles with analytic derivatives and far-field descriptors
//! - [`field`], [`solver`]: sampled space-time fields and the reference Cauchy solver
//! - [`characteristics`]: curve tracing, Riccati integration, blowup prediction
//! - [`bounds`]: initial-data functionals, a-priori bound checks, certificates
//! - [`goursat`]: angular-domain Goursat solver with admissibility diagnostics
//! - [`scenarios`]: end-to-end constructions with automated property checklists
//!
//! Batch operations (tracing bundles, per-sample field checks) run in
//! parallel when the `parallel` feature is enabled (default) and fall back to
//! sequential loops otherwise; results are bit-identical either way.

pub mod bounds;
pub mod characteristics;
pub mod error;
pub mod field;
pub mod gas;
pub mod goursat;
pub mod par;
pub mod profile;
pub mod scenarios;
pub mod solver;
pub mod stencil;
pub mod wavefields;

pub use error::{Error, Result};
pub use gas::GasModel;
