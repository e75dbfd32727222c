//! Workbench for constructing bounded-size generating sets of alternating
//! groups out of smaller matrix groups, certifying what they generate, and
//! measuring how well the resulting Cayley/Schreier graphs expand.
//!
//! The crate is organised bottom-up:
//!
//! * [`perm`] — permutation values and the two text forms;
//! * [`bsgs`] — deterministic Schreier–Sims stabilizer chains (exact orders,
//!   membership, uniform sampling);
//! * [`algebra`] — small finite fields, unit-determinant matrices, and their
//!   actions on point enumerations;
//! * [`construction`] — the cube-of-points families: direct-power generating
//!   sets, axis embeddings, the abelian cycle layers, window padding;
//! * [`spectral`] — Markov operators of action graphs, eigenvalue solvers,
//!   brute-force vertex expansion, Kazhdan-constant estimates, random
//!   baselines;
//! * [`characters`] — exact symmetric-group character computations and the
//!   decay scans the spectral arguments lean on;
//! * [`walks`] — random words, exact mixing curves, cycle statistics, and
//!   tuple-routing probes;
//! * [`config`] / [`report`] — the experiment configuration surface and the
//!   deterministic artifact formats used by the CLI.

pub mod algebra;
pub mod bsgs;
pub mod characters;
pub mod config;
pub mod construction;
pub mod error;
pub mod perm;
pub mod report;
pub mod rng;
pub mod spectral;
pub mod walks;

pub use error::{LabError, Result};

/// Version stamped into every report artifact.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Bumped when an artifact format changes shape.
pub const SCHEMA_VERSION: u32 = 1;

/// Nominal constants for the full-scale family this laboratory models at
/// desk scale. They are recorded in reports as reference metadata; nothing
/// at desk scale verifies them and nothing asserts them as measurements.
pub mod reference_bounds {
    /// Lower bound carried by the base matrix group with its standard
    /// involution generators at full scale.
    pub const BASE_GROUP_KAZHDAN: f64 = 1.0 / 400.0;
    /// Lower bound for the direct power with its twisted-diagonal set.
    pub const POWER_GROUP_KAZHDAN: f64 = 1.0 / 500.0;
    /// Size cap for the twisted-diagonal generating set at full scale.
    pub const POWER_GEN_SET_SIZE: usize = 40;
    /// Kazhdan lower bound targeted for the cube family on Alt(N).
    pub const CUBE_FAMILY_KAZHDAN: f64 = 1e-6;
    /// Kazhdan lower bound after padding to arbitrary degree.
    pub const PADDED_FAMILY_KAZHDAN: f64 = 1e-15;
    /// Generating-set size cap after padding.
    pub const PADDED_FAMILY_MAX_SIZE: f64 = 1e10;
    /// Expansion lower bound implied by `CUBE_FAMILY_KAZHDAN` squared over 4.
    pub const CUBE_FAMILY_EXPANSION: f64 = 2.5e-13;
}
