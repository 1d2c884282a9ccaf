//! Simulation and verification laboratory for buoyancy-driven small-scale
//! growth: Boussinesq flow on the torus and channel, axisymmetric Euler
//! with swirl in an annular cylinder, the full set of monitored energy and
//! vorticity functionals, and standalone certification suites for the
//! supporting inequalities.

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod field;
pub mod grid;
pub mod io;
pub mod lemma;
pub mod ops;
pub mod run;
pub mod scenario;
pub mod solver;
pub mod spectral;

pub use config::{parse_config, ModelKind, RunConfig};
pub use error::{Error, Result};
pub use field::{ScalarField, VelocityField};
pub use grid::{AnnulusGrid, Grid, StripGrid, TorusGrid};
pub use run::{run, RunOutput};
