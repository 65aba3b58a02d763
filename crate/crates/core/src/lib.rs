//! Conservative semi-Lagrangian transport (PSM), its finite-volume form with
//! exactly divergence-free discrete velocities, the SLS limiter, the
//! backward semi-Lagrangian reference scheme, and a 4D drift-kinetic driver.

pub mod advect1d;
pub mod cli;
pub mod diag;
pub mod driftkin;
pub mod error;
pub mod field;
pub mod fv2d;
pub mod mesh;
pub mod spline;
pub mod tridiag;

pub use error::{Error, Result};
