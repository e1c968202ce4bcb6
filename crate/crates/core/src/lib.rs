//! Constructive linear algebra of symplectic and calibrated non-squeezing.
//!
//! Module map:
//! - [`forms`]: sparse constant-coefficient forms (exact or float).
//! - [`symplin`]: standard structures, Williamson decomposition, widths.
//! - [`stab`]: stabilizers of powers of the symplectic form.
//! - [`calib`]: calibration catalog, comass estimation, cylinders.
//! - [`slag`]: complex-linear maps, the holomorphic volume form.
//! - [`squeeze`]: cylinder squeezing searches and rigidity witnesses.

pub mod calib;
pub mod error;
pub mod forms;
pub mod linalg;
pub mod sampling;
pub mod scalar;
pub mod slag;
pub mod squeeze;
pub mod stab;
pub mod symplin;

pub use error::{Error, Result};
