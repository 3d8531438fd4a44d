//! Response model and analysis tools for a cavity mode coupled to a magnon
//! mode and driven coherently through two ports at once.
//!
//! * [`model`] evaluates S-parameters and two-tone responses in closed form.
//! * [`spectral`] factorizes the reflection into poles and zeros.
//! * [`dynamics`] re-derives the same responses from the equations of motion.
//! * [`sweep`] evaluates responses on probe × magnon frequency grids.
//! * [`verify`] bundles the invariant checks used by the command-line tool.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::field_reassign_with_default))]

pub mod dynamics;
pub mod error;
pub mod model;
pub mod spectral;
pub mod sweep;
pub mod units;
pub mod verify;

pub use error::{Error, Result};
pub use model::{ComplexDetunings, DriveSpec, ModeFrequencies, SMatrix, SystemParams};
pub use num_complex::Complex64;
pub use spectral::{EffectiveDriveParams, RationalResponse, Regime};
pub use dynamics::{SteadyState, SwResult};
pub use sweep::{Quantity, SweepAxis, SweepGrid};
