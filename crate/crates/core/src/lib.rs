#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod mechanics;
pub mod ode;
pub mod output;
pub mod quantum;
pub mod specfun;
pub mod statmech;
pub mod verify;

pub use dynamics::{Formulation, MediumParams, PhaseState, Trajectory};
pub use error::{Error, Result};
