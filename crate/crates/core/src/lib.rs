//! Skyrmion logic device simulator: closed-form Thiele-equation
//! trajectories, repeater planning, MTJ read-out and gate cascading, and a
//! delay/energy design-space sweep over material parameters.

pub mod circuit;
pub mod cli;
pub mod config;
pub mod device;
pub mod dse;
pub mod error;
pub mod performance;
pub mod planner;
pub mod report;
pub mod trajectory;

pub use config::{parse_config, RunConfig};
pub use error::{Error, Result};
