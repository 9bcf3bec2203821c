//! Round-based lifetime simulator and closed-form energy model for
//! clustered heterogeneous wireless sensor networks.
//!
//! Two protocols are provided: TDEEC, where every node takes part in
//! threshold-based cluster-head election, and ATDEEC, where nodes within a
//! radius `R` of the base station skip clustering and send straight to it.
//!
//! - [`radio`]: first-order radio dissipation model.
//! - [`analytic`]: expected per-round network energy and the optimal
//!   cluster count.
//! - [`network`]: deployment of the node population.
//! - [`config`]: flat `key=value` configuration files.
//! - [`sim`]: the round-by-round protocol engine.
//! - [`experiments`]: figure-style experiments that emit CSV / JSON.

pub mod analytic;
pub mod config;
mod error;
pub mod experiments;
pub mod network;
pub mod radio;
pub mod sim;

pub use error::{Error, Result};
pub use network::{NetworkConfig, Node};
pub use radio::RadioParams;
pub use sim::{ProtocolKind, RoundRecord, SimulationSummary};
