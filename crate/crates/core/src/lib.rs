//! Tempered Hamiltonian transitions and companion HMC samplers.

pub mod cli;
pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod gibbs;
pub mod json;
pub mod hamiltonian;
pub mod mass;
pub mod model;
pub mod rng;
pub mod samplers;
pub mod schedule;
pub mod state;
pub mod targets;

pub use error::{Error, Result};
pub use mass::MassSpec;
pub use model::{Bounds, PotentialModel};
pub use rng::{RandomSource, RngStream};
pub use schedule::{IndexDistribution, MassSchedule};
pub use state::{ExtendedState, ThtConfig};
