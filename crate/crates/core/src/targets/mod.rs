//! Target densities.

mod augmented;
mod mixture;
mod power;
mod sensor;

pub use augmented::{augmented_potential, rejection_filter, AugmentedTarget, TruncatedNormal};
pub use mixture::{mixture_potential, Component, Covariance, GaussianMixture};
pub use power::{power_potential, PowerPotential};
pub use sensor::{
    generate_sensor_data, hyper_potential, sensor_potential, Hyper, HyperConditional, Point, SensorDataset,
    SensorPosterior,
};
