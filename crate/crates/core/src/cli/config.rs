//! Run configuration files.

use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Mixture1d,
    MixtureHd,
    PowerPilot,
    Sensor,
    SensorGibbs,
    GapBridge,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Mixture1d => "mixture1d",
            Kind::MixtureHd => "mixture_hd",
            Kind::PowerPilot => "power_pilot",
            Kind::Sensor => "sensor",
            Kind::SensorGibbs => "sensor_gibbs",
            Kind::GapBridge => "gap_bridge",
        }
    }
}

/// Tempered-transition settings; all fields are required when the section is given.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerSection {
    pub eps: f64,
    pub eta_star: f64,
    pub period: usize,
    pub gamma_hat: f64,
    pub psi_half_width: usize,
    pub n_acceptable: usize,
    pub max_proposals: usize,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureSection {
    #[serde(default = "default_separation")]
    pub separation: f64,
    #[serde(default = "one")]
    pub sd: f64,
    /// Dimension of the high-dimensional study.
    #[serde(default)]
    pub dim: Option<usize>,
}

impl Default for MixtureSection {
    fn default() -> Self {
        MixtureSection { separation: default_separation(), sd: 1.0, dim: None }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PilotSection {
    #[serde(default = "two")]
    pub gamma: f64,
    #[serde(default)]
    pub a_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub start: Option<f64>,
}

impl Default for PilotSection {
    fn default() -> Self {
        PilotSection { gamma: 2.0, a_grid: None, start: None }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorSection {
    /// JSON dataset file; the built-in study dataset when absent.
    #[serde(default)]
    pub dataset: Option<String>,
    /// Also run the untempered comparison arm.
    #[serde(default = "yes")]
    pub compare_hmc: bool,
    #[serde(default = "default_hyper_eps")]
    pub hyper_eps: f64,
    #[serde(default = "default_hyper_steps")]
    pub hyper_steps: usize,
}

impl Default for SensorSection {
    fn default() -> Self {
        SensorSection {
            dataset: None,
            compare_hmc: true,
            hyper_eps: default_hyper_eps(),
            hyper_steps: default_hyper_steps(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapSection {
    #[serde(default = "default_log_nu")]
    pub log_nu: f64,
    #[serde(default = "default_bridge_sd")]
    pub bridge_sd: f64,
}

impl Default for GapSection {
    fn default() -> Self {
        GapSection { log_nu: default_log_nu(), bridge_sd: default_bridge_sd() }
    }
}

fn default_separation() -> f64 {
    400.0
}
fn one() -> f64 {
    1.0
}
fn two() -> f64 {
    2.0
}
fn yes() -> bool {
    true
}
fn default_hyper_eps() -> f64 {
    0.02
}
fn default_hyper_steps() -> usize {
    30
}
fn default_log_nu() -> f64 {
    -25.0
}
fn default_bridge_sd() -> f64 {
    5.0
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub kind: Kind,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub iters: Option<usize>,
    #[serde(default)]
    pub chains: Option<usize>,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub burn_in: Option<usize>,
    /// Write trajectory traces.
    #[serde(default)]
    pub trace: bool,
    #[serde(default)]
    pub sampler: Option<SamplerSection>,
    #[serde(default)]
    pub mixture: Option<MixtureSection>,
    #[serde(default)]
    pub pilot: Option<PilotSection>,
    #[serde(default)]
    pub sensor: Option<SensorSection>,
    #[serde(default)]
    pub gap: Option<GapSection>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let c = RunConfig::parse(r#"{"kind": "mixture1d"}"#).unwrap();
        assert_eq!(c.kind, Kind::Mixture1d);
        assert!(c.sampler.is_none());
    }

    #[test]
    fn missing_sampler_field_is_named() {
        let text = "{\n  \"kind\": \"sensor\",\n  \"sampler\": {\"eta_star\": 2, \"period\": 2000, \"gamma_hat\": 2,\n    \"psi_half_width\": 30, \"n_acceptable\": 20, \"max_proposals\": 2200}\n}";
        let err = RunConfig::parse(text).unwrap_err();
        assert!(err.contains("`eps`") && err.contains("line"), "{err}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(RunConfig::parse(r#"{"kind": "sensor", "sead": 3}"#).is_err());
        assert!(RunConfig::parse(r#"{"kind": "nope"}"#).is_err());
    }
}
