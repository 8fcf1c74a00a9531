use serde::Serialize;

use crate::samplers::ChainOutput;

use super::rhat::rank_normalized_rhat;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariableRhat {
    pub name: String,
    /// `None` when the variable never varied.
    pub rhat: Option<f64>,
}

/// Summary of Hamiltonian increments at accepted candidates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaHSummary {
    pub count: usize,
    pub mean: f64,
    pub mean_abs: f64,
    pub max_abs: f64,
}

impl DeltaHSummary {
    pub fn of(chain: &ChainOutput) -> Self {
        let v: Vec<f64> = chain.step_results.iter().map(|s| s.delta_h).filter(|d| d.is_finite()).collect();
        let n = v.len().max(1) as f64;
        DeltaHSummary {
            count: v.len(),
            mean: v.iter().sum::<f64>() / n,
            mean_abs: v.iter().map(|d| d.abs()).sum::<f64>() / n,
            max_abs: v.iter().map(|d| d.abs()).fold(0.0, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainSummary {
    pub chain: usize,
    pub acceptance_rate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode_hops: Option<usize>,
    pub delta_h: DeltaHSummary,
}

/// Serializable report of a multi-chain run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub experiment: String,
    pub iterations: usize,
    pub burn_in: usize,
    pub chains: Vec<ChainSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhat: Option<Vec<VariableRhat>>,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub extra: serde_json::Value,
}

impl DiagnosticsReport {
    pub fn new(experiment: &str, chains: &[ChainOutput], burn_in: usize) -> Self {
        DiagnosticsReport {
            experiment: experiment.to_string(),
            iterations: chains.first().map_or(0, |c| c.step_results.len()),
            burn_in,
            chains: chains
                .iter()
                .enumerate()
                .map(|(i, c)| ChainSummary {
                    chain: i,
                    acceptance_rate: c.acceptance_rate(),
                    mode_hops: None,
                    delta_h: DeltaHSummary::of(c),
                })
                .collect(),
            rhat: None,
            extra: serde_json::Value::Null,
        }
    }

    pub fn with_hops(mut self, hops: &[usize]) -> Self {
        for (c, h) in self.chains.iter_mut().zip(hops) {
            c.mode_hops = Some(*h);
        }
        self
    }

    /// R-hat per named coordinate over post-burn-in states; requires two or
    /// more chains.
    pub fn with_rhat(mut self, chains: &[ChainOutput], names: &[String]) -> Self {
        if chains.len() < 2 {
            return self;
        }
        let rows = names
            .iter()
            .enumerate()
            .map(|(j, name)| {
                let series: Vec<Vec<f64>> = chains
                    .iter()
                    .map(|c| c.states[self.burn_in.min(c.states.len())..].iter().map(|s| s[j]).collect())
                    .collect();
                VariableRhat { name: name.clone(), rhat: rank_normalized_rhat(&series).ok().flatten() }
            })
            .collect();
        self.rhat = Some(rows);
        self
    }

    pub fn max_rhat(&self) -> Option<f64> {
        self.rhat.as_ref()?.iter().filter_map(|r| r.rhat).reduce(f64::max)
    }

    pub fn to_json(&self) -> String {
        crate::json::to_string_pretty(self).expect("report serializes")
    }
}
