//! Experiment harness behind the `tht` binary.

pub mod config;
pub mod experiments;
pub mod output;
pub mod presets;

use std::path::Path;

pub use config::{Kind, RunConfig, SamplerSection};
pub use experiments::{run_experiment, Overrides, RunError};
pub use output::ArtifactWriter;

/// Loads `config_path`, runs it into `out_dir` and returns the list of
/// artifacts. Artifacts of a failed run are removed.
pub fn run_file(config_path: &Path, out_dir: &Path, ov: &Overrides) -> Result<Vec<std::path::PathBuf>, RunError> {
    let text = std::fs::read_to_string(config_path)
        .map_err(|e| RunError::Config(format!("{}: {e}", config_path.display())))?;
    let cfg = RunConfig::parse(&text).map_err(|e| RunError::Config(format!("{}: {e}", config_path.display())))?;
    let mut out = ArtifactWriter::new(out_dir)?;
    match run_experiment(&cfg, ov, &mut out) {
        Ok(()) => Ok(out.written().to_vec()),
        Err(e) => {
            out.discard();
            Err(e)
        }
    }
}
