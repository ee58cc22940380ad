use std::fs;
use std::path::Path;

use glasd::losses::{LossKind, Threshold};
use glasd::optimizer::OptimizerOverrides;
use glasd::sim::ScenarioSpec;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::CliError;

/// Contents of a `--config` file:
///
/// ```toml
/// seed = 7
/// starts = 10
/// loss = "huber"        # estimate only
/// threshold = "iqr"     # or a number
///
/// [optimizer]
/// max_iterations = 20000
/// stagnation_window = 400
/// ```
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub starts: Option<usize>,
    pub loss: Option<LossKind>,
    pub threshold: Option<Threshold>,
    #[serde(default)]
    pub optimizer: OptimizerOverrides,
}

fn read_toml<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn load(path: Option<&Path>) -> Result<FileConfig, CliError> {
    path.map_or_else(|| Ok(FileConfig::default()), read_toml)
}

pub fn load_scenario(path: &Path) -> Result<ScenarioSpec, CliError> {
    read_toml(path)
}
