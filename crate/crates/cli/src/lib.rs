//! Experiment runner and file-level commands for the `lifthom` binary.

pub mod compare;
pub mod config;
pub mod error;
pub mod experiment;

use std::path::Path;

use lifthom_core::io::{read_lifted_cloud, read_point_cloud};
use lifthom_core::measure::gamma_embed;
use lifthom_core::{LiftedCloud, PointCloud};

pub use compare::{compare_diagrams, Comparison, Metric};
pub use config::{ExperimentConfig, FiltrationKind};
pub use error::CliError;
pub use experiment::run_experiment;

/// Contents of a CSV file: plain points or lifted points.
pub enum CloudFile {
    Points(PointCloud),
    Lifted(LiftedCloud),
}

impl CloudFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let lifted = text.lines().next().is_some_and(|h| h.split(',').any(|c| c.trim() == "m00"));
        let parsed = if lifted {
            read_lifted_cloud(text.as_bytes()).map(CloudFile::Lifted)
        } else {
            read_point_cloud(text.as_bytes()).map(CloudFile::Points)
        };
        parsed.map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
    }

    /// Points to compute with; lifted clouds are embedded with weight `gamma`.
    pub fn embedded(&self, gamma: f64) -> Result<PointCloud, CliError> {
        match self {
            CloudFile::Points(p) => Ok(p.clone()),
            CloudFile::Lifted(l) => Ok(gamma_embed(l, gamma)?),
        }
    }
}
