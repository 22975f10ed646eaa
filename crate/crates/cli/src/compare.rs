//! Distances between diagram files.

use std::path::Path;
use std::str::FromStr;

use lifthom_core::transport::{bottleneck_distance, bottleneck_per_dim};
use lifthom_core::PersistenceDiagram;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Largest bottleneck distance over all dimensions.
    Bottleneck,
    /// One bottleneck distance per dimension.
    PerDim,
}

impl FromStr for Metric {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bottleneck" => Ok(Metric::Bottleneck),
            "per-dim" | "per_dim" => Ok(Metric::PerDim),
            other => Err(format!("unknown metric '{other}' (expected bottleneck or per-dim)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub value: f64,
    pub per_dim: Vec<(usize, f64)>,
}

impl Comparison {
    /// Text printed by the `compare` command.
    pub fn render(&self, metric: Metric) -> String {
        match metric {
            Metric::Bottleneck => format!("{}\n", fmt_value(self.value)),
            Metric::PerDim => self
                .per_dim
                .iter()
                .map(|(dim, v)| format!("dim {dim}: {}\n", fmt_value(*v)))
                .collect(),
        }
    }
}

pub fn fmt_value(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        v.to_string()
    }
}

pub fn load_diagram(path: &Path) -> Result<PersistenceDiagram, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    PersistenceDiagram::from_json(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn compare_diagrams(a: &Path, b: &Path) -> Result<Comparison, CliError> {
    let (da, db) = (load_diagram(a)?, load_diagram(b)?);
    Ok(Comparison {
        value: bottleneck_distance(&da, &db),
        per_dim: bottleneck_per_dim(&da, &db),
    })
}
