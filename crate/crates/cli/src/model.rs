//! Versioned JSON model file.

use std::path::Path;

use chrono::NaiveDate;
use loadfpca::fpca::FpcaModel;
use loadfpca::regress::ScoreRegressionModel;
use serde::{Deserialize, Serialize};

use crate::config::DateRange;
use crate::error::{CliError, CliResult};

pub const MODEL_FORMAT: &str = "loadfpca-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntityModel {
    pub entity_id: String,
    /// Training maximum in kW; curves are modelled divided by it.
    pub scale: f64,
    pub calendar_origin: NaiveDate,
    pub train_range: DateRange,
    pub fpca: FpcaModel,
    /// One stepwise model per forecast component.
    pub score_models: Vec<ScoreRegressionModel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub format: String,
    pub version: u32,
    pub entities: Vec<EntityModel>,
}

impl ModelFile {
    pub fn new(entities: Vec<EntityModel>) -> Self {
        Self { format: MODEL_FORMAT.into(), version: MODEL_VERSION, entities }
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::numerical(format!("cannot serialize model: {e}")))?;
        std::fs::write(path, text + "\n").map_err(|e| CliError::data(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let label = path.display();
        let text = std::fs::read_to_string(path).map_err(|e| CliError::data(format!("{label}: {e}")))?;
        let header: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| CliError::data(format!("{label}: {e}")))?;
        let format = header.get("format").and_then(|v| v.as_str());
        let version = header.get("version").and_then(|v| v.as_u64());
        if format != Some(MODEL_FORMAT) {
            return Err(CliError::data(format!("{label}: not a {MODEL_FORMAT} file")));
        }
        if version != Some(MODEL_VERSION as u64) {
            return Err(CliError::data(format!(
                "{label}: model version {} is not supported (expected {MODEL_VERSION})",
                version.map_or("?".to_string(), |v| v.to_string())
            )));
        }
        serde_json::from_value(header).map_err(|e| CliError::data(format!("{label}: {e}")))
    }
}
