mod evaluate;
mod fit;
mod ingest;
mod predict;
mod scores_report;

pub use evaluate::{cmd_evaluate, EvaluatePaths};
pub use fit::cmd_fit;
pub use ingest::cmd_ingest;
pub use predict::cmd_predict;
pub use scores_report::cmd_scores_report;

use std::collections::BTreeMap;
use std::fs::File;
use std::path::PathBuf;

use chrono::NaiveDate;
use loadfpca::pipeline::{
    average_weather, build_day_descriptors, daily_temperature_humidity, read_events, read_weather,
    EventRange,
};
use loadfpca::regress::DayDescriptor;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub const TEMPERATURE: &str = "temp_c";
pub const HUMIDITY: &str = "rh_pct";

/// Standard output file locations under the configured output directory.
pub struct Outputs {
    pub dir: PathBuf,
}

impl Outputs {
    pub fn new(cfg: &RunConfig) -> Self {
        Self { dir: cfg.output.clone() }
    }

    pub fn file(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn curves(&self) -> PathBuf {
        self.file("curves.csv")
    }

    pub fn model(&self) -> PathBuf {
        self.file("model.json")
    }

    pub fn scores(&self) -> PathBuf {
        self.file("scores.csv")
    }

    pub fn forecast(&self) -> PathBuf {
        self.file("forecast.csv")
    }
}

pub fn open(path: &std::path::Path) -> CliResult<File> {
    File::open(path).map_err(|e| CliError::data(format!("{}: {e}", path.display())))
}

/// Event ranges and daily weather used to describe days.
#[derive(Debug, Clone, Default)]
pub struct Calendar {
    pub events: Vec<EventRange>,
    pub weather: BTreeMap<NaiveDate, (Option<f64>, Option<f64>)>,
}

impl Calendar {
    pub fn load(cfg: &RunConfig) -> CliResult<Self> {
        let mut cal = Calendar::default();
        if let Some(p) = &cfg.input.events {
            cal.events = read_events(&p.display().to_string(), open(p)?)?;
        }
        if let Some(p) = &cfg.input.weather {
            let readings = read_weather(&p.display().to_string(), open(p)?)?;
            let averaged = average_weather(&readings);
            if !averaged.gaps.is_empty() {
                eprintln!("warning: {} weather timestamps with no reporting station", averaged.gaps.len());
            }
            cal.weather = daily_temperature_humidity(&averaged.series);
        }
        Ok(cal)
    }

    pub fn describe(&self, dates: &[NaiveDate], origin: NaiveDate) -> Vec<DayDescriptor> {
        build_day_descriptors(dates, &self.events, origin)
            .into_iter()
            .map(|mut d| {
                if let Some((t, h)) = self.weather.get(&d.date) {
                    if let Some(t) = t {
                        d = d.with_covariate(TEMPERATURE, *t);
                    }
                    if let Some(h) = h {
                        d = d.with_covariate(HUMIDITY, *h);
                    }
                }
                d
            })
            .collect()
    }
}
