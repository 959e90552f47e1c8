//! Run configuration: built-in defaults, overridden by a TOML file, overridden
//! by command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::NaiveDate;
use loadfpca::pipeline::FilterThresholds;
use loadfpca::regress::{DesignSpec, Term};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Inclusive date range written `START..END`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct DateRange {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl DateRange {
    pub fn contains(&self, d: NaiveDate) -> bool {
        self.start <= d && d <= self.end
    }

    pub fn overlaps(&self, other: &DateRange) -> bool {
        self.start <= other.end && other.start <= self.end
    }

    pub fn days(&self) -> Vec<NaiveDate> {
        self.start.iter_days().take_while(|d| *d <= self.end).collect()
    }
}

impl FromStr for DateRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| format!("date range `{s}` is not START..END"))?;
        let parse = |x: &str| {
            NaiveDate::parse_from_str(x.trim(), "%Y-%m-%d").map_err(|_| format!("invalid date `{x}`"))
        };
        let r = DateRange { start: parse(a)?, end: parse(b)? };
        if r.end < r.start {
            return Err(format!("date range `{s}` ends before it starts"));
        }
        Ok(r)
    }
}

impl TryFrom<String> for DateRange {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<DateRange> for String {
    fn from(r: DateRange) -> Self {
        r.to_string()
    }
}

impl fmt::Display for DateRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InputPaths {
    /// `entity_id,timestamp,power_kw` readings.
    pub measurements: Option<PathBuf>,
    /// Daily-row load files in the competition layout; used instead of `measurements`.
    pub eunite: Vec<PathBuf>,
    pub contracts: Option<PathBuf>,
    pub weather: Option<PathBuf>,
    pub events: Option<PathBuf>,
    /// `entity_id,region` table for spatial aggregation.
    pub regions: Option<PathBuf>,
    /// TOML population rules; built-in defaults when absent.
    pub population_rules: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    /// Candidate terms, e.g. `["month", "day_of_week", "covariate:temp_c"]`.
    /// Defaults to the full calendar pool with event indicators.
    pub terms: Option<Vec<String>>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self { terms: None }
    }
}

impl ModelConfig {
    pub fn pool(&self) -> CliResult<DesignSpec> {
        match &self.terms {
            None => Ok(DesignSpec::full()),
            Some(names) => names
                .iter()
                .map(|n| n.parse::<Term>().map_err(CliError::usage))
                .collect::<CliResult<Vec<_>>>()
                .map(DesignSpec::new),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportConfig {
    pub temperature_bin_c: f64,
    pub humidity_bin_pct: f64,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self { temperature_bin_c: 2.5, humidity_bin_pct: 10.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub input: InputPaths,
    /// Number of equally spaced grid points per day.
    pub grid: usize,
    /// IANA zone used to resolve daylight-saving transitions.
    pub timezone: String,
    pub train_range: Option<DateRange>,
    pub test_range: Option<DateRange>,
    /// Components used for forecasting (K).
    pub components: usize,
    /// Components fitted (p).
    pub fit_components: usize,
    pub output: PathBuf,
    pub filter: FilterThresholds,
    pub model: ModelConfig,
    pub report: ReportConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: InputPaths::default(),
            grid: 24,
            timezone: "Europe/Rome".into(),
            train_range: None,
            test_range: None,
            components: 4,
            fit_components: 8,
            output: PathBuf::from("out"),
            filter: FilterThresholds::default(),
            model: ModelConfig::default(),
            report: ReportConfig::default(),
        }
    }
}

/// Values given on the command line.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub train_range: Option<DateRange>,
    pub test_range: Option<DateRange>,
    pub components: Option<usize>,
    pub grid: Option<usize>,
    pub output: Option<PathBuf>,
}

fn resolve(base: &Path, p: &mut PathBuf) {
    if p.is_relative() {
        *p = base.join(&*p);
    }
}

impl RunConfig {
    /// Parses TOML text; relative paths are resolved against `base`.
    pub fn from_toml(text: &str, base: &Path) -> CliResult<Self> {
        let mut cfg: RunConfig =
            toml::from_str(text).map_err(|e| CliError::usage(format!("invalid config: {e}")))?;
        let i = &mut cfg.input;
        for p in i
            .measurements
            .iter_mut()
            .chain(i.eunite.iter_mut())
            .chain(i.contracts.iter_mut())
            .chain(i.weather.iter_mut())
            .chain(i.events.iter_mut())
            .chain(i.regions.iter_mut())
            .chain(i.population_rules.iter_mut())
        {
            resolve(base, p);
        }
        resolve(base, &mut cfg.output);
        Ok(cfg)
    }

    pub fn load(path: Option<&Path>, overrides: &Overrides) -> CliResult<Self> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::usage(format!("{}: {e}", p.display())))?;
                let base = p.parent().unwrap_or(Path::new("."));
                Self::from_toml(&text, base).map_err(|e| e.context(p.display()))?
            }
            None => Self::default(),
        };
        cfg.apply(overrides);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(r) = o.train_range {
            self.train_range = Some(r);
        }
        if let Some(r) = o.test_range {
            self.test_range = Some(r);
        }
        if let Some(k) = o.components {
            self.components = k;
        }
        if let Some(g) = o.grid {
            self.grid = g;
        }
        if let Some(p) = &o.output {
            self.output = p.clone();
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.grid < 2 || self.grid > 1440 {
            return Err(CliError::usage(format!("grid must have 2 to 1440 points, got {}", self.grid)));
        }
        if self.fit_components == 0 {
            return Err(CliError::usage("fit_components must be at least 1"));
        }
        if self.fit_components > self.grid {
            return Err(CliError::usage(format!(
                "fit_components ({}) exceeds grid points ({})",
                self.fit_components, self.grid
            )));
        }
        if self.components > self.fit_components {
            return Err(CliError::usage(format!(
                "components ({}) exceeds fit_components ({})",
                self.components, self.fit_components
            )));
        }
        if let (Some(a), Some(b)) = (&self.train_range, &self.test_range) {
            if a.overlaps(b) {
                return Err(CliError::usage(format!("train range {a} overlaps test range {b}")));
            }
        }
        if !(self.report.temperature_bin_c > 0.0 && self.report.humidity_bin_pct > 0.0) {
            return Err(CliError::usage("report bin widths must be positive"));
        }
        self.tz()?;
        self.model.pool()?;
        Ok(())
    }

    pub fn tz(&self) -> CliResult<chrono_tz::Tz> {
        self.timezone
            .parse()
            .map_err(|_| CliError::usage(format!("unknown timezone `{}`", self.timezone)))
    }

    pub fn require_train(&self) -> CliResult<DateRange> {
        self.train_range.ok_or_else(|| CliError::usage("train_range is not set"))
    }

    pub fn require_test(&self) -> CliResult<DateRange> {
        self.test_range.ok_or_else(|| CliError::usage("test_range is not set"))
    }
}
