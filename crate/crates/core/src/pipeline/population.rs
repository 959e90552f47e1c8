//! Population rules: contractual thresholds and the matching corruption rule.
//!
//! Rules are configuration data read from TOML, evaluated in declared order.
//! The built-in [`PopulationRules::default`] thresholds are placeholders
//! chosen to separate dominant customer types; they are not calibrated values.

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::records::ContractSnapshot;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Population {
    Res,
    Nrs,
    Plt,
    Pvg,
    Mix,
    Nil,
    Cty,
}

impl fmt::Display for Population {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Population::Res => "RES",
            Population::Nrs => "NRS",
            Population::Plt => "PLT",
            Population::Pvg => "PVG",
            Population::Mix => "MIX",
            Population::Nil => "NIL",
            Population::Cty => "CTY",
        })
    }
}

impl FromStr for Population {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "RES" => Ok(Population::Res),
            "NRS" => Ok(Population::Nrs),
            "PLT" => Ok(Population::Plt),
            "PVG" => Ok(Population::Pvg),
            "MIX" => Ok(Population::Mix),
            "NIL" => Ok(Population::Nil),
            "CTY" => Ok(Population::Cty),
            other => Err(Error::Config(format!("unknown population `{other}`"))),
        }
    }
}

/// Which days count as corrupted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorruptionRule {
    /// Any sample exactly 0 kW.
    #[default]
    AnyZeroSample,
    /// Every sample exactly 0 kW.
    AllDayZero,
    None,
}

impl CorruptionRule {
    pub fn is_corrupted(self, values: &[f64]) -> bool {
        match self {
            CorruptionRule::AnyZeroSample => values.iter().any(|v| *v == 0.0),
            CorruptionRule::AllDayZero => values.iter().all(|v| *v == 0.0),
            CorruptionRule::None => false,
        }
    }
}

/// Bounds on one characteristic; every bound is optional.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bound {
    /// Inclusive lower bound.
    pub min: Option<f64>,
    /// Inclusive upper bound.
    pub max: Option<f64>,
    /// Exclusive lower bound.
    pub above: Option<f64>,
}

impl Bound {
    pub fn min(v: f64) -> Self {
        Self {
            min: Some(v),
            ..Self::default()
        }
    }

    pub fn max(v: f64) -> Self {
        Self {
            max: Some(v),
            ..Self::default()
        }
    }

    pub fn above(v: f64) -> Self {
        Self {
            above: Some(v),
            ..Self::default()
        }
    }

    pub fn admits(&self, v: f64) -> bool {
        self.min.map_or(true, |b| v >= b)
            && self.max.map_or(true, |b| v <= b)
            && self.above.map_or(true, |b| v > b)
    }
}

/// Contract characteristics averaged over a window.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ContractAggregate {
    pub contract_kw: f64,
    pub frac_residential: f64,
    pub frac_public_lighting: f64,
    pub generation_kw: f64,
    pub frac_pv: f64,
}

impl ContractAggregate {
    /// Day-weighted mean of the snapshots overlapping `[from, to]`, or `None`
    /// if no snapshot overlaps.
    pub fn over(snapshots: &[ContractSnapshot], from: NaiveDate, to: NaiveDate) -> Option<Self> {
        let mut acc = ContractAggregate::default();
        let mut days = 0.0;
        for s in snapshots {
            let lo = s.start.max(from);
            let hi = s.end.min(to);
            if hi < lo {
                continue;
            }
            let w = ((hi - lo).num_days() + 1) as f64;
            days += w;
            acc.contract_kw += w * s.contract_kw;
            acc.frac_residential += w * s.frac_residential;
            acc.frac_public_lighting += w * s.frac_public_lighting;
            acc.generation_kw += w * s.generation_kw;
            acc.frac_pv += w * s.frac_pv;
        }
        if days == 0.0 {
            return None;
        }
        Some(ContractAggregate {
            contract_kw: acc.contract_kw / days,
            frac_residential: acc.frac_residential / days,
            frac_public_lighting: acc.frac_public_lighting / days,
            generation_kw: acc.generation_kw / days,
            frac_pv: acc.frac_pv / days,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopulationRule {
    pub name: Population,
    #[serde(default)]
    pub corruption: CorruptionRule,
    #[serde(default)]
    pub contract_kw: Bound,
    #[serde(default)]
    pub frac_res: Bound,
    #[serde(default)]
    pub frac_plt: Bound,
    #[serde(default)]
    pub gen_kw: Bound,
    #[serde(default)]
    pub frac_pv: Bound,
}

impl PopulationRule {
    pub fn new(name: Population, corruption: CorruptionRule) -> Self {
        Self {
            name,
            corruption,
            contract_kw: Bound::default(),
            frac_res: Bound::default(),
            frac_plt: Bound::default(),
            gen_kw: Bound::default(),
            frac_pv: Bound::default(),
        }
    }

    pub fn matches(&self, a: &ContractAggregate) -> bool {
        self.contract_kw.admits(a.contract_kw)
            && self.frac_res.admits(a.frac_residential)
            && self.frac_plt.admits(a.frac_public_lighting)
            && self.gen_kw.admits(a.generation_kw)
            && self.frac_pv.admits(a.frac_pv)
    }
}

/// Ordered population rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopulationRules {
    #[serde(rename = "population")]
    pub rules: Vec<PopulationRule>,
}

impl Default for PopulationRules {
    fn default() -> Self {
        use CorruptionRule::*;
        use Population::*;
        let mut pvg = PopulationRule::new(Pvg, AnyZeroSample);
        pvg.frac_pv = Bound::min(0.95);
        pvg.gen_kw = Bound::above(0.0);
        let mut res = PopulationRule::new(Res, AnyZeroSample);
        res.frac_res = Bound::min(0.95);
        let mut plt = PopulationRule::new(Plt, AllDayZero);
        plt.frac_plt = Bound::min(0.95);
        let mut nrs = PopulationRule::new(Nrs, AnyZeroSample);
        nrs.frac_res = Bound::max(0.05);
        nrs.frac_plt = Bound::max(0.05);
        let mix = PopulationRule::new(Mix, AnyZeroSample);
        Self {
            rules: vec![pvg, res, plt, nrs, mix],
        }
    }
}

impl PopulationRules {
    pub fn from_toml(text: &str) -> Result<Self> {
        let rules: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if rules.rules.is_empty() {
            return Err(Error::Config("no population rules defined".into()));
        }
        Ok(rules)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("rules serialize")
    }

    /// First rule whose thresholds admit `aggregate`.
    pub fn classify(&self, aggregate: &ContractAggregate) -> Option<&PopulationRule> {
        self.rules.iter().find(|r| r.matches(aggregate))
    }

    /// Corruption rule for `population`; populations without a rule use the
    /// any-zero-sample test.
    pub fn corruption_rule(&self, population: Population) -> CorruptionRule {
        self.rules
            .iter()
            .find(|r| r.name == population)
            .map_or(CorruptionRule::AnyZeroSample, |r| r.corruption)
    }
}

/// Population name of the first matching rule.
pub fn classify_population(aggregate: &ContractAggregate, rules: &PopulationRules) -> Option<Population> {
    rules.classify(aggregate).map(|r| r.name)
}
