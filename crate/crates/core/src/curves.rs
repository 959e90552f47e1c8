//! Daily load curves on a fixed intra-day sampling grid.
//!
//! A [`CurveSet`] holds one entity's days, sorted by date, all sampled on the
//! same [`TimeGrid`]. Normalization divides every sample by the global maximum
//! of the set and records that maximum so forecasts can be mapped back to kW.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Intra-day sample times, in hours from midnight.
///
/// Each point is the start of a half-open interval `[t_j, t_{j+1})`, the last
/// one closing at 24.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TimeGrid {
    points: Vec<f64>,
}

impl TimeGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 points, got {}",
                points.len()
            )));
        }
        if let Some(p) = points.iter().find(|p| !(0.0..24.0).contains(*p)) {
            return Err(Error::InvalidGrid(format!("point {p} outside [0, 24)")));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("points must be strictly increasing".into()));
        }
        Ok(Self { points })
    }

    /// `m` evenly spaced points starting at midnight.
    pub fn uniform(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {m}")));
        }
        let step = 24.0 / m as f64;
        Self::new((0..m).map(|j| j as f64 * step).collect())
    }

    /// 24 hourly points.
    pub fn hourly() -> Self {
        Self::uniform(24).expect("24-point grid is valid")
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the interval containing `hour`, or `None` if it precedes the
    /// first point or lies outside the day.
    pub fn slot_of(&self, hour: f64) -> Option<usize> {
        if !(0.0..24.0).contains(&hour) || hour < self.points[0] {
            return None;
        }
        // last point <= hour
        Some(self.points.partition_point(|&p| p <= hour) - 1)
    }

    /// `HH:MM` label of grid point `j`.
    pub fn label(&self, j: usize) -> String {
        let minutes = (self.points[j] * 60.0).round() as u32;
        format!("{:02}:{:02}", minutes / 60, minutes % 60)
    }
}

impl TryFrom<Vec<f64>> for TimeGrid {
    type Error = Error;

    fn try_from(points: Vec<f64>) -> Result<Self> {
        Self::new(points)
    }
}

impl From<TimeGrid> for Vec<f64> {
    fn from(g: TimeGrid) -> Self {
        g.points
    }
}

/// One day's load samples.
#[derive(Debug, Clone, PartialEq)]
pub struct DailyCurve {
    pub date: NaiveDate,
    pub entity_id: String,
    pub values: Vec<f64>,
}

impl DailyCurve {
    pub fn new(entity_id: impl Into<String>, date: NaiveDate, values: Vec<f64>) -> Self {
        Self {
            date,
            entity_id: entity_id.into(),
            values,
        }
    }

    pub fn has_negative(&self) -> bool {
        self.values.iter().any(|v| *v < 0.0)
    }
}

/// A date-ordered collection of one entity's curves on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSet {
    grid: TimeGrid,
    entity_id: String,
    curves: Vec<DailyCurve>,
    scale: Option<f64>,
}

impl CurveSet {
    /// Validates and sorts `curves` by date.
    ///
    /// Negative samples are accepted; use [`CurveSet::negative_days`] to list them.
    pub fn new(
        grid: TimeGrid,
        entity_id: impl Into<String>,
        mut curves: Vec<DailyCurve>,
    ) -> Result<Self> {
        let entity_id = entity_id.into();
        for c in &curves {
            if c.values.len() != grid.len() {
                return Err(Error::GridMismatch {
                    expected: grid.len(),
                    got: c.values.len(),
                });
            }
            if c.entity_id != entity_id {
                return Err(Error::InvalidCurve(format!(
                    "curve of entity {} in set of entity {entity_id}",
                    c.entity_id
                )));
            }
            if c.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidCurve(format!("non-finite sample on {}", c.date)));
            }
        }
        curves.sort_by_key(|c| c.date);
        if let Some(w) = curves.windows(2).find(|w| w[0].date == w[1].date) {
            return Err(Error::DuplicateDate(w[0].date));
        }
        Ok(Self {
            grid,
            entity_id,
            curves,
            scale: None,
        })
    }

    /// Attaches a scale factor to values already expressed in normalized units.
    pub fn with_scale(mut self, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::ZeroScale);
        }
        self.scale = Some(scale);
        Ok(self)
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn entity_id(&self) -> &str {
        &self.entity_id
    }

    pub fn curves(&self) -> &[DailyCurve] {
        &self.curves
    }

    pub fn into_curves(self) -> Vec<DailyCurve> {
        self.curves
    }

    pub fn scale(&self) -> Option<f64> {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn dates(&self) -> Vec<NaiveDate> {
        self.curves.iter().map(|c| c.date).collect()
    }

    pub fn get(&self, date: NaiveDate) -> Option<&DailyCurve> {
        self.curves
            .binary_search_by_key(&date, |c| c.date)
            .ok()
            .map(|i| &self.curves[i])
    }

    /// Dates whose curve holds at least one negative sample.
    pub fn negative_days(&self) -> Vec<NaiveDate> {
        self.curves
            .iter()
            .filter(|c| c.has_negative())
            .map(|c| c.date)
            .collect()
    }

    /// Subset of curves whose date satisfies `keep`; the scale factor is kept.
    pub fn filter_dates(&self, mut keep: impl FnMut(NaiveDate) -> bool) -> Self {
        Self {
            grid: self.grid.clone(),
            entity_id: self.entity_id.clone(),
            curves: self.curves.iter().filter(|c| keep(c.date)).cloned().collect(),
            scale: self.scale,
        }
    }

    /// Global maximum over every sample of every curve.
    pub fn global_max(&self) -> Option<f64> {
        self.curves
            .iter()
            .flat_map(|c| c.values.iter().copied())
            .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
    }

    fn map_values(&self, f: impl Fn(f64) -> f64, scale: Option<f64>) -> Self {
        let curves = self
            .curves
            .iter()
            .map(|c| DailyCurve {
                date: c.date,
                entity_id: c.entity_id.clone(),
                values: c.values.iter().map(|v| f(*v)).collect(),
            })
            .collect();
        Self {
            grid: self.grid.clone(),
            entity_id: self.entity_id.clone(),
            curves,
            scale,
        }
    }
}

/// Divides every sample by the global maximum of the set.
pub fn normalize_by_max(set: &CurveSet) -> Result<CurveSet> {
    let max = set.global_max().ok_or(Error::EmptySet)?;
    if max <= 0.0 {
        return Err(Error::ZeroScale);
    }
    Ok(set.map_values(|v| v / max, Some(max)))
}

/// Multiplies every sample by the recorded scale factor.
pub fn denormalize(set: &CurveSet) -> Result<CurveSet> {
    let scale = set.scale.ok_or(Error::NotNormalized)?;
    Ok(set.map_values(|v| v * scale, None))
}
