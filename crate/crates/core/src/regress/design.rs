//! Calendar and event predictors and their design-matrix encoding.

use std::collections::BTreeMap;
use std::fmt;

use chrono::{Datelike, NaiveDate};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Special events with their own indicator predictor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    FashionWeek,
    Expo2015,
    DesignFestival,
}

impl EventKind {
    pub const ALL: [EventKind; 3] = [
        EventKind::FashionWeek,
        EventKind::Expo2015,
        EventKind::DesignFestival,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn key(self) -> &'static str {
        match self {
            EventKind::FashionWeek => "fashion_week",
            EventKind::Expo2015 => "expo_2015",
            EventKind::DesignFestival => "design_festival",
        }
    }

    /// Accepts the canonical key and a few loose spellings, case-insensitive.
    pub fn parse(name: &str) -> Option<Self> {
        let norm: String = name
            .trim()
            .to_ascii_lowercase()
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect();
        match norm.as_str() {
            "fashionweek" | "milanfashionweek" | "fashion" => Some(EventKind::FashionWeek),
            "expo2015" | "expo" => Some(EventKind::Expo2015),
            "designfestival" | "milandesignfestival" | "designweek" | "design" => {
                Some(EventKind::DesignFestival)
            }
            _ => None,
        }
    }
}

/// Calendar and event covariates of one day.
#[derive(Debug, Clone, PartialEq)]
pub struct DayDescriptor {
    pub date: NaiveDate,
    /// Days elapsed since the calendar origin (the first training date).
    pub calendar_time: i64,
    /// 1..=12
    pub month: u32,
    /// 1..=31
    pub day_of_month: u32,
    /// 1 = Monday .. 7 = Sunday
    pub day_of_week: u32,
    pub events: [bool; 3],
    /// Extra numeric covariates addressed by [`Term::Covariate`].
    pub covariates: BTreeMap<String, f64>,
}

impl DayDescriptor {
    pub fn new(date: NaiveDate, origin: NaiveDate, events: [bool; 3]) -> Self {
        Self {
            date,
            calendar_time: (date - origin).num_days(),
            month: date.month(),
            day_of_month: date.day(),
            day_of_week: date.weekday().number_from_monday(),
            events,
            covariates: BTreeMap::new(),
        }
    }

    pub fn with_covariate(mut self, name: impl Into<String>, value: f64) -> Self {
        self.covariates.insert(name.into(), value);
        self
    }

    pub fn event(&self, kind: EventKind) -> bool {
        self.events[kind.index()]
    }
}

const MONTH_NAMES: [&str; 12] = [
    "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec",
];
const WEEKDAY_NAMES: [&str; 7] = ["mon", "tue", "wed", "thu", "fri", "sat", "sun"];

/// A predictor block that enters or leaves a model as a whole.
///
/// The derived ordering is the canonical column order of the design matrix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Term {
    Intercept,
    CalendarTime,
    /// Eleven indicators, January is the baseline.
    Month,
    DayOfMonth,
    /// Six indicators, Monday is the baseline.
    DayOfWeek,
    Event(EventKind),
    /// A numeric covariate looked up by name in [`DayDescriptor::covariates`].
    Covariate(String),
    /// Day of month times each non-baseline month indicator.
    DayOfMonthByMonth,
}

impl Term {
    pub fn width(&self) -> usize {
        match self {
            Term::Month | Term::DayOfMonthByMonth => 11,
            Term::DayOfWeek => 6,
            _ => 1,
        }
    }

    /// Main effects a term requires to be present before it may enter.
    pub fn parents(&self) -> &'static [Term] {
        match self {
            Term::DayOfMonthByMonth => &[Term::Month, Term::DayOfMonth],
            _ => &[],
        }
    }

    pub fn column_names(&self) -> Vec<String> {
        match self {
            Term::Intercept => vec!["intercept".into()],
            Term::CalendarTime => vec!["calendar_time".into()],
            Term::Month => MONTH_NAMES[1..].iter().map(|m| format!("month_{m}")).collect(),
            Term::DayOfMonth => vec!["day_of_month".into()],
            Term::DayOfWeek => WEEKDAY_NAMES[1..].iter().map(|d| format!("dow_{d}")).collect(),
            Term::Event(e) => vec![format!("event_{}", e.key())],
            Term::Covariate(name) => vec![format!("cov_{name}")],
            Term::DayOfMonthByMonth => MONTH_NAMES[1..]
                .iter()
                .map(|m| format!("day_of_month_x_{m}"))
                .collect(),
        }
    }

    /// Appends this term's columns for `day` to `row`.
    pub fn encode_into(&self, day: &DayDescriptor, row: &mut Vec<f64>) {
        let indicator = |b: bool| if b { 1.0 } else { 0.0 };
        match self {
            Term::Intercept => row.push(1.0),
            Term::CalendarTime => row.push(day.calendar_time as f64),
            Term::Month => row.extend((2..=12).map(|m| indicator(day.month == m))),
            Term::DayOfMonth => row.push(day.day_of_month as f64),
            Term::DayOfWeek => row.extend((2..=7).map(|d| indicator(day.day_of_week == d))),
            Term::Event(e) => row.push(indicator(day.event(*e))),
            Term::Covariate(name) => row.push(day.covariates.get(name).copied().unwrap_or(f64::NAN)),
            Term::DayOfMonthByMonth => row.extend(
                (2..=12).map(|m| if day.month == m { day.day_of_month as f64 } else { 0.0 }),
            ),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Intercept => f.write_str("intercept"),
            Term::CalendarTime => f.write_str("calendar_time"),
            Term::Month => f.write_str("month"),
            Term::DayOfMonth => f.write_str("day_of_month"),
            Term::DayOfWeek => f.write_str("day_of_week"),
            Term::Event(e) => write!(f, "event:{}", e.key()),
            Term::Covariate(name) => write!(f, "covariate:{name}"),
            Term::DayOfMonthByMonth => f.write_str("day_of_month:month"),
        }
    }
}

impl std::str::FromStr for Term {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(e) = s.strip_prefix("event:") {
            return EventKind::parse(e)
                .map(Term::Event)
                .ok_or_else(|| format!("unknown event '{e}'"));
        }
        if let Some(name) = s.strip_prefix("covariate:") {
            return Ok(Term::Covariate(name.to_string()));
        }
        match s {
            "intercept" => Ok(Term::Intercept),
            "calendar_time" => Ok(Term::CalendarTime),
            "month" => Ok(Term::Month),
            "day_of_month" => Ok(Term::DayOfMonth),
            "day_of_week" => Ok(Term::DayOfWeek),
            "day_of_month:month" | "month:day_of_month" => Ok(Term::DayOfMonthByMonth),
            other => Err(format!("unknown term '{other}'")),
        }
    }
}

/// The pool of candidate terms. The intercept is always present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<Term>", into = "Vec<Term>")]
pub struct DesignSpec {
    terms: Vec<Term>,
}

impl DesignSpec {
    pub fn new(terms: impl IntoIterator<Item = Term>) -> Self {
        let mut terms: Vec<Term> = terms.into_iter().collect();
        terms.push(Term::Intercept);
        terms.sort();
        terms.dedup();
        Self { terms }
    }

    /// Calendar time, month, day of month, day of week, the three events and
    /// the day-of-month by month interaction.
    pub fn full() -> Self {
        let mut terms = Self::calendar().terms;
        terms.extend(EventKind::ALL.map(Term::Event));
        Self::new(terms)
    }

    /// [`DesignSpec::full`] without event indicators.
    pub fn calendar() -> Self {
        Self::new([
            Term::CalendarTime,
            Term::Month,
            Term::DayOfMonth,
            Term::DayOfWeek,
            Term::DayOfMonthByMonth,
        ])
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn contains(&self, term: &Term) -> bool {
        self.terms.contains(term)
    }

    pub fn max_width(&self) -> usize {
        self.terms.iter().map(Term::width).max().unwrap_or(1)
    }

    pub fn column_names(&self) -> Vec<String> {
        self.terms.iter().flat_map(Term::column_names).collect()
    }
}

impl From<Vec<Term>> for DesignSpec {
    fn from(terms: Vec<Term>) -> Self {
        Self::new(terms)
    }
}

impl From<DesignSpec> for Vec<Term> {
    fn from(spec: DesignSpec) -> Self {
        spec.terms
    }
}

/// Encodes `days` under `spec`, one row per day, columns in canonical order.
pub fn encode_design(days: &[DayDescriptor], spec: &DesignSpec) -> DMatrix<f64> {
    encode_terms(days, spec.terms())
}

pub(crate) fn encode_terms(days: &[DayDescriptor], terms: &[Term]) -> DMatrix<f64> {
    let q: usize = terms.iter().map(Term::width).sum();
    let mut data = Vec::with_capacity(days.len() * q);
    let mut row = Vec::with_capacity(q);
    for day in days {
        row.clear();
        for t in terms {
            t.encode_into(day, &mut row);
        }
        data.extend_from_slice(&row);
    }
    DMatrix::from_row_slice(days.len(), q, &data)
}
