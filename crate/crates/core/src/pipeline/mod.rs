//! Ingestion and cleaning of raw measurements into daily curve sets.

mod aggregate;
mod calendar;
mod eunite;
mod filter;
mod population;
mod records;
mod report;
mod resample;
mod stability;
mod weather;

pub use aggregate::aggregate_spatial;
pub use calendar::build_day_descriptors;
pub use eunite::{read_eunite, EUNITE_ENTITY};
pub use filter::{filter_days, FilterOutcome, FilterThresholds};
pub use population::{
    classify_population, Bound, ContractAggregate, CorruptionRule, Population, PopulationRule,
    PopulationRules,
};
pub use records::{
    read_contracts, read_events, read_measurements, read_weather, ContractSnapshot, EventRange,
    LocalStamp, MeasurementRecord, WeatherReading, CONTRACT_HEADER, EVENT_HEADER,
    MEASUREMENT_HEADER, WEATHER_HEADER,
};
pub use report::{DropEntry, DropReason, DropReport};
pub use resample::{resample_to_grid, DayCompleteness, Resampled};
pub use stability::{entity_stability, stability_check, StabilityOutcome, CHARACTERISTICS};
pub use weather::{average_weather, daily_temperature_humidity, AveragedWeather, CITY_STATION};
