//! Day-ahead forecasting of power-system inertial energy.
//!
//! The crate covers the data model and CSV ingestion ([`dataset`], [`series`],
//! [`calendar`]), design-matrix construction ([`features`]), a QR least-squares
//! solver ([`ols`]), the explanatory regression with its Gaussian wrapper and
//! regional aggregation ([`explanatory`]), an additive trend/seasonality/holiday
//! baseline ([`baseline`]), accuracy metrics ([`metrics`]), a synthetic data
//! generator ([`synthetic`]) and the benchmark runner ([`bench`]).

pub mod baseline;
pub mod bench;
pub mod calendar;
pub mod dataset;
pub mod error;
pub mod explanatory;
pub mod features;
pub mod metrics;
pub mod ols;
pub mod series;
pub mod synthetic;
pub mod time;

pub use calendar::{day_type, DayType, HolidayCalendar, RegionId};
pub use dataset::{load_csv, split, write_csv, CsvSchema, Field, InertiaDataset, SplitSpec};
pub use error::{Error, Result};
pub use explanatory::{
    fit, fit_regional, predict, predict_aggregate, predict_distribution, ExplanatoryModel,
    ProbabilisticForecast, RegionalModelSet, SigmaSource,
};
pub use features::{
    build_design, substitute_actuals, DesignMatrix, Feature, FeatureSpec, Substitution, TimeTrend,
};
pub use series::{HourlySeries, Unit};
pub use time::{Timestamp, Window};
