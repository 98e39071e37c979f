//! Regression design matrices for the explanatory inertia model.
//!
//! Within one block the canonical column order is: lagged inertia, the enabled
//! day-ahead forecasts (demand, wind, solar), interconnector flow, the time
//! trend terms, the previous-day hydropower inertia and an intercept. With the
//! day-type interaction on, the block is repeated for weekdays and for
//! weekends/holidays and each row fills exactly one of the two copies.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::calendar::{day_type, DayType};
use crate::dataset::{Field, InertiaDataset};
use crate::error::{Error, Result};
use crate::time::{Timestamp, Window};

/// Regressors that may carry a monthly interaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    InertiaLag,
    DemandFc,
    WindFc,
    SolarFc,
    IcFlow,
    HydroLag,
}

impl Feature {
    pub fn name(self) -> &'static str {
        match self {
            Feature::InertiaLag => "inertia_lag",
            Feature::DemandFc => "demand_fc",
            Feature::WindFc => "wind_fc",
            Feature::SolarFc => "solar_fc",
            Feature::IcFlow => "ic_flow",
            Feature::HydroLag => "hydro_lag",
        }
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Feature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "inertia_lag" => Feature::InertiaLag,
            "demand_fc" => Feature::DemandFc,
            "wind_fc" => Feature::WindFc,
            "solar_fc" => Feature::SolarFc,
            "ic_flow" => Feature::IcFlow,
            "hydro_lag" => Feature::HydroLag,
            other => return Err(Error::Config(format!("unknown feature {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeTrend {
    None,
    Linear,
    Quadratic,
}

impl TimeTrend {
    pub fn terms(self) -> usize {
        match self {
            TimeTrend::None => 0,
            TimeTrend::Linear => 1,
            TimeTrend::Quadratic => 2,
        }
    }
}

/// Declarative description of the regressors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeatureSpec {
    pub lag_target_hours: u32,
    pub use_demand_fc: bool,
    pub use_wind_fc: bool,
    pub use_solar_fc: bool,
    pub use_ic_flow: bool,
    pub time_trend: TimeTrend,
    pub daytype_interaction: bool,
    pub monthly_interaction_on: BTreeSet<Feature>,
    pub hydro_lag: bool,
    pub include_intercept: bool,
}

impl Default for FeatureSpec {
    fn default() -> Self {
        FeatureSpec {
            lag_target_hours: 24,
            use_demand_fc: true,
            use_wind_fc: true,
            use_solar_fc: true,
            use_ic_flow: true,
            time_trend: TimeTrend::Quadratic,
            daytype_interaction: true,
            monthly_interaction_on: BTreeSet::new(),
            hydro_lag: false,
            include_intercept: false,
        }
    }
}

/// Hours between the target hour and the hydropower inertia it is regressed on.
pub const HYDRO_LAG_HOURS: i64 = 24;

const MONTHS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Input(Feature),
    Tau,
    Tau2,
    Intercept,
}

impl FeatureSpec {
    pub fn with_monthly(mut self, features: impl IntoIterator<Item = Feature>) -> Self {
        self.monthly_interaction_on.extend(features);
        self
    }

    pub fn is_enabled(&self, f: Feature) -> bool {
        match f {
            Feature::InertiaLag => true,
            Feature::DemandFc => self.use_demand_fc,
            Feature::WindFc => self.use_wind_fc,
            Feature::SolarFc => self.use_solar_fc,
            Feature::IcFlow => self.use_ic_flow,
            Feature::HydroLag => self.hydro_lag,
        }
    }

    pub fn enabled_features(&self) -> Vec<Feature> {
        [
            Feature::InertiaLag,
            Feature::DemandFc,
            Feature::WindFc,
            Feature::SolarFc,
            Feature::IcFlow,
            Feature::HydroLag,
        ]
        .into_iter()
        .filter(|f| self.is_enabled(*f))
        .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.lag_target_hours < 1 {
            return Err(Error::Config("lag_target_hours must be at least 1".into()));
        }
        if let Some(f) = self
            .monthly_interaction_on
            .iter()
            .find(|f| !self.is_enabled(**f))
        {
            return Err(Error::Config(format!(
                "monthly interaction requested on disabled feature {f}"
            )));
        }
        Ok(())
    }

    fn slots(&self) -> Vec<Slot> {
        let mut slots = Vec::new();
        for f in [
            Feature::InertiaLag,
            Feature::DemandFc,
            Feature::WindFc,
            Feature::SolarFc,
            Feature::IcFlow,
        ] {
            if self.is_enabled(f) {
                slots.push(Slot::Input(f));
            }
        }
        if self.time_trend.terms() >= 1 {
            slots.push(Slot::Tau);
        }
        if self.time_trend.terms() >= 2 {
            slots.push(Slot::Tau2);
        }
        if self.hydro_lag {
            slots.push(Slot::Input(Feature::HydroLag));
        }
        if self.include_intercept {
            slots.push(Slot::Intercept);
        }
        slots
    }

    fn slot_width(&self, slot: Slot) -> usize {
        match slot {
            Slot::Input(f) if self.monthly_interaction_on.contains(&f) => MONTHS,
            _ => 1,
        }
    }

    fn blocks(&self) -> usize {
        if self.daytype_interaction {
            2
        } else {
            1
        }
    }

    pub fn block_width(&self) -> usize {
        self.slots().into_iter().map(|s| self.slot_width(s)).sum()
    }

    pub fn n_columns(&self) -> usize {
        self.blocks() * self.block_width()
    }

    pub fn column_names(&self) -> Vec<String> {
        let prefixes: &[&str] = if self.daytype_interaction {
            &["weekday.", "weekend_holiday."]
        } else {
            &[""]
        };
        let mut names = Vec::with_capacity(self.n_columns());
        for prefix in prefixes {
            for slot in self.slots() {
                let base = match slot {
                    Slot::Input(f) => f.name(),
                    Slot::Tau => "tau",
                    Slot::Tau2 => "tau2",
                    Slot::Intercept => "intercept",
                };
                if self.slot_width(slot) == MONTHS {
                    for m in 1..=MONTHS {
                        names.push(format!("{prefix}{base}.m{m:02}"));
                    }
                } else {
                    names.push(format!("{prefix}{base}"));
                }
            }
        }
        names
    }

    /// Series the design reads, beyond the target.
    pub fn required_fields(&self) -> Vec<Field> {
        let mut out = vec![Field::Inertia];
        if self.use_demand_fc {
            out.push(Field::DemandFc);
        }
        if self.use_wind_fc {
            out.push(Field::WindFc);
        }
        if self.use_solar_fc {
            out.push(Field::SolarFc);
        }
        if self.use_ic_flow {
            out.push(Field::IcFlow);
        }
        if self.hydro_lag {
            out.push(Field::HydroInertia);
        }
        out
    }
}

/// Normalisation of the time trend: `tau(h) = (h - t0) / t_scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendScale {
    pub t0: Timestamp,
    pub t_scale: f64,
}

impl TrendScale {
    /// `tau` spans `[0, 1)` over the window.
    pub fn for_window(window: Window) -> Self {
        TrendScale {
            t0: window.start,
            t_scale: window.len().max(1) as f64,
        }
    }

    pub fn tau(&self, ts: Timestamp) -> f64 {
        ts.hours_since(self.t0) as f64 / self.t_scale
    }
}

/// Row-major regressor matrix with its targets and row timestamps.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    pub timestamps: Vec<Timestamp>,
    /// Row-major, `timestamps.len() * column_names.len()` entries.
    pub x: Vec<f64>,
    pub targets: Vec<f64>,
    pub column_names: Vec<String>,
    pub trend: TrendScale,
}

impl DesignMatrix {
    /// Assembles a design from explicit rows; used for ad-hoc regressions.
    pub fn from_rows(
        rows: &[Vec<f64>],
        targets: Vec<f64>,
        column_names: Vec<String>,
    ) -> Result<Self> {
        let p = column_names.len();
        if rows.len() != targets.len() {
            return Err(Error::Numeric(format!(
                "{} rows but {} targets",
                rows.len(),
                targets.len()
            )));
        }
        let mut x = Vec::with_capacity(rows.len() * p);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != p {
                return Err(Error::Numeric(format!(
                    "row {i} has {} entries, expected {p}",
                    r.len()
                )));
            }
            x.extend_from_slice(r);
        }
        Ok(DesignMatrix {
            timestamps: (0..rows.len() as i64).map(Timestamp::from_hours).collect(),
            x,
            targets,
            column_names,
            trend: TrendScale {
                t0: Timestamp::from_hours(0),
                t_scale: 1.0,
            },
        })
    }

    pub fn n_rows(&self) -> usize {
        self.targets.len()
    }

    pub fn n_cols(&self) -> usize {
        self.column_names.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let p = self.n_cols();
        &self.x[i * p..(i + 1) * p]
    }

    pub fn rows(&self) -> impl Iterator<Item = (Timestamp, &[f64])> {
        let p = self.n_cols().max(1);
        self.timestamps.iter().copied().zip(self.x.chunks(p))
    }
}

/// The regressor row for hour `h`, or `None` when any referenced input is missing.
pub fn feature_row(
    ds: &InertiaDataset,
    spec: &FeatureSpec,
    trend: &TrendScale,
    h: Timestamp,
) -> Option<Vec<f64>> {
    let slots = spec.slots();
    let width = spec.block_width();
    let mut block = Vec::with_capacity(width);
    let month = h.month() as usize - 1;
    for slot in slots {
        let v = match slot {
            Slot::Input(f) => input_value(ds, spec, f, h)?,
            Slot::Tau => trend.tau(h),
            Slot::Tau2 => trend.tau(h).powi(2),
            Slot::Intercept => 1.0,
        };
        if spec.slot_width(slot) == MONTHS {
            let mut months = [0.0; MONTHS];
            months[month] = v;
            block.extend_from_slice(&months);
        } else {
            block.push(v);
        }
    }
    if !block.iter().all(|v| v.is_finite()) {
        return None;
    }
    if !spec.daytype_interaction {
        return Some(block);
    }
    let mut row = vec![0.0; 2 * width];
    let offset = match day_type(h, &ds.calendar) {
        DayType::Weekday => 0,
        DayType::WeekendOrHoliday => width,
    };
    row[offset..offset + width].copy_from_slice(&block);
    Some(row)
}

fn input_value(ds: &InertiaDataset, spec: &FeatureSpec, f: Feature, h: Timestamp) -> Option<f64> {
    match f {
        Feature::InertiaLag => ds.target.get(h.add_hours(-(spec.lag_target_hours as i64))),
        Feature::DemandFc => ds.demand_fc.get(h),
        Feature::WindFc => ds.wind_fc.get(h),
        Feature::SolarFc => ds.solar_fc.get(h),
        Feature::IcFlow => ds.ic_flow.get(h),
        Feature::HydroLag => ds
            .hydro_inertia
            .as_ref()?
            .get(h.add_hours(-HYDRO_LAG_HOURS)),
    }
}

/// Design over `window`, with the trend normalised to the same window.
pub fn build_design(
    ds: &InertiaDataset,
    spec: &FeatureSpec,
    window: Window,
) -> Result<DesignMatrix> {
    build_design_with_trend(ds, spec, window, TrendScale::for_window(window))
}

/// Design over `window` using an existing trend normalisation. Hours whose target
/// or any referenced input (including lags) is missing are skipped.
pub fn build_design_with_trend(
    ds: &InertiaDataset,
    spec: &FeatureSpec,
    window: Window,
    trend: TrendScale,
) -> Result<DesignMatrix> {
    spec.validate()?;
    if spec.hydro_lag && ds.hydro_inertia.is_none() {
        return Err(Error::MissingSeries(format!(
            "{}: hydro_lag requested but the dataset has no hydropower inertia",
            ds.region
        )));
    }
    let p = spec.n_columns();
    let mut timestamps = Vec::new();
    let mut x = Vec::new();
    let mut targets = Vec::new();
    for h in window.hours() {
        let Some(y) = ds.target.get(h) else { continue };
        let Some(row) = feature_row(ds, spec, &trend, h) else {
            continue;
        };
        debug_assert_eq!(row.len(), p);
        timestamps.push(h);
        x.extend(row);
        targets.push(y);
    }
    if targets.is_empty() {
        return Err(Error::EmptyDesign(format!(
            "{}: no complete rows in {window}",
            ds.region
        )));
    }
    Ok(DesignMatrix {
        timestamps,
        x,
        targets,
        column_names: spec.column_names(),
        trend,
    })
}

/// Which day-ahead forecasts to replace by their realised values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Substitution {
    Demand,
    Wind,
    Solar,
}

impl FromStr for Substitution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "demand" => Ok(Substitution::Demand),
            "wind" => Ok(Substitution::Wind),
            "solar" => Ok(Substitution::Solar),
            other => Err(Error::Config(format!("unknown substitution {other:?}"))),
        }
    }
}

/// Replaces the named forecast series by the realised series, emulating a perfect forecast.
pub fn substitute_actuals(
    ds: &InertiaDataset,
    which: &BTreeSet<Substitution>,
) -> Result<InertiaDataset> {
    let mut out = ds.clone();
    for s in which {
        let (fc, actual) = match s {
            Substitution::Demand => (Field::DemandFc, Field::DemandActual),
            Substitution::Wind => (Field::WindFc, Field::WindActual),
            Substitution::Solar => (Field::SolarFc, Field::SolarActual),
        };
        let real = ds.series(actual).ok_or_else(|| {
            Error::MissingSeries(format!("{}: no {actual} series to substitute", ds.region))
        })?;
        let slot = out.series_mut(fc).expect("forecast series are mandatory");
        *slot = real.clone().renamed(fc.column());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calendar::{HolidayCalendar, RegionId};
    use crate::series::{HourlySeries, Unit};
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn dataset(hours: usize, with_actuals: bool) -> InertiaDataset {
        let start = Timestamp::ymd_h(2018, 1, 1, 0);
        let mk = |f: Field, k: f64| {
            let vals: Vec<f64> = (0..hours).map(|i| 1000.0 + k * i as f64).collect();
            HourlySeries::from_values(f.column(), f.unit(), start, &vals).unwrap()
        };
        let mut map = BTreeMap::new();
        for (i, f) in Field::ALL.iter().enumerate() {
            if !with_actuals
                && matches!(
                    f,
                    Field::DemandActual | Field::WindActual | Field::SolarActual
                )
            {
                continue;
            }
            map.insert(*f, mk(*f, i as f64 + 1.0));
        }
        InertiaDataset::from_series(
            RegionId::NordicTotal,
            map,
            HolidayCalendar::default_for(RegionId::NordicTotal),
        )
        .unwrap()
    }

    fn window(ds: &InertiaDataset, from: i64) -> Window {
        Window::new(ds.window().start.add_hours(from), ds.window().end)
    }

    #[test]
    fn default_column_count() {
        let spec = FeatureSpec::default();
        assert_eq!(spec.n_columns(), 14);
        let ds = dataset(72, false);
        let d = build_design(&ds, &spec, window(&ds, 24)).unwrap();
        assert_eq!(d.n_cols(), 14);
        assert_eq!(d.n_rows(), 48);
        assert_eq!(d.column_names[0], "weekday.inertia_lag");
        assert_eq!(d.column_names[7], "weekend_holiday.inertia_lag");
    }

    #[test]
    fn monthly_demand_and_hydro_counts() {
        let spec = FeatureSpec::default().with_monthly([Feature::DemandFc]);
        assert_eq!(spec.n_columns(), 36);
        let spec = FeatureSpec {
            hydro_lag: true,
            ..FeatureSpec::default()
        };
        assert_eq!(spec.n_columns(), 16);
        assert_eq!(spec.column_names()[7], "weekday.hydro_lag");
    }

    #[test]
    fn weekday_rows_leave_weekend_block_zero() {
        let ds = dataset(24 * 10, false);
        let spec = FeatureSpec::default();
        let d = build_design(&ds, &spec, window(&ds, 24)).unwrap();
        let mut seen = [false; 2];
        for (ts, row) in d.rows() {
            let (wd, we) = row.split_at(7);
            match day_type(ts, &ds.calendar) {
                DayType::Weekday => {
                    seen[0] = true;
                    assert!(we.iter().all(|v| *v == 0.0));
                    assert!(wd.iter().any(|v| *v != 0.0));
                }
                DayType::WeekendOrHoliday => {
                    seen[1] = true;
                    assert!(wd.iter().all(|v| *v == 0.0));
                }
            }
        }
        assert!(seen[0] && seen[1]);
    }

    #[test]
    fn lag_and_gaps_exclude_rows() {
        let mut ds = dataset(96, false);
        let spec = FeatureSpec::default();
        // the first day has no lag available
        let d = build_design(&ds, &spec, ds.window()).unwrap();
        assert_eq!(d.n_rows(), 72);
        assert_eq!(d.timestamps[0], ds.window().start.add_hours(24));

        let gap_at = ds.window().start.add_hours(30);
        let mut vals = ds.wind_fc.values().to_vec();
        vals[30] = None;
        ds.wind_fc =
            HourlySeries::new("wind_fc_mw", Unit::MegaWatt, ds.wind_fc.start, vals).unwrap();
        let mut tv = ds.target.values().to_vec();
        tv[40] = None;
        ds.target = HourlySeries::new(
            "inertia_mvas",
            Unit::MegaVoltAmpereSeconds,
            ds.target.start,
            tv,
        )
        .unwrap();
        let d = build_design(&ds, &spec, ds.window()).unwrap();
        // hour 30 (wind gap), hour 40 (target gap) and hour 64 (its lag) drop out
        assert_eq!(d.n_rows(), 69);
        assert!(!d.timestamps.contains(&gap_at));
        assert!(!d.timestamps.contains(&ds.window().start.add_hours(64)));
    }

    #[test]
    fn empty_window_is_an_error() {
        let ds = dataset(30, false);
        let w = Window::new(ds.window().start, ds.window().start.add_hours(10));
        assert!(matches!(
            build_design(&ds, &FeatureSpec::default(), w),
            Err(Error::EmptyDesign(_))
        ));
    }

    #[test]
    fn monthly_on_disabled_feature_rejected() {
        let spec = FeatureSpec {
            use_wind_fc: false,
            ..FeatureSpec::default()
        }
        .with_monthly([Feature::WindFc]);
        assert!(spec.validate().is_err());
        let spec = FeatureSpec {
            lag_target_hours: 0,
            ..FeatureSpec::default()
        };
        assert!(spec.validate().is_err());
    }

    #[test]
    fn hydro_lag_requires_series() {
        let mut ds = dataset(72, false);
        ds.hydro_inertia = None;
        let spec = FeatureSpec {
            hydro_lag: true,
            ..FeatureSpec::default()
        };
        assert!(matches!(
            build_design(&ds, &spec, ds.window()),
            Err(Error::MissingSeries(_))
        ));
    }

    #[test]
    fn substitution_cases() {
        let ds = dataset(10, true);
        assert_eq!(substitute_actuals(&ds, &BTreeSet::new()).unwrap(), ds);
        let one = substitute_actuals(&ds, &[Substitution::Demand].into()).unwrap();
        assert_eq!(
            one.demand_fc.values(),
            ds.demand_actual.as_ref().unwrap().values()
        );
        assert_eq!(one.wind_fc, ds.wind_fc);
        let all = substitute_actuals(
            &ds,
            &[
                Substitution::Demand,
                Substitution::Wind,
                Substitution::Solar,
            ]
            .into(),
        )
        .unwrap();
        assert_eq!(
            all.wind_fc.values(),
            ds.wind_actual.as_ref().unwrap().values()
        );
        assert_eq!(
            all.solar_fc.values(),
            ds.solar_actual.as_ref().unwrap().values()
        );

        let bare = dataset(10, false);
        assert!(matches!(
            substitute_actuals(&bare, &[Substitution::Wind].into()),
            Err(Error::MissingSeries(_))
        ));
    }

    #[test]
    fn design_is_deterministic() {
        let ds = dataset(24 * 8, false);
        let spec = FeatureSpec::default().with_monthly([Feature::DemandFc]);
        let a = build_design(&ds, &spec, ds.window()).unwrap();
        let b = build_design(&ds, &spec, ds.window()).unwrap();
        assert_eq!(a, b);
    }

    fn arb_spec() -> impl Strategy<Value = FeatureSpec> {
        (
            any::<[bool; 8]>(),
            0usize..3,
            proptest::collection::btree_set(0usize..6, 0..4),
        )
            .prop_map(|(b, trend, monthly)| {
                let mut spec = FeatureSpec {
                    lag_target_hours: 24,
                    use_demand_fc: b[0],
                    use_wind_fc: b[1],
                    use_solar_fc: b[2],
                    use_ic_flow: b[3],
                    time_trend: [TimeTrend::None, TimeTrend::Linear, TimeTrend::Quadratic][trend],
                    daytype_interaction: b[4],
                    monthly_interaction_on: BTreeSet::new(),
                    hydro_lag: b[5],
                    include_intercept: b[6],
                };
                let all = [
                    Feature::InertiaLag,
                    Feature::DemandFc,
                    Feature::WindFc,
                    Feature::SolarFc,
                    Feature::IcFlow,
                    Feature::HydroLag,
                ];
                for i in monthly {
                    if spec.is_enabled(all[i]) {
                        spec.monthly_interaction_on.insert(all[i]);
                    }
                }
                spec
            })
    }

    proptest! {
        #[test]
        fn column_count_matches_combinatorial_count(spec in arb_spec()) {
            let enabled_inputs = [spec.use_demand_fc, spec.use_wind_fc, spec.use_solar_fc, spec.use_ic_flow, spec.hydro_lag]
                .iter().filter(|b| **b).count() + 1;
            let monthly = spec.monthly_interaction_on.len();
            let per_block = (enabled_inputs - monthly)
                + 12 * monthly
                + spec.time_trend.terms()
                + usize::from(spec.include_intercept);
            let blocks = if spec.daytype_interaction { 2 } else { 1 };
            prop_assert_eq!(spec.n_columns(), blocks * per_block);
            prop_assert_eq!(spec.column_names().len(), spec.n_columns());
            let names: BTreeSet<_> = spec.column_names().into_iter().collect();
            prop_assert_eq!(names.len(), spec.n_columns());
        }

        #[test]
        fn interaction_blocks_partition_the_row(spec in arb_spec(), coefs in proptest::collection::vec(-5.0f64..5.0, 100)) {
            let ds = dataset(24 * 9, true);
            let with = FeatureSpec { daytype_interaction: true, ..spec.clone() };
            let without = FeatureSpec { daytype_interaction: false, ..spec };
            let w = window(&ds, 24);
            let a = build_design(&ds, &with, w).unwrap();
            let b = build_design(&ds, &without, w).unwrap();
            prop_assert_eq!(a.n_rows(), b.n_rows());
            let k = b.n_cols();
            let beta: Vec<f64> = (0..k).map(|i| coefs[i % coefs.len()]).collect();
            let doubled: Vec<f64> = beta.iter().chain(beta.iter()).copied().collect();
            for i in 0..a.n_rows() {
                let lhs: f64 = a.row(i).iter().zip(&doubled).map(|(x, c)| x * c).sum();
                let rhs: f64 = b.row(i).iter().zip(&beta).map(|(x, c)| x * c).sum();
                prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs().max(1.0));
            }
        }
    }
}
