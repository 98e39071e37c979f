//! Synthetic datasets generated from the explanatory model itself, for
//! generate-then-fit checks and for exercising the benchmark runner without
//! field data.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use chrono::Datelike;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::calendar::{HolidayCalendar, RegionId};
use crate::dataset::{Field, InertiaDataset};
use crate::error::{Error, Result};
use crate::features::{feature_row, FeatureSpec, TrendScale};
use crate::series::HourlySeries;
use crate::time::{Timestamp, Window};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticConfig {
    pub spec: FeatureSpec,
    /// True coefficients in the spec's column layout; `None` uses [`default_coefficients`].
    pub coefficients: Option<Vec<f64>>,
    /// Standard deviation of the additive target noise, MVA·s.
    pub noise_sd: f64,
    /// Relative standard deviation of the day-ahead forecast error; realised
    /// values are the forecasts plus this error.
    pub forecast_error: f64,
    pub start: Timestamp,
    pub hours: usize,
    pub region: RegionId,
    /// Window whose start and length normalise the time trend; defaults to the full span.
    pub trend_window: Option<Window>,
    /// Scales every exogenous level, so regions of different size can be generated.
    pub size: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            spec: FeatureSpec::default(),
            coefficients: None,
            noise_sd: 0.0,
            forecast_error: 0.0,
            start: Timestamp::ymd_h(2019, 1, 1, 0),
            hours: 8760,
            region: RegionId::NordicTotal,
            trend_window: None,
            size: 1.0,
            seed: 0,
        }
    }
}

impl SyntheticConfig {
    pub fn window(&self) -> Window {
        Window::new(self.start, self.start.add_hours(self.hours as i64))
    }

    pub fn trend(&self) -> TrendScale {
        TrendScale::for_window(self.trend_window.unwrap_or_else(|| self.window()))
    }

    /// The supplied coefficients, or the defaults with level terms (trend, intercept)
    /// scaled by `size`.
    pub fn true_coefficients(&self) -> Result<Vec<f64>> {
        let coefs = match &self.coefficients {
            Some(c) => c.clone(),
            None => {
                let names = self.spec.column_names();
                default_coefficients(&self.spec)
                    .into_iter()
                    .zip(&names)
                    .map(|(b, name)| {
                        let level = ["tau", "tau2", "intercept"]
                            .iter()
                            .any(|t| name == t || name.ends_with(&format!(".{t}")));
                        if level {
                            b * self.size
                        } else {
                            b
                        }
                    })
                    .collect()
            }
        };
        if coefs.len() != self.spec.n_columns() {
            return Err(Error::Config(format!(
                "{} coefficients supplied for {} columns",
                coefs.len(),
                self.spec.n_columns()
            )));
        }
        Ok(coefs)
    }
}

/// Plausible coefficients for any spec: a stable lag term and a level near 2e5 MVA·s
/// for unit size. Monthly-expanded columns vary smoothly over the year.
pub fn default_coefficients(spec: &FeatureSpec) -> Vec<f64> {
    let names = spec.column_names();
    names
        .iter()
        .map(|name| {
            let weekend = name.starts_with("weekend_holiday.");
            let base = name
                .trim_start_matches("weekday.")
                .trim_start_matches("weekend_holiday.");
            let (feature, month) = match base.rsplit_once(".m") {
                Some((f, m)) => (f, m.parse::<u32>().ok()),
                None => (base, None),
            };
            let v = match (feature, weekend) {
                ("inertia_lag", false) => 0.55,
                ("inertia_lag", true) => 0.5,
                ("demand_fc", false) => 2.5,
                ("demand_fc", true) => 2.6,
                ("wind_fc", false) => -1.2,
                ("wind_fc", true) => -1.0,
                ("solar_fc", false) => -2.0,
                ("solar_fc", true) => -1.5,
                ("ic_flow", false) => -0.8,
                ("ic_flow", true) => -0.6,
                ("tau", false) => -12_000.0,
                ("tau", true) => -10_000.0,
                ("tau2", false) => 4_000.0,
                ("tau2", true) => 3_000.0,
                ("hydro_lag", _) => 0.05,
                ("intercept", _) => 5_000.0,
                _ => 0.0,
            };
            match month {
                Some(m) => v * (1.0 + 0.08 * (2.0 * PI * m as f64 / 12.0).cos()),
                None => v,
            }
        })
        .collect()
}

struct Ar1 {
    phi: f64,
    state: f64,
    innov: Normal<f64>,
}

impl Ar1 {
    fn new(phi: f64, sd: f64) -> Self {
        Ar1 {
            phi,
            state: 0.0,
            innov: Normal::new(0.0, sd * (1.0 - phi * phi).sqrt()).expect("finite sd"),
        }
    }

    fn step(&mut self, rng: &mut impl Rng) -> f64 {
        self.state = self.phi * self.state + self.innov.sample(rng);
        self.state
    }
}

/// Exogenous day-ahead forecasts for one region.
struct Exogenous {
    demand: Vec<f64>,
    wind: Vec<f64>,
    solar: Vec<f64>,
    ic: Vec<f64>,
}

fn exogenous(cfg: &SyntheticConfig, cal: &HolidayCalendar, rng: &mut ChaCha8Rng) -> Exogenous {
    let n = cfg.hours;
    let size = cfg.size;
    let mut wind_ar = Ar1::new(0.97, 2500.0);
    let mut ic_ar = Ar1::new(0.95, 2000.0);
    let demand_noise = Normal::new(0.0, 400.0).expect("sd");
    let mut out = Exogenous {
        demand: Vec::with_capacity(n),
        wind: Vec::with_capacity(n),
        solar: Vec::with_capacity(n),
        ic: Vec::with_capacity(n),
    };
    for i in 0..n {
        let ts = cfg.start.add_hours(i as i64);
        let local = ts.to_datetime().with_timezone(&cfg.region.time_zone());
        let doy = local.ordinal() as f64;
        let hour = local.hour_of_day();
        let annual = (2.0 * PI * (doy - 15.0) / 365.25).cos();
        let daily = (2.0 * PI * (hour - 4.0) / 24.0).sin();
        let off = match crate::calendar::day_type(ts, cal) {
            crate::calendar::DayType::Weekday => 0.0,
            crate::calendar::DayType::WeekendOrHoliday => -3000.0,
        };
        out.demand.push(
            size * (40_000.0 + 9_000.0 * annual + 5_000.0 * daily + off + demand_noise.sample(rng)),
        );
        out.wind.push(size * (6_000.0 + wind_ar.step(rng)).max(0.0));
        let daylight = (PI * (hour - 6.0) / 12.0).sin().max(0.0);
        let summer = 0.55 - 0.45 * annual;
        out.solar
            .push(size * 1_500.0 * daylight * summer * rng.random_range(0.7..1.0));
        out.ic.push(size * ic_ar.step(rng));
    }
    out
}

trait HourOfDay {
    fn hour_of_day(&self) -> f64;
}

impl<T: chrono::Timelike> HourOfDay for T {
    fn hour_of_day(&self) -> f64 {
        self.hour() as f64
    }
}

fn series(field: Field, start: Timestamp, values: &[f64]) -> Result<HourlySeries> {
    HourlySeries::from_values(field.column(), field.unit(), start, values)
}

/// Builds exogenous series, then the target recursively from the model equation
/// plus Gaussian noise. The first `lag_target_hours` target values are free
/// initial conditions.
pub fn generate_synthetic(cfg: &SyntheticConfig) -> Result<InertiaDataset> {
    cfg.spec.validate()?;
    if cfg.hours <= cfg.spec.lag_target_hours as usize {
        return Err(Error::Config(format!(
            "synthetic span of {} h is shorter than the {} h lag",
            cfg.hours, cfg.spec.lag_target_hours
        )));
    }
    if !(cfg.noise_sd >= 0.0) || !(cfg.forecast_error >= 0.0) || !(cfg.size > 0.0) {
        return Err(Error::Config(
            "noise, forecast error and size must be non-negative".into(),
        ));
    }
    let beta = cfg.true_coefficients()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let cal = HolidayCalendar::default_for(cfg.region);
    let ex = exogenous(cfg, &cal, &mut rng);
    let n = cfg.hours;
    let start = cfg.start;

    let mut fields = BTreeMap::new();
    fields.insert(Field::DemandFc, series(Field::DemandFc, start, &ex.demand)?);
    fields.insert(Field::WindFc, series(Field::WindFc, start, &ex.wind)?);
    fields.insert(Field::SolarFc, series(Field::SolarFc, start, &ex.solar)?);
    fields.insert(Field::IcFlow, series(Field::IcFlow, start, &ex.ic)?);

    // realised values
    let err_sd = cfg.forecast_error;
    let mut perturb = |v: &[f64]| -> Vec<f64> {
        v.iter()
            .map(|x| {
                if err_sd == 0.0 {
                    *x
                } else {
                    (x * (1.0 + err_sd * rng.sample::<f64, _>(rand_distr::StandardNormal))).max(0.0)
                }
            })
            .collect()
    };
    let demand_actual = perturb(&ex.demand);
    let wind_actual = perturb(&ex.wind);
    let solar_actual = perturb(&ex.solar);
    fields.insert(
        Field::DemandActual,
        series(Field::DemandActual, start, &demand_actual)?,
    );
    fields.insert(
        Field::WindActual,
        series(Field::WindActual, start, &wind_actual)?,
    );
    fields.insert(
        Field::SolarActual,
        series(Field::SolarActual, start, &solar_actual)?,
    );

    let noise = Normal::new(0.0, cfg.noise_sd.max(f64::MIN_POSITIVE)).expect("sd");
    let level = 200_000.0 * cfg.size;
    let hydro_share = 0.45;
    let hydro_noise = Normal::new(0.0, 0.01 * level).expect("sd");
    let lag = cfg.spec.lag_target_hours as usize;
    let trend = cfg.trend();
    let empty = |f: Field| HourlySeries::new(f.column(), f.unit(), start, vec![None; n]);
    fields.insert(Field::Inertia, empty(Field::Inertia)?);
    fields.insert(Field::HydroInertia, empty(Field::HydroInertia)?);
    let mut ds = InertiaDataset::from_series(cfg.region, fields, cal)?;

    for i in 0..n {
        let ts = start.add_hours(i as i64);
        let value = if i < lag {
            level * (1.0 + 0.02 * rng.random_range(-1.0..1.0))
        } else {
            // rows only read history that is already filled in
            let row = feature_row(&ds, &cfg.spec, &trend, ts)
                .ok_or_else(|| Error::Config(format!("cannot form a synthetic row at {ts}")))?;
            let mean: f64 = row.iter().zip(&beta).map(|(x, b)| x * b).sum();
            let eps = if cfg.noise_sd > 0.0 {
                noise.sample(&mut rng)
            } else {
                0.0
            };
            mean + eps
        };
        if !(value >= 0.0) {
            return Err(Error::Config(format!(
                "synthetic target became negative ({value:.1}) at {ts}; coefficients are unstable"
            )));
        }
        let h = (hydro_share * value + hydro_noise.sample(&mut rng)).max(0.0);
        ds.target.set(i, Some(value));
        if let Some(s) = ds.hydro_inertia.as_mut() {
            s.set(i, Some(h));
        }
    }
    Ok(ds)
}

/// Relative size of each Nordic region in the synthetic system.
pub const REGION_SIZES: [(RegionId, f64); 4] = [
    (RegionId::DK2, 0.08),
    (RegionId::FI, 0.20),
    (RegionId::NO, 0.35),
    (RegionId::SE, 0.37),
];

/// Per-region configurations used by [`generate_regional`]; size and noise are
/// scaled by the region's share.
pub fn regional_configs(cfg: &SyntheticConfig) -> Vec<SyntheticConfig> {
    REGION_SIZES
        .iter()
        .enumerate()
        .map(|(k, (region, size))| SyntheticConfig {
            region: *region,
            size: cfg.size * size,
            noise_sd: cfg.noise_sd * size,
            seed: cfg.seed.wrapping_mul(31).wrapping_add(k as u64 + 1),
            ..cfg.clone()
        })
        .collect()
}

/// Four regional datasets with distinct seeds and sizes, plus a system total whose
/// series are the regional sums (evaluated against the shared Nordic calendar).
pub fn generate_regional(
    cfg: &SyntheticConfig,
) -> Result<(BTreeMap<RegionId, InertiaDataset>, InertiaDataset)> {
    let mut regions = BTreeMap::new();
    for rc in regional_configs(cfg) {
        regions.insert(rc.region, generate_synthetic(&rc)?);
    }
    let total = sum_datasets(&regions, RegionId::NordicTotal)?;
    Ok((regions, total))
}

/// Hour-by-hour sum of aligned datasets; a gap in any part is a gap in the sum.
pub fn sum_datasets(
    parts: &BTreeMap<RegionId, InertiaDataset>,
    region: RegionId,
) -> Result<InertiaDataset> {
    let first = parts
        .values()
        .next()
        .ok_or_else(|| Error::Config("no datasets to sum".into()))?;
    let window = first.window();
    let mut fields = BTreeMap::new();
    for f in Field::ALL {
        if parts.values().any(|d| d.series(f).is_none()) {
            continue;
        }
        let values: Vec<Option<f64>> = window
            .hours()
            .map(|h| {
                parts
                    .values()
                    .map(|d| d.series(f).and_then(|s| s.get(h)))
                    .sum()
            })
            .collect();
        fields.insert(
            f,
            HourlySeries::new(f.column(), f.unit(), window.start, values)?,
        );
    }
    InertiaDataset::from_series(region, fields, HolidayCalendar::default_for(region))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{substitute_actuals, Substitution};

    fn short(hours: usize) -> SyntheticConfig {
        SyntheticConfig {
            hours,
            ..SyntheticConfig::default()
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let a = generate_synthetic(&short(500)).unwrap();
        let b = generate_synthetic(&short(500)).unwrap();
        assert_eq!(a, b);
        let c = generate_synthetic(&SyntheticConfig {
            seed: 9,
            ..short(500)
        })
        .unwrap();
        assert_ne!(a.wind_fc, c.wind_fc);
    }

    #[test]
    fn plausible_levels() {
        let ds = generate_synthetic(&short(24 * 60)).unwrap();
        let vals: Vec<f64> = ds.target.present().map(|p| p.1).collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        assert!((100_000.0..400_000.0).contains(&mean), "{mean}");
        assert_eq!(ds.target.gap_count(), 0);
    }

    #[test]
    fn wrong_coefficient_length_rejected() {
        let cfg = SyntheticConfig {
            coefficients: Some(vec![1.0; 3]),
            ..short(100)
        };
        assert!(matches!(generate_synthetic(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn zero_forecast_error_makes_substitution_a_no_op() {
        let ds = generate_synthetic(&short(200)).unwrap();
        let all = [
            Substitution::Demand,
            Substitution::Wind,
            Substitution::Solar,
        ]
        .into();
        let sub = substitute_actuals(&ds, &all).unwrap();
        assert_eq!(sub.demand_fc.values(), ds.demand_fc.values());
        assert_eq!(sub.wind_fc.values(), ds.wind_fc.values());
        assert_eq!(sub.solar_fc.values(), ds.solar_fc.values());
    }

    #[test]
    fn regional_total_is_sum() {
        let (regions, total) = generate_regional(&short(100)).unwrap();
        assert_eq!(regions.len(), 4);
        let h = total.window().start.add_hours(50);
        let sum: f64 = regions.values().map(|d| d.target.get(h).unwrap()).sum();
        assert!((total.target.get(h).unwrap() - sum).abs() < 1e-6);
    }
}
