//! The explanatory inertia model: a day-type-interacted linear regression on the
//! previous day's inertia, day-ahead forecasts, interconnector flow and a time
//! trend, wrapped in a constant-variance Gaussian, plus per-region fitting with
//! summed forecasts.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::calendar::RegionId;
use crate::dataset::InertiaDataset;
use crate::error::{Error, Result};
use crate::features::{
    build_design, build_design_with_trend, feature_row, DesignMatrix, FeatureSpec, TrendScale,
};
use crate::ols::{solve_lsq, LsqSolution};
use crate::series::{HourlySeries, Unit};
use crate::time::Window;

/// Source of the constant forecast standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaSource {
    /// Population standard deviation of the training target.
    #[default]
    Target,
    /// Root mean squared training residual.
    Residual,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplanatoryModel {
    pub spec: FeatureSpec,
    pub solution: LsqSolution,
    pub sigma_hat: f64,
    pub sigma_source: SigmaSource,
    pub train_mu: f64,
    pub n_train: usize,
    pub trend: TrendScale,
}

impl ExplanatoryModel {
    pub fn column_names(&self) -> &[String] {
        &self.solution.column_names
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.solution.coefficients
    }

    /// Coefficient by column name.
    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.column_names()
            .iter()
            .position(|c| c == name)
            .map(|i| self.solution.coefficients[i])
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serde(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: ExplanatoryModel =
            serde_json::from_str(text).map_err(|e| Error::Serde(e.to_string()))?;
        if model.spec.column_names() != model.solution.column_names
            || model.solution.coefficients.len() != model.solution.column_names.len()
        {
            return Err(Error::Serde(
                "model column layout does not match its feature spec".into(),
            ));
        }
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

/// Fits on `window`, with the target standard deviation as forecast sigma.
pub fn fit(train: &InertiaDataset, spec: &FeatureSpec, window: Window) -> Result<ExplanatoryModel> {
    fit_with(train, spec, window, SigmaSource::Target)
}

pub fn fit_with(
    train: &InertiaDataset,
    spec: &FeatureSpec,
    window: Window,
    sigma_source: SigmaSource,
) -> Result<ExplanatoryModel> {
    let design = build_design(train, spec, window)?;
    let solution = solve_lsq(&design)?;
    let n = design.n_rows();
    let mu = design.targets.iter().sum::<f64>() / n as f64;
    let sigma_hat = match sigma_source {
        SigmaSource::Target => {
            (design.targets.iter().map(|y| (y - mu).powi(2)).sum::<f64>() / n as f64).sqrt()
        }
        SigmaSource::Residual => (solution.sse() / n as f64).sqrt(),
    };
    Ok(ExplanatoryModel {
        spec: spec.clone(),
        solution,
        sigma_hat,
        sigma_source,
        train_mu: mu,
        n_train: n,
        trend: design.trend,
    })
}

/// Point forecast over `window`. Hours with a missing input are gaps.
pub fn predict(
    model: &ExplanatoryModel,
    ds: &InertiaDataset,
    window: Window,
) -> Result<HourlySeries> {
    model.spec.validate()?;
    if model.spec.hydro_lag && ds.hydro_inertia.is_none() {
        return Err(Error::MissingSeries(format!(
            "{}: model uses hydro_lag but the dataset has no hydropower inertia",
            ds.region
        )));
    }
    let beta = &model.solution.coefficients;
    let values = window
        .hours()
        .map(|h| {
            feature_row(ds, &model.spec, &model.trend, h)
                .map(|row| row.iter().zip(beta).map(|(x, b)| x * b).sum::<f64>())
        })
        .collect();
    // inertial energy is floored at zero
    HourlySeries::new(
        "inertia_forecast",
        Unit::MegaVoltAmpereSeconds,
        window.start,
        clip_negative(values),
    )
}

/// Gaussian forecast with a per-hour mean and a constant standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilisticForecast {
    pub mean: HourlySeries,
    pub sigma: f64,
}

impl ProbabilisticForecast {
    fn normal(&self, mean: f64) -> Option<Normal> {
        (self.sigma > 0.0).then(|| Normal::new(mean, self.sigma).expect("positive sigma"))
    }

    /// `P(E <= level)` at hour index `i`; `None` for gap hours.
    pub fn cdf(&self, i: usize, level: f64) -> Option<f64> {
        let mu = self.mean.values().get(i).copied().flatten()?;
        Some(match self.normal(mu) {
            Some(n) => n.cdf(level),
            None if level < mu => 0.0,
            None => 1.0,
        })
    }

    /// Level with `P(E <= level) = p` at hour index `i`.
    pub fn quantile(&self, i: usize, p: f64) -> Option<f64> {
        let mu = self.mean.values().get(i).copied().flatten()?;
        if !(0.0..=1.0).contains(&p) {
            return None;
        }
        Some(match self.normal(mu) {
            Some(n) => n.inverse_cdf(p),
            None => mu,
        })
    }

    /// Quantile `p` for every hour.
    pub fn quantile_series(&self, p: f64) -> Result<HourlySeries> {
        let values = (0..self.mean.len()).map(|i| self.quantile(i, p)).collect();
        HourlySeries::new(
            format!("inertia_q{p}"),
            Unit::MegaVoltAmpereSeconds,
            self.mean.start,
            clip_negative(values),
        )
    }
}

fn clip_negative(values: Vec<Option<f64>>) -> Vec<Option<f64>> {
    values.into_iter().map(|v| v.map(|x| x.max(0.0))).collect()
}

pub fn predict_distribution(
    model: &ExplanatoryModel,
    ds: &InertiaDataset,
    window: Window,
) -> Result<ProbabilisticForecast> {
    Ok(ProbabilisticForecast {
        mean: predict(model, ds, window)?,
        sigma: model.sigma_hat,
    })
}

/// One explanatory model per Nordic region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionalModelSet {
    pub per_region: BTreeMap<RegionId, ExplanatoryModel>,
}

fn check_regions<T>(map: &BTreeMap<RegionId, T>) -> Result<()> {
    let keys: Vec<RegionId> = map.keys().copied().collect();
    if keys != RegionId::NORDIC_PARTS {
        return Err(Error::Config(format!(
            "regional model needs exactly DK2, FI, NO and SE; got {keys:?}"
        )));
    }
    Ok(())
}

/// Fits each region on its own data and calendar, in parallel.
pub fn fit_regional(
    regions: &BTreeMap<RegionId, InertiaDataset>,
    spec: &FeatureSpec,
    window: Window,
) -> Result<RegionalModelSet> {
    fit_regional_with(regions, spec, window, SigmaSource::Target)
}

pub fn fit_regional_with(
    regions: &BTreeMap<RegionId, InertiaDataset>,
    spec: &FeatureSpec,
    window: Window,
    sigma_source: SigmaSource,
) -> Result<RegionalModelSet> {
    check_regions(regions)?;
    let fitted: Vec<(RegionId, Result<ExplanatoryModel>)> = regions
        .par_iter()
        .map(|(r, ds)| (*r, fit_with(ds, spec, window, sigma_source)))
        .collect();
    let mut per_region = BTreeMap::new();
    for (r, res) in fitted {
        let model = res.map_err(|e| Error::Region {
            region: r.code().into(),
            source: Box::new(e),
        })?;
        per_region.insert(r, model);
    }
    Ok(RegionalModelSet { per_region })
}

/// Sum of the regional point forecasts. An hour missing in any region is a gap.
pub fn predict_aggregate(
    set: &RegionalModelSet,
    regions: &BTreeMap<RegionId, InertiaDataset>,
    window: Window,
) -> Result<HourlySeries> {
    check_regions(&set.per_region)?;
    check_regions(regions)?;
    let mut total: Vec<Option<f64>> = vec![Some(0.0); window.len()];
    for (r, model) in &set.per_region {
        let part = predict(model, &regions[r], window).map_err(|e| Error::Region {
            region: r.code().into(),
            source: Box::new(e),
        })?;
        for (acc, v) in total.iter_mut().zip(part.values()) {
            *acc = match (*acc, v) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            };
        }
    }
    HourlySeries::new(
        "inertia_forecast_aggregate",
        Unit::MegaVoltAmpereSeconds,
        window.start,
        total,
    )
}

/// Design rows for `model`'s layout and trend normalisation over `window`.
pub fn model_design(
    model: &ExplanatoryModel,
    ds: &InertiaDataset,
    window: Window,
) -> Result<DesignMatrix> {
    build_design_with_trend(ds, &model.spec, window, model.trend)
}
