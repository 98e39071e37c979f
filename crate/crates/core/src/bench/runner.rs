use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;

use super::config::{ExperimentConfig, HolidayChoice, ModelKind};
use super::report::{BenchmarkReport, ReportRow};
use crate::baseline::{fit_baseline, predict_baseline};
use crate::calendar::{HolidayCalendar, RegionId};
use crate::dataset::{load_csv, split, InertiaDataset};
use crate::error::{Error, Result};
use crate::explanatory::{fit_regional_with, fit_with, predict, predict_aggregate};
use crate::features::substitute_actuals;
use crate::metrics::evaluate;
use crate::series::HourlySeries;
use crate::synthetic::{generate_regional, generate_synthetic, sum_datasets};
use crate::time::Window;

/// Pipeline stage named in experiment errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Load,
    Substitute,
    Split,
    Fit,
    Predict,
    Evaluate,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Config => "config",
            Stage::Load => "load",
            Stage::Substitute => "substitute",
            Stage::Split => "split",
            Stage::Fit => "fit",
            Stage::Predict => "predict",
            Stage::Evaluate => "evaluate",
        })
    }
}

/// The scored dataset plus, for the regional model, its parts.
struct Data {
    main: InertiaDataset,
    regions: BTreeMap<RegionId, InertiaDataset>,
}

fn calendar_for(choice: &HolidayChoice, region: RegionId) -> Result<HolidayCalendar> {
    match choice {
        HolidayChoice::Own => Ok(HolidayCalendar::default_for(region)),
        HolidayChoice::Common => {
            Ok(HolidayCalendar::default_for(RegionId::NordicTotal).for_region(region))
        }
        HolidayChoice::File(path) => HolidayCalendar::load(region, path),
    }
}

fn load(cfg: &ExperimentConfig) -> Result<Data> {
    let (main, regions) = if let Some(syn) = &cfg.synthetic {
        if cfg.model == ModelKind::Regional {
            let (regions, total) = generate_regional(syn)?;
            (total, regions)
        } else {
            (generate_synthetic(syn)?, BTreeMap::new())
        }
    } else {
        cfg.check_files()?;
        let regions = cfg
            .regions
            .iter()
            .map(|(r, p)| load_csv(p, &cfg.schema, *r).map(|ds| (*r, ds)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let main = match &cfg.dataset {
            Some(p) => load_csv(p, &cfg.schema, cfg.region)?,
            None => sum_datasets(&regions, RegionId::NordicTotal)?,
        };
        (main, regions)
    };
    let main_cal = calendar_for(&cfg.holidays, main.region)?;
    let main = main.with_calendar(main_cal);
    let regions = regions
        .into_iter()
        .map(|(r, ds)| Ok((r, ds.with_calendar(calendar_for(&cfg.holidays, r)?))))
        .collect::<Result<_>>()?;
    Ok(Data { main, regions })
}

struct Forecasts {
    train: HourlySeries,
    test: HourlySeries,
}

fn fit_and_predict(
    cfg: &ExperimentConfig,
    data: &Data,
) -> std::result::Result<Forecasts, (Stage, Error)> {
    let train_w = cfg.split.train();
    let test_w = cfg.split.test();
    let fit_err = |e| (Stage::Fit, e);
    let pred_err = |e| (Stage::Predict, e);
    let (train_main, _) = split(&data.main, &cfg.split).map_err(|e| (Stage::Split, e))?;
    let both = |f: &dyn Fn(Window) -> Result<HourlySeries>| -> std::result::Result<Forecasts, (Stage, Error)> {
        Ok(Forecasts {
            train: f(train_w).map_err(pred_err)?,
            test: f(test_w).map_err(pred_err)?,
        })
    };
    match cfg.model {
        ModelKind::Explanatory => {
            let model = fit_with(&train_main, &cfg.spec, train_w, cfg.sigma).map_err(fit_err)?;
            both(&|w| predict(&model, &data.main, w))
        }
        ModelKind::Baseline => {
            let model = fit_baseline(&train_main.target, &train_main.calendar, &cfg.baseline)
                .map_err(fit_err)?;
            both(&|w| predict_baseline(&model, w, &data.main.calendar))
        }
        ModelKind::Regional => {
            let mut train_regions = BTreeMap::new();
            for (r, ds) in &data.regions {
                let (train, _) = split(ds, &cfg.split).map_err(|e| {
                    (
                        Stage::Split,
                        Error::Region {
                            region: r.code().into(),
                            source: Box::new(e),
                        },
                    )
                })?;
                train_regions.insert(*r, train);
            }
            let set = fit_regional_with(&train_regions, &cfg.spec, train_w, cfg.sigma)
                .map_err(fit_err)?;
            both(&|w| predict_aggregate(&set, &data.regions, w))
        }
    }
}

/// Loads data, applies substitutions, splits, fits, predicts on the train and test
/// windows and scores both. Errors carry the experiment id and stage.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ReportRow> {
    let wrap = |stage: Stage, e: Error| Error::Experiment {
        id: cfg.id.clone(),
        stage: stage.to_string(),
        source: Box::new(e),
    };
    cfg.validate().map_err(|e| wrap(Stage::Config, e))?;
    let mut data = load(cfg).map_err(|e| wrap(Stage::Load, e))?;
    if !cfg.substitutions.is_empty() {
        let sub = |ds: &InertiaDataset| substitute_actuals(ds, &cfg.substitutions);
        data.main = sub(&data.main).map_err(|e| wrap(Stage::Substitute, e))?;
        for ds in data.regions.values_mut() {
            *ds = sub(ds).map_err(|e| wrap(Stage::Substitute, e))?;
        }
    }
    let fc = fit_and_predict(cfg, &data).map_err(|(stage, e)| wrap(stage, e))?;
    let score = |w: Window, f: &HourlySeries| {
        evaluate(&data.main.target.slice(w), f).map_err(|e| wrap(Stage::Evaluate, e))
    };
    Ok(ReportRow {
        id: cfg.id.clone(),
        model: cfg.model,
        train: Some(score(cfg.split.train(), &fc.train)?),
        test: Some(score(cfg.split.test(), &fc.test)?),
        delta_mae: None,
        error: None,
    })
}

/// Runs every experiment on `jobs` worker threads. Rows follow config order; a failed
/// experiment becomes a row with its error. Deltas are test MAE minus the base case's.
pub fn run_suite(
    configs: &[ExperimentConfig],
    base_case: Option<&str>,
    jobs: usize,
) -> Result<BenchmarkReport> {
    let mut seen = BTreeSet::new();
    for c in configs {
        if !seen.insert(c.id.as_str()) {
            return Err(Error::Config(format!("duplicate experiment id {:?}", c.id)));
        }
    }
    if let Some(base) = base_case {
        if !seen.contains(base) {
            return Err(Error::Config(format!(
                "base case {base:?} is not an experiment id"
            )));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start {jobs} workers: {e}")))?;
    let rows: Vec<ReportRow> = pool.install(|| {
        configs
            .par_iter()
            .map(|c| run_experiment(c).unwrap_or_else(|e| ReportRow::failed(c, &e)))
            .collect()
    });
    let mut report = BenchmarkReport {
        base_case: base_case.map(str::to_string),
        rows,
    };
    report.compute_deltas();
    Ok(report)
}
