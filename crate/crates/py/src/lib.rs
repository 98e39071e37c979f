//! Python bindings. Timestamps and windows cross the boundary as ISO strings
//! (`"2020-01-01T00:00:00Z"`, `"2020-01-01/2020-02-01"`), series as lists with
//! `None` for gaps.

use std::path::PathBuf;

use inertia_core::baseline::{fit_baseline, predict_baseline, BaselineConfig, TsBaselineModel};
use inertia_core::bench::{run_suite, SuiteConfig};
use inertia_core::explanatory::fit_with;
use inertia_core::metrics::{self, MetricResult};
use inertia_core::synthetic::{generate_synthetic, SyntheticConfig};
use inertia_core::{
    load_csv, predict, predict_distribution, write_csv, CsvSchema, Error, Feature, HolidayCalendar,
    HourlySeries, InertiaDataset, RegionId, SigmaSource, TimeTrend, Timestamp, Unit, Window,
};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(inertia_py, InertiaError, PyException);
create_exception!(inertia_py, ConfigError, InertiaError);
create_exception!(inertia_py, DataError, InertiaError);

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    if matches!(e, Error::Config(_)) {
        ConfigError::new_err(msg)
    } else if e.is_data_error() {
        DataError::new_err(msg)
    } else {
        InertiaError::new_err(msg)
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(to_py)
}

fn parse_sigma(s: &str) -> PyResult<SigmaSource> {
    match s {
        "target" => Ok(SigmaSource::Target),
        "residual" => Ok(SigmaSource::Residual),
        other => Err(ConfigError::new_err(format!(
            "unknown sigma source {other:?}"
        ))),
    }
}

fn series(values: Vec<Option<f64>>) -> PyResult<HourlySeries> {
    HourlySeries::new("x", Unit::MegaWatt, Timestamp::from_hours(0), values).map_err(to_py)
}

#[pyclass(name = "Dataset", module = "inertia_py", skip_from_py_object)]
struct PyDataset {
    inner: InertiaDataset,
}

#[pymethods]
impl PyDataset {
    /// Reads a CSV with the canonical column names.
    #[staticmethod]
    #[pyo3(signature = (path, region = "NORDIC_TOTAL"))]
    fn load_csv(path: PathBuf, region: &str) -> PyResult<Self> {
        let inner = load_csv(path, &CsvSchema::default(), parse(region)?).map_err(to_py)?;
        Ok(PyDataset { inner })
    }

    /// Data generated from the explanatory model with known coefficients.
    #[staticmethod]
    #[pyo3(signature = (hours = 8760, seed = 0, noise_sd = 0.0, start = "2019-01-01", region = "NORDIC_TOTAL"))]
    fn synthetic(
        hours: usize,
        seed: u64,
        noise_sd: f64,
        start: &str,
        region: &str,
    ) -> PyResult<Self> {
        let cfg = SyntheticConfig {
            hours,
            seed,
            noise_sd,
            start: parse(start)?,
            region: parse(region)?,
            ..SyntheticConfig::default()
        };
        Ok(PyDataset {
            inner: generate_synthetic(&cfg).map_err(to_py)?,
        })
    }

    fn write_csv(&self, path: PathBuf) -> PyResult<()> {
        write_csv(&self.inner, path).map_err(to_py)
    }

    /// Copy with the holidays read from `path`, one ISO date per line.
    fn with_holidays(&self, path: PathBuf) -> PyResult<Self> {
        let cal = HolidayCalendar::load(self.inner.region, path).map_err(to_py)?;
        Ok(PyDataset {
            inner: self.inner.clone().with_calendar(cal),
        })
    }

    #[getter]
    fn region(&self) -> String {
        self.inner.region.to_string()
    }

    #[getter]
    fn window(&self) -> String {
        let w = self.inner.window();
        format!("{}/{}", w.start, w.end)
    }

    fn timestamps(&self) -> Vec<String> {
        self.inner.window().hours().map(|t| t.to_string()).collect()
    }

    /// Inertial energy in MVA·s over `window` (default: the whole dataset).
    #[pyo3(signature = (window = None))]
    fn target(&self, window: Option<&str>) -> PyResult<Vec<Option<f64>>> {
        let w = match window {
            Some(w) => parse(w)?,
            None => self.inner.window(),
        };
        Ok(self.inner.target.slice(w).values().to_vec())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Dataset(region={}, window={})",
            self.region(),
            self.window()
        )
    }
}

#[pyclass(name = "FeatureSpec", module = "inertia_py", skip_from_py_object)]
struct PyFeatureSpec {
    inner: inertia_core::FeatureSpec,
}

#[pymethods]
impl PyFeatureSpec {
    #[new]
    #[pyo3(signature = (monthly = Vec::new(), hydro_lag = false, include_intercept = false, daytype_interaction = true, time_trend = "quadratic"))]
    fn new(
        monthly: Vec<String>,
        hydro_lag: bool,
        include_intercept: bool,
        daytype_interaction: bool,
        time_trend: &str,
    ) -> PyResult<Self> {
        let time_trend = match time_trend {
            "none" => TimeTrend::None,
            "linear" => TimeTrend::Linear,
            "quadratic" => TimeTrend::Quadratic,
            other => {
                return Err(ConfigError::new_err(format!(
                    "unknown time trend {other:?}"
                )))
            }
        };
        let monthly = monthly
            .iter()
            .map(|f| parse::<Feature>(f))
            .collect::<PyResult<Vec<_>>>()?;
        let inner = inertia_core::FeatureSpec {
            hydro_lag,
            include_intercept,
            daytype_interaction,
            time_trend,
            ..Default::default()
        }
        .with_monthly(monthly);
        inner.validate().map_err(to_py)?;
        Ok(PyFeatureSpec { inner })
    }

    fn column_names(&self) -> Vec<String> {
        self.inner.column_names()
    }

    #[getter]
    fn n_columns(&self) -> usize {
        self.inner.n_columns()
    }
}

#[pyclass(name = "ExplanatoryModel", module = "inertia_py", skip_from_py_object)]
struct PyExplanatoryModel {
    inner: inertia_core::ExplanatoryModel,
}

#[pymethods]
impl PyExplanatoryModel {
    #[staticmethod]
    #[pyo3(signature = (dataset, train, spec = None, sigma = "target"))]
    fn fit(
        py: Python<'_>,
        dataset: &PyDataset,
        train: &str,
        spec: Option<&PyFeatureSpec>,
        sigma: &str,
    ) -> PyResult<Self> {
        let window: Window = parse(train)?;
        let spec = spec.map(|s| s.inner.clone()).unwrap_or_default();
        let sigma = parse_sigma(sigma)?;
        let ds = &dataset.inner;
        let inner = py
            .detach(|| fit_with(ds, &spec, window, sigma))
            .map_err(to_py)?;
        Ok(PyExplanatoryModel { inner })
    }

    /// Point forecast; `None` where an input is missing.
    fn predict(&self, dataset: &PyDataset, window: &str) -> PyResult<Vec<Option<f64>>> {
        let fc = predict(&self.inner, &dataset.inner, parse(window)?).map_err(to_py)?;
        Ok(fc.values().to_vec())
    }

    /// One list per probability level, each aligned with the hours of `window`.
    fn quantiles(
        &self,
        dataset: &PyDataset,
        window: &str,
        levels: Vec<f64>,
    ) -> PyResult<Vec<Vec<Option<f64>>>> {
        let window: Window = parse(window)?;
        if let Some(p) = levels.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
            return Err(ConfigError::new_err(format!("level {p} is outside (0, 1)")));
        }
        let fc = predict_distribution(&self.inner, &dataset.inner, window).map_err(to_py)?;
        Ok(levels
            .iter()
            .map(|&p| (0..window.len()).map(|i| fc.quantile(i, p)).collect())
            .collect())
    }

    /// Coefficients keyed by column name.
    fn coefficients<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (name, c) in self
            .inner
            .column_names()
            .iter()
            .zip(self.inner.coefficients())
        {
            d.set_item(name, c)?;
        }
        Ok(d)
    }

    #[getter]
    fn sigma(&self) -> f64 {
        self.inner.sigma_hat
    }

    #[getter]
    fn n_train(&self) -> usize {
        self.inner.n_train
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(to_py)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = inertia_core::ExplanatoryModel::from_json(text).map_err(to_py)?;
        Ok(PyExplanatoryModel { inner })
    }
}

#[pyclass(name = "BaselineModel", module = "inertia_py", skip_from_py_object)]
struct PyBaselineModel {
    inner: TsBaselineModel,
}

#[pymethods]
impl PyBaselineModel {
    /// Trend plus seasonality plus holidays, fitted on the target alone.
    #[staticmethod]
    fn fit(py: Python<'_>, dataset: &PyDataset, train: &str) -> PyResult<Self> {
        let window: Window = parse(train)?;
        let ds = &dataset.inner;
        let inner = py
            .detach(|| {
                fit_baseline(
                    &ds.target.slice(window),
                    &ds.calendar,
                    &BaselineConfig::default(),
                )
            })
            .map_err(to_py)?;
        Ok(PyBaselineModel { inner })
    }

    fn predict(&self, dataset: &PyDataset, window: &str) -> PyResult<Vec<Option<f64>>> {
        let fc = predict_baseline(&self.inner, parse(window)?, &dataset.inner.calendar)
            .map_err(to_py)?;
        Ok(fc.values().to_vec())
    }
}

fn metric_dict<'py>(py: Python<'py>, m: &MetricResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("mape", m.mape)?;
    d.set_item("smape", m.smape)?;
    d.set_item("mae", m.mae)?;
    d.set_item("n_points", m.n_points)?;
    Ok(d)
}

/// MAPE in percent over hours present in both lists.
#[pyfunction]
fn mape(actual: Vec<Option<f64>>, forecast: Vec<Option<f64>>) -> PyResult<f64> {
    metrics::mape(&series(actual)?, &series(forecast)?).map_err(to_py)
}

#[pyfunction]
fn smape(actual: Vec<Option<f64>>, forecast: Vec<Option<f64>>) -> PyResult<f64> {
    metrics::smape(&series(actual)?, &series(forecast)?).map_err(to_py)
}

#[pyfunction]
fn mae(actual: Vec<Option<f64>>, forecast: Vec<Option<f64>>) -> PyResult<f64> {
    metrics::mae(&series(actual)?, &series(forecast)?).map_err(to_py)
}

/// Runs a TOML benchmark suite; returns one dict per experiment.
#[pyfunction]
#[pyo3(signature = (config, jobs = None))]
fn run_benchmark<'py>(
    py: Python<'py>,
    config: PathBuf,
    jobs: Option<usize>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let suite = SuiteConfig::load(&config).map_err(to_py)?;
    suite.validate().map_err(to_py)?;
    let jobs = jobs.or(suite.jobs).unwrap_or(1);
    let report = py
        .detach(|| run_suite(&suite.experiments, suite.base_case.as_deref(), jobs))
        .map_err(to_py)?;
    report
        .rows
        .iter()
        .map(|row| {
            let d = PyDict::new(py);
            d.set_item("id", &row.id)?;
            d.set_item("model", row.model.name())?;
            d.set_item(
                "train",
                row.train.as_ref().map(|m| metric_dict(py, m)).transpose()?,
            )?;
            d.set_item(
                "test",
                row.test.as_ref().map(|m| metric_dict(py, m)).transpose()?,
            )?;
            d.set_item("delta_mae", row.delta_mae)?;
            d.set_item("error", &row.error)?;
            Ok(d)
        })
        .collect()
}

/// Nordic regions whose forecasts sum to the total.
#[pyfunction]
fn nordic_regions() -> Vec<String> {
    RegionId::NORDIC_PARTS
        .iter()
        .map(|r| r.to_string())
        .collect()
}

#[pymodule]
fn inertia_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("InertiaError", py.get_type::<InertiaError>())?;
    m.add("ConfigError", py.get_type::<ConfigError>())?;
    m.add("DataError", py.get_type::<DataError>())?;
    m.add_class::<PyDataset>()?;
    m.add_class::<PyFeatureSpec>()?;
    m.add_class::<PyExplanatoryModel>()?;
    m.add_class::<PyBaselineModel>()?;
    m.add_function(wrap_pyfunction!(mape, m)?)?;
    m.add_function(wrap_pyfunction!(smape, m)?)?;
    m.add_function(wrap_pyfunction!(mae, m)?)?;
    m.add_function(wrap_pyfunction!(run_benchmark, m)?)?;
    m.add_function(wrap_pyfunction!(nordic_regions, m)?)?;
    Ok(())
}
