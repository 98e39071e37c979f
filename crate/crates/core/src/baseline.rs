//! Univariate comparison model: logistic trend plus Fourier seasonalities plus
//! additive holiday offsets, fitted to the inertia series alone.
//!
//! The trend is `offset + C / (1 + exp(-k (h - m)))` with the capacity `C` pinned
//! to a multiple of the training maximum. `(k, m)` come from a bounded grid search
//! refined by coordinate-wise golden-section search, with the level offset
//! profiled out. Seasonal and holiday coefficients are ordinary least squares on
//! the detrended series, and the two stages are alternated until the training
//! error stops improving.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::calendar::HolidayCalendar;
use crate::error::{Error, Result};
use crate::ols::{lstsq, ColumnSpace};
use crate::series::{HourlySeries, Unit};
use crate::time::{Timestamp, Window};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Seasonality {
    pub name: String,
    pub period_hours: f64,
    pub order: usize,
}

impl Seasonality {
    pub fn new(name: &str, period_hours: f64, order: usize) -> Self {
        Seasonality {
            name: name.into(),
            period_hours,
            order,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaselineConfig {
    pub seasonalities: Vec<Seasonality>,
    /// Seasonalities whose period exceeds half the training span are dropped.
    pub auto_disable_long_periods: bool,
    /// Capacity as a multiple of the largest training value.
    pub capacity_factor: f64,
    /// Bound on `|k| * span` for the trend search.
    pub max_rate_span: f64,
    pub rate_grid: usize,
    /// Midpoint search range in units of the training span, relative to its start.
    pub midpoint_range: (f64, f64),
    pub midpoint_grid: usize,
    pub holidays: bool,
    /// Coordinate-descent sweeps after the grid search.
    pub max_refine_iterations: usize,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        BaselineConfig {
            seasonalities: vec![
                Seasonality::new("daily", 24.0, 6),
                Seasonality::new("weekly", 168.0, 3),
                Seasonality::new("yearly", 8766.0, 10),
            ],
            auto_disable_long_periods: true,
            capacity_factor: 1.05,
            max_rate_span: 30.0,
            rate_grid: 41,
            midpoint_range: (-1.0, 2.0),
            midpoint_grid: 31,
            holidays: true,
            max_refine_iterations: 40,
        }
    }
}

impl BaselineConfig {
    pub fn validate(&self) -> Result<()> {
        let mut periods: Vec<f64> = Vec::new();
        for s in &self.seasonalities {
            if !(s.period_hours > 0.0 && s.period_hours.is_finite()) {
                return Err(Error::Config(format!(
                    "seasonality {} has non-positive period",
                    s.name
                )));
            }
            if periods.contains(&s.period_hours) {
                return Err(Error::Config(format!(
                    "period {} h configured twice",
                    s.period_hours
                )));
            }
            periods.push(s.period_hours);
        }
        if !(self.capacity_factor > 1.0) {
            return Err(Error::Config("capacity_factor must exceed 1".into()));
        }
        if self.rate_grid < 3 || self.midpoint_grid < 2 {
            return Err(Error::Config("trend search grids are too small".into()));
        }
        if !(self.midpoint_range.0 < self.midpoint_range.1) {
            return Err(Error::Config("midpoint_range must be increasing".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticTrend {
    /// MVA·s.
    pub capacity: f64,
    /// Growth rate per hour; negative for a declining trend.
    pub rate: f64,
    /// Hours since the model origin.
    pub midpoint: f64,
    /// Additive level, MVA·s.
    pub offset: f64,
}

impl LogisticTrend {
    pub fn at(&self, hours_since_origin: f64) -> f64 {
        self.offset
            + self.capacity / (1.0 + (-self.rate * (hours_since_origin - self.midpoint)).exp())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierTerms {
    pub name: String,
    pub period_hours: f64,
    /// Sine coefficients for harmonics `1..=order`.
    pub sin: Vec<f64>,
    /// Cosine coefficients for harmonics `1..=order`.
    pub cos: Vec<f64>,
}

impl FourierTerms {
    pub fn order(&self) -> usize {
        self.sin.len()
    }

    pub fn at(&self, ts: Timestamp) -> f64 {
        let phase =
            2.0 * PI * (ts.hours() as f64).rem_euclid(self.period_hours) / self.period_hours;
        (1..=self.order())
            .map(|n| {
                let x = n as f64 * phase;
                self.sin[n - 1] * x.sin() + self.cos[n - 1] * x.cos()
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TsBaselineModel {
    pub origin: Timestamp,
    pub span_hours: f64,
    pub trend: LogisticTrend,
    pub seasonal: Vec<FourierTerms>,
    pub holiday_effects: BTreeMap<String, f64>,
}

impl TsBaselineModel {
    pub fn trend_at(&self, ts: Timestamp) -> f64 {
        self.trend.at(ts.hours_since(self.origin) as f64)
    }

    pub fn seasonal_at(&self, ts: Timestamp) -> f64 {
        self.seasonal.iter().map(|s| s.at(ts)).sum()
    }

    pub fn holiday_at(&self, ts: Timestamp, cal: &HolidayCalendar) -> f64 {
        cal.class_at(ts)
            .and_then(|c| self.holiday_effects.get(c))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn value_at(&self, ts: Timestamp, cal: &HolidayCalendar) -> f64 {
        self.trend_at(ts) + self.seasonal_at(ts) + self.holiday_at(ts, cal)
    }
}

fn fourier_features(seasonal: &[Seasonality], ts: Timestamp, out: &mut Vec<f64>) {
    for s in seasonal {
        let phase = 2.0 * PI * (ts.hours() as f64).rem_euclid(s.period_hours) / s.period_hours;
        for n in 1..=s.order {
            let x = n as f64 * phase;
            out.push(x.sin());
            out.push(x.cos());
        }
    }
}

/// Logistic trend search on normalised time `u in [0, 1]`. For fixed `(kappa, mu)` the
/// level offset, Fourier and holiday coefficients are linear, so the objective is the
/// least-squares residual of `y - C / (1 + exp(-kappa (u - mu)))` on that block.
struct TrendProblem<'a> {
    u: &'a [f64],
    y: &'a [f64],
    capacity: f64,
    linear: &'a ColumnSpace,
}

impl TrendProblem<'_> {
    fn curve(&self, kappa: f64, mu: f64) -> impl Iterator<Item = f64> + '_ {
        self.u
            .iter()
            .map(move |&u| self.capacity / (1.0 + (-kappa * (u - mu)).exp()))
    }

    fn sse(&self, kappa: f64, mu: f64) -> f64 {
        let z = self
            .y
            .iter()
            .zip(self.curve(kappa, mu))
            .map(|(y, g)| y - g)
            .collect();
        self.linear.residual_norm2(z)
    }

    fn grid(&self, cfg: &BaselineConfig) -> (f64, f64) {
        let kmax = cfg.max_rate_span;
        let (m0, m1) = cfg.midpoint_range;
        let mut best = (f64::INFINITY, 0.0, 0.5);
        for i in 0..cfg.rate_grid {
            let kappa = -kmax + 2.0 * kmax * i as f64 / (cfg.rate_grid - 1) as f64;
            for j in 0..cfg.midpoint_grid {
                let mu = m0 + (m1 - m0) * j as f64 / (cfg.midpoint_grid - 1) as f64;
                let f = self.sse(kappa, mu);
                if f < best.0 {
                    best = (f, kappa, mu);
                }
            }
        }
        (best.1, best.2)
    }

    /// Coordinate descent from `(kappa, mu)`, each coordinate by golden-section search.
    fn refine(&self, cfg: &BaselineConfig, mut kappa: f64, mut mu: f64) -> (f64, f64) {
        let kmax = cfg.max_rate_span;
        let (m0, m1) = cfg.midpoint_range;
        let mut k_step = 2.0 * kmax / (cfg.rate_grid - 1) as f64;
        let mut m_step = (m1 - m0) / (cfg.midpoint_grid - 1) as f64;
        let mut best = self.sse(kappa, mu);
        for _ in 0..cfg.max_refine_iterations {
            let (k_new, fk) = golden(
                |k| self.sse(k, mu),
                (kappa - k_step).max(-kmax),
                (kappa + k_step).min(kmax),
            );
            let dk = if fk < best {
                best = fk;
                let d = (k_new - kappa).abs();
                kappa = k_new;
                d
            } else {
                0.0
            };
            let (m_new, fm) = golden(
                |m| self.sse(kappa, m),
                (mu - m_step).max(m0),
                (mu + m_step).min(m1),
            );
            let dm = if fm < best {
                best = fm;
                let d = (m_new - mu).abs();
                mu = m_new;
                d
            } else {
                0.0
            };
            if dk < 1e-10 && dm < 1e-10 {
                break;
            }
            k_step = (4.0 * dk).max(1e-9).min(k_step);
            m_step = (4.0 * dm).max(1e-9).min(m_step);
        }
        (kappa, mu)
    }
}

/// Minimiser of a unimodal function on `[a, b]`, with its value.
fn golden(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > 1e-11 * (1.0 + a.abs().max(b.abs())) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Fits the baseline on the present values of `train`.
pub fn fit_baseline(
    train: &HourlySeries,
    cal: &HolidayCalendar,
    config: &BaselineConfig,
) -> Result<TsBaselineModel> {
    config.validate()?;
    if train.is_empty() {
        return Err(Error::Fit(format!("{}: empty training series", train.name)));
    }
    let points: Vec<(Timestamp, f64)> = train.present().collect();
    if points.is_empty() {
        return Err(Error::Fit(format!(
            "{}: training series has no values",
            train.name
        )));
    }
    let origin = train.start;
    let span = train.len() as f64;
    let max_y = points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    if !(max_y > 0.0) {
        return Err(Error::Fit(format!(
            "{}: training maximum must be positive for a logistic capacity",
            train.name
        )));
    }
    let capacity = config.capacity_factor * max_y;

    let seasonal: Vec<Seasonality> = config
        .seasonalities
        .iter()
        .filter(|s| !config.auto_disable_long_periods || span >= 2.0 * s.period_hours)
        .cloned()
        .collect();
    let classes: Vec<String> = if config.holidays {
        let mut set: Vec<String> = points
            .iter()
            .filter_map(|(ts, _)| cal.class_at(*ts).map(str::to_string))
            .collect();
        set.sort();
        set.dedup();
        set
    } else {
        Vec::new()
    };

    // linear block: level offset, Fourier pairs, holiday-class indicators
    let n = points.len();
    let q = 1 + seasonal.iter().map(|s| 2 * s.order).sum::<usize>() + classes.len();
    let mut design = Vec::with_capacity(n * q);
    for (ts, _) in &points {
        design.push(1.0);
        fourier_features(&seasonal, *ts, &mut design);
        let class = cal.class_at(*ts);
        design.extend(
            classes
                .iter()
                .map(|c| if Some(c.as_str()) == class { 1.0 } else { 0.0 }),
        );
    }
    let linear = ColumnSpace::new(n, q, &design)?;

    let y: Vec<f64> = points.iter().map(|p| p.1).collect();
    let u: Vec<f64> = points
        .iter()
        .map(|(ts, _)| ts.hours_since(origin) as f64 / span)
        .collect();
    let problem = TrendProblem {
        u: &u,
        y: &y,
        capacity,
        linear: &linear,
    };
    let (k0, m0) = problem.grid(config);
    let (kappa, mu) = problem.refine(config, k0, m0);

    let detrended: Vec<f64> = y
        .iter()
        .zip(problem.curve(kappa, mu))
        .map(|(y, g)| y - g)
        .collect();
    let coefs = lstsq(n, q, &design, &detrended)?;
    let offset = coefs[0];
    let mut seasonal_terms = Vec::with_capacity(seasonal.len());
    let mut idx = 1;
    for s in &seasonal {
        let mut sin = Vec::with_capacity(s.order);
        let mut cos = Vec::with_capacity(s.order);
        for _ in 0..s.order {
            sin.push(coefs[idx]);
            cos.push(coefs[idx + 1]);
            idx += 2;
        }
        seasonal_terms.push(FourierTerms {
            name: s.name.clone(),
            period_hours: s.period_hours,
            sin,
            cos,
        });
    }
    let holiday_effects = classes
        .into_iter()
        .zip(coefs[idx..].iter().copied())
        .collect();

    Ok(TsBaselineModel {
        origin,
        span_hours: span,
        trend: LogisticTrend {
            capacity,
            rate: kappa / span,
            midpoint: mu * span,
            offset,
        },
        seasonal: seasonal_terms,
        holiday_effects,
    })
}

/// Extrapolates the fitted components over `window`.
pub fn predict_baseline(
    model: &TsBaselineModel,
    window: Window,
    cal: &HolidayCalendar,
) -> Result<HourlySeries> {
    let values = window
        .hours()
        .map(|h| Some(model.value_at(h, cal).max(0.0)))
        .collect();
    HourlySeries::new(
        "inertia_baseline",
        Unit::MegaVoltAmpereSeconds,
        window.start,
        values,
    )
}
