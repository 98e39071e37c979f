//! Hourly series with explicit gaps, plus resampling of finer-grained samples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::time::{Timestamp, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Unit {
    /// Inertial (kinetic) energy, MVA·s.
    #[serde(rename = "MVA·s")]
    MegaVoltAmpereSeconds,
    /// Power, MW.
    #[serde(rename = "MW")]
    MegaWatt,
}

/// Uniformly spaced hourly values; index `i` is the hour `start + i`. `None` marks a gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HourlySeries {
    pub name: String,
    pub unit: Unit,
    pub start: Timestamp,
    values: Vec<Option<f64>>,
}

impl HourlySeries {
    /// Validates that present values are finite and that energies are non-negative.
    pub fn new(
        name: impl Into<String>,
        unit: Unit,
        start: Timestamp,
        values: Vec<Option<f64>>,
    ) -> Result<Self> {
        let name = name.into();
        for (i, v) in values.iter().enumerate() {
            if let Some(x) = v {
                if !x.is_finite() {
                    return Err(Error::Integrity(format!(
                        "{name}: non-finite value at {}",
                        start.add_hours(i as i64)
                    )));
                }
                if unit == Unit::MegaVoltAmpereSeconds && *x < 0.0 {
                    return Err(Error::Integrity(format!(
                        "{name}: negative inertial energy {x} at {}",
                        start.add_hours(i as i64)
                    )));
                }
            }
        }
        Ok(HourlySeries {
            name,
            unit,
            start,
            values,
        })
    }

    /// Series without gaps.
    pub fn from_values(
        name: impl Into<String>,
        unit: Unit,
        start: Timestamp,
        values: &[f64],
    ) -> Result<Self> {
        Self::new(
            name,
            unit,
            start,
            values.iter().copied().map(Some).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn end(&self) -> Timestamp {
        self.start.add_hours(self.values.len() as i64)
    }

    pub fn window(&self) -> Window {
        Window::new(self.start, self.end())
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    /// Value at `ts`; `None` for gaps and for hours outside the series.
    pub fn get(&self, ts: Timestamp) -> Option<f64> {
        let idx = ts.hours_since(self.start);
        if idx < 0 {
            return None;
        }
        self.values.get(idx as usize).copied().flatten()
    }

    /// Overwrites index `i`; caller keeps the finiteness and sign invariants.
    pub(crate) fn set(&mut self, i: usize, value: Option<f64>) {
        self.values[i] = value;
    }

    pub fn gap_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    pub fn present(&self) -> impl Iterator<Item = (Timestamp, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(move |(i, v)| v.map(|x| (self.start.add_hours(i as i64), x)))
    }

    /// Re-indexes onto `window`; hours outside the series become gaps.
    pub fn slice(&self, window: Window) -> HourlySeries {
        HourlySeries {
            name: self.name.clone(),
            unit: self.unit,
            start: window.start,
            values: window.hours().map(|h| self.get(h)).collect(),
        }
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Multiplies every present value by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<HourlySeries> {
        HourlySeries::new(
            self.name.clone(),
            self.unit,
            self.start,
            self.values.iter().map(|v| v.map(|x| x * factor)).collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reducer {
    Mean,
    First,
}

/// Timestamped samples at a sub-hourly resolution, as read from a high-frequency feed.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSeries {
    pub name: String,
    pub unit: Unit,
    /// `(seconds since epoch, value)`, sorted by time.
    pub samples: Vec<(i64, Option<f64>)>,
}

/// Collapses sub-hourly samples into hours. Each output hour reduces its present
/// samples; an hour with no present sample is a gap.
pub fn resample_to_hourly(series: &RawSeries, reducer: Reducer) -> Result<HourlySeries> {
    let samples = &series.samples;
    if samples.is_empty() {
        return Err(Error::Resample(format!("{}: no samples", series.name)));
    }
    let step = if samples.len() > 1 {
        samples[1].0 - samples[0].0
    } else {
        3600
    };
    if step <= 0 || 3600 % step != 0 {
        return Err(Error::Resample(format!(
            "{}: spacing of {step} s does not divide one hour",
            series.name
        )));
    }
    if let Some(w) = samples.windows(2).find(|w| w[1].0 - w[0].0 != step) {
        return Err(Error::Resample(format!(
            "{}: irregular spacing between t={} and t={}",
            series.name, w[0].0, w[1].0
        )));
    }
    let first_hour = samples[0].0.div_euclid(3600);
    let last_hour = samples[samples.len() - 1].0.div_euclid(3600);
    let n_hours = (last_hour - first_hour + 1) as usize;

    let mut sums = vec![0.0; n_hours];
    let mut counts = vec![0usize; n_hours];
    let mut firsts: Vec<Option<f64>> = vec![None; n_hours];
    for &(t, v) in samples {
        let Some(x) = v else { continue };
        let idx = (t.div_euclid(3600) - first_hour) as usize;
        sums[idx] += x;
        counts[idx] += 1;
        if firsts[idx].is_none() {
            firsts[idx] = Some(x);
        }
    }
    let values = match reducer {
        Reducer::Mean => sums
            .iter()
            .zip(&counts)
            .map(|(s, &c)| (c > 0).then(|| s / c as f64))
            .collect(),
        Reducer::First => firsts,
    };
    HourlySeries::new(
        series.name.clone(),
        series.unit,
        Timestamp::from_hours(first_hour),
        values,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn raw(step: i64, values: &[Option<f64>]) -> RawSeries {
        RawSeries {
            name: "x".into(),
            unit: Unit::MegaWatt,
            samples: values
                .iter()
                .enumerate()
                .map(|(i, v)| (i as i64 * step, *v))
                .collect(),
        }
    }

    #[test]
    fn half_hour_mean() {
        let s = resample_to_hourly(&raw(1800, &[Some(10.0), Some(20.0)]), Reducer::Mean).unwrap();
        assert_eq!(s.values(), &[Some(15.0)]);
    }

    #[test]
    fn mean_skips_gaps() {
        let s = resample_to_hourly(&raw(1800, &[Some(10.0), None]), Reducer::Mean).unwrap();
        assert_eq!(s.values(), &[Some(10.0)]);
        let s = resample_to_hourly(
            &raw(1800, &[None, None, Some(3.0), Some(5.0)]),
            Reducer::First,
        )
        .unwrap();
        assert_eq!(s.values(), &[None, Some(3.0)]);
    }

    #[test]
    fn irregular_spacing_rejected() {
        let mut r = raw(1800, &[Some(1.0), Some(2.0), Some(3.0)]);
        r.samples[2].0 += 60;
        assert!(matches!(
            resample_to_hourly(&r, Reducer::Mean),
            Err(Error::Resample(_))
        ));
        assert!(resample_to_hourly(&raw(7 * 60, &[Some(1.0), Some(2.0)]), Reducer::Mean).is_err());
    }

    #[test]
    fn slice_pads_with_gaps() {
        let s =
            HourlySeries::from_values("x", Unit::MegaWatt, Timestamp::from_hours(10), &[1.0, 2.0])
                .unwrap();
        let w = Window::new(Timestamp::from_hours(9), Timestamp::from_hours(13));
        assert_eq!(s.slice(w).values(), &[None, Some(1.0), Some(2.0), None]);
    }

    #[test]
    fn negative_energy_rejected() {
        assert!(HourlySeries::from_values(
            "e",
            Unit::MegaVoltAmpereSeconds,
            Timestamp::from_hours(0),
            &[-1.0]
        )
        .is_err());
    }

    proptest! {
        #[test]
        fn constant_series_resamples_to_constant(c in -1e6f64..1e6, hours in 1usize..6) {
            let vals = vec![Some(c); hours * 60];
            let s = resample_to_hourly(&raw(60, &vals), Reducer::Mean).unwrap();
            prop_assert_eq!(s.len(), hours);
            for v in s.values() {
                prop_assert!((v.unwrap() - c).abs() <= 1e-9 * c.abs().max(1.0));
            }
        }
    }
}
