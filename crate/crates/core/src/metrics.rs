//! Point-forecast accuracy metrics over aligned hourly series.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::HourlySeries;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricResult {
    /// Percent.
    pub mape: f64,
    /// Percent, in `[0, 200]`.
    pub smape: f64,
    /// Same unit as the series.
    pub mae: f64,
    /// Hours entering the MAPE (both present, actual non-zero).
    pub n_points: usize,
}

/// `(actual, forecast)` for every hour present in both series.
fn pairs<'a>(
    actual: &'a HourlySeries,
    forecast: &'a HourlySeries,
) -> impl Iterator<Item = (f64, f64)> + 'a {
    actual
        .present()
        .filter_map(move |(ts, a)| forecast.get(ts).map(|f| (a, f)))
}

/// Mean absolute percentage error, in percent. Hours with a zero actual are skipped.
pub fn mape(actual: &HourlySeries, forecast: &HourlySeries) -> Result<f64> {
    let (sum, n) = pairs(actual, forecast)
        .filter(|(a, _)| *a != 0.0)
        .fold((0.0, 0usize), |(s, n), (a, f)| {
            (s + ((a - f) / a).abs(), n + 1)
        });
    if n == 0 {
        return Err(Error::Metric(
            "MAPE: no overlapping hours with a non-zero actual".into(),
        ));
    }
    Ok(100.0 * sum / n as f64)
}

/// Symmetric MAPE, in percent: mean of `2|A - F| / (|A| + |F|)`.
pub fn smape(actual: &HourlySeries, forecast: &HourlySeries) -> Result<f64> {
    let (sum, n) = pairs(actual, forecast)
        .filter(|(a, f)| a.abs() + f.abs() > 0.0)
        .fold((0.0, 0usize), |(s, n), (a, f)| {
            (s + 2.0 * (a - f).abs() / (a.abs() + f.abs()), n + 1)
        });
    if n == 0 {
        return Err(Error::Metric(
            "sMAPE: no overlapping hours with a non-zero value".into(),
        ));
    }
    Ok(100.0 * sum / n as f64)
}

pub fn mae(actual: &HourlySeries, forecast: &HourlySeries) -> Result<f64> {
    let (sum, n) =
        pairs(actual, forecast).fold((0.0, 0usize), |(s, n), (a, f)| (s + (a - f).abs(), n + 1));
    if n == 0 {
        return Err(Error::Metric("MAE: no overlapping hours".into()));
    }
    Ok(sum / n as f64)
}

pub fn evaluate(actual: &HourlySeries, forecast: &HourlySeries) -> Result<MetricResult> {
    Ok(MetricResult {
        mape: mape(actual, forecast)?,
        smape: smape(actual, forecast)?,
        mae: mae(actual, forecast)?,
        n_points: pairs(actual, forecast).filter(|(a, _)| *a != 0.0).count(),
    })
}

/// Sum of squared errors over the overlapping hours.
pub fn sse(actual: &HourlySeries, forecast: &HourlySeries) -> f64 {
    pairs(actual, forecast).map(|(a, f)| (a - f).powi(2)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Unit;
    use crate::time::Timestamp;
    use proptest::prelude::*;

    fn s(values: &[Option<f64>]) -> HourlySeries {
        HourlySeries::new(
            "x",
            Unit::MegaWatt,
            Timestamp::from_hours(0),
            values.to_vec(),
        )
        .unwrap()
    }

    fn all(values: &[f64]) -> HourlySeries {
        s(&values.iter().copied().map(Some).collect::<Vec<_>>())
    }

    #[test]
    fn mape_examples() {
        let a = all(&[100.0, 200.0]);
        assert_eq!(mape(&a, &a).unwrap(), 0.0);
        assert!((mape(&a, &all(&[110.0, 190.0])).unwrap() - 7.5).abs() < 1e-12);
        let a = all(&[100.0, 0.0, 200.0]);
        assert!((mape(&a, &all(&[110.0, 5.0, 190.0])).unwrap() - 7.5).abs() < 1e-12);
        let r = evaluate(&a, &all(&[110.0, 5.0, 190.0])).unwrap();
        assert_eq!(r.n_points, 2);
    }

    #[test]
    fn smape_examples() {
        let a = all(&[100.0]);
        assert_eq!(smape(&a, &a).unwrap(), 0.0);
        assert!((smape(&a, &all(&[300.0])).unwrap() - 100.0).abs() < 1e-12);
        assert!((smape(&all(&[0.0]), &all(&[50.0])).unwrap() - 200.0).abs() < 1e-12);
    }

    #[test]
    fn gaps_and_empty_overlap() {
        let a = s(&[Some(100.0), None, Some(200.0)]);
        let f = s(&[None, Some(1.0), Some(220.0)]);
        assert!((mape(&a, &f).unwrap() - 10.0).abs() < 1e-12);
        let f = s(&[None, Some(1.0), None]);
        assert!(matches!(mape(&a, &f), Err(Error::Metric(_))));
        assert!(matches!(smape(&a, &f), Err(Error::Metric(_))));
        assert!(mae(&a, &f).is_err());
    }

    proptest! {
        #[test]
        fn smape_bounded(a in proptest::collection::vec(-1e5f64..1e5, 1..50), f in proptest::collection::vec(-1e5f64..1e5, 50)) {
            let fa = all(&a);
            let ff = all(&f[..a.len()]);
            if let Ok(v) = smape(&fa, &ff) {
                prop_assert!((0.0..=200.0 + 1e-9).contains(&v));
            }
        }
    }
}
