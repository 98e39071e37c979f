//! Aligned model inputs for one region: CSV ingestion, export and train/test splitting.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::calendar::{HolidayCalendar, RegionId};
use crate::error::{Error, Result};
use crate::series::{HourlySeries, Unit};
use crate::time::{Timestamp, Window};

/// Canonical dataset columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Inertia,
    HydroInertia,
    DemandFc,
    WindFc,
    SolarFc,
    IcFlow,
    DemandActual,
    WindActual,
    SolarActual,
}

impl Field {
    pub const ALL: [Field; 9] = [
        Field::Inertia,
        Field::HydroInertia,
        Field::DemandFc,
        Field::WindFc,
        Field::SolarFc,
        Field::IcFlow,
        Field::DemandActual,
        Field::WindActual,
        Field::SolarActual,
    ];

    /// Canonical CSV header.
    pub fn column(self) -> &'static str {
        match self {
            Field::Inertia => "inertia_mvas",
            Field::HydroInertia => "hydro_inertia_mvas",
            Field::DemandFc => "demand_fc_mw",
            Field::WindFc => "wind_fc_mw",
            Field::SolarFc => "solar_fc_mw",
            Field::IcFlow => "ic_flow_mw",
            Field::DemandActual => "demand_mw",
            Field::WindActual => "wind_mw",
            Field::SolarActual => "solar_mw",
        }
    }

    pub fn unit(self) -> Unit {
        match self {
            Field::Inertia | Field::HydroInertia => Unit::MegaVoltAmpereSeconds,
            _ => Unit::MegaWatt,
        }
    }

    pub fn mandatory(self) -> bool {
        matches!(
            self,
            Field::Inertia | Field::DemandFc | Field::WindFc | Field::SolarFc | Field::IcFlow
        )
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

/// Maps canonical fields to file headers and multiplicative unit conversions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CsvSchema {
    pub timestamp_column: String,
    /// Header name per field; fields not listed use their canonical header.
    pub columns: BTreeMap<Field, String>,
    /// Factor converting the file's unit into MVA·s or MW; defaults to 1.
    pub scale: BTreeMap<Field, f64>,
}

impl Default for CsvSchema {
    fn default() -> Self {
        CsvSchema {
            timestamp_column: "timestamp".into(),
            columns: BTreeMap::new(),
            scale: BTreeMap::new(),
        }
    }
}

impl CsvSchema {
    pub fn header(&self, field: Field) -> &str {
        self.columns
            .get(&field)
            .map(String::as_str)
            .unwrap_or_else(|| field.column())
    }

    pub fn scale(&self, field: Field) -> f64 {
        self.scale.get(&field).copied().unwrap_or(1.0)
    }
}

/// All input and target series for one region over one common hour range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InertiaDataset {
    pub region: RegionId,
    pub target: HourlySeries,
    pub hydro_inertia: Option<HourlySeries>,
    pub demand_fc: HourlySeries,
    pub wind_fc: HourlySeries,
    pub solar_fc: HourlySeries,
    pub ic_flow: HourlySeries,
    pub demand_actual: Option<HourlySeries>,
    pub wind_actual: Option<HourlySeries>,
    pub solar_actual: Option<HourlySeries>,
    pub calendar: HolidayCalendar,
}

impl InertiaDataset {
    /// Builds a dataset from series that must already share start and length.
    pub fn from_series(
        region: RegionId,
        mut series: BTreeMap<Field, HourlySeries>,
        calendar: HolidayCalendar,
    ) -> Result<Self> {
        let mut take = |f: Field| -> Result<HourlySeries> {
            series
                .remove(&f)
                .ok_or_else(|| Error::Schema(format!("missing mandatory series {f}")))
        };
        let target = take(Field::Inertia)?;
        let demand_fc = take(Field::DemandFc)?;
        let wind_fc = take(Field::WindFc)?;
        let solar_fc = take(Field::SolarFc)?;
        let ic_flow = take(Field::IcFlow)?;
        let ds = InertiaDataset {
            region,
            target,
            hydro_inertia: series.remove(&Field::HydroInertia),
            demand_fc,
            wind_fc,
            solar_fc,
            ic_flow,
            demand_actual: series.remove(&Field::DemandActual),
            wind_actual: series.remove(&Field::WindActual),
            solar_actual: series.remove(&Field::SolarActual),
            calendar,
        };
        ds.check_aligned()?;
        Ok(ds)
    }

    fn check_aligned(&self) -> Result<()> {
        let w = self.target.window();
        for f in Field::ALL {
            if let Some(s) = self.series(f) {
                if s.window() != w {
                    return Err(Error::Integrity(format!(
                        "series {f} covers {} but target covers {w}",
                        s.window()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn series(&self, field: Field) -> Option<&HourlySeries> {
        match field {
            Field::Inertia => Some(&self.target),
            Field::HydroInertia => self.hydro_inertia.as_ref(),
            Field::DemandFc => Some(&self.demand_fc),
            Field::WindFc => Some(&self.wind_fc),
            Field::SolarFc => Some(&self.solar_fc),
            Field::IcFlow => Some(&self.ic_flow),
            Field::DemandActual => self.demand_actual.as_ref(),
            Field::WindActual => self.wind_actual.as_ref(),
            Field::SolarActual => self.solar_actual.as_ref(),
        }
    }

    pub(crate) fn series_mut(&mut self, field: Field) -> Option<&mut HourlySeries> {
        match field {
            Field::Inertia => Some(&mut self.target),
            Field::HydroInertia => self.hydro_inertia.as_mut(),
            Field::DemandFc => Some(&mut self.demand_fc),
            Field::WindFc => Some(&mut self.wind_fc),
            Field::SolarFc => Some(&mut self.solar_fc),
            Field::IcFlow => Some(&mut self.ic_flow),
            Field::DemandActual => self.demand_actual.as_mut(),
            Field::WindActual => self.wind_actual.as_mut(),
            Field::SolarActual => self.solar_actual.as_mut(),
        }
    }

    pub fn window(&self) -> Window {
        self.target.window()
    }

    pub fn len(&self) -> usize {
        self.target.len()
    }

    pub fn is_empty(&self) -> bool {
        self.target.is_empty()
    }

    pub fn with_calendar(mut self, calendar: HolidayCalendar) -> Self {
        self.calendar = calendar;
        self
    }

    /// Restricts every series to `window`.
    pub fn restrict(&self, window: Window) -> InertiaDataset {
        let cut = |s: &HourlySeries| s.slice(window);
        InertiaDataset {
            region: self.region,
            target: cut(&self.target),
            hydro_inertia: self.hydro_inertia.as_ref().map(cut),
            demand_fc: cut(&self.demand_fc),
            wind_fc: cut(&self.wind_fc),
            solar_fc: cut(&self.solar_fc),
            ic_flow: cut(&self.ic_flow),
            demand_actual: self.demand_actual.as_ref().map(cut),
            wind_actual: self.wind_actual.as_ref().map(cut),
            solar_actual: self.solar_actual.as_ref().map(cut),
            calendar: self.calendar.clone(),
        }
    }
}

/// Reads one wide CSV file. Rows may appear in any order; hours missing from the
/// file and empty cells become gaps. The region's shipped holiday calendar is attached.
pub fn load_csv(
    path: impl AsRef<Path>,
    schema: &CsvSchema,
    region: RegionId,
) -> Result<InertiaDataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, schema, region)
}

pub fn read_csv<R: std::io::Read>(
    reader: R,
    schema: &CsvSchema,
    region: RegionId,
) -> Result<InertiaDataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Schema(format!("cannot read header: {e}")))?
        .clone();
    let index_of = |name: &str| headers.iter().position(|h| h == name);

    let ts_idx = index_of(&schema.timestamp_column).ok_or_else(|| {
        Error::Schema(format!(
            "missing timestamp column {:?}",
            schema.timestamp_column
        ))
    })?;
    let mut cols: Vec<(Field, usize)> = Vec::new();
    for f in Field::ALL {
        match index_of(schema.header(f)) {
            Some(i) => cols.push((f, i)),
            None if f.mandatory() => {
                return Err(Error::Schema(format!(
                    "missing mandatory column {:?}",
                    schema.header(f)
                )))
            }
            None => {}
        }
    }

    // hour -> (file row, values per present column)
    let mut rows: HashMap<i64, (usize, Vec<Option<f64>>)> = HashMap::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| Error::Parse {
            row,
            msg: e.to_string(),
        })?;
        let ts_str = record.get(ts_idx).unwrap_or_default();
        let ts = Timestamp::parse(ts_str).map_err(|e| Error::Parse {
            row,
            msg: match e {
                Error::Parse { msg, .. } => msg,
                other => other.to_string(),
            },
        })?;
        let mut vals = Vec::with_capacity(cols.len());
        for &(f, ci) in &cols {
            let cell = record.get(ci).unwrap_or_default();
            if cell.is_empty() || cell.eq_ignore_ascii_case("nan") {
                vals.push(None);
                continue;
            }
            let x: f64 = cell.parse().map_err(|_| Error::Parse {
                row,
                msg: format!(
                    "column {:?}: cannot parse {cell:?} as a number",
                    schema.header(f)
                ),
            })?;
            if !x.is_finite() {
                return Err(Error::Parse {
                    row,
                    msg: format!("column {:?}: non-finite value", schema.header(f)),
                });
            }
            vals.push(Some(x * schema.scale(f)));
        }
        match rows.get(&ts.hours()) {
            Some((prev_row, prev)) if *prev != vals => {
                return Err(Error::Integrity(format!(
                    "timestamp {ts} appears on rows {prev_row} and {row} with different values"
                )))
            }
            Some(_) => {}
            None => {
                rows.insert(ts.hours(), (row, vals));
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::Schema("file contains no data rows".into()));
    }

    let first = *rows.keys().min().expect("non-empty");
    let last = *rows.keys().max().expect("non-empty");
    let n = (last - first + 1) as usize;
    let start = Timestamp::from_hours(first);
    let mut series = BTreeMap::new();
    for (k, &(f, _)) in cols.iter().enumerate() {
        let values: Vec<Option<f64>> = (first..=last)
            .map(|h| rows.get(&h).and_then(|(_, v)| v[k]))
            .collect();
        debug_assert_eq!(values.len(), n);
        series.insert(f, HourlySeries::new(f.column(), f.unit(), start, values)?);
    }
    InertiaDataset::from_series(region, series, HolidayCalendar::default_for(region))
}

/// Writes the dataset in the canonical schema. Gaps become empty cells; optional
/// series that are absent are omitted from the header.
pub fn write_csv(ds: &InertiaDataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv_to(ds, file).map_err(|e| match e {
        Error::Serde(msg) => Error::io(path, std::io::Error::other(msg)),
        other => other,
    })
}

pub fn write_csv_to<W: std::io::Write>(ds: &InertiaDataset, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let fields: Vec<Field> = Field::ALL
        .into_iter()
        .filter(|f| ds.series(*f).is_some())
        .collect();
    let ser = |e: csv::Error| Error::Serde(e.to_string());
    let mut header = vec!["timestamp".to_string()];
    header.extend(fields.iter().map(|f| f.column().to_string()));
    wtr.write_record(&header).map_err(ser)?;
    for ts in ds.window().hours() {
        let mut rec = vec![ts.to_string()];
        for f in &fields {
            rec.push(
                ds.series(*f)
                    .and_then(|s| s.get(ts))
                    .map(|x| format!("{x:?}"))
                    .unwrap_or_default(),
            );
        }
        wtr.write_record(&rec).map_err(ser)?;
    }
    wtr.flush().map_err(|e| Error::Serde(e.to_string()))?;
    Ok(())
}

/// Train and test windows, both half-open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_start: Timestamp,
    pub train_end: Timestamp,
    pub test_start: Timestamp,
    pub test_end: Timestamp,
}

impl SplitSpec {
    pub fn new(train: Window, test: Window) -> Result<Self> {
        let s = SplitSpec {
            train_start: train.start,
            train_end: train.end,
            test_start: test.start,
            test_end: test.end,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn train(&self) -> Window {
        Window::new(self.train_start, self.train_end)
    }

    pub fn test(&self) -> Window {
        Window::new(self.test_start, self.test_end)
    }

    pub fn validate(&self) -> Result<()> {
        if self.train().is_empty() {
            return Err(Error::Split(format!(
                "empty training interval {}",
                self.train()
            )));
        }
        if self.test().is_empty() {
            return Err(Error::Split(format!("empty test interval {}", self.test())));
        }
        if self.train_end > self.test_start {
            return Err(Error::Split(format!(
                "training interval {} runs past test start {}",
                self.train(),
                self.test_start
            )));
        }
        Ok(())
    }
}

impl FromStr for SplitSpec {
    type Err = Error;

    /// `train_start/train_end/test_start/test_end`, each an ISO-8601 timestamp or date.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split('/').collect();
        if parts.len() != 4 {
            return Err(Error::Config(format!(
                "split {s:?} needs four '/'-separated timestamps"
            )));
        }
        let t = |i: usize| Timestamp::parse(parts[i]);
        SplitSpec::new(Window::new(t(0)?, t(1)?), Window::new(t(2)?, t(3)?))
    }
}

/// Restricts the dataset to the train and test windows of `spec`.
pub fn split(ds: &InertiaDataset, spec: &SplitSpec) -> Result<(InertiaDataset, InertiaDataset)> {
    spec.validate()?;
    let range = ds.window();
    for w in [spec.train(), spec.test()] {
        if !range.covers(&w) {
            return Err(Error::Split(format!(
                "interval {w} lies outside the dataset range {range}"
            )));
        }
    }
    Ok((ds.restrict(spec.train()), ds.restrict(spec.test())))
}
