//! Regions, holiday calendars and the weekday / weekend-or-holiday split.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate, Weekday};
use chrono_tz::Tz;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::time::Timestamp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RegionId {
    #[serde(rename = "NORDIC_TOTAL")]
    NordicTotal,
    DK2,
    FI,
    NO,
    SE,
    GB,
}

impl RegionId {
    /// The regions whose forecasts sum to the Nordic total.
    pub const NORDIC_PARTS: [RegionId; 4] =
        [RegionId::DK2, RegionId::FI, RegionId::NO, RegionId::SE];

    pub fn code(self) -> &'static str {
        match self {
            RegionId::NordicTotal => "NORDIC_TOTAL",
            RegionId::DK2 => "DK2",
            RegionId::FI => "FI",
            RegionId::NO => "NO",
            RegionId::SE => "SE",
            RegionId::GB => "GB",
        }
    }

    /// Civil time zone used to decide which local date an hour belongs to.
    pub fn time_zone(self) -> Tz {
        match self {
            RegionId::NordicTotal | RegionId::SE => chrono_tz::Europe::Stockholm,
            RegionId::DK2 => chrono_tz::Europe::Copenhagen,
            RegionId::FI => chrono_tz::Europe::Helsinki,
            RegionId::NO => chrono_tz::Europe::Oslo,
            RegionId::GB => chrono_tz::Europe::London,
        }
    }

    /// Local civil date of a UTC hour in this region.
    pub fn local_date(self, ts: Timestamp) -> NaiveDate {
        ts.to_datetime()
            .with_timezone(&self.time_zone())
            .date_naive()
    }
}

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for RegionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "NORDIC_TOTAL" | "NORDIC" => Ok(RegionId::NordicTotal),
            "DK2" | "DK" => Ok(RegionId::DK2),
            "FI" => Ok(RegionId::FI),
            "NO" => Ok(RegionId::NO),
            "SE" => Ok(RegionId::SE),
            "GB" => Ok(RegionId::GB),
            other => Err(Error::Config(format!("unknown region {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DayType {
    Weekday,
    WeekendOrHoliday,
}

/// Holiday dates for one region. Each date carries a class label (e.g. `christmas_day`)
/// that groups recurring holidays across years.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HolidayCalendar {
    pub region: RegionId,
    dates: BTreeMap<NaiveDate, String>,
}

const DEFAULT_CLASS: &str = "holiday";

impl HolidayCalendar {
    pub fn empty(region: RegionId) -> Self {
        HolidayCalendar {
            region,
            dates: BTreeMap::new(),
        }
    }

    pub fn from_dates(region: RegionId, dates: impl IntoIterator<Item = NaiveDate>) -> Self {
        HolidayCalendar {
            region,
            dates: dates
                .into_iter()
                .map(|d| (d, DEFAULT_CLASS.to_string()))
                .collect(),
        }
    }

    /// Parses the holiday file format: one `YYYY-MM-DD` per line, optionally followed
    /// by a class label; `#` starts a comment.
    pub fn parse(region: RegionId, text: &str) -> Result<Self> {
        let mut dates = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let date_str = parts.next().unwrap_or_default();
            let date =
                NaiveDate::parse_from_str(date_str, "%Y-%m-%d").map_err(|e| Error::Parse {
                    row: i + 1,
                    msg: format!("bad holiday date {date_str:?}: {e}"),
                })?;
            let class = parts.next().unwrap_or(DEFAULT_CLASS).to_string();
            dates.insert(date, class);
        }
        Ok(HolidayCalendar { region, dates })
    }

    pub fn load(region: RegionId, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(region, &text)
    }

    /// The shipped 2016–2020 calendar for a region. The Nordic total uses only the
    /// holidays common to all four Nordic regions.
    pub fn default_for(region: RegionId) -> Self {
        let text = match region {
            RegionId::NordicTotal => include_str!("../data/holidays/nordic.txt"),
            RegionId::DK2 => include_str!("../data/holidays/dk2.txt"),
            RegionId::FI => include_str!("../data/holidays/fi.txt"),
            RegionId::NO => include_str!("../data/holidays/no.txt"),
            RegionId::SE => include_str!("../data/holidays/se.txt"),
            RegionId::GB => include_str!("../data/holidays/gb.txt"),
        };
        Self::parse(region, text).expect("bundled holiday file is valid")
    }

    /// Dates present in every input calendar, assigned to `region`.
    pub fn intersection(region: RegionId, calendars: &[HolidayCalendar]) -> Self {
        let Some((first, rest)) = calendars.split_first() else {
            return Self::empty(region);
        };
        let dates = first
            .dates
            .iter()
            .filter(|(d, _)| rest.iter().all(|c| c.dates.contains_key(d)))
            .map(|(d, c)| (*d, c.clone()))
            .collect();
        HolidayCalendar { region, dates }
    }

    /// Same dates, interpreted in another region's local time.
    pub fn for_region(&self, region: RegionId) -> Self {
        HolidayCalendar {
            region,
            dates: self.dates.clone(),
        }
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        self.dates.contains_key(&date)
    }

    pub fn class_of(&self, date: NaiveDate) -> Option<&str> {
        self.dates.get(&date).map(String::as_str)
    }

    /// Holiday class of the local date containing `ts`.
    pub fn class_at(&self, ts: Timestamp) -> Option<&str> {
        self.class_of(self.region.local_date(ts))
    }

    pub fn dates(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        self.dates.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn to_text(&self) -> String {
        self.dates
            .iter()
            .map(|(d, c)| format!("{} {c}\n", d.format("%Y-%m-%d")))
            .collect()
    }
}

/// Weekday versus weekend-or-holiday, judged on the local civil date of the calendar's region.
pub fn day_type(ts: Timestamp, cal: &HolidayCalendar) -> DayType {
    let date = cal.region.local_date(ts);
    let weekend = matches!(date.weekday(), Weekday::Sat | Weekday::Sun);
    if weekend || cal.contains(date) {
        DayType::WeekendOrHoliday
    } else {
        DayType::Weekday
    }
}
