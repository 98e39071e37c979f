//! Hour-aligned UTC timestamps and half-open hour windows.

use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Datelike, NaiveDate, NaiveDateTime, TimeZone, Timelike, Utc};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const SECONDS_PER_HOUR: i64 = 3600;

/// A UTC instant on an exact hour boundary, stored as whole hours since the Unix epoch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(i64);

impl Timestamp {
    pub const fn from_hours(hours: i64) -> Self {
        Timestamp(hours)
    }

    pub const fn hours(self) -> i64 {
        self.0
    }

    /// Fails unless `dt` falls exactly on an hour boundary.
    pub fn from_datetime(dt: DateTime<Utc>) -> Result<Self> {
        let secs = dt.timestamp();
        if secs.rem_euclid(SECONDS_PER_HOUR) != 0 || dt.nanosecond() != 0 {
            return Err(Error::Parse {
                row: 0,
                msg: format!("{dt} is not aligned to an hour boundary"),
            });
        }
        Ok(Timestamp(secs.div_euclid(SECONDS_PER_HOUR)))
    }

    pub fn ymd_h(year: i32, month: u32, day: u32, hour: u32) -> Self {
        let dt = Utc
            .with_ymd_and_hms(year, month, day, hour, 0, 0)
            .single()
            .expect("valid calendar hour");
        Timestamp(dt.timestamp() / SECONDS_PER_HOUR)
    }

    pub fn from_date(date: NaiveDate) -> Self {
        let dt = date
            .and_hms_opt(0, 0, 0)
            .expect("midnight exists")
            .and_utc();
        Timestamp(dt.timestamp() / SECONDS_PER_HOUR)
    }

    pub fn to_datetime(self) -> DateTime<Utc> {
        DateTime::from_timestamp(self.0 * SECONDS_PER_HOUR, 0).expect("timestamp in range")
    }

    pub fn add_hours(self, h: i64) -> Self {
        Timestamp(self.0 + h)
    }

    /// Signed hour difference `self - other`.
    pub fn hours_since(self, other: Timestamp) -> i64 {
        self.0 - other.0
    }

    /// UTC calendar month, 1..=12.
    pub fn month(self) -> u32 {
        self.to_datetime().month()
    }

    /// Parses ISO-8601. Accepts `YYYY-MM-DDTHH:MM:SSZ`, RFC 3339 offsets,
    /// a naive `YYYY-MM-DDTHH:MM:SS` or `YYYY-MM-DD HH:MM:SS` (taken as UTC)
    /// and a bare `YYYY-MM-DD` (UTC midnight).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |msg: String| Error::Parse { row: 0, msg };
        if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
            return Self::from_datetime(dt.with_timezone(&Utc));
        }
        for fmt in [
            "%Y-%m-%dT%H:%M:%S",
            "%Y-%m-%d %H:%M:%S",
            "%Y-%m-%dT%H:%M",
            "%Y-%m-%d %H:%M",
        ] {
            if let Ok(naive) = NaiveDateTime::parse_from_str(s, fmt) {
                return Self::from_datetime(naive.and_utc());
            }
        }
        if let Ok(date) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
            return Ok(Self::from_date(date));
        }
        Err(bad(format!("invalid timestamp {s:?}")))
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_datetime().format("%Y-%m-%dT%H:00:00Z"))
    }
}

impl FromStr for Timestamp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Timestamp::parse(s)
    }
}

impl Serialize for Timestamp {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Timestamp {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Timestamp::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Half-open interval of hours `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub start: Timestamp,
    pub end: Timestamp,
}

impl Window {
    pub fn new(start: Timestamp, end: Timestamp) -> Self {
        Window { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.hours_since(self.start).max(0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, ts: Timestamp) -> bool {
        ts >= self.start && ts < self.end
    }

    /// True when `other` lies entirely within `self`.
    pub fn covers(&self, other: &Window) -> bool {
        other.start >= self.start && other.end <= self.end
    }

    pub fn overlaps(&self, other: &Window) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn hours(&self) -> impl Iterator<Item = Timestamp> {
        (self.start.hours()..self.end.hours()).map(Timestamp::from_hours)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end)
    }
}

impl FromStr for Window {
    type Err = Error;

    /// `start/end`, each accepted by [`Timestamp::parse`].
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once('/')
            .ok_or_else(|| Error::Config(format!("window {s:?} must look like start/end")))?;
        let w = Window::new(Timestamp::parse(a)?, Timestamp::parse(b)?);
        if w.is_empty() {
            return Err(Error::Config(format!("window {s:?} is empty")));
        }
        Ok(w)
    }
}
