//! Minute-resolution wall-clock time.
//!
//! All pipeline arithmetic runs on integer minutes since 1970-01-01T00:00
//! (naive wall clock, no zone conversion). Durations become decimal hours
//! only at report boundaries, so areas and event grouping stay exact.

use std::fmt;

use chrono::{DateTime, NaiveDateTime};
use serde::Serialize;

/// Default timestamp layout accepted by the parsers: ISO-8601 to the minute.
pub const DEFAULT_TIME_FORMAT: &str = "%Y-%m-%dT%H:%M";

/// A point in time, in whole minutes since 1970-01-01T00:00 wall clock.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Minute(pub i64);

impl Minute {
    /// Parses a timestamp with the given `chrono` format string, truncating
    /// any sub-minute part toward the past.
    pub fn parse(text: &str, format: &str) -> Result<Self, TimeParseError> {
        let dt = NaiveDateTime::parse_from_str(text.trim(), format).map_err(|_| TimeParseError {
            text: text.to_string(),
            format: format.to_string(),
        })?;
        Ok(Minute(dt.and_utc().timestamp().div_euclid(60)))
    }

    /// Formats as ISO-8601 to minute precision (`YYYY-MM-DDTHH:MM`).
    pub fn to_iso(self) -> String {
        let dt = DateTime::from_timestamp(self.0 * 60, 0)
            .expect("minute value outside representable range");
        dt.naive_utc().format(DEFAULT_TIME_FORMAT).to_string()
    }

    /// Minutes elapsed since `earlier` (negative if `self` precedes it).
    pub fn minutes_since(self, earlier: Minute) -> i64 {
        self.0 - earlier.0
    }

    /// Hours elapsed since `earlier`, as a decimal.
    pub fn hours_since(self, earlier: Minute) -> f64 {
        minutes_to_hours(self.minutes_since(earlier))
    }

    pub fn plus_minutes(self, minutes: i64) -> Minute {
        Minute(self.0 + minutes)
    }
}

impl fmt::Display for Minute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_iso())
    }
}

/// Converts an integer minute count to decimal hours.
pub fn minutes_to_hours(minutes: i64) -> f64 {
    minutes as f64 / 60.0
}

/// Rounds a fractional minute offset to a whole minute, ties to even.
pub fn round_to_minute(minutes: f64) -> i64 {
    minutes.round_ties_even() as i64
}

/// A timestamp that did not match the expected layout.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("timestamp `{text}` does not match format `{format}`")]
pub struct TimeParseError {
    pub text: String,
    pub format: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minute_precision() {
        let m = Minute::parse("2022-06-13T00:00", DEFAULT_TIME_FORMAT).unwrap();
        assert_eq!(m.to_iso(), "2022-06-13T00:00");
        let later = Minute::parse("2022-06-13T05:00", DEFAULT_TIME_FORMAT).unwrap();
        assert_eq!(later.minutes_since(m), 300);
    }

    #[test]
    fn truncates_seconds_when_format_carries_them() {
        let m = Minute::parse("2022-06-13T00:00:45", "%Y-%m-%dT%H:%M:%S").unwrap();
        let base = Minute::parse("2022-06-13T00:00", DEFAULT_TIME_FORMAT).unwrap();
        assert_eq!(m, base);
    }

    #[test]
    fn rejects_malformed_text() {
        assert!(Minute::parse("not-a-time", DEFAULT_TIME_FORMAT).is_err());
        assert!(Minute::parse("2022-13-40T99:99", DEFAULT_TIME_FORMAT).is_err());
    }

    #[test]
    fn round_half_even() {
        assert_eq!(round_to_minute(2.5), 2);
        assert_eq!(round_to_minute(3.5), 4);
        assert_eq!(round_to_minute(2.4), 2);
        assert_eq!(round_to_minute(-2.5), -2);
    }

    #[test]
    fn hours_conversion() {
        assert_eq!(minutes_to_hours(90), 1.5);
        let a = Minute(0);
        let b = Minute(4234);
        assert!((b.hours_since(a) - 70.566_666_666_7).abs() < 1e-9);
    }
}
