//! Parsing and validation of outage and crew-deployment logs.
//!
//! Outage logs are CSV with one ticket per row; crew logs are CSV with one
//! full-time-equivalent sample per hour. Both parse into canonical records
//! on the integer-minute clock. Row-level problems in outage logs are
//! accumulated rather than aborting the parse, so callers can account for
//! every input row: `rows_in = records_out + errors_out`.

use std::collections::HashMap;
use std::io::Read;

use serde::Serialize;

use crate::time::{Minute, DEFAULT_TIME_FORMAT};

/// One outage ticket: when service was lost, when it was restored, and how
/// many customers were affected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutageRecord {
    pub id: String,
    pub start: Minute,
    pub restore: Minute,
    pub customers: u64,
}

impl OutageRecord {
    /// Outage duration in whole minutes (non-negative by invariant).
    pub fn duration_min(&self) -> i64 {
        self.restore.minutes_since(self.start)
    }
}

/// One hourly crew-deployment sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrewRecord {
    /// Start of the hour the sample covers; always a multiple of 60 minutes.
    pub hour_start: Minute,
    /// Crew full-time equivalents deployed during that hour.
    pub fte: f64,
}

/// Hourly crew deployment C(t), contiguous from `start` with gaps filled as
/// zero. An empty profile means "no crew data" and is distinct from a
/// profile of zeros: crew-dependent metrics report unavailable, not 0.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CrewProfile {
    start: Minute,
    fte: Vec<f64>,
}

impl CrewProfile {
    pub fn empty() -> Self {
        CrewProfile { start: Minute(0), fte: Vec::new() }
    }

    /// Builds a profile from hourly records, validating alignment and order
    /// and filling interior gaps with zero FTE.
    pub fn from_records(records: &[CrewRecord]) -> Result<Self, CrewProfileError> {
        if records.is_empty() {
            return Ok(CrewProfile::empty());
        }
        for r in records {
            if r.hour_start.0.rem_euclid(60) != 0 {
                return Err(CrewProfileError::NotHourAligned { at: r.hour_start });
            }
            if !(r.fte >= 0.0) || !r.fte.is_finite() {
                return Err(CrewProfileError::NegativeFte { at: r.hour_start, fte: r.fte });
            }
        }
        let start = records[0].hour_start;
        let mut fte = Vec::new();
        let mut expected = start;
        for r in records {
            if r.hour_start < expected {
                return Err(CrewProfileError::NotIncreasing { at: r.hour_start });
            }
            while expected < r.hour_start {
                fte.push(0.0);
                expected = expected.plus_minutes(60);
            }
            fte.push(r.fte);
            expected = expected.plus_minutes(60);
        }
        Ok(CrewProfile { start, fte })
    }

    /// Constant-FTE profile covering `hours` whole hours from `start`.
    pub fn flat(start: Minute, hours: usize, fte: f64) -> Self {
        CrewProfile { start, fte: vec![fte; hours] }
    }

    pub fn is_empty(&self) -> bool {
        self.fte.is_empty()
    }

    /// First instant covered by the profile.
    pub fn start(&self) -> Minute {
        self.start
    }

    /// First instant past the last hourly sample.
    pub fn end(&self) -> Minute {
        self.start.plus_minutes(60 * self.fte.len() as i64)
    }

    /// Iterates `(hour_start, fte)` samples in time order.
    pub fn samples(&self) -> impl Iterator<Item = (Minute, f64)> + '_ {
        self.fte
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.start.plus_minutes(60 * i as i64), v))
    }

    /// FTE deployed at instant `t` (0 outside the covered range).
    pub fn fte_at(&self, t: Minute) -> f64 {
        if self.is_empty() || t < self.start || t >= self.end() {
            return 0.0;
        }
        let idx = (t.minutes_since(self.start) / 60) as usize;
        self.fte[idx]
    }

    /// Sum of all recorded samples in crew-hours.
    pub fn total_crew_hours(&self) -> f64 {
        self.fte.iter().sum()
    }
}

/// Errors building a crew profile (also surfaced by the crew-log parser).
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CrewProfileError {
    #[error("crew sample at {at} is not aligned to a whole hour")]
    NotHourAligned { at: Minute },
    #[error("crew sample at {at} has negative or non-finite fte {fte}")]
    NegativeFte { at: Minute, fte: f64 },
    #[error("crew samples not strictly increasing at {at}")]
    NotIncreasing { at: Minute },
}

/// Maps the logical outage-log fields to CSV column names.
#[derive(Debug, Clone)]
pub struct OutageSchema {
    pub id: String,
    pub start: String,
    pub restore: String,
    pub customers: String,
}

impl Default for OutageSchema {
    fn default() -> Self {
        OutageSchema {
            id: "id".into(),
            start: "start".into(),
            restore: "restore".into(),
            customers: "customers".into(),
        }
    }
}

/// A problem confined to one data row, reported with its line number.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct RowError {
    pub line: u64,
    pub kind: RowErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RowErrorKind {
    #[error("malformed timestamp in `{field}`: {text}")]
    BadTimestamp { field: String, text: String },
    #[error("restore {restore} earlier than start {start}")]
    RestoreBeforeStart { start: String, restore: String },
    #[error("negative customer count {text}")]
    NegativeCustomers { text: String },
    #[error("unparseable customer count `{text}`")]
    BadCustomers { text: String },
    #[error("row has {found} fields, expected {expected}")]
    WrongFieldCount { found: usize, expected: usize },
}

/// Errors that invalidate a whole parse rather than a single row.
#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("failed to read input: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("missing column `{0}` in header")]
    MissingColumn(String),
    #[error("duplicate outage id `{id}` (lines {first} and {second})")]
    DuplicateId { id: String, first: u64, second: u64 },
    #[error("{0}")]
    CrewProfile(#[from] CrewProfileError),
    #[error("crew log row {line}: {message}")]
    CrewRow { line: u64, message: String },
}

/// Result of parsing an outage log: every input row lands either in
/// `records` or in `row_errors`.
#[derive(Debug, Default)]
pub struct OutageParse {
    pub records: Vec<OutageRecord>,
    pub row_errors: Vec<RowError>,
}

/// Parses a CSV outage log. Rows are read in file order, then records are
/// sorted by start instant with ties broken by id. Timestamps are truncated
/// to whole minutes.
pub fn parse_outage_log<R: Read>(
    reader: R,
    schema: &OutageSchema,
    time_format: &str,
) -> Result<OutageParse, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| -> Result<usize, IngestError> {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| IngestError::MissingColumn(name.to_string()))
    };
    let (id_col, start_col, restore_col, cust_col) = (
        col(&schema.id)?,
        col(&schema.start)?,
        col(&schema.restore)?,
        col(&schema.customers)?,
    );
    let width = headers.len();

    let mut out = OutageParse::default();
    let mut seen: HashMap<String, u64> = HashMap::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        if row.len() != width {
            out.row_errors.push(RowError {
                line,
                kind: RowErrorKind::WrongFieldCount { found: row.len(), expected: width },
            });
            continue;
        }
        let id = row[id_col].trim().to_string();
        let start = match Minute::parse(&row[start_col], time_format) {
            Ok(m) => m,
            Err(e) => {
                out.row_errors.push(RowError {
                    line,
                    kind: RowErrorKind::BadTimestamp { field: schema.start.clone(), text: e.text },
                });
                continue;
            }
        };
        let restore = match Minute::parse(&row[restore_col], time_format) {
            Ok(m) => m,
            Err(e) => {
                out.row_errors.push(RowError {
                    line,
                    kind: RowErrorKind::BadTimestamp {
                        field: schema.restore.clone(),
                        text: e.text,
                    },
                });
                continue;
            }
        };
        if restore < start {
            out.row_errors.push(RowError {
                line,
                kind: RowErrorKind::RestoreBeforeStart {
                    start: start.to_iso(),
                    restore: restore.to_iso(),
                },
            });
            continue;
        }
        let cust_text = row[cust_col].trim();
        let customers = match cust_text.parse::<i64>() {
            Ok(c) if c < 0 => {
                out.row_errors.push(RowError {
                    line,
                    kind: RowErrorKind::NegativeCustomers { text: cust_text.to_string() },
                });
                continue;
            }
            Ok(c) => c as u64,
            Err(_) => {
                out.row_errors.push(RowError {
                    line,
                    kind: RowErrorKind::BadCustomers { text: cust_text.to_string() },
                });
                continue;
            }
        };
        if let Some(&first) = seen.get(&id) {
            return Err(IngestError::DuplicateId { id, first, second: line });
        }
        seen.insert(id.clone(), line);
        out.records.push(OutageRecord { id, start, restore, customers });
    }
    sort_records(&mut out.records);
    Ok(out)
}

/// Canonical record order: by start instant, ties broken by id.
pub fn sort_records(records: &mut [OutageRecord]) {
    records.sort_by(|a, b| a.start.cmp(&b.start).then_with(|| a.id.cmp(&b.id)));
}

/// Parses a CSV crew log with columns `hour_start,fte` into an hourly
/// profile, filling gaps between samples with zero FTE. An empty log yields
/// an empty profile.
pub fn parse_crew_log<R: Read>(reader: R) -> Result<CrewProfile, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(reader);
    if rdr.headers().map(|h| h.is_empty() || h.len() == 0).unwrap_or(true) {
        return Ok(CrewProfile::empty());
    }
    let headers = rdr.headers()?.clone();
    let hour_col = headers
        .iter()
        .position(|h| h.trim() == "hour_start")
        .ok_or_else(|| IngestError::MissingColumn("hour_start".into()))?;
    let fte_col = headers
        .iter()
        .position(|h| h.trim() == "fte")
        .ok_or_else(|| IngestError::MissingColumn("fte".into()))?;

    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let hour_start =
            Minute::parse(&row[hour_col], DEFAULT_TIME_FORMAT).map_err(|e| IngestError::CrewRow {
                line,
                message: format!("malformed timestamp `{}`", e.text),
            })?;
        if hour_start.0.rem_euclid(60) != 0 {
            return Err(IngestError::CrewRow {
                line,
                message: format!("timestamp {} is not hour-aligned", hour_start.to_iso()),
            });
        }
        let fte: f64 = row[fte_col].trim().parse().map_err(|_| IngestError::CrewRow {
            line,
            message: format!("unparseable fte `{}`", &row[fte_col]),
        })?;
        if !(fte >= 0.0) || !fte.is_finite() {
            return Err(IngestError::CrewRow {
                line,
                message: format!("negative or non-finite fte {fte}"),
            });
        }
        records.push(CrewRecord { hour_start, fte });
    }
    Ok(CrewProfile::from_records(&records)?)
}

/// Writes records back to the canonical outage CSV layout.
pub fn write_outages_csv<W: std::io::Write>(
    records: &[OutageRecord],
    writer: W,
) -> Result<(), IngestError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["id", "start", "restore", "customers"])?;
    for r in records {
        w.write_record([
            r.id.as_str(),
            &r.start.to_iso(),
            &r.restore.to_iso(),
            &r.customers.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes a crew profile back to the canonical crew CSV layout.
pub fn write_crew_csv<W: std::io::Write>(
    profile: &CrewProfile,
    writer: W,
) -> Result<(), IngestError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["hour_start", "fte"])?;
    for (hour, fte) in profile.samples() {
        w.write_record([hour.to_iso(), format!("{fte}")])?;
    }
    w.flush()?;
    Ok(())
}

/// A parsed dataset plus provenance notes.
#[derive(Debug, Clone, Default)]
pub struct DatasetMeta {
    pub source: String,
    /// Timestamps are wall clock used verbatim; DST is not modeled.
    pub timezone_note: String,
}

/// Outage records and crew profile that travel through the pipeline
/// together. Records are kept in canonical sort order.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub outages: Vec<OutageRecord>,
    pub crew: CrewProfile,
    pub meta: DatasetMeta,
}

impl Dataset {
    pub fn new(mut outages: Vec<OutageRecord>, crew: CrewProfile, meta: DatasetMeta) -> Self {
        sort_records(&mut outages);
        Dataset { outages, crew, meta }
    }
}

/// A data-quality observation that does not invalidate the dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValidationWarning {
    /// Outage restored the same minute it started; kept (it still counts
    /// toward n) but worth a look.
    ZeroDuration { id: String },
    /// Outage with no affected customers; kept, contributes to n only.
    ZeroCustomers { id: String },
    /// Crew profile does not cover the full outage span.
    CrewCoverageGap { from: String, to: String },
}

/// Validation output: warnings only, the dataset is never mutated.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub warnings: Vec<ValidationWarning>,
}

impl ValidationReport {
    pub fn count(&self, kind: &str) -> usize {
        self.warnings
            .iter()
            .filter(|w| match w {
                ValidationWarning::ZeroDuration { .. } => kind == "zero_duration",
                ValidationWarning::ZeroCustomers { .. } => kind == "zero_customers",
                ValidationWarning::CrewCoverageGap { .. } => kind == "crew_coverage_gap",
            })
            .count()
    }
}

/// Scans a dataset for zero-duration outages, zero-customer outages, and
/// crew coverage gaps over the outage span.
pub fn validate_dataset(dataset: &Dataset) -> ValidationReport {
    let mut report = ValidationReport::default();
    for r in &dataset.outages {
        if r.duration_min() == 0 {
            report.warnings.push(ValidationWarning::ZeroDuration { id: r.id.clone() });
        }
        if r.customers == 0 {
            report.warnings.push(ValidationWarning::ZeroCustomers { id: r.id.clone() });
        }
    }
    if !dataset.outages.is_empty() && !dataset.crew.is_empty() {
        let span_start = dataset.outages.iter().map(|r| r.start).min().unwrap();
        let span_end = dataset.outages.iter().map(|r| r.restore).max().unwrap();
        if dataset.crew.start() > span_start {
            report.warnings.push(ValidationWarning::CrewCoverageGap {
                from: span_start.to_iso(),
                to: dataset.crew.start().to_iso(),
            });
        }
        if dataset.crew.end() < span_end {
            report.warnings.push(ValidationWarning::CrewCoverageGap {
                from: dataset.crew.end().to_iso(),
                to: span_end.to_iso(),
            });
        }
    }
    report
}
