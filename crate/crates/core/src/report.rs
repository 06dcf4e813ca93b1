//! Report rendering: deterministic JSON documents and aligned text tables.
//!
//! JSON is the machine interface. Field order is fixed by struct layout,
//! floats are rounded to six significant digits before serialization, and
//! the rendering is a pure function of the inputs, so identical runs emit
//! byte-identical documents. Text tables are a human convenience and carry
//! no byte-stability guarantee.

use serde::Serialize;

use crate::events::{Event, Grouping};
use crate::ingest::CrewProfile;
use crate::metrics::{compute_metrics, saidi_contribution, EventMetrics, Metric};

/// Rounds to six significant digits.
pub fn sig6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(5 - magnitude);
    (x * scale).round() / scale
}

pub(crate) fn ser_sig6<S: serde::Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(sig6(*v))
}

/// Serializes any report structure as pretty JSON with stable layout.
pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize infallibly")
}

/// One event's bounds and sizes, as presented by the `events` command.
#[derive(Debug, Clone, Serialize)]
pub struct EventSummary {
    pub ordinal: usize,
    pub o_first: String,
    pub o_last: String,
    pub r_first: String,
    pub r_last: String,
    pub n: u64,
    pub n_cust: u64,
    pub member_ids: Vec<String>,
}

impl EventSummary {
    fn new(ordinal: usize, event: &Event) -> EventSummary {
        let b = event.bounds();
        EventSummary {
            ordinal,
            o_first: b.o_first.to_iso(),
            o_last: b.o_last.to_iso(),
            r_first: b.r_first.to_iso(),
            r_last: b.r_last.to_iso(),
            n: event.n(),
            n_cust: event.n_cust(),
            member_ids: event.members().iter().map(|m| m.id.clone()).collect(),
        }
    }
}

/// Output of the `events` command: kept events plus groups dropped by the
/// minimum-size filter.
#[derive(Debug, Clone, Serialize)]
pub struct EventsReport {
    pub events: Vec<EventSummary>,
    pub dropped: Vec<EventSummary>,
}

pub fn events_report(grouping: &Grouping) -> EventsReport {
    EventsReport {
        events: grouping
            .events
            .iter()
            .enumerate()
            .map(|(i, e)| EventSummary::new(i + 1, e))
            .collect(),
        dropped: grouping
            .dropped
            .iter()
            .enumerate()
            .map(|(i, e)| EventSummary::new(i + 1, e))
            .collect(),
    }
}

/// One event's metric record in the `metrics` report.
#[derive(Debug, Clone, Serialize)]
pub struct MetricsEntry {
    pub ordinal: usize,
    pub o_first: String,
    pub r_last: String,
    pub metrics: EventMetrics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub saidi_contribution_h: Option<Metric>,
}

/// Output of the `metrics` command.
#[derive(Debug, Clone, Serialize)]
pub struct MetricsReport {
    pub events: Vec<MetricsEntry>,
}

/// Computes metrics for every event against the crew profile. When
/// `customers_served` is given, each entry carries the event's contribution
/// to the SAIDI numerator for that customer base.
pub fn metrics_report(
    events: &[Event],
    profile: &CrewProfile,
    customers_served: Option<u64>,
) -> MetricsReport {
    let entries = events
        .iter()
        .enumerate()
        .map(|(i, event)| {
            let metrics = compute_metrics(event, profile);
            let saidi = customers_served.map(|base| {
                saidi_contribution(metrics.a_cust, base)
                    .map(Metric::Value)
                    .unwrap_or(Metric::Undefined)
            });
            let b = event.bounds();
            MetricsEntry {
                ordinal: i + 1,
                o_first: b.o_first.to_iso(),
                r_last: b.r_last.to_iso(),
                metrics,
                saidi_contribution_h: saidi,
            }
        })
        .collect();
    MetricsReport { events: entries }
}

fn fmt_hours(v: f64) -> String {
    format!("{v:.3}")
}

/// Renders one metric record as an aligned table in the standard row
/// order: outage-process, restore-process, then performance-curve metrics.
pub fn metrics_table(entry: &MetricsEntry) -> String {
    let m = &entry.metrics;
    let mut rows: Vec<(&str, String)> = Vec::new();
    rows.push(("-- outage process --", String::new()));
    rows.push(("number of outages", m.n.to_string()));
    rows.push(("number of customers out", m.n_cust.to_string()));
    rows.push(("outage duration (h)", fmt_hours(m.outage_duration_h)));
    rows.push(("outage rate (/h)", m.outage_rate.to_string()));
    rows.push(("-- restore process --", String::new()));
    rows.push(("delay before start of restore (h)", fmt_hours(m.restore_delay_h)));
    rows.push(("restore duration (h)", fmt_hours(m.restore_duration_h)));
    rows.push(("duration to 95% restore (h)", m.d95_h.to_string()));
    rows.push(("customer restore rate (/h)", m.cust_restore_rate.to_string()));
    rows.push(("outage restore rate (/h)", m.outage_restore_rate.to_string()));
    rows.push(("crew hours for restoration", m.crew_hours.to_string()));
    rows.push(("restoration efficiency RE", m.re.to_string()));
    rows.push(("-- performance curve --", String::new()));
    rows.push(("event duration (h)", fmt_hours(m.event_duration_h)));
    rows.push(("max customers simultaneously out", m.max_cust_out.to_string()));
    rows.push(("max simultaneous outages", m.max_outages_out.to_string()));
    rows.push(("customer hours out", format!("{:.1}", m.a_cust)));
    rows.push(("area index of resilience AIR", m.air.to_string()));
    rows.push(("REPAIR", m.repair.to_string()));
    if let Some(saidi) = &entry.saidi_contribution_h {
        rows.push(("SAIDI contribution (h)", saidi.to_string()));
    }

    let width = rows.iter().map(|(label, _)| label.len()).max().unwrap_or(0);
    let mut out = format!(
        "event {}  [{} .. {}]\n",
        entry.ordinal, entry.o_first, entry.r_last
    );
    for (label, value) in rows {
        if value.is_empty() {
            out.push_str(&format!("{label}\n"));
        } else {
            out.push_str(&format!("{label:<width$}  {value:>14}\n"));
        }
    }
    out
}
