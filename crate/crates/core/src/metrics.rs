//! Per-event resilience metrics: outage-process, restore-process, and
//! performance-curve figures, plus the combined RE / AIR / REPAIR scores.
//!
//! Metrics that cannot be computed are explicit markers rather than zeros:
//! `Undefined` when a denominator vanishes, `Unavailable` when crew data is
//! missing. Zero is a meaningful metric value and is never used as a
//! sentinel.

use std::fmt;

use serde::ser::Serializer;
use serde::Serialize;

use crate::events::Event;
use crate::ingest::CrewProfile;
use crate::processes::{
    customer_hours, performance_curve, quantile_crossing, ProcessSet, StepCurve,
};
use crate::time::Minute;

/// A metric value or the reason it is absent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    Value(f64),
    /// The defining ratio has a zero denominator (or zero numerator under a
    /// logarithm); no number exists.
    Undefined,
    /// The inputs required to compute it were not supplied (crew data).
    Unavailable,
}

impl Metric {
    pub fn value(self) -> Option<f64> {
        match self {
            Metric::Value(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_value(self) -> bool {
        matches!(self, Metric::Value(_))
    }

    fn ratio(numerator: f64, denominator: f64) -> Metric {
        if denominator == 0.0 {
            Metric::Undefined
        } else {
            Metric::Value(numerator / denominator)
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Value(v) => write!(f, "{v:.3}"),
            Metric::Undefined => f.write_str("undefined"),
            Metric::Unavailable => f.write_str("unavailable"),
        }
    }
}

impl Serialize for Metric {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Metric::Value(v) => serializer.serialize_f64(crate::report::sig6(*v)),
            Metric::Undefined => serializer.serialize_str("undefined"),
            Metric::Unavailable => serializer.serialize_str("unavailable"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("metric undefined: {0}")]
    Undefined(&'static str),
    #[error("customers served must be positive")]
    ZeroCustomerBase,
}

/// The full metric record for one event, in report units (hours, counts,
/// customer-hours, crew-hours, and dimensionless log10 scores).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventMetrics {
    pub n: u64,
    pub n_cust: u64,
    #[serde(serialize_with = "crate::report::ser_sig6")]
    pub outage_duration_h: f64,
    pub outage_rate: Metric,
    #[serde(serialize_with = "crate::report::ser_sig6")]
    pub restore_delay_h: f64,
    #[serde(serialize_with = "crate::report::ser_sig6")]
    pub restore_duration_h: f64,
    pub d95_h: Metric,
    pub cust_restore_rate: Metric,
    pub outage_restore_rate: Metric,
    #[serde(serialize_with = "crate::report::ser_sig6")]
    pub event_duration_h: f64,
    pub max_cust_out: u64,
    pub max_outages_out: u64,
    #[serde(serialize_with = "crate::report::ser_sig6")]
    pub a_cust: f64,
    pub crew_hours: Metric,
    pub re: Metric,
    pub air: Metric,
    pub repair: Metric,
}

/// Crew-hours deployed over `[from, to]`: each hourly sample contributes
/// its FTE times the fraction of the hour inside the window. An empty
/// profile yields `None` (unavailable), which is not the same as zero.
pub fn crew_hours(profile: &CrewProfile, from: Minute, to: Minute) -> Option<f64> {
    if profile.is_empty() {
        return None;
    }
    debug_assert!(from <= to);
    let mut fte_minutes = 0.0;
    for (hour, fte) in profile.samples() {
        let seg_start = hour.max(from);
        let seg_end = hour.plus_minutes(60).min(to);
        if seg_end > seg_start {
            fte_minutes += fte * seg_end.minutes_since(seg_start) as f64;
        }
    }
    Some(fte_minutes / 60.0)
}

/// Restoration efficiency: log10 of crew-hours per outage restored. Lower
/// means a leaner restoration.
pub fn restoration_efficiency(crew_hours: f64, n: u64) -> Result<f64, MetricError> {
    if n == 0 {
        return Err(MetricError::Undefined("no outages restored"));
    }
    if crew_hours <= 0.0 {
        return Err(MetricError::Undefined("no crew hours recorded"));
    }
    Ok((crew_hours / n as f64).log10())
}

/// Area index of resilience: log10 of event customer-hours per customer
/// out. Lower means a faster restoration for the average customer.
pub fn area_index(a_cust: f64, n_cust: u64) -> Result<f64, MetricError> {
    if a_cust <= 0.0 {
        return Err(MetricError::Undefined("zero customer-hours"));
    }
    if n_cust == 0 {
        return Err(MetricError::Undefined("no customers out"));
    }
    Ok((a_cust / n_cust as f64).log10())
}

/// REPAIR: the sum RE + AIR, combining crew effort per outage with
/// customer-hours per customer. Lower is better.
pub fn repair_metric(re: f64, air: f64) -> f64 {
    re + air
}

/// The event's contribution to the SAIDI numerator: customer-hours divided
/// by the total customers served by the utility.
pub fn saidi_contribution(a_cust: f64, customers_served: u64) -> Result<f64, MetricError> {
    if customers_served == 0 {
        return Err(MetricError::ZeroCustomerBase);
    }
    Ok(a_cust / customers_served as f64)
}

/// Computes the full metric record for an event against a crew profile
/// (which may be empty, marking crew-dependent metrics unavailable).
pub fn compute_metrics(event: &Event, profile: &CrewProfile) -> EventMetrics {
    let processes = ProcessSet::for_event(event);
    let bounds = event.bounds();
    let crew = crew_hours(profile, bounds.o_first, bounds.r_last);
    metrics_from_processes(event.n(), event.n_cust(), &processes, crew)
}

/// Metric record from pre-built process curves; `crew` is the crew-hours
/// already integrated over the relevant span (None when unavailable).
/// This is also the path counterfactual reruns use, where the restore
/// curve is synthetic and per-ticket records may not exist.
pub(crate) fn metrics_from_processes(
    n: u64,
    n_cust: u64,
    ps: &ProcessSet,
    crew: Option<f64>,
) -> EventMetrics {
    let o_first = ps.outage_cust.breakpoints().first().copied();
    let o_last = ps.outage_cust.breakpoints().last().copied();
    let (r_first, r_last) = restore_span(&ps.restore_cust, &ps.restore_count);

    let o1 = o_first.unwrap_or(Minute(0));
    let on = o_last.unwrap_or(o1);
    let r1 = r_first.unwrap_or(o1);
    let rn = r_last.unwrap_or(r1);

    let outage_duration_h = on.hours_since(o1);
    let restore_delay_h = r1.hours_since(o1);
    let restore_duration_h = rn.hours_since(r1);
    let event_duration_h = restore_delay_h + restore_duration_h;

    let a_cust_min = ps.customer_minutes().expect("curves from one event share final levels");
    let a_cust = customer_hours(a_cust_min);

    let d95_h = quantile_crossing(&ps.restore_cust, 0.95)
        .map(|t| Metric::Value(t.hours_since(r1)))
        .unwrap_or(Metric::Undefined);

    let perf_cust = performance_curve(&ps.outage_cust, &ps.restore_cust)
        .expect("customer curves share weighting and final level");
    let perf_count = performance_curve(&ps.outage_count, &ps.restore_count)
        .expect("count curves share weighting and final level");
    let max_cust_out = perf_cust.levels().iter().copied().max().unwrap_or(0).max(0) as u64;
    let max_outages_out = perf_count.levels().iter().copied().max().unwrap_or(0).max(0) as u64;

    let crew_hours_metric = match crew {
        Some(c) => Metric::Value(c),
        None => Metric::Unavailable,
    };
    let re = match crew {
        Some(c) => restoration_efficiency(c, n).map(Metric::Value).unwrap_or(Metric::Undefined),
        None => Metric::Unavailable,
    };
    let air = area_index(a_cust, n_cust).map(Metric::Value).unwrap_or(Metric::Undefined);
    let repair = match (re, air) {
        (Metric::Value(re_v), Metric::Value(air_v)) => Metric::Value(repair_metric(re_v, air_v)),
        (Metric::Unavailable, _) | (_, Metric::Unavailable) => Metric::Unavailable,
        _ => Metric::Undefined,
    };

    EventMetrics {
        n,
        n_cust,
        outage_duration_h,
        outage_rate: Metric::ratio(n as f64, outage_duration_h),
        restore_delay_h,
        restore_duration_h,
        d95_h,
        cust_restore_rate: Metric::ratio(n_cust as f64, restore_duration_h),
        outage_restore_rate: Metric::ratio(n as f64, restore_duration_h),
        event_duration_h,
        max_cust_out,
        max_outages_out,
        a_cust,
        crew_hours: crew_hours_metric,
        re,
        air,
        repair,
    }
}

/// Restore span from whichever restore curve has breakpoints; the count
/// curve always jumps even when every customer figure is zero.
fn restore_span(
    restore_cust: &StepCurve,
    restore_count: &StepCurve,
) -> (Option<Minute>, Option<Minute>) {
    let curve = if restore_count.is_empty() { restore_cust } else { restore_count };
    (curve.breakpoints().first().copied(), curve.breakpoints().last().copied())
}
