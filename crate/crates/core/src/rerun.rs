//! "Rerunning history": recompute an event's restore process and metrics
//! under a hypothetical change to the restoration effort.
//!
//! Three scenario families are supported:
//!
//! * uniform speedup - every repair completes a fixed fraction faster;
//! * crew scale - a fraction more crews from the first outage, mapped to
//!   proportionally shorter repairs, either by rebuilding restore instants
//!   exactly or by an hourly restore-curve recurrence estimate;
//! * proactive shift - the same crews become available earlier, and the
//!   queue is re-simulated under a dispatch policy.
//!
//! In every scenario the counterfactual restore curve dominates the base
//! curve (R'(t) >= R(t)) and crews are released at the counterfactual last
//! restore, so the crew-hours saved are never negative.

use std::fmt;

use serde::Serialize;

use crate::events::Event;
use crate::ingest::{CrewProfile, OutageRecord};
use crate::metrics::{compute_metrics, crew_hours, metrics_from_processes, EventMetrics, Metric};
use crate::processes::{ProcessSet, StepCurve, Weighting};
use crate::simlab::{
    priority_order, simulate_with_capacity, Capacity, DispatchPolicy, SimError, Ticket,
};
use crate::time::{round_to_minute, Minute};

/// How the crew-scale scenario rebuilds the restore process.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrewScaleMode {
    /// Scale each outage duration by (1 - a) and rebuild the restore
    /// instants; the reference treatment.
    Exact,
    /// Advance the restore curve hour by hour with a relative-speedup
    /// increment, floored at the observed curve. `literal_sign` keeps the
    /// increment's published orientation, under which it is non-positive
    /// and the estimate never outruns the observed process; the default
    /// uses the magnitude so the curve actually accelerates.
    Hourly { literal_sign: bool },
}

/// A counterfactual to apply to one event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    /// Every repair completes `fraction` faster (0 <= fraction < 1).
    UniformSpeedup { fraction: f64 },
    /// `added_fraction` more crews from the first outage onward.
    CrewScale { added_fraction: f64, mode: CrewScaleMode },
    /// Crews become available `hours` earlier; restoration is re-simulated.
    ProactiveShift { hours: f64, policy: DispatchPolicy },
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scenario::UniformSpeedup { fraction } => write!(f, "speedup:{fraction}"),
            Scenario::CrewScale { added_fraction, mode } => match mode {
                CrewScaleMode::Exact => write!(f, "crewscale:{added_fraction}:exact"),
                CrewScaleMode::Hourly { literal_sign: false } => {
                    write!(f, "crewscale:{added_fraction}:paper")
                }
                CrewScaleMode::Hourly { literal_sign: true } => {
                    write!(f, "crewscale:{added_fraction}:paper:literal")
                }
            },
            Scenario::ProactiveShift { hours, policy } => {
                let token = match policy {
                    DispatchPolicy::Chronological => "chrono",
                    DispatchPolicy::LargestCustomersFirst => "largest",
                };
                write!(f, "shift:{hours}:{token}")
            }
        }
    }
}

impl Serialize for Scenario {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Accepted scenario grammar, quoted in parse errors.
pub const SCENARIO_GRAMMAR: &str =
    "speedup:<fraction> | crewscale:<fraction>[:exact|paper[:literal]] | shift:<hours>[:chrono|largest]";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid scenario `{input}`; accepted: {SCENARIO_GRAMMAR}")]
pub struct ScenarioParseError {
    pub input: String,
}

impl std::str::FromStr for Scenario {
    type Err = ScenarioParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ScenarioParseError { input: s.to_string() };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["speedup", frac] => {
                let fraction: f64 = frac.parse().map_err(|_| err())?;
                Ok(Scenario::UniformSpeedup { fraction })
            }
            ["crewscale", frac, rest @ ..] => {
                let added_fraction: f64 = frac.parse().map_err(|_| err())?;
                let mode = match rest {
                    [] | ["exact"] => CrewScaleMode::Exact,
                    ["paper"] => CrewScaleMode::Hourly { literal_sign: false },
                    ["paper", "literal"] => CrewScaleMode::Hourly { literal_sign: true },
                    _ => return Err(err()),
                };
                Ok(Scenario::CrewScale { added_fraction, mode })
            }
            ["shift", hours, rest @ ..] => {
                let hours: f64 = hours.parse().map_err(|_| err())?;
                let policy = match rest {
                    [] | ["chrono"] => DispatchPolicy::Chronological,
                    ["largest"] => DispatchPolicy::LargestCustomersFirst,
                    _ => return Err(err()),
                };
                Ok(Scenario::ProactiveShift { hours, policy })
            }
            _ => Err(err()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RerunError {
    #[error("speedup fraction {0} outside [0, 1)")]
    BadFraction(f64),
    #[error("crew-scale fraction {0} outside [0, 1)")]
    BadCrewScale(f64),
    #[error("proactive shift must be a positive number of hours, got {0}")]
    BadDelta(f64),
    #[error("scenario requires a crew profile, but none was supplied")]
    EmptyProfile,
    #[error("crew profile covers [{covered_from}, {covered_to}) but the event spans [{needed_from}, {needed_to}]")]
    ProfileCoverage {
        covered_from: Minute,
        covered_to: Minute,
        needed_from: Minute,
        needed_to: Minute,
    },
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Base-versus-counterfactual comparison for one event and scenario.
#[derive(Debug, Clone, Serialize)]
pub struct RerunResult {
    pub scenario: Scenario,
    pub base: EventMetrics,
    pub counterfactual: EventMetrics,
    pub delta_re: Metric,
    pub delta_air: Metric,
    pub delta_repair: Metric,
    pub crew_hours_saved: Metric,
    /// Counterfactual customer restore process R'(t).
    #[serde(skip)]
    pub r_prime: StepCurve,
}

fn delta(base: Metric, counterfactual: Metric) -> Metric {
    match (base, counterfactual) {
        (Metric::Value(b), Metric::Value(c)) => Metric::Value(c - b),
        (Metric::Unavailable, _) | (_, Metric::Unavailable) => Metric::Unavailable,
        _ => Metric::Undefined,
    }
}

fn assemble(
    scenario: Scenario,
    base: EventMetrics,
    counterfactual: EventMetrics,
    crew_hours_saved: Metric,
    r_prime: StepCurve,
) -> RerunResult {
    RerunResult {
        scenario,
        delta_re: delta(base.re, counterfactual.re),
        delta_air: delta(base.air, counterfactual.air),
        delta_repair: delta(base.repair, counterfactual.repair),
        base,
        counterfactual,
        crew_hours_saved,
        r_prime,
    }
}

/// Shrinks every outage duration by the fraction `s`: the restore instant
/// becomes start + (1 - s) * duration, rounded to the nearest minute (ties
/// to even). Outage starts are untouched.
pub fn apply_uniform_speedup(event: &Event, s: f64) -> Result<Event, RerunError> {
    if !(0.0..1.0).contains(&s) {
        return Err(RerunError::BadFraction(s));
    }
    let members: Vec<OutageRecord> = event
        .members()
        .iter()
        .map(|m| {
            let new_duration = round_to_minute((1.0 - s) * m.duration_min() as f64);
            OutageRecord { restore: m.start.plus_minutes(new_duration), ..m.clone() }
        })
        .collect();
    Ok(Event::from_members_unchecked(members))
}

/// Runs the uniform-speedup scenario end to end, releasing crews at the
/// counterfactual last restore.
pub fn run_uniform_speedup(
    event: &Event,
    profile: &CrewProfile,
    s: f64,
) -> Result<RerunResult, RerunError> {
    let counterfactual_event = apply_uniform_speedup(event, s)?;
    let base = compute_metrics(event, profile);
    let counterfactual = compute_metrics(&counterfactual_event, profile);
    let saved = match crew_hours(
        profile,
        counterfactual_event.bounds().r_last,
        event.bounds().r_last,
    ) {
        Some(v) => Metric::Value(v),
        None => Metric::Unavailable,
    };
    let r_prime =
        crate::processes::build_restore_process(&counterfactual_event, Weighting::Customers);
    Ok(assemble(Scenario::UniformSpeedup { fraction: s }, base, counterfactual, saved, r_prime))
}

fn check_coverage(event: &Event, profile: &CrewProfile) -> Result<(), RerunError> {
    if profile.is_empty() {
        return Err(RerunError::EmptyProfile);
    }
    let b = event.bounds();
    if profile.start() > b.o_first || profile.end() < b.r_last {
        return Err(RerunError::ProfileCoverage {
            covered_from: profile.start(),
            covered_to: profile.end(),
            needed_from: b.o_first,
            needed_to: b.r_last,
        });
    }
    Ok(())
}

/// Applies the crew-scale scenario: (1 + a) crews from the first outage,
/// assumed to cut each restoration time by the factor (1 - a).
pub fn apply_crew_scale(
    event: &Event,
    profile: &CrewProfile,
    a: f64,
    mode: CrewScaleMode,
) -> Result<RerunResult, RerunError> {
    if !(0.0..1.0).contains(&a) {
        return Err(RerunError::BadCrewScale(a));
    }
    check_coverage(event, profile)?;

    let bounds = event.bounds();
    let o1 = bounds.o_first;
    let base = compute_metrics(event, profile);
    let base_crew =
        crew_hours(profile, o1, bounds.r_last).expect("coverage checked, profile non-empty");

    let scenario = Scenario::CrewScale { added_fraction: a, mode };
    match mode {
        CrewScaleMode::Exact => {
            let members: Vec<OutageRecord> = event
                .members()
                .iter()
                .map(|m| {
                    let new_duration = round_to_minute((1.0 - a) * m.duration_min() as f64);
                    OutageRecord { restore: m.start.plus_minutes(new_duration), ..m.clone() }
                })
                .collect();
            let cf_event = Event::from_members_unchecked(members);
            let release = cf_event.bounds().r_last;
            let cf_crew = (1.0 + a)
                * crew_hours(profile, o1, release).expect("profile non-empty");
            let processes = ProcessSet::for_event(&cf_event);
            let counterfactual =
                metrics_from_processes(cf_event.n(), cf_event.n_cust(), &processes, Some(cf_crew));
            let saved = (1.0 + a)
                * (base_crew - crew_hours(profile, o1, release).expect("profile non-empty"));
            let r_prime = processes.restore_cust.clone();
            Ok(assemble(scenario, base, counterfactual, Metric::Value(saved), r_prime))
        }
        CrewScaleMode::Hourly { literal_sign } => {
            let base_ps = ProcessSet::for_event(event);
            let r_prime = hourly_recurrence(&base_ps.outage_cust, &base_ps.restore_cust, o1, bounds.r_last, a, literal_sign);
            let r_prime_count = hourly_recurrence(&base_ps.outage_count, &base_ps.restore_count, o1, bounds.r_last, a, literal_sign);
            // restore instants shrink toward o_1 by the same factor
            let release =
                o1.plus_minutes(round_to_minute((1.0 - a) * bounds.r_last.minutes_since(o1) as f64));
            let cf_crew =
                (1.0 + a) * crew_hours(profile, o1, release).expect("profile non-empty");
            let processes = ProcessSet {
                outage_cust: base_ps.outage_cust.clone(),
                restore_cust: r_prime.clone(),
                outage_count: base_ps.outage_count.clone(),
                restore_count: r_prime_count,
            };
            let counterfactual =
                metrics_from_processes(event.n(), event.n_cust(), &processes, Some(cf_crew));
            let saved = (1.0 + a)
                * (base_crew - crew_hours(profile, o1, release).expect("profile non-empty"));
            Ok(assemble(scenario, base, counterfactual, Metric::Value(saved), r_prime))
        }
    }
}

/// Hour-stepped counterfactual restore curve: from the first outage, each
/// hourly step multiplies the accumulated level by the relative speedup of
/// the scaled restore times, clamped so the curve never claims more
/// restorations than outages to date and never falls below the observed
/// restore process.
fn hourly_recurrence(
    outage: &StepCurve,
    restore: &StepCurve,
    o1: Minute,
    r_last: Minute,
    a: f64,
    literal_sign: bool,
) -> StepCurve {
    let final_level = restore.final_level();
    let step_factor = if literal_sign { -a } else { a };
    let cap_steps = (r_last.minutes_since(o1) + 59) / 60;

    let mut points: Vec<(Minute, i64)> = Vec::new();
    let mut level = restore.value_at(o1);
    if level > 0 {
        points.push((o1, level));
    }
    for j in 1..=cap_steps {
        let t = o1.plus_minutes(60 * j);
        let advanced = ((level as f64) * (1.0 + step_factor)).round() as i64;
        level = advanced.max(restore.value_at(t)).min(outage.value_at(t)).min(final_level);
        points.push((t, level));
        if level >= final_level {
            break;
        }
    }
    // merge with the observed curve so dominance holds between grid points
    let mut cuts: Vec<Minute> =
        points.iter().map(|&(t, _)| t).chain(restore.breakpoints().iter().copied()).collect();
    cuts.sort_unstable();
    cuts.dedup();
    let hourly = StepCurve::from_jumps(level_deltas(&points), restore.weighting());
    let merged: Vec<(Minute, i64)> = cuts
        .into_iter()
        .map(|t| (t, hourly.value_at(t).max(restore.value_at(t))))
        .collect();
    StepCurve::from_jumps(level_deltas(&merged), restore.weighting())
}

fn level_deltas(points: &[(Minute, i64)]) -> Vec<(Minute, i64)> {
    let mut prev = 0i64;
    points
        .iter()
        .map(|&(t, level)| {
            let d = (t, level - prev);
            prev = level;
            d
        })
        .collect()
}

/// Re-simulates restoration with crews available `delta_h` hours earlier
/// (and staying no shorter than in the base profile). The comparison base
/// is the base-profile simulation under the same dispatch policy, which
/// isolates the effect of the earlier availability.
pub fn apply_proactive_shift(
    event: &Event,
    profile: &CrewProfile,
    delta_h: f64,
    policy: DispatchPolicy,
) -> Result<RerunResult, RerunError> {
    if !(delta_h > 0.0) {
        return Err(RerunError::BadDelta(delta_h));
    }
    if profile.is_empty() {
        return Err(RerunError::EmptyProfile);
    }
    let delta_min = round_to_minute(delta_h * 60.0).max(1);

    // each ticket needs its historical duration in crew-hours of work
    let tickets: Vec<Ticket> = event
        .members()
        .iter()
        .map(|m| Ticket {
            id: m.id.clone(),
            start: m.start,
            customers: m.customers,
            repair_work_h: m.duration_min() as f64 / 60.0,
        })
        .collect();
    let order = priority_order(&tickets, policy);

    let base_capacity = Capacity::from_profile(profile);
    let base_records = simulate_with_capacity(&tickets, &base_capacity, &order)?;
    let base_event = Event::from_members_unchecked(base_records);
    let base_bounds = base_event.bounds();
    let base_crew = crew_hours(profile, base_bounds.o_first, base_bounds.r_last)
        .expect("profile non-empty");
    let base = metrics_from_processes(
        base_event.n(),
        base_event.n_cust(),
        &ProcessSet::for_event(&base_event),
        Some(base_crew),
    );

    let shifted = Capacity::shifted_max(profile, delta_min);
    let cf_records = simulate_with_capacity(&tickets, &shifted, &order)?;
    let cf_event = Event::from_members_unchecked(cf_records);
    let cf_bounds = cf_event.bounds();
    let processes = ProcessSet::for_event(&cf_event);
    let cf_crew = shifted.integral_hours(cf_bounds.o_first.0, cf_bounds.r_last.0);
    let counterfactual =
        metrics_from_processes(cf_event.n(), cf_event.n_cust(), &processes, Some(cf_crew));

    let saved = shifted.integral_hours(cf_bounds.r_last.0, base_bounds.r_last.0);
    let r_prime = processes.restore_cust.clone();
    Ok(assemble(
        Scenario::ProactiveShift { hours: delta_h, policy },
        base,
        counterfactual,
        Metric::Value(saved),
        r_prime,
    ))
}

/// Dispatches a scenario to its implementation.
pub fn run_scenario(
    event: &Event,
    profile: &CrewProfile,
    scenario: Scenario,
) -> Result<RerunResult, RerunError> {
    match scenario {
        Scenario::UniformSpeedup { fraction } => run_uniform_speedup(event, profile, fraction),
        Scenario::CrewScale { added_fraction, mode } => {
            apply_crew_scale(event, profile, added_fraction, mode)
        }
        Scenario::ProactiveShift { hours, policy } => {
            apply_proactive_shift(event, profile, hours, policy)
        }
    }
}

/// One labelled rerun in a report.
#[derive(Debug, Clone, Serialize)]
pub struct RerunReportEntry {
    pub event_ordinal: usize,
    pub event_start: String,
    #[serde(flatten)]
    pub result: RerunResult,
}

/// Side-by-side base/counterfactual report over a batch of reruns.
#[derive(Debug, Clone, Serialize)]
pub struct RerunReport {
    pub results: Vec<RerunReportEntry>,
    pub mean_delta_repair: Metric,
}

/// Builds the report, including the mean REPAIR delta over entries where
/// it is defined.
pub fn rerun_report(results: Vec<RerunReportEntry>) -> RerunReport {
    let deltas: Vec<f64> =
        results.iter().filter_map(|e| e.result.delta_repair.value()).collect();
    let mean_delta_repair = if deltas.is_empty() {
        Metric::Undefined
    } else {
        Metric::Value(deltas.iter().sum::<f64>() / deltas.len() as f64)
    };
    RerunReport { results, mean_delta_repair }
}

impl RerunReport {
    pub fn to_json(&self) -> String {
        crate::report::to_json_pretty(self)
    }

    /// Aligned text table: RE, AIR, REPAIR rows with base, counterfactual,
    /// and delta columns, then customer-hours and crew-savings lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for entry in &self.results {
            let r = &entry.result;
            out.push_str(&format!(
                "event {} ({})  scenario {}\n",
                entry.event_ordinal, entry.event_start, r.scenario
            ));
            out.push_str(&format!(
                "  {:<8} {:>12} {:>14} {:>10}\n",
                "metric", "base", "counterfactual", "delta"
            ));
            let rows = [
                ("RE", r.base.re, r.counterfactual.re, r.delta_re),
                ("AIR", r.base.air, r.counterfactual.air, r.delta_air),
                ("REPAIR", r.base.repair, r.counterfactual.repair, r.delta_repair),
            ];
            for (label, base, cf, d) in rows {
                out.push_str(&format!("  {label:<8} {base:>12} {cf:>14} {d:>10}\n"));
            }
            out.push_str(&format!(
                "  customer-hours {:.1} -> {:.1}; crew-hours saved {}\n",
                r.base.a_cust, r.counterfactual.a_cust, r.crew_hours_saved
            ));
        }
        out.push_str(&format!(
            "{} rerun(s); mean REPAIR delta {}\n",
            self.results.len(),
            self.mean_delta_repair
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processes::customer_minutes_from_records;

    fn rec(id: &str, start: i64, restore: i64, customers: u64) -> OutageRecord {
        OutageRecord { id: id.into(), start: Minute(start), restore: Minute(restore), customers }
    }

    fn two_outage_event() -> Event {
        // c = (10, 20), both 2 h long
        Event::from_members(vec![rec("a", 0, 120, 10), rec("b", 60, 180, 20)], 0).unwrap()
    }

    fn covering_profile(fte: f64) -> CrewProfile {
        CrewProfile::flat(Minute(0), 10, fte)
    }

    #[test]
    fn speedup_zero_is_identity() {
        let e = two_outage_event();
        let cf = apply_uniform_speedup(&e, 0.0).unwrap();
        assert_eq!(cf.members(), e.members());
    }

    #[test]
    fn speedup_halves_customer_hours() {
        let e = two_outage_event();
        let cf = apply_uniform_speedup(&e, 0.5).unwrap();
        assert_eq!(customer_minutes_from_records(&cf), 1800); // 60 -> 30 customer-hours
    }

    #[test]
    fn speedup_shifts_air_by_log_ratio() {
        // durations in whole tens of minutes keep (1-s)*d exact for s = 0.1
        let e = Event::from_members(
            vec![rec("a", 0, 600, 10), rec("b", 30, 1230, 20), rec("c", 60, 360, 7)],
            0,
        )
        .unwrap();
        let result = run_uniform_speedup(&e, &CrewProfile::empty(), 0.1).unwrap();
        let delta = result.delta_air.value().unwrap();
        assert!((delta - 0.9f64.log10()).abs() < 1e-12, "delta {delta}");
        assert_eq!(result.crew_hours_saved, Metric::Unavailable);
    }

    #[test]
    fn speedup_rejects_bad_fraction() {
        let e = two_outage_event();
        assert!(apply_uniform_speedup(&e, 1.0).is_err());
        assert!(apply_uniform_speedup(&e, -0.1).is_err());
    }

    #[test]
    fn crew_scale_identity_at_zero() {
        let e = two_outage_event();
        let r = apply_crew_scale(&e, &covering_profile(10.0), 0.0, CrewScaleMode::Exact).unwrap();
        assert_eq!(r.delta_re, Metric::Value(0.0));
        assert_eq!(r.delta_air, Metric::Value(0.0));
        assert_eq!(r.delta_repair, Metric::Value(0.0));
        assert_eq!(r.crew_hours_saved, Metric::Value(0.0));
    }

    #[test]
    fn crew_scale_exact_two_outage_example() {
        let e = two_outage_event();
        let r = apply_crew_scale(&e, &covering_profile(10.0), 0.1, CrewScaleMode::Exact).unwrap();
        assert_eq!(r.base.a_cust, 60.0);
        assert_eq!(r.counterfactual.a_cust, 54.0);
        let delta = r.delta_air.value().unwrap();
        assert!((delta - 0.9f64.log10()).abs() < 1e-9, "delta {delta}");
        assert!(r.crew_hours_saved.value().unwrap() >= 0.0);
        assert!(r.counterfactual.repair.value().unwrap() < r.base.repair.value().unwrap());
    }

    #[test]
    fn crew_scale_rejects_out_of_range() {
        let e = two_outage_event();
        let p = covering_profile(5.0);
        assert!(apply_crew_scale(&e, &p, 1.0, CrewScaleMode::Exact).is_err());
        assert!(apply_crew_scale(&e, &p, -0.2, CrewScaleMode::Exact).is_err());
    }

    #[test]
    fn crew_scale_requires_coverage() {
        let e = two_outage_event();
        let short = CrewProfile::flat(Minute(0), 1, 5.0); // ends at minute 60 < r_n = 180
        assert!(matches!(
            apply_crew_scale(&e, &short, 0.1, CrewScaleMode::Exact),
            Err(RerunError::ProfileCoverage { .. })
        ));
        assert!(matches!(
            apply_crew_scale(&e, &CrewProfile::empty(), 0.1, CrewScaleMode::Exact),
            Err(RerunError::EmptyProfile)
        ));
    }

    #[test]
    fn hourly_mode_dominates_base_and_terminates() {
        let e = Event::from_members(
            vec![rec("a", 0, 300, 50), rec("b", 30, 500, 20), rec("c", 100, 700, 30)],
            0,
        )
        .unwrap();
        let p = CrewProfile::flat(Minute(0), 24, 5.0);
        let r =
            apply_crew_scale(&e, &p, 0.1, CrewScaleMode::Hourly { literal_sign: false }).unwrap();
        let base_r = crate::processes::build_restore_process(&e, Weighting::Customers);
        for t in (0..=720).step_by(10) {
            assert!(r.r_prime.value_at(Minute(t)) >= base_r.value_at(Minute(t)), "at {t}");
        }
        assert_eq!(r.r_prime.final_level(), base_r.final_level());
        // terminates within ceil(event duration in hours) steps of the grid
        let cap = Minute(60 * ((700 + 59) / 60));
        assert!(*r.r_prime.breakpoints().last().unwrap() <= cap);
        assert!(r.crew_hours_saved.value().unwrap() >= 0.0);
    }

    #[test]
    fn hourly_and_exact_agree_on_single_outage_final_restore() {
        let e = Event::from_members(vec![rec("a", 0, 600, 40)], 0).unwrap();
        let p = CrewProfile::flat(Minute(0), 24, 5.0);
        let exact = apply_crew_scale(&e, &p, 0.1, CrewScaleMode::Exact).unwrap();
        let hourly =
            apply_crew_scale(&e, &p, 0.1, CrewScaleMode::Hourly { literal_sign: false }).unwrap();
        // both shrink the one duration by the same factor: restore at minute 540
        let exact_final = exact.counterfactual.event_duration_h;
        let hourly_release_h = hourly.counterfactual.crew_hours.value().unwrap()
            / (5.0 * 1.1); // flat profile: crew-hours / fte = release hours
        assert!((exact_final - 9.0).abs() < 1e-9);
        assert!((hourly_release_h - 9.0).abs() < 1e-9);
    }

    #[test]
    fn literal_sign_recurrence_never_outruns_base() {
        let e = Event::from_members(
            vec![rec("a", 0, 300, 50), rec("b", 30, 500, 20)],
            0,
        )
        .unwrap();
        let p = CrewProfile::flat(Minute(0), 24, 5.0);
        let r =
            apply_crew_scale(&e, &p, 0.1, CrewScaleMode::Hourly { literal_sign: true }).unwrap();
        let base_r = crate::processes::build_restore_process(&e, Weighting::Customers);
        for t in (0..=600).step_by(10) {
            assert_eq!(r.r_prime.value_at(Minute(t)), base_r.value_at(Minute(t)));
        }
    }

    #[test]
    fn proactive_shift_rejects_non_positive_delta() {
        let e = two_outage_event();
        assert!(matches!(
            apply_proactive_shift(&e, &covering_profile(1.0), 0.0, DispatchPolicy::Chronological),
            Err(RerunError::BadDelta(_))
        ));
        assert!(apply_proactive_shift(
            &e,
            &CrewProfile::empty(),
            1.0,
            DispatchPolicy::Chronological
        )
        .is_err());
    }

    #[test]
    fn proactive_shift_single_outage_hand_queue() {
        // outage at t=0 needing 1 crew-hour; one crew available from hour 2
        let e = Event::from_members(vec![rec("a", 0, 180, 10)], 0).unwrap();
        let profile = CrewProfile::from_records(&[
            crate::ingest::CrewRecord { hour_start: Minute(120), fte: 1.0 },
            crate::ingest::CrewRecord { hour_start: Minute(180), fte: 1.0 },
            crate::ingest::CrewRecord { hour_start: Minute(240), fte: 1.0 },
        ])
        .unwrap();
        // base simulation: work starts at 2 h, done at 3 h
        let r =
            apply_proactive_shift(&e, &profile, 1.0, DispatchPolicy::Chronological).unwrap();
        assert_eq!(r.base.event_duration_h, 3.0);
        // crews an hour earlier: done at 2 h, one customer-hour of impact saved per customer
        assert_eq!(r.counterfactual.event_duration_h, 2.0);
        assert_eq!(r.base.a_cust - r.counterfactual.a_cust, 10.0);
    }

    #[test]
    fn proactive_shift_saturated_storm_moves_every_completion() {
        // five outages at t=0, 1 crew-hour of work each, single crew from hour 3
        let members: Vec<OutageRecord> =
            (0..5).map(|i| rec(&format!("t{i}"), 0, 60, 10)).collect();
        let e = Event::from_members(members, 0).unwrap();
        let records: Vec<crate::ingest::CrewRecord> = (3..20)
            .map(|h| crate::ingest::CrewRecord { hour_start: Minute(60 * h), fte: 1.0 })
            .collect();
        let profile = CrewProfile::from_records(&records).unwrap();
        // base queue completes at hours 4..8; shifting crews 1 h earlier
        // moves every completion exactly 1 h
        let r = apply_proactive_shift(&e, &profile, 1.0, DispatchPolicy::Chronological).unwrap();
        let expected_saving = e.n_cust() as f64; // sum c_k x 1 h
        assert!(
            (r.base.a_cust - r.counterfactual.a_cust - expected_saving).abs() < 1e-9,
            "base {} cf {}",
            r.base.a_cust,
            r.counterfactual.a_cust
        );
        assert!(r.crew_hours_saved.value().unwrap() >= 0.0);
    }

    #[test]
    fn scenario_grammar_round_trips() {
        for text in
            ["speedup:0.1", "crewscale:0.1:exact", "crewscale:0.25:paper", "shift:2:largest"]
        {
            let s: Scenario = text.parse().unwrap();
            assert_eq!(s.to_string(), text);
        }
        let s: Scenario = "crewscale:0.1".parse().unwrap();
        assert_eq!(s, Scenario::CrewScale { added_fraction: 0.1, mode: CrewScaleMode::Exact });
        let s: Scenario = "shift:1.5".parse().unwrap();
        assert!(matches!(s, Scenario::ProactiveShift { policy: DispatchPolicy::Chronological, .. }));
        assert!("speedup".parse::<Scenario>().is_err());
        assert!("speedup:x".parse::<Scenario>().is_err());
        assert!("crewscale:0.1:bogus".parse::<Scenario>().is_err());
        let err = "warp:9".parse::<Scenario>().unwrap_err();
        assert!(err.to_string().contains("speedup:<fraction>"));
    }

    #[test]
    fn report_identity_rerun_has_zero_deltas_and_table_rows() {
        let e = two_outage_event();
        let r = apply_crew_scale(&e, &covering_profile(10.0), 0.0, CrewScaleMode::Exact).unwrap();
        let report = rerun_report(vec![RerunReportEntry {
            event_ordinal: 1,
            event_start: e.bounds().o_first.to_iso(),
            result: r,
        }]);
        assert_eq!(report.mean_delta_repair, Metric::Value(0.0));
        let text = report.to_text();
        for label in ["RE", "AIR", "REPAIR"] {
            assert!(text.contains(label), "missing {label} in:\n{text}");
        }
        let json = report.to_json();
        assert!(json.contains("\"delta_repair\""));
    }

    #[test]
    fn report_batches_mean_delta() {
        let e = two_outage_event();
        let p = covering_profile(10.0);
        let entries: Vec<RerunReportEntry> = (0..9)
            .map(|i| RerunReportEntry {
                event_ordinal: i + 1,
                event_start: e.bounds().o_first.to_iso(),
                result: apply_crew_scale(&e, &p, 0.1, CrewScaleMode::Exact).unwrap(),
            })
            .collect();
        let single = entries[0].result.delta_repair.value().unwrap();
        let report = rerun_report(entries);
        assert_eq!(report.results.len(), 9);
        assert!((report.mean_delta_repair.value().unwrap() - single).abs() < 1e-12);
    }
}
