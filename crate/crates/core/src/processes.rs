//! Outage, restore, and performance step-curves with exact area integration.
//!
//! Each curve is piecewise constant and right-continuous: the value at a
//! breakpoint is the post-jump level, matching the "accumulated count at
//! time t" reading. Levels are integers (customers or outage counts) and
//! areas are computed in integer customer-minutes, so the two routes to
//! customer-hours agree bit for bit.

use serde::Serialize;

use crate::events::Event;
use crate::time::{minutes_to_hours, Minute};

/// Whether curve levels count customers or outage tickets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    Customers,
    Outages,
}

/// A piecewise-constant, right-continuous function of time. The level is 0
/// before the first breakpoint; `levels[i]` holds from `breakpoints[i]`
/// until the next breakpoint (and onward for the last one).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepCurve {
    breakpoints: Vec<Minute>,
    levels: Vec<i64>,
    weighting: Weighting,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProcessError {
    #[error("curves have different weightings")]
    WeightingMismatch,
    #[error("curves have different final levels ({left} vs {right})")]
    FinalLevelMismatch { left: i64, right: i64 },
    #[error("integration bounds reversed (from > to)")]
    ReversedBounds,
    #[error("operation requires a non-empty curve")]
    EmptyCurve,
    #[error("fraction must lie in (0, 1]")]
    FractionOutOfRange,
    #[error("curve never becomes positive")]
    FlatCurve,
    #[error("curve is not non-decreasing")]
    NotMonotone,
}

impl StepCurve {
    /// Builds a curve from `(instant, jump)` deltas; jumps at equal instants
    /// merge. Zero net jumps are dropped, keeping breakpoints strictly
    /// increasing and levels free of consecutive repeats.
    pub fn from_jumps(mut jumps: Vec<(Minute, i64)>, weighting: Weighting) -> StepCurve {
        jumps.sort_by_key(|(t, _)| *t);
        let mut breakpoints = Vec::new();
        let mut levels = Vec::new();
        let mut level = 0i64;
        let mut i = 0;
        while i < jumps.len() {
            let t = jumps[i].0;
            let mut delta = 0i64;
            while i < jumps.len() && jumps[i].0 == t {
                delta += jumps[i].1;
                i += 1;
            }
            if delta != 0 {
                level += delta;
                breakpoints.push(t);
                levels.push(level);
            }
        }
        StepCurve { breakpoints, levels, weighting }
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    pub fn breakpoints(&self) -> &[Minute] {
        &self.breakpoints
    }

    pub fn levels(&self) -> &[i64] {
        &self.levels
    }

    pub fn is_empty(&self) -> bool {
        self.breakpoints.is_empty()
    }

    /// Level at instant `t` (right-continuous: at a jump, the new level).
    pub fn value_at(&self, t: Minute) -> i64 {
        let idx = self.breakpoints.partition_point(|&b| b <= t);
        if idx == 0 {
            0
        } else {
            self.levels[idx - 1]
        }
    }

    /// Level after the last jump (0 for an empty curve).
    pub fn final_level(&self) -> i64 {
        *self.levels.last().unwrap_or(&0)
    }

    /// True if levels never decrease (starting from the implicit 0).
    pub fn is_non_decreasing(&self) -> bool {
        let mut prev = 0i64;
        self.levels.iter().all(|&l| {
            let ok = l >= prev;
            prev = l;
            ok
        })
    }

    /// Largest level the curve attains (including the implicit 0).
    fn max_level(&self) -> i64 {
        self.levels.iter().copied().max().unwrap_or(0).max(0)
    }
}

/// Accumulated outages: jumps by `c_k` (customers weighting) or 1 (outages
/// weighting) at each outage instant, reaching n_cust or n at the last.
pub fn build_outage_process(event: &Event, weighting: Weighting) -> StepCurve {
    let jumps = event
        .members()
        .iter()
        .map(|m| (m.start, jump_size(m.customers, weighting)))
        .collect();
    StepCurve::from_jumps(jumps, weighting)
}

/// Accumulated restorations: same jumps as the outage process but at the
/// restore instants, so both curves share one final level.
pub fn build_restore_process(event: &Event, weighting: Weighting) -> StepCurve {
    let jumps = event
        .members()
        .iter()
        .map(|m| (m.restore, jump_size(m.customers, weighting)))
        .collect();
    StepCurve::from_jumps(jumps, weighting)
}

fn jump_size(customers: u64, weighting: Weighting) -> i64 {
    match weighting {
        Weighting::Customers => customers as i64,
        Weighting::Outages => 1,
    }
}

/// Unrestored count over time: the pointwise difference O(t) - R(t).
/// Requires matching weightings and final levels.
pub fn performance_curve(
    outage: &StepCurve,
    restore: &StepCurve,
) -> Result<StepCurve, ProcessError> {
    if outage.weighting != restore.weighting {
        return Err(ProcessError::WeightingMismatch);
    }
    if outage.final_level() != restore.final_level() {
        return Err(ProcessError::FinalLevelMismatch {
            left: outage.final_level(),
            right: restore.final_level(),
        });
    }
    let mut jumps: Vec<(Minute, i64)> = Vec::new();
    let mut push_deltas = |curve: &StepCurve, sign: i64| {
        let mut prev = 0i64;
        for (&t, &level) in curve.breakpoints.iter().zip(&curve.levels) {
            jumps.push((t, sign * (level - prev)));
            prev = level;
        }
    };
    push_deltas(outage, 1);
    push_deltas(restore, -1);
    Ok(StepCurve::from_jumps(jumps, outage.weighting))
}

/// Exact integral of the curve over `[from, to]` in level-minutes
/// (customer-minutes or outage-minutes).
pub fn area_level_minutes(
    curve: &StepCurve,
    from: Minute,
    to: Minute,
) -> Result<i64, ProcessError> {
    if from > to {
        return Err(ProcessError::ReversedBounds);
    }
    let mut total = 0i64;
    for (i, (&t, &level)) in curve.breakpoints.iter().zip(&curve.levels).enumerate() {
        let seg_start = t.max(from);
        let seg_end = match curve.breakpoints.get(i + 1) {
            Some(&next) => next.min(to),
            None => to,
        };
        if seg_end > seg_start {
            total += level * seg_end.minutes_since(seg_start);
        }
    }
    Ok(total)
}

/// Integral over `[from, to]` in customer-hours (or outage-hours): the
/// exact minute integral divided by 60.
pub fn area(curve: &StepCurve, from: Minute, to: Minute) -> Result<f64, ProcessError> {
    Ok(area_level_minutes(curve, from, to)? as f64 / 60.0)
}

/// Maximum level the curve attains. Errors on an empty curve.
pub fn curve_max(curve: &StepCurve) -> Result<i64, ProcessError> {
    if curve.is_empty() {
        return Err(ProcessError::EmptyCurve);
    }
    Ok(curve.max_level())
}

/// Earliest instant at which a non-decreasing curve reaches
/// `fraction * final_level`, for fractions in (0, 1].
pub fn quantile_crossing(curve: &StepCurve, fraction: f64) -> Result<Minute, ProcessError> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(ProcessError::FractionOutOfRange);
    }
    if !curve.is_non_decreasing() {
        return Err(ProcessError::NotMonotone);
    }
    let final_level = curve.final_level();
    if final_level <= 0 {
        return Err(ProcessError::FlatCurve);
    }
    // Levels are integers, so a hair of slack below the threshold cannot
    // admit a level that is genuinely short of it.
    let threshold = fraction * final_level as f64 - 1e-9;
    for (&t, &level) in curve.breakpoints.iter().zip(&curve.levels) {
        if level as f64 >= threshold {
            return Ok(t);
        }
    }
    Ok(*curve.breakpoints.last().unwrap())
}

/// One sample row of plot-ready data.
#[derive(Debug, Clone, Serialize)]
pub struct PlotRow {
    pub t_iso: String,
    pub minutes_from_o1: i64,
    pub o_cust: i64,
    pub r_cust: i64,
    pub p_cust: i64,
    pub o_n: i64,
    pub r_n: i64,
    pub p_n: i64,
    pub crew_fte: f64,
}

/// The four process curves of one event.
#[derive(Debug, Clone)]
pub struct ProcessSet {
    pub outage_cust: StepCurve,
    pub restore_cust: StepCurve,
    pub outage_count: StepCurve,
    pub restore_count: StepCurve,
}

impl ProcessSet {
    pub fn for_event(event: &Event) -> ProcessSet {
        ProcessSet {
            outage_cust: build_outage_process(event, Weighting::Customers),
            restore_cust: build_restore_process(event, Weighting::Customers),
            outage_count: build_outage_process(event, Weighting::Outages),
            restore_count: build_restore_process(event, Weighting::Outages),
        }
    }

    /// Samples all curves at every breakpoint plus hourly grid points from
    /// the first outage, with the crew FTE level alongside.
    pub fn plot_rows(&self, crew_fte_at: impl Fn(Minute) -> f64) -> Vec<PlotRow> {
        let mut instants: Vec<Minute> = self
            .outage_cust
            .breakpoints
            .iter()
            .chain(&self.restore_cust.breakpoints)
            .chain(&self.outage_count.breakpoints)
            .chain(&self.restore_count.breakpoints)
            .copied()
            .collect();
        if instants.is_empty() {
            return Vec::new();
        }
        let o1 = *instants.iter().min().unwrap();
        let end = *instants.iter().max().unwrap();
        let mut t = o1;
        while t <= end {
            instants.push(t);
            t = t.plus_minutes(60);
        }
        instants.sort_unstable();
        instants.dedup();
        instants
            .into_iter()
            .map(|t| PlotRow {
                t_iso: t.to_iso(),
                minutes_from_o1: t.minutes_since(o1),
                o_cust: self.outage_cust.value_at(t),
                r_cust: self.restore_cust.value_at(t),
                p_cust: self.outage_cust.value_at(t) - self.restore_cust.value_at(t),
                o_n: self.outage_count.value_at(t),
                r_n: self.restore_count.value_at(t),
                p_n: self.outage_count.value_at(t) - self.restore_count.value_at(t),
                crew_fte: crew_fte_at(t),
            })
            .collect()
    }

    /// Event customer-hours: the area under the customer performance curve
    /// over the event span, in exact customer-minutes.
    pub fn customer_minutes(&self) -> Result<i64, ProcessError> {
        let perf = performance_curve(&self.outage_cust, &self.restore_cust)?;
        let from = self.outage_cust.breakpoints.first().copied().unwrap_or(Minute(0));
        let to = self.restore_cust.breakpoints.last().copied().unwrap_or(from);
        area_level_minutes(&perf, from, to.max(from))
    }
}

/// Total customer-hours as the per-record sum of customers x duration, the
/// other route to the same quantity as the performance-curve area.
pub fn customer_minutes_from_records(event: &Event) -> i64 {
    event.members().iter().map(|m| m.customers as i64 * m.duration_min()).sum()
}

/// Hours representation of a minute-exact area.
pub fn customer_hours(customer_minutes: i64) -> f64 {
    minutes_to_hours(customer_minutes)
}
