//! Synthetic storm generation and crew-limited restoration simulation.
//!
//! Storms are drawn from a non-homogeneous Poisson arrival process by
//! thinning against the peak rate. Restoration is a work-conserving
//! dispatch queue: each hour's available crew-hours flow to open tickets
//! in policy order, at most one crew team per ticket at a time, and a
//! ticket restores once its accumulated crew-hours meet its repair work.
//!
//! Randomness contract: all draws come from ChaCha8 seeded with the model's
//! `seed` via `seed_from_u64`, so a given seed produces the same storm on
//! every platform and release. The draw order per candidate arrival is:
//! inter-arrival gap, thinning acceptance, then (for accepted arrivals)
//! customer count and repair work.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Zipf};
use serde::{Deserialize, Serialize};

use crate::ingest::{CrewProfile, OutageRecord};
use crate::time::{round_to_minute, Minute};

/// One repair ticket: an outage start, its customer impact, and the
/// crew-hours of work needed to restore it.
#[derive(Debug, Clone, PartialEq)]
pub struct Ticket {
    pub id: String,
    pub start: Minute,
    pub customers: u64,
    pub repair_work_h: f64,
}

/// Piecewise-constant outage arrival rate over consecutive windows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntensitySegment {
    /// Window length in hours.
    pub hours: f64,
    /// Arrival rate in outages per hour during the window.
    pub rate: f64,
}

/// Distribution of customers affected per outage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CustomerDist {
    Fixed { value: u64 },
    UniformInt { lo: u64, hi: u64 },
    /// Discrete heavy tail (Zipf) over 1..=max with the given exponent.
    HeavyTail { exponent: f64, max: u64 },
}

/// Distribution of repair work per outage, in crew-hours.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RepairDist {
    FixedHours { value: f64 },
    UniformHours { lo: f64, hi: f64 },
    ExpHours { mean: f64 },
}

/// Full storm model: arrival intensity, per-outage draws, and the seed.
#[derive(Debug, Clone, PartialEq)]
pub struct StormModel {
    /// Instant the storm clock starts.
    pub epoch: Minute,
    pub intensity: Vec<IntensitySegment>,
    pub customers: CustomerDist,
    pub repair: RepairDist,
    pub seed: u64,
}

/// Order in which open tickets receive crews.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DispatchPolicy {
    /// Oldest ticket first (ties by id); the usual field practice.
    #[default]
    Chronological,
    /// Ticket with the most affected customers first.
    LargestCustomersFirst,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("invalid storm model: {0}")]
    BadModel(String),
    #[error("crew capacity exhausted with tickets still open: {}", ids.join(", "))]
    UnfinishedTickets { ids: Vec<String> },
    #[error("priority order must be a permutation of ticket indices")]
    BadOrder,
}

/// Draws outage arrivals by thinning a homogeneous process at the peak
/// rate. Deterministic for a given model (including seed); a zero-everywhere
/// intensity yields an empty storm.
pub fn generate_storm(model: &StormModel) -> Result<Vec<Ticket>, SimError> {
    for seg in &model.intensity {
        if seg.rate < 0.0 || seg.hours < 0.0 || !seg.rate.is_finite() || !seg.hours.is_finite() {
            return Err(SimError::BadModel("intensity segments must be non-negative".into()));
        }
    }
    validate_dists(model)?;
    let horizon_h: f64 = model.intensity.iter().map(|s| s.hours).sum();
    let rate_max = model.intensity.iter().map(|s| s.rate).fold(0.0, f64::max);
    if rate_max == 0.0 || horizon_h == 0.0 {
        return Ok(Vec::new());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
    let gap = Exp::new(rate_max).expect("positive peak rate");
    let mut tickets = Vec::new();
    let mut t_h = 0.0;
    let mut ordinal = 0usize;
    loop {
        t_h += gap.sample(&mut rng);
        if t_h >= horizon_h {
            break;
        }
        let accept: f64 = rng.random();
        if accept < rate_at(&model.intensity, t_h) / rate_max {
            ordinal += 1;
            let customers = draw_customers(&model.customers, &mut rng);
            let repair_work_h = draw_repair(&model.repair, &mut rng);
            tickets.push(Ticket {
                id: format!("s{ordinal:05}"),
                start: model.epoch.plus_minutes(round_to_minute(t_h * 60.0)),
                customers,
                repair_work_h,
            });
        }
    }
    Ok(tickets)
}

fn validate_dists(model: &StormModel) -> Result<(), SimError> {
    match model.customers {
        CustomerDist::UniformInt { lo, hi } if lo > hi => {
            return Err(SimError::BadModel("customer range reversed".into()))
        }
        CustomerDist::HeavyTail { exponent, max } if exponent <= 0.0 || max == 0 => {
            return Err(SimError::BadModel("heavy tail needs positive exponent and max".into()))
        }
        _ => {}
    }
    match model.repair {
        RepairDist::FixedHours { value } if value <= 0.0 => {
            return Err(SimError::BadModel("repair work must be positive".into()))
        }
        RepairDist::UniformHours { lo, hi } if lo <= 0.0 || lo > hi => {
            return Err(SimError::BadModel("repair range must be positive".into()))
        }
        RepairDist::ExpHours { mean } if mean <= 0.0 => {
            return Err(SimError::BadModel("repair mean must be positive".into()))
        }
        _ => {}
    }
    Ok(())
}

fn rate_at(segments: &[IntensitySegment], t_h: f64) -> f64 {
    let mut elapsed = 0.0;
    for seg in segments {
        if t_h < elapsed + seg.hours {
            return seg.rate;
        }
        elapsed += seg.hours;
    }
    0.0
}

fn draw_customers(dist: &CustomerDist, rng: &mut ChaCha8Rng) -> u64 {
    match *dist {
        CustomerDist::Fixed { value } => value,
        CustomerDist::UniformInt { lo, hi } => rng.random_range(lo..=hi),
        CustomerDist::HeavyTail { exponent, max } => {
            let zipf = Zipf::new(max as f64, exponent).expect("validated parameters");
            zipf.sample(rng).round() as u64
        }
    }
}

fn draw_repair(dist: &RepairDist, rng: &mut ChaCha8Rng) -> f64 {
    match *dist {
        RepairDist::FixedHours { value } => value,
        RepairDist::UniformHours { lo, hi } => rng.random_range(lo..=hi),
        RepairDist::ExpHours { mean } => {
            Exp::new(1.0 / mean).expect("validated parameters").sample(rng)
        }
    }
}

/// Crew availability as a minute-resolution step function, derived from an
/// hourly profile (optionally combined with a time-advanced copy of itself).
#[derive(Debug, Clone)]
pub(crate) struct Capacity {
    /// (minute, fte) steps; fte is 0 before the first point and after `end`.
    points: Vec<(i64, f64)>,
    end: i64,
}

impl Capacity {
    pub(crate) fn from_profile(profile: &CrewProfile) -> Capacity {
        Capacity {
            points: profile.samples().map(|(m, fte)| (m.0, fte)).collect(),
            end: profile.end().0,
        }
    }

    /// Availability when crews also arrive `delta_min` earlier and nobody
    /// leaves sooner than in the base profile: max(C(t), C(t + delta)).
    pub(crate) fn shifted_max(profile: &CrewProfile, delta_min: i64) -> Capacity {
        let base = Capacity::from_profile(profile);
        let mut cuts: Vec<i64> = base.points.iter().map(|&(m, _)| m).collect();
        cuts.extend(base.points.iter().map(|&(m, _)| m - delta_min));
        cuts.push(base.end);
        cuts.push(base.end - delta_min);
        cuts.sort_unstable();
        cuts.dedup();
        let points = cuts
            .iter()
            .map(|&m| (m, base.fte_at(m as f64).max(base.fte_at((m + delta_min) as f64))))
            .collect();
        Capacity { points, end: base.end }
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub(crate) fn fte_at(&self, minute: f64) -> f64 {
        if self.points.is_empty() || minute >= self.end as f64 {
            return 0.0;
        }
        let idx = self.points.partition_point(|&(m, _)| (m as f64) <= minute);
        if idx == 0 {
            0.0
        } else {
            self.points[idx - 1].1
        }
    }

    fn next_change_after(&self, minute: f64) -> Option<f64> {
        let idx = self.points.partition_point(|&(m, _)| (m as f64) <= minute);
        if let Some(&(m, _)) = self.points.get(idx) {
            return Some(m as f64);
        }
        if minute < self.end as f64 {
            return Some(self.end as f64);
        }
        None
    }

    /// Crew-hours available over `[from, to]`.
    pub(crate) fn integral_hours(&self, from: i64, to: i64) -> f64 {
        let mut fte_minutes = 0.0;
        for (i, &(m, fte)) in self.points.iter().enumerate() {
            let seg_start = m.max(from);
            let seg_end = self.points.get(i + 1).map(|&(n, _)| n).unwrap_or(self.end).min(to);
            if seg_end > seg_start {
                fte_minutes += fte * (seg_end - seg_start) as f64;
            }
        }
        fte_minutes / 60.0
    }
}

const WORK_EPS: f64 = 1e-9;

/// Simulates restoration under a dispatch policy, returning one outage
/// record per ticket with its simulated restore instant.
pub fn simulate_restoration(
    tickets: &[Ticket],
    profile: &CrewProfile,
    policy: DispatchPolicy,
) -> Result<Vec<OutageRecord>, SimError> {
    let order = priority_order(tickets, policy);
    simulate_with_capacity(tickets, &Capacity::from_profile(profile), &order)
}

/// Simulates restoration with an explicit priority order (indices into
/// `tickets`, highest priority first). This is the surface the policy
/// variants share; it also lets analyses compare arbitrary orderings.
pub fn simulate_restoration_ordered(
    tickets: &[Ticket],
    profile: &CrewProfile,
    order: &[usize],
) -> Result<Vec<OutageRecord>, SimError> {
    simulate_with_capacity(tickets, &Capacity::from_profile(profile), order)
}

/// Priority order a policy induces over tickets.
pub fn priority_order(tickets: &[Ticket], policy: DispatchPolicy) -> Vec<usize> {
    let mut order: Vec<usize> = (0..tickets.len()).collect();
    match policy {
        DispatchPolicy::Chronological => {
            order.sort_by(|&a, &b| {
                tickets[a]
                    .start
                    .cmp(&tickets[b].start)
                    .then_with(|| tickets[a].id.cmp(&tickets[b].id))
            });
        }
        DispatchPolicy::LargestCustomersFirst => {
            order.sort_by(|&a, &b| {
                tickets[b]
                    .customers
                    .cmp(&tickets[a].customers)
                    .then_with(|| tickets[a].start.cmp(&tickets[b].start))
                    .then_with(|| tickets[a].id.cmp(&tickets[b].id))
            });
        }
    }
    order
}

pub(crate) fn simulate_with_capacity(
    tickets: &[Ticket],
    capacity: &Capacity,
    order: &[usize],
) -> Result<Vec<OutageRecord>, SimError> {
    let n = tickets.len();
    if order.len() != n {
        return Err(SimError::BadOrder);
    }
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n || seen[i] {
            return Err(SimError::BadOrder);
        }
        seen[i] = true;
    }
    if n == 0 {
        return Ok(Vec::new());
    }

    let mut remaining: Vec<f64> = tickets.iter().map(|t| t.repair_work_h.max(0.0)).collect();
    let mut done_at: Vec<Option<f64>> = vec![None; n];

    let mut arrivals: Vec<usize> = (0..n).collect();
    arrivals.sort_by_key(|&i| tickets[i].start);
    let mut next_arrival = 0usize;

    let mut t = tickets[arrivals[0]].start.0 as f64;
    loop {
        while next_arrival < n && (tickets[arrivals[next_arrival]].start.0 as f64) <= t {
            next_arrival += 1;
        }
        // zero-work tickets restore the moment they arrive
        for &i in order {
            if done_at[i].is_none()
                && remaining[i] <= WORK_EPS
                && (tickets[i].start.0 as f64) <= t
            {
                done_at[i] = Some(tickets[i].start.0 as f64);
            }
        }

        let open: Vec<usize> = order
            .iter()
            .copied()
            .filter(|&i| done_at[i].is_none() && (tickets[i].start.0 as f64) <= t)
            .collect();

        if open.is_empty() {
            match arrivals.get(next_arrival) {
                Some(&i) => {
                    t = tickets[i].start.0 as f64;
                    continue;
                }
                None => break,
            }
        }

        // one team per ticket; leftover capacity flows down the order
        let mut cap_left = capacity.fte_at(t);
        let mut rates = vec![0.0f64; n];
        for &i in &open {
            let rate = cap_left.min(1.0);
            rates[i] = rate;
            cap_left -= rate;
            if cap_left <= 0.0 {
                break;
            }
        }

        let mut next_t = f64::INFINITY;
        if let Some(&i) = arrivals.get(next_arrival) {
            next_t = next_t.min(tickets[i].start.0 as f64);
        }
        if let Some(change) = capacity.next_change_after(t) {
            next_t = next_t.min(change);
        }
        for &i in &open {
            if rates[i] > 0.0 {
                next_t = next_t.min(t + remaining[i] / rates[i] * 60.0);
            }
        }
        if !next_t.is_finite() {
            let mut ids: Vec<String> = open.iter().map(|&i| tickets[i].id.clone()).collect();
            ids.sort();
            return Err(SimError::UnfinishedTickets { ids });
        }

        let dt_h = (next_t - t) / 60.0;
        for &i in &open {
            if rates[i] > 0.0 {
                remaining[i] -= rates[i] * dt_h;
                if remaining[i] <= WORK_EPS {
                    remaining[i] = 0.0;
                    done_at[i] = Some(next_t);
                }
            }
        }
        t = next_t;
    }

    let mut records: Vec<OutageRecord> = tickets
        .iter()
        .zip(&done_at)
        .map(|(ticket, done)| {
            let finish = done.expect("loop exits only when every ticket is done");
            let restore = Minute(round_to_minute(finish).max(ticket.start.0));
            OutageRecord {
                id: ticket.id.clone(),
                start: ticket.start,
                restore,
                customers: ticket.customers,
            }
        })
        .collect();
    crate::ingest::sort_records(&mut records);
    Ok(records)
}

fn default_epoch() -> String {
    "2022-06-13T00:00".to_string()
}

/// Crew staffing for a synthetic run: consecutive flat segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrewSegment {
    pub hours: u64,
    pub fte: f64,
}

/// Declarative config for the `synth` pipeline entry point: a storm model
/// plus the crew staffing and dispatch policy used to produce restore times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub seed: u64,
    #[serde(default = "default_epoch")]
    pub epoch: String,
    pub intensity: Vec<IntensitySegment>,
    pub customers: CustomerDist,
    pub repair: RepairDist,
    pub crew: Vec<CrewSegment>,
    #[serde(default)]
    pub policy: DispatchPolicy,
}

impl SynthSpec {
    pub fn storm_model(&self) -> Result<StormModel, SimError> {
        let epoch = Minute::parse(&self.epoch, crate::time::DEFAULT_TIME_FORMAT)
            .map_err(|e| SimError::BadModel(format!("bad epoch: {e}")))?;
        if epoch.0.rem_euclid(60) != 0 {
            return Err(SimError::BadModel("epoch must be hour-aligned".into()));
        }
        Ok(StormModel {
            epoch,
            intensity: self.intensity.clone(),
            customers: self.customers,
            repair: self.repair,
            seed: self.seed,
        })
    }

    pub fn crew_profile(&self) -> Result<CrewProfile, SimError> {
        let model = self.storm_model()?;
        let mut fte = Vec::new();
        for seg in &self.crew {
            fte.extend(std::iter::repeat(seg.fte).take(seg.hours as usize));
        }
        let records: Vec<crate::ingest::CrewRecord> = fte
            .iter()
            .enumerate()
            .map(|(i, &v)| crate::ingest::CrewRecord {
                hour_start: model.epoch.plus_minutes(60 * i as i64),
                fte: v,
            })
            .collect();
        CrewProfile::from_records(&records)
            .map_err(|e| SimError::BadModel(format!("bad crew spec: {e}")))
    }

    /// Generates the storm and simulates restoration, yielding records that
    /// feed straight into the events/metrics pipeline.
    pub fn run(&self) -> Result<(Vec<OutageRecord>, CrewProfile), SimError> {
        let model = self.storm_model()?;
        let tickets = generate_storm(&model)?;
        let profile = self.crew_profile()?;
        let records = simulate_restoration(&tickets, &profile, self.policy)?;
        Ok((records, profile))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ticket(id: &str, start: i64, customers: u64, work_h: f64) -> Ticket {
        Ticket { id: id.into(), start: Minute(start), customers, repair_work_h: work_h }
    }

    fn flat_model(rate: f64, hours: f64, seed: u64) -> StormModel {
        StormModel {
            epoch: Minute(0),
            intensity: vec![IntensitySegment { hours, rate }],
            customers: CustomerDist::Fixed { value: 10 },
            repair: RepairDist::FixedHours { value: 1.0 },
            seed,
        }
    }

    #[test]
    fn same_seed_same_storm() {
        let model = flat_model(10.0, 10.0, 42);
        let a = generate_storm(&model).unwrap();
        let b = generate_storm(&model).unwrap();
        assert_eq!(a, b);
        assert!(!a.is_empty());
    }

    #[test]
    fn zero_intensity_yields_empty_storm() {
        let model = flat_model(0.0, 10.0, 1);
        assert!(generate_storm(&model).unwrap().is_empty());
    }

    #[test]
    fn poisson_mean_matches_rate() {
        // lambda = 10/h for 10 h over 1000 replicates: mean count within
        // 3 standard errors of 100 (sigma/sqrt(k) = 10/sqrt(1000) = 0.316)
        let mut total = 0usize;
        for seed in 0..1000 {
            total += generate_storm(&flat_model(10.0, 10.0, seed)).unwrap().len();
        }
        let mean = total as f64 / 1000.0;
        assert!((mean - 100.0).abs() < 3.0 * 0.3163, "mean {mean}");
    }

    #[test]
    fn thinning_respects_segment_rates() {
        // second half has zero rate: no arrivals after the 5 h mark
        let model = StormModel {
            epoch: Minute(0),
            intensity: vec![
                IntensitySegment { hours: 5.0, rate: 12.0 },
                IntensitySegment { hours: 5.0, rate: 0.0 },
            ],
            customers: CustomerDist::Fixed { value: 1 },
            repair: RepairDist::FixedHours { value: 0.5 },
            seed: 7,
        };
        let storm = generate_storm(&model).unwrap();
        assert!(storm.iter().all(|t| t.start.0 <= 300));
    }

    #[test]
    fn single_ticket_single_crew() {
        let tickets = vec![ticket("a", 0, 10, 2.0)];
        let profile = CrewProfile::flat(Minute(0), 10, 1.0);
        let records =
            simulate_restoration(&tickets, &profile, DispatchPolicy::Chronological).unwrap();
        assert_eq!(records[0].restore, Minute(120));
    }

    #[test]
    fn largest_customers_first_beats_chronological_by_id() {
        let tickets = vec![ticket("a", 0, 1, 1.0), ticket("b", 0, 100, 1.0)];
        let profile = CrewProfile::flat(Minute(0), 10, 1.0);

        let lcf =
            simulate_restoration(&tickets, &profile, DispatchPolicy::LargestCustomersFirst)
                .unwrap();
        let a_cust_lcf: i64 =
            lcf.iter().map(|r| r.customers as i64 * r.duration_min()).sum::<i64>() / 60;
        assert_eq!(a_cust_lcf, 102);
        let big = lcf.iter().find(|r| r.id == "b").unwrap();
        assert_eq!(big.restore, Minute(60));

        let chrono = simulate_restoration_ordered(&tickets, &profile, &[0, 1]).unwrap();
        let a_cust_chrono: i64 =
            chrono.iter().map(|r| r.customers as i64 * r.duration_min()).sum::<i64>() / 60;
        assert_eq!(a_cust_chrono, 201);
    }

    #[test]
    fn five_equal_tickets_complete_in_start_order() {
        let tickets: Vec<Ticket> =
            (0..5).map(|i| ticket(&format!("t{i}"), i * 5, 10, 1.0)).collect();
        let profile = CrewProfile::flat(Minute(0), 10, 1.0);
        let records =
            simulate_restoration(&tickets, &profile, DispatchPolicy::Chronological).unwrap();
        for (i, r) in records.iter().enumerate() {
            assert_eq!(r.restore, Minute(60 * (i as i64 + 1)));
        }
    }

    #[test]
    fn capacity_exhaustion_reports_unfinished_tickets() {
        let tickets = vec![ticket("a", 0, 10, 5.0), ticket("b", 0, 1, 5.0)];
        let profile = CrewProfile::flat(Minute(0), 2, 1.0);
        let err =
            simulate_restoration(&tickets, &profile, DispatchPolicy::Chronological).unwrap_err();
        match err {
            SimError::UnfinishedTickets { ids } => assert_eq!(ids, ["a", "b"]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fractional_capacity_splits_rate() {
        // 0.5 FTE serving one 1 crew-hour ticket takes 2 h
        let tickets = vec![ticket("a", 0, 10, 1.0)];
        let profile = CrewProfile::flat(Minute(0), 10, 0.5);
        let records =
            simulate_restoration(&tickets, &profile, DispatchPolicy::Chronological).unwrap();
        assert_eq!(records[0].restore, Minute(120));
    }

    #[test]
    fn work_conservation_against_capacity_integral() {
        let tickets: Vec<Ticket> = (0..20)
            .map(|i| ticket(&format!("t{i}"), i * 7, (i % 5 + 1) as u64, 0.5 + (i % 4) as f64))
            .collect();
        let profile = CrewProfile::flat(Minute(0), 200, 2.0);
        let records =
            simulate_restoration(&tickets, &profile, DispatchPolicy::Chronological).unwrap();
        assert_eq!(records.len(), tickets.len());
        let total_work: f64 = tickets.iter().map(|t| t.repair_work_h).sum();
        let capacity = Capacity::from_profile(&profile);
        let last = records.iter().map(|r| r.restore.0).max().unwrap();
        // allocated work cannot exceed what the profile offered (modulo
        // minute rounding of the final restore instants)
        assert!(total_work <= capacity.integral_hours(0, last + 1) + 1e-6);
    }

    #[test]
    fn shifted_capacity_is_pointwise_max() {
        let profile = CrewProfile::from_records(&[
            crate::ingest::CrewRecord { hour_start: Minute(120), fte: 3.0 },
            crate::ingest::CrewRecord { hour_start: Minute(180), fte: 1.0 },
        ])
        .unwrap();
        let shifted = Capacity::shifted_max(&profile, 60);
        assert_eq!(shifted.fte_at(60.0), 3.0); // pulled forward
        assert_eq!(shifted.fte_at(120.0), 3.0); // max(3, 1)
        assert_eq!(shifted.fte_at(180.0), 1.0); // original tail kept
        assert_eq!(shifted.fte_at(240.0), 0.0);
    }

    #[test]
    fn synth_spec_round_trips_through_toml() {
        let spec = SynthSpec {
            seed: 9,
            epoch: "2022-06-13T00:00".into(),
            intensity: vec![IntensitySegment { hours: 6.0, rate: 8.0 }],
            customers: CustomerDist::UniformInt { lo: 1, hi: 500 },
            repair: RepairDist::UniformHours { lo: 1.0, hi: 4.0 },
            crew: vec![CrewSegment { hours: 48, fte: 12.0 }],
            policy: DispatchPolicy::Chronological,
        };
        let text = toml::to_string(&spec).unwrap();
        let back: SynthSpec = toml::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn synth_run_feeds_pipeline() {
        let spec = SynthSpec {
            seed: 3,
            epoch: "2022-06-13T00:00".into(),
            intensity: vec![IntensitySegment { hours: 8.0, rate: 5.0 }],
            customers: CustomerDist::HeavyTail { exponent: 1.5, max: 2000 },
            repair: RepairDist::UniformHours { lo: 0.5, hi: 3.0 },
            crew: vec![CrewSegment { hours: 100, fte: 6.0 }],
            policy: DispatchPolicy::LargestCustomersFirst,
        };
        let (records, _profile) = spec.run().unwrap();
        assert!(!records.is_empty());
        let generated = generate_storm(&spec.storm_model().unwrap()).unwrap();
        // n and n_cust survive the trip through simulation
        assert_eq!(records.len(), generated.len());
        let gen_cust: u64 = generated.iter().map(|t| t.customers).sum();
        let rec_cust: u64 = records.iter().map(|r| r.customers).sum();
        assert_eq!(gen_cust, rec_cust);
        assert!(records.iter().all(|r| r.restore >= r.start));
    }
}
