//! Grouping outages into storm events by temporal overlap.
//!
//! An event is a maximal set of outages whose outage-restore intervals
//! chain together: it opens with an outage that begins while nothing else
//! in the group is pending, and closes the first time every member has
//! been restored. Touching endpoints count as overlap, because the system
//! is not whole for any positive duration between them.

use serde::Serialize;

use crate::ingest::{sort_records, OutageRecord};
use crate::time::Minute;

/// Controls for event extraction.
#[derive(Debug, Clone, Copy)]
pub struct GroupingOptions {
    /// Two intervals separated by at most this many minutes are still
    /// considered overlapping. 0 reproduces strict overlap; positive values
    /// absorb clock jitter in real feeds.
    pub slack_min: i64,
    /// Events with fewer members are dropped from the main list (but still
    /// reported, so the filtering is auditable).
    pub min_outages: usize,
}

impl Default for GroupingOptions {
    fn default() -> Self {
        GroupingOptions { slack_min: 0, min_outages: 1 }
    }
}

/// A storm event: member outages plus the sorted outage/restore instants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    members: Vec<OutageRecord>,
    outage_times: Vec<Minute>,
    restore_times: Vec<Minute>,
}

/// The four boundary instants of an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EventBounds {
    /// First outage instant.
    pub o_first: Minute,
    /// Last outage instant.
    pub o_last: Minute,
    /// First restore instant.
    pub r_first: Minute,
    /// Last restore instant; the event ends here.
    pub r_last: Minute,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EventError {
    #[error("an event requires at least one outage")]
    Empty,
    #[error("member intervals do not form a single connected span (gap after {at})")]
    Disconnected { at: Minute },
}

impl Event {
    /// Builds an event from member records, checking that their intervals
    /// form one connected span under `slack_min`.
    pub fn from_members(members: Vec<OutageRecord>, slack_min: i64) -> Result<Self, EventError> {
        if members.is_empty() {
            return Err(EventError::Empty);
        }
        let mut members = members;
        sort_records(&mut members);
        let mut cover_end = members[0].restore;
        for m in &members[1..] {
            if m.start.minutes_since(cover_end) > slack_min {
                return Err(EventError::Disconnected { at: cover_end });
            }
            cover_end = cover_end.max(m.restore);
        }
        Ok(Self::from_sorted_members(members))
    }

    /// Builds an event without the connectivity check. Counterfactual
    /// reruns shrink durations, which can open gaps inside a historical
    /// event; the ticket set is still analyzed as one event.
    pub(crate) fn from_members_unchecked(mut members: Vec<OutageRecord>) -> Self {
        sort_records(&mut members);
        Self::from_sorted_members(members)
    }

    fn from_sorted_members(members: Vec<OutageRecord>) -> Self {
        let outage_times: Vec<Minute> = members.iter().map(|m| m.start).collect();
        let mut restore_times: Vec<Minute> = members.iter().map(|m| m.restore).collect();
        restore_times.sort_unstable();
        Event { members, outage_times, restore_times }
    }

    pub fn members(&self) -> &[OutageRecord] {
        &self.members
    }

    /// Outage instants o_1 <= ... <= o_n.
    pub fn outage_times(&self) -> &[Minute] {
        &self.outage_times
    }

    /// Restore instants r_1 <= ... <= r_n. Restores may complete out of
    /// outage order; this is the sorted multiset.
    pub fn restore_times(&self) -> &[Minute] {
        &self.restore_times
    }

    /// Number of member outages.
    pub fn n(&self) -> u64 {
        self.members.len() as u64
    }

    /// Total customers outaged across members.
    pub fn n_cust(&self) -> u64 {
        self.members.iter().map(|m| m.customers).sum()
    }

    /// The four boundary instants (o_1, o_n, r_1, r_n).
    pub fn bounds(&self) -> EventBounds {
        EventBounds {
            o_first: self.outage_times[0],
            o_last: *self.outage_times.last().unwrap(),
            r_first: self.restore_times[0],
            r_last: *self.restore_times.last().unwrap(),
        }
    }
}

/// Extraction output: events meeting `min_outages`, and the groups that
/// were filtered out.
#[derive(Debug, Clone, Default)]
pub struct Grouping {
    pub events: Vec<Event>,
    pub dropped: Vec<Event>,
}

/// Groups records into maximal overlap events, ordered by first outage.
/// Every record lands in exactly one group before `min_outages` filtering.
pub fn extract_events(records: &[OutageRecord], opts: &GroupingOptions) -> Grouping {
    let mut sorted = records.to_vec();
    sort_records(&mut sorted);

    let mut groups: Vec<Vec<OutageRecord>> = Vec::new();
    let mut current: Vec<OutageRecord> = Vec::new();
    let mut cover_end = Minute(i64::MIN);
    for record in sorted {
        if !current.is_empty() && record.start.minutes_since(cover_end) > opts.slack_min {
            groups.push(std::mem::take(&mut current));
            cover_end = Minute(i64::MIN);
        }
        cover_end = if current.is_empty() { record.restore } else { cover_end.max(record.restore) };
        current.push(record);
    }
    if !current.is_empty() {
        groups.push(current);
    }

    let mut out = Grouping::default();
    for members in groups {
        let event = Event::from_sorted_members(members);
        if (event.n() as usize) < opts.min_outages {
            out.dropped.push(event);
        } else {
            out.events.push(event);
        }
    }
    out
}
