//! Storm-event resilience analytics for distribution-grid outage data.
//!
//! The pipeline turns outage and crew logs into operational-resilience
//! figures:
//!
//! 1. [`ingest`] parses outage and crew CSV logs onto an integer-minute
//!    clock and validates them;
//! 2. [`events`] groups overlapping outages into storm events;
//! 3. [`processes`] builds the outage/restore/performance step-curves and
//!    integrates customer-hours exactly;
//! 4. [`metrics`] computes the per-event metric record, including the
//!    RE, AIR, and REPAIR scores;
//! 5. [`rerun`] replays an event under counterfactual crew scenarios;
//! 6. [`simlab`] generates synthetic storms and simulates crew-limited
//!    restoration so the whole pipeline can run on desk-scale data.
//!
//! [`report`] renders deterministic JSON and text output for all of it.

pub mod events;
pub mod ingest;
pub mod metrics;
pub mod processes;
pub mod report;
pub mod rerun;
pub mod simlab;
pub mod time;

pub use events::{extract_events, Event, EventBounds, Grouping, GroupingOptions};
pub use ingest::{
    parse_crew_log, parse_outage_log, validate_dataset, CrewProfile, CrewRecord, Dataset,
    DatasetMeta, OutageRecord, OutageSchema, ValidationReport,
};
pub use metrics::{compute_metrics, crew_hours, EventMetrics, Metric};
pub use processes::{StepCurve, Weighting};
pub use rerun::{run_scenario, RerunResult, Scenario};
pub use simlab::{generate_storm, simulate_restoration, DispatchPolicy, StormModel, SynthSpec};
pub use time::Minute;
