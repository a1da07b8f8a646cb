//! Instance generation, closed-form bounds, single trials and sweeps.

mod bound;
mod instance;
mod sweep;
mod trial;

pub use bound::{bound, robustness, Algorithm, BoundParams};
pub use instance::{generate, DirtySpec, Family, Instance, InstanceSpec, RandomClean, Weights};
pub use sweep::{
    plot_data, read_csv, summarize, sweep, write_csv, AlgorithmSummary, SeedRange, SweepConfig,
    SweepOutcome, CSV_HEADER,
};
pub use trial::{run_on, run_trial, run_trial_detailed, Trial, TrialParams, TrialRecord};
