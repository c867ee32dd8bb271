//! Instance generation, sweeps, adversarial search and the check suites.

pub mod rng;
pub mod sample;
pub mod search;
pub mod suites;
pub mod sweep;

pub use rng::{trial_rng, TrialRng};
pub use sample::{sample_hermitian, sample_pair};
pub use search::{adversarial_search, Objective, SearchConfig, SearchOutcome};
pub use suites::{run_suite, CheckOutcome, Failure, Suite, SuiteConfig, SuiteOutcome};
pub use sweep::{
    run_sweep, write_csv, Structure, SweepOutcome, SweepSummary, TrialConfig, TrialRecord,
    CSV_HEADER,
};
