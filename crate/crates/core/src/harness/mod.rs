//! Monte Carlo harness: configuration, trial runner, reports and the
//! pairing study.

pub mod config;
pub mod experiment;
pub mod pairing_study;
pub mod report;
pub mod stats;

pub use config::ExperimentConfig;
pub use experiment::run_experiment;
pub use pairing_study::{run_pairing_study, PairingStudyConfig};
pub use report::ThroughputReport;
