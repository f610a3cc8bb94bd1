//! Instance generation, differential testing against the oracles, adaptive
//! query streams and counter accounting.

pub mod adaptive;
pub mod experiment;
pub mod gen;
pub mod report;

pub use adaptive::{adaptive_session, AdaptiveAdversary, BatchingMock};
pub use experiment::{
    accounting_check, differential_check, forced_hit, full_cycle_chains, run_trial,
    success_rate_experiment, SuccessExperiment,
};
pub use gen::{gen_instance, Distribution, Instance, InstanceSpec};
pub use report::{wilson_interval, CounterCheck, SuccessRate, TrialReport};
