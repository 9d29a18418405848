//! Monte Carlo power of IUT, UIT and aiaUIT for correlated endpoints.

pub mod engine;
pub mod scenario;

pub use engine::{
    replicate_rng, run_replicate, run_table, simulate_power, simulate_power_with, PowerRow,
    ReplicateRecord, SimOptions, MAX_RETRIES,
};
pub use scenario::{Design, Scenario};
