//! Experiment harness: configuration, simulation, baselines, drivers, and
//! deterministic serialization.
//!
//! The harness owns everything that is *about running experiments* rather
//! than about the mechanism itself: drawing valuations from configured
//! distributions, simulating equilibrium bid data, training/evaluating both
//! reserve learners, the SNE recovery baseline, and reading/writing the
//! dataset and result files with provenance hashes.
//!
//! Determinism contract: all randomness flows from
//! [`ExperimentConfig::master_seed`] through labelled [`crate::seed::SeedTree`]
//! nodes, and all emitted files are pure functions of the configuration —
//! re-running any driver reproduces its outputs byte for byte.

pub mod config;
pub mod experiments;
pub mod io;
pub mod simulate;
pub mod sne;
pub mod stats;

pub use config::{sample_valuations, ExperimentConfig, ValuationDist};
pub use experiments::{
    run_convergence, run_histograms, run_learn, run_table1, LearnMethod, ResultRecord, Table1Run,
};
pub use simulate::{fit_bid_function, simulate_auctions, Dataset, Provenance, Simulation};
pub use sne::sne_recover;
pub use stats::{ks_distance, Histogram};
