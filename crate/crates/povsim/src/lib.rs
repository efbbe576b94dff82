//! povsim — a deterministic simulation lab that pits a deprivation-counting
//! classifier against a latent-variable pairwise Markov random field on
//! synthetic populations, and emits per-run result tables, disagreement
//! records and a predictive-value figure.
//!
//! The pipeline, repeated once per seed:
//!
//! 1. [`synthgen`] draws a population of individuals with a hidden binary
//!    status and conditionally independent binary indicators, then forces
//!    adjacent indicators to match with a small probability and splits the
//!    records into train and test sets.
//! 2. [`af`] classifies by counting (weighted) deprivations against a
//!    threshold k.
//! 3. [`mrf`] fits star-plus-chain pairwise potentials from training counts
//!    and classifies by thresholding the exact posterior of the latent
//!    status given all indicators.
//! 4. [`metrics`] and [`experiment`] evaluate both methods per run and
//!    aggregate across runs; [`report`] writes the CSV/SVG artifacts.
//!
//! Every random draw comes from [`rng::RngStream`], a self-contained
//! splitmix64 generator, so identical configurations produce byte-identical
//! outputs on any platform.
//!
//! Runnable walkthroughs live in `examples/`; the `povsim` binary exposes
//! the same pipeline as `run`, `gen` and `classify` subcommands.

pub mod af;
pub mod cli;
pub mod config;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod mrf;
pub mod report;
pub mod rng;
pub mod synthgen;

pub use af::{classify_af, decide_af, deprivation_count, AfDecision};
pub use config::SimConfig;
pub use error::{Error, Result};
pub use experiment::{run_experiment, run_one, AggregateReport, RunResult};
pub use metrics::{agreement, confusion, mean_ci, ConfusionMatrix, DisagreementRow};
pub use mrf::{classify_mrf, fit, posterior_z, Evidence, FactorTable, MrfModel};
pub use report::{run_and_write_all, ExperimentOutput};
pub use rng::RngStream;
pub use synthgen::{
    generate_population, inject_correlation, sample_individual, split, Dataset, Record,
};
