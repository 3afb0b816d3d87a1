//! Configuration-driven experiment runs.

mod compare;
mod config;
mod runner;

pub use compare::{compare, Verdict, VerdictKind};
pub use config::{
    AaStarSpec, BesovSpec, CharacterSpec, CommutatorSpec, EssnormSpec, Experiment, IdealConfig, MatrixSpec,
    RunConfig, Tolerances, SCHEMA_VERSION,
};
pub use runner::{dims, run, run_path, summary, ExperimentReport, RunOptions, RunReport, Status, Table};
