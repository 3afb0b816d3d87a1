//! Graded matrix models of the compressed shift `S_i = P_F M_{z_i}|_F`.
//!
//! Every operator built from `S` and `S^*` moves each `H_n` into a single
//! `H_{n+s}`, so it is stored as a list of per-degree blocks ([`GradedOp`]).
//! Truncations to a degree window are assembled from those blocks.

mod aastar;
mod commutator;
mod essential;
mod graded;
mod shift;
mod truncation;

pub use aastar::{aa_star_fit, aa_star_residual, AaStarFit};
pub use commutator::{
    commutator_block, commutator_blocks, cross_degree_leakage, increment_slope,
    schatten_partial_sums, CommutatorSpectrum, SchattenRow, SchattenSeries, SummabilityTrend,
};
pub use essential::{
    default_schedule, essential_norm_estimate, essential_norm_estimate_with, EssentialNormTrace,
    MonotonicityViolation, WindowValue, MONOTONICITY_TOL,
};
pub use graded::GradedOp;
pub use shift::ShiftBlocks;
pub use truncation::{
    assemble_polynomial, operator_norm, operator_norm_with, BandedTruncation, NormOptions,
    TruncationBlock,
};
