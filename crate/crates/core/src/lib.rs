//! Compressions of the d-shift to complements of homogeneous ideals in
//! Drury-Arveson and Besov-Sobolev spaces.
//!
//! Everything is graded: a [`GradedComplementBasis`] holds orthonormal bases
//! of `H_n = P_n ⊖ I_n` degree by degree, [`ShiftBlocks`] the matrices of
//! `S_i : H_n -> H_{n+1}`, and the remaining modules turn those blocks into
//! norms, essential-norm grids, commutator spectra, boundary maxima and
//! configuration-driven reports.

pub mod boundary;
pub mod error;
pub mod ideal;
pub mod linalg;
pub mod operator;
pub mod poly;
pub mod report;

pub use boundary::{boundary_sup, character_check, kernel_vector, BoundaryMaxResult, KernelVector, OptimizerConfig};
pub use error::{LabError, Result};
pub use ideal::{hilbert_function, GradedComplementBasis, HilbertFunction, HomogeneousIdeal, DEFAULT_RANK_TOL};
pub use operator::{
    aa_star_residual, assemble_polynomial, commutator_blocks, essential_norm_estimate, operator_norm,
    schatten_partial_sums, BandedTruncation, EssentialNormTrace, ShiftBlocks,
};
pub use poly::{
    besov_weight, monomial_norm_sq, Complex, HomogeneousPolynomial, MultiIndex, PolyMatrix, Polynomial,
    WeightScheme,
};
