//! The boundary variety `Z(I) ∩ ∂B_d` and the interior characters.

mod kernel;
mod optimize;

pub use kernel::{character_check, kernel_vector, CharacterCheck, KernelVector};
pub use optimize::{boundary_sup, BoundaryMaxResult, MultistartStats, OptimizerConfig};
