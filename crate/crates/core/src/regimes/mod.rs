//! Regime decision and witness construction: which of the known-capacity
//! interference regimes an instance satisfies, certified by contraction
//! factorizations, alignment matrices and Riccati fixed points that are all
//! independently re-verifiable.

mod checks;
mod contraction;
mod error;
mod noisy;
mod report;
mod witness;

pub use checks::{
    check_aligned_strong, check_markov_condition, check_mixed, check_very_strong, classify,
    very_strong_margins,
};
pub use contraction::{solve_contraction, solve_contraction_for, ContractionOutcome};
pub use error::RegimeError;
pub use noisy::{
    build_noisy_a, check_noisy_two_sided, check_noisy_zic, consistent_offset, riccati_feasible,
    riccati_solve, RiccatiFeasibility,
};
pub use report::{Regime, RegimeReport, RegimeWitness, Satisfaction, Verdict};
pub use witness::{ContractionRole, ContractionWitness, RiccatiCertificate};
