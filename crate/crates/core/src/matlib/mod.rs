//! Self-contained numerical kernel for complex Hermitian linear algebra:
//! log-det, Loewner comparisons, pseudo-inverse, null-space bases, Hermitian
//! square roots, numerical radius and singular values.
//!
//! Everything is a pure function of its inputs and the [`ToleranceConfig`];
//! there is no shared mutable state.

mod cmatrix;
mod eig;
mod error;
mod ops;
mod random;
mod svd;
mod tolerance;

pub use cmatrix::CMatrix;
pub use eig::{cholesky, eigh, inv_hpd, solve_hpd};
pub use error::MatError;
pub use ops::{
    approx_eq, inv_sqrtm_hpd, is_contraction, is_left_invertible, loewner_leq, loewner_margin,
    logdet_hpd, null_basis, numerical_radius, numerical_radius_detailed, pinv, pinv_with_cutoff,
    rank, sqrtm_hpd, RadiusEstimate,
};
pub use random::{
    random_complex, random_hermitian, random_hpd, random_psd_rank, random_real, random_unit_vector,
    random_with_sigma_max,
};
pub use svd::{sigma_max, svd, Svd};
pub use tolerance::ToleranceConfig;
