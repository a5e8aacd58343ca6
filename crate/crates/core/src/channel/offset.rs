//! Null-space offset machinery: for each user, the set of matrices B with
//! B·S = 0 (equivalently S·B† = 0). Such offsets are invisible to a
//! capacity-achieving Gaussian input with covariance S, so alignment
//! conditions only need to hold modulo them.

use super::error::ChannelError;
use super::instance::ChannelInstance;
use crate::matlib::{null_basis, CMatrix, MatError, ToleranceConfig};

/// Orthonormal basis of null(S_user) together with the projector onto
/// range(S_user). `basis` is `None` when S is nonsingular (the offset set is
/// then {0}).
#[derive(Debug, Clone)]
pub struct NullOffsetSpace {
    pub user: u8,
    pub basis: Option<CMatrix>,
    pub projector_range: CMatrix,
    s_dim: usize,
}

impl NullOffsetSpace {
    pub fn from_covariance(
        s: &CMatrix,
        user: u8,
        tol: &ToleranceConfig,
    ) -> Result<Self, ChannelError> {
        let basis = null_basis(s, tol)?;
        let n = s.rows();
        let projector_range = match &basis {
            None => CMatrix::identity(n),
            Some(b) => &CMatrix::identity(n) - &(b * &b.adjoint()),
        };
        Ok(NullOffsetSpace {
            user,
            basis,
            projector_range,
            s_dim: n,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.as_ref().map_or(0, |b| b.cols())
    }

    pub fn s_dim(&self) -> usize {
        self.s_dim
    }

    /// Projector onto null(S): I − Π_range.
    pub fn projector_null(&self) -> CMatrix {
        &CMatrix::identity(self.s_dim) - &self.projector_range
    }
}

/// Offset space of user 1 or 2 of an instance.
pub fn null_offset_space(
    inst: &ChannelInstance,
    user: u8,
    tol: &ToleranceConfig,
) -> Result<NullOffsetSpace, ChannelError> {
    match user {
        1 => NullOffsetSpace::from_covariance(&inst.s1, 1, tol),
        2 => NullOffsetSpace::from_covariance(&inst.s2, 2, tol),
        _ => Err(ChannelError::Parse(format!(
            "user must be 1 or 2, got {user}"
        ))),
    }
}

/// Membership test for the offset set: ‖B·S‖_F ≤ eq_tol·(1+‖S‖_F)(1+‖B‖_F).
pub fn membership_b(
    candidate: &CMatrix,
    s: &CMatrix,
    tol: &ToleranceConfig,
) -> Result<bool, ChannelError> {
    if candidate.cols() != s.rows() {
        return Err(ChannelError::Mat(MatError::ShapeMismatch {
            left_rows: candidate.rows(),
            left_cols: candidate.cols(),
            right_rows: s.rows(),
            right_cols: s.cols(),
        }));
    }
    let resid = (candidate * s).frobenius_norm();
    Ok(resid <= tol.eq_tol * (1.0 + s.frobenius_norm()) * (1.0 + candidate.frobenius_norm()))
}

/// Scaled offset residual ‖B·S‖ used in witness re-verification.
pub fn offset_residual(candidate: &CMatrix, s: &CMatrix) -> f64 {
    (candidate * s).frobenius_norm()
        / ((1.0 + s.frobenius_norm()) * (1.0 + candidate.frobenius_norm()))
}
