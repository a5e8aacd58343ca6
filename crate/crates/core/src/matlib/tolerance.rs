use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by every semidefinite, equality and rank test
/// in the crate. One instance is threaded through all checks so that a CLI
/// override changes every decision consistently.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ToleranceConfig {
    /// Eigenvalue nonnegativity slack for Loewner and PSD tests.
    pub eig_floor: f64,
    /// Relative Frobenius residual for matrix equality tests.
    pub eq_tol: f64,
    /// Singular values below `rank_tol * sigma_max` count as zero.
    pub rank_tol: f64,
    /// Angle samples for the numerical-radius grid stage.
    pub radius_grid: usize,
    /// Iteration cap for the Riccati fixed point.
    pub riccati_max_iter: usize,
    /// Joint substitution residual target for the Riccati fixed point.
    pub riccati_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            eig_floor: 1e-9,
            eq_tol: 1e-8,
            rank_tol: 1e-10,
            radius_grid: 720,
            riccati_max_iter: 2000,
            riccati_tol: 1e-11,
        }
    }
}

impl ToleranceConfig {
    /// Panics on a config that violates the documented invariants; used at
    /// CLI ingestion so bad overrides fail fast.
    pub fn validate(&self) -> Result<(), String> {
        if !(self.eig_floor > 0.0
            && self.eq_tol > 0.0
            && self.rank_tol > 0.0
            && self.riccati_tol > 0.0)
        {
            return Err("tolerances must be strictly positive".into());
        }
        if self.radius_grid < 8 || self.riccati_max_iter < 8 {
            return Err("grid and iteration counts must be at least 8".into());
        }
        Ok(())
    }
}
