use serde_json::{json, Map, Value};

use crate::channel::{matrix_to_value, offset_residual, ChannelInstance};
use crate::matlib::{loewner_margin, pinv, sigma_max, CMatrix, ToleranceConfig};

/// Which alignment equation a contraction witness certifies. The role fixes
/// the (target, factor, covariance) triple so a witness can be re-verified
/// from the instance alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractionRole {
    /// H1 = A·H3 + B with B ∈ B_1 (interference into receiver 2 is strong).
    AlignedDirect1,
    /// H4 = A·H2 + B with B ∈ B_2 (interference into receiver 1 is strong).
    AlignedDirect2,
    /// H3 = K·H1 + B with B ∈ B_1, K = A† (noisy cross link at receiver 2).
    NoisyCross1,
    /// H2 = K·H4 + B with B ∈ B_2, K = A† (noisy cross link at receiver 1).
    NoisyCross2,
}

impl ContractionRole {
    /// The same condition expressed on the user-swapped instance: renaming
    /// H1 <-> H4, H2 <-> H3, S1 <-> S2 exchanges the user-1 and user-2 roles.
    pub fn swapped(&self) -> ContractionRole {
        match self {
            ContractionRole::AlignedDirect1 => ContractionRole::AlignedDirect2,
            ContractionRole::AlignedDirect2 => ContractionRole::AlignedDirect1,
            ContractionRole::NoisyCross1 => ContractionRole::NoisyCross2,
            ContractionRole::NoisyCross2 => ContractionRole::NoisyCross1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ContractionRole::AlignedDirect1 => "H1 = A H3 + B1",
            ContractionRole::AlignedDirect2 => "H4 = A H2 + B2",
            ContractionRole::NoisyCross1 => "H3 = K H1 + B1",
            ContractionRole::NoisyCross2 => "H2 = K H4 + B2",
        }
    }

    /// (target G, factor F, covariance S) of the equation G = A·F + B.
    pub fn triple<'a>(&self, inst: &'a ChannelInstance) -> (&'a CMatrix, &'a CMatrix, &'a CMatrix) {
        match self {
            ContractionRole::AlignedDirect1 => (&inst.h1, &inst.h3, &inst.s1),
            ContractionRole::AlignedDirect2 => (&inst.h4, &inst.h2, &inst.s2),
            ContractionRole::NoisyCross1 => (&inst.h3, &inst.h1, &inst.s1),
            ContractionRole::NoisyCross2 => (&inst.h2, &inst.h4, &inst.s2),
        }
    }
}

/// A pair (A, B) certifying a factorization G = A·F + B with σ_max(A) ≤ 1
/// and B in the null-space offset set of S.
#[derive(Debug, Clone)]
pub struct ContractionWitness {
    pub a: CMatrix,
    pub b: CMatrix,
    pub sigma_max_a: f64,
    /// ‖B·S‖ scaled by (1+‖S‖)(1+‖B‖).
    pub offset_residual: f64,
    /// ‖G − A·F − B‖ scaled by 1+‖G‖.
    pub factor_residual: f64,
    /// λ_min(F†F − (G−B)†(G−B)), the Loewner slack of the feasibility test.
    pub loewner_margin: f64,
}

impl ContractionWitness {
    /// Recompute every certificate quantity from scratch and check it
    /// against the stated tolerances. Independent of the solver that
    /// produced the witness.
    pub fn reverify(
        &self,
        g: &CMatrix,
        f: &CMatrix,
        s: &CMatrix,
        tol: &ToleranceConfig,
    ) -> Result<(), String> {
        let smax = sigma_max(&self.a);
        if smax > 1.0 + tol.eig_floor {
            return Err(format!("sigma_max(A) = {smax} exceeds 1"));
        }
        let off = offset_residual(&self.b, s);
        if off > tol.eq_tol {
            return Err(format!("offset residual {off:.3e} exceeds eq_tol"));
        }
        let recon = &(&self.a * f) + &self.b;
        let resid = recon.distance(g) / (1.0 + g.frobenius_norm());
        if resid > tol.eq_tol {
            return Err(format!("factorization residual {resid:.3e} exceeds eq_tol"));
        }
        Ok(())
    }

    pub fn reverify_role(
        &self,
        role: ContractionRole,
        inst: &ChannelInstance,
        tol: &ToleranceConfig,
    ) -> Result<(), String> {
        let (g, f, s) = role.triple(inst);
        self.reverify(g, f, s, tol)
    }

    pub fn to_json_fields(&self) -> Vec<(String, Value)> {
        vec![
            ("A".into(), matrix_to_value(&self.a)),
            ("B".into(), matrix_to_value(&self.b)),
            ("sigma_max_A".into(), json!(self.sigma_max_a)),
            ("offset_residual".into(), json!(self.offset_residual)),
            ("factor_residual".into(), json!(self.factor_residual)),
            ("loewner_margin".into(), json!(self.loewner_margin)),
        ]
    }
}

/// Everything needed to re-verify a noisy-interference certification:
/// the alignment matrices A1, A2 and offsets B1, B2 of the cross-link
/// equations, the Riccati data M_i / W_i / Φ_i with their numerical radii,
/// and the fixed-point solutions Σ_i when the solver converged.
#[derive(Debug, Clone)]
pub struct RiccatiCertificate {
    pub a1: CMatrix,
    pub a2: CMatrix,
    pub b1: CMatrix,
    pub b2: CMatrix,
    pub m1: CMatrix,
    pub m2: CMatrix,
    pub w1: CMatrix,
    pub w2: CMatrix,
    pub phi1: Option<CMatrix>,
    pub phi2: Option<CMatrix>,
    pub radius1: Option<f64>,
    pub radius2: Option<f64>,
    pub sigma1: Option<CMatrix>,
    pub sigma2: Option<CMatrix>,
    pub feasible: bool,
}

impl RiccatiCertificate {
    /// Independent re-verification against the instance: offsets belong to
    /// the null spaces, A1/A2 solve the cross-link equations, M/W/Φ and the
    /// radii are reproduced, and any Σ's satisfy the fixed-point equations
    /// with the required orderings.
    pub fn reverify(&self, inst: &ChannelInstance, tol: &ToleranceConfig) -> Result<(), String> {
        use crate::matlib::{inv_sqrtm_hpd, numerical_radius, solve_hpd};

        let off1 = offset_residual(&self.b1, &inst.s1);
        let off2 = offset_residual(&self.b2, &inst.s2);
        if off1 > tol.eq_tol || off2 > tol.eq_tol {
            return Err(format!(
                "offset residuals {off1:.3e}/{off2:.3e} exceed eq_tol"
            ));
        }
        // Cross-link equations: H3 = A1†(I + H2 S2 H2†)^{-1} H1 + B1 and the
        // symmetric counterpart.
        let n1 = &CMatrix::identity(inst.r1()) + &(&(&inst.h2 * &inst.s2) * &inst.h2.adjoint());
        let n2 = &CMatrix::identity(inst.r2()) + &(&(&inst.h3 * &inst.s1) * &inst.h3.adjoint());
        let lhs1 = &(&self.a1.adjoint() * &solve_hpd(&n1, &inst.h1).map_err(|e| e.to_string())?)
            + &self.b1;
        let resid1 = lhs1.distance(&inst.h3) / (1.0 + inst.h3.frobenius_norm());
        let lhs2 = &(&self.a2.adjoint() * &solve_hpd(&n2, &inst.h4).map_err(|e| e.to_string())?)
            + &self.b2;
        let resid2 = lhs2.distance(&inst.h2) / (1.0 + inst.h2.frobenius_norm());
        if resid1 > tol.eq_tol || resid2 > tol.eq_tol {
            return Err(format!(
                "cross-link equation residuals {resid1:.3e}/{resid2:.3e} exceed eq_tol"
            ));
        }
        // M and W reconstruction.
        let m1 = &(&CMatrix::identity(self.a1.cols()) - &(&self.a1.adjoint() * &self.a1))
            - &(&self.a2 * &self.a2.adjoint());
        let m2 = &(&CMatrix::identity(self.a1.rows()) - &(&self.a1 * &self.a1.adjoint()))
            - &(&self.a2.adjoint() * &self.a2);
        if m1.distance(&self.m1) > tol.eq_tol * (1.0 + m1.frobenius_norm())
            || m2.distance(&self.m2) > tol.eq_tol * (1.0 + m2.frobenius_norm())
        {
            return Err("M matrices do not match the A matrices".into());
        }
        let w1 = &self.a1.adjoint() * &self.a2.adjoint();
        if w1.distance(&self.w1) > tol.eq_tol * (1.0 + w1.frobenius_norm()) {
            return Err("W1 does not match A1†A2†".into());
        }
        if self.feasible {
            let (r1c, r2c) = (
                self.radius1.ok_or("feasible certificate missing radius1")?,
                self.radius2.ok_or("feasible certificate missing radius2")?,
            );
            let mih1 = inv_sqrtm_hpd(&self.m1, tol).map_err(|e| format!("M1 not PD: {e}"))?;
            let mih2 = inv_sqrtm_hpd(&self.m2, tol).map_err(|e| format!("M2 not PD: {e}"))?;
            let phi1 = &(&mih1 * &self.w1) * &mih1;
            let phi2 = &(&mih2 * &self.w2) * &mih2;
            let rr1 = numerical_radius(&phi1, tol).map_err(|e| e.to_string())?;
            let rr2 = numerical_radius(&phi2, tol).map_err(|e| e.to_string())?;
            if (rr1 - r1c).abs() > 1e-6 * (1.0 + rr1) || (rr2 - r2c).abs() > 1e-6 * (1.0 + rr2) {
                return Err(format!(
                    "radii do not reproduce: {rr1:.8} vs {r1c:.8}, {rr2:.8} vs {r2c:.8}"
                ));
            }
            if rr1 > 0.5 + tol.eig_floor || rr2 > 0.5 + tol.eig_floor {
                return Err("feasible certificate with radius above 1/2".into());
            }
        }
        if let (Some(s1), Some(s2)) = (&self.sigma1, &self.sigma2) {
            let i1 = CMatrix::identity(s1.rows());
            let i2 = CMatrix::identity(s2.rows());
            let rhs1 = &i1
                - &(&self.a2 * &solve_hpd(s2, &self.a2.adjoint()).map_err(|e| e.to_string())?);
            let rhs2 = &i2
                - &(&self.a1 * &solve_hpd(s1, &self.a1.adjoint()).map_err(|e| e.to_string())?);
            let sub1 = s1.distance(&rhs1);
            let sub2 = s2.distance(&rhs2);
            if sub1 + sub2 > 10.0 * tol.riccati_tol {
                return Err(format!(
                    "fixed-point substitution residual {:.3e} exceeds tolerance",
                    sub1 + sub2
                ));
            }
            // A_i†A_i ⪯ Σ_i with equality allowed
            let a1a = &self.a1.adjoint() * &self.a1;
            let a2a = &self.a2.adjoint() * &self.a2;
            let t = tol;
            let margin1 = loewner_margin(&a1a, s1, t).map_err(|e| e.to_string())?;
            let margin2 = loewner_margin(&a2a, s2, t).map_err(|e| e.to_string())?;
            let floor1 = -t.eig_floor * (1.0 + a1a.frobenius_norm() + s1.frobenius_norm());
            let floor2 = -t.eig_floor * (1.0 + a2a.frobenius_norm() + s2.frobenius_norm());
            if margin1 < floor1 || margin2 < floor2 {
                return Err("A_i†A_i ⪯ Σ_i violated".into());
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("A1".into(), matrix_to_value(&self.a1));
        m.insert("A2".into(), matrix_to_value(&self.a2));
        m.insert("B1".into(), matrix_to_value(&self.b1));
        m.insert("B2".into(), matrix_to_value(&self.b2));
        m.insert("M1".into(), matrix_to_value(&self.m1));
        m.insert("M2".into(), matrix_to_value(&self.m2));
        if let Some(p) = &self.phi1 {
            m.insert("Phi1".into(), matrix_to_value(p));
        }
        if let Some(p) = &self.phi2 {
            m.insert("Phi2".into(), matrix_to_value(p));
        }
        m.insert(
            "radius1".into(),
            self.radius1.map(|r| json!(r)).unwrap_or(Value::Null),
        );
        m.insert(
            "radius2".into(),
            self.radius2.map(|r| json!(r)).unwrap_or(Value::Null),
        );
        if let Some(s) = &self.sigma1 {
            m.insert("Sigma1".into(), matrix_to_value(s));
        }
        if let Some(s) = &self.sigma2 {
            m.insert("Sigma2".into(), matrix_to_value(s));
        }
        m.insert("feasible".into(), json!(self.feasible));
        Value::Object(m)
    }
}

/// Default offset of the Douglas-style feasibility test: the component of
/// the target invisible to a capacity-achieving input, B = G·(I − Π_range).
pub fn projection_offset(g: &CMatrix, projector_range: &CMatrix) -> CMatrix {
    g - &(g * projector_range)
}

/// The minimal-norm factor solving A·F ≈ G − B.
pub fn factor_for(g: &CMatrix, f: &CMatrix, b: &CMatrix, tol: &ToleranceConfig) -> CMatrix {
    &(g - b) * &pinv(f, tol)
}
