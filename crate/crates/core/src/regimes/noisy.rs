//! Noisy-interference certification: alignment matrices for the cross-link
//! equations, the Φ numerical-radius feasibility test, and the coupled
//! fixed-point equations for the auxiliary noise covariances Σ1, Σ2.

use super::contraction::{solve_contraction, ContractionOutcome};
use super::error::RegimeError;
use super::report::{RegimeWitness, Satisfaction, Verdict};
use super::witness::{ContractionRole, RiccatiCertificate};
use crate::channel::{
    membership_b, null_offset_space, offset_residual, ChannelInstance, NullOffsetSpace,
};
use crate::matlib::{
    eigh, inv_sqrtm_hpd, loewner_margin, numerical_radius, pinv, pinv_with_cutoff, solve_hpd,
    CMatrix, ToleranceConfig,
};

/// One-sided noisy interference: H2 = A†·H4 + B with
/// σ_max(A) ≤ 1 and B an admissible offset for user 2. The returned factor K
/// plays the role of A†; the contraction property is invariant under †.
pub fn check_noisy_zic(
    inst: &ChannelInstance,
    tol: &ToleranceConfig,
) -> Result<(Verdict, Option<super::witness::ContractionWitness>), RegimeError> {
    if !inst.is_zic() {
        return Err(RegimeError::NotZic);
    }
    let space = null_offset_space(inst, 2, tol)?;
    let outcome = solve_contraction(&inst.h2, &inst.h4, &space, None, tol, &inst.s2)?;
    Ok(zic_outcome_to_verdict(outcome))
}

fn zic_outcome_to_verdict(
    outcome: ContractionOutcome,
) -> (Verdict, Option<super::witness::ContractionWitness>) {
    match outcome {
        ContractionOutcome::Feasible(w) => {
            let sat = if w.loewner_margin > 0.0 {
                Satisfaction::Satisfied
            } else {
                Satisfaction::SatisfiedWithinTolerance
            };
            let verdict = Verdict {
                satisfaction: sat,
                margin: Some(w.loewner_margin),
                metrics: vec![
                    ("sigma_max_K".into(), w.sigma_max_a),
                    ("loewner_margin".into(), w.loewner_margin),
                ],
                note: None,
                witness: Some(RegimeWitness::Contractions(vec![(
                    ContractionRole::NoisyCross2,
                    w.clone(),
                )])),
            };
            (verdict, Some(w))
        }
        ContractionOutcome::Infeasible {
            margin,
            diagnostics,
            exhaustive,
            ..
        } => {
            let note = if exhaustive {
                format!("infeasible: {diagnostics}")
            } else {
                format!("not satisfied via constructive search: {diagnostics}")
            };
            (
                Verdict {
                    satisfaction: Satisfaction::NotSatisfied,
                    margin: Some(margin),
                    metrics: vec![("loewner_margin".into(), margin)],
                    note: Some(note),
                    witness: None,
                },
                None,
            )
        }
    }
}

/// Offset making the cross-link equation consistent: the minimal-norm
/// B = C·V† with (cross − B) supported on the row space of `direct`. Equals
/// zero whenever `direct` is left-invertible, which is the plain default.
pub fn consistent_offset(
    cross: &CMatrix,
    direct: &CMatrix,
    space: &NullOffsetSpace,
    tol: &ToleranceConfig,
) -> CMatrix {
    let v = match &space.basis {
        Some(v) => v,
        None => return CMatrix::zeros(cross.rows(), cross.cols()),
    };
    let t = direct.cols();
    let p_row = &pinv(direct, tol) * direct; // projector onto rowspace(direct)
    let residual_proj = &CMatrix::identity(t) - &p_row;
    let m = &v.adjoint() * &residual_proj; // k x t
    let r = cross * &residual_proj; // rows x t
                                    // The consistency map is a product of an orthonormal basis and a
                                    // projector, so its genuine singular values are O(1); an absolute
                                    // cutoff keeps a left-invertible `direct` (where the map is pure
                                    // rounding noise) on the zero-offset default.
    let coeff = &r * &pinv_with_cutoff(&m, 1e-12); // rows x k
    &coeff * &v.adjoint()
}

/// The alignment matrices of the two cross-link equations,
/// A1 = (I + H2 S2 H2†)·pinv(H1)†·(H3 − B1)† and the symmetric counterpart,
/// verified by substitution. The pseudo-inverse form reduces to the normal
/// equations when the direct matrices are left-invertible and extends to
/// consistent rank-deficient cases.
pub fn build_noisy_a(
    inst: &ChannelInstance,
    b1: &CMatrix,
    b2: &CMatrix,
    tol: &ToleranceConfig,
) -> Result<(CMatrix, CMatrix), RegimeError> {
    if !membership_b(b1, &inst.s1, tol)? {
        return Err(RegimeError::BadOffset {
            residual: offset_residual(b1, &inst.s1),
        });
    }
    if !membership_b(b2, &inst.s2, tol)? {
        return Err(RegimeError::BadOffset {
            residual: offset_residual(b2, &inst.s2),
        });
    }
    let n1 = &CMatrix::identity(inst.r1()) + &(&(&inst.h2 * &inst.s2) * &inst.h2.adjoint());
    let n2 = &CMatrix::identity(inst.r2()) + &(&(&inst.h3 * &inst.s1) * &inst.h3.adjoint());
    let a1 = &(&n1.hermitian_part() * &pinv(&inst.h1, tol).adjoint()) * &(&inst.h3 - b1).adjoint();
    let a2 = &(&n2.hermitian_part() * &pinv(&inst.h4, tol).adjoint()) * &(&inst.h2 - b2).adjoint();

    // Substitution check: the construction must reproduce the cross links.
    let back1 = &(&a1.adjoint() * &solve_hpd(&n1.hermitian_part(), &inst.h1)?) + b1;
    let back2 = &(&a2.adjoint() * &solve_hpd(&n2.hermitian_part(), &inst.h4)?) + b2;
    let resid1 = back1.distance(&inst.h3) / (1.0 + inst.h3.frobenius_norm());
    let resid2 = back2.distance(&inst.h2) / (1.0 + inst.h2.frobenius_norm());
    if resid1 > tol.eq_tol || resid2 > tol.eq_tol {
        return Err(RegimeError::NotLeftInvertible {
            residual: resid1.max(resid2),
        });
    }
    Ok((a1, a2))
}

/// Outcome of the Φ-radius feasibility test.
#[derive(Debug, Clone)]
pub struct RiccatiFeasibility {
    pub m1: CMatrix,
    pub m2: CMatrix,
    pub m1_lambda_min: f64,
    pub m2_lambda_min: f64,
    pub phi1: Option<CMatrix>,
    pub phi2: Option<CMatrix>,
    pub radius1: Option<f64>,
    pub radius2: Option<f64>,
    pub feasible: bool,
}

/// Builds M1 = I − A1†A1 − A2A2† and M2 = I − A1A1† − A2†A2; when both are
/// positive definite, conjugates W1 = A1†A2† and W2 = A2†A1† by M^{-1/2}
/// and tests both numerical radii against 1/2. M must be strictly positive
/// definite; a semidefinite M is reported infeasible, not an error.
pub fn riccati_feasible(
    a1: &CMatrix,
    a2: &CMatrix,
    tol: &ToleranceConfig,
) -> Result<RiccatiFeasibility, RegimeError> {
    if a1.rows() != a2.cols() || a1.cols() != a2.rows() {
        return Err(RegimeError::Shape(format!(
            "A1 is {}x{} but A2 is {}x{}; need A1: r1 x r2, A2: r2 x r1",
            a1.rows(),
            a1.cols(),
            a2.rows(),
            a2.cols()
        )));
    }
    let m1 = (&(&CMatrix::identity(a1.cols()) - &(&a1.adjoint() * a1)) - &(a2 * &a2.adjoint()))
        .hermitian_part();
    let m2 = (&(&CMatrix::identity(a1.rows()) - &(a1 * &a1.adjoint())) - &(&a2.adjoint() * a2))
        .hermitian_part();
    let (w1, _) = eigh(&m1)?;
    let (w2, _) = eigh(&m2)?;
    let lam1 = w1[0];
    let lam2 = w2[0];
    let pd_floor1 = tol.eig_floor * (1.0 + m1.frobenius_norm());
    let pd_floor2 = tol.eig_floor * (1.0 + m2.frobenius_norm());
    if lam1 <= pd_floor1 || lam2 <= pd_floor2 {
        return Ok(RiccatiFeasibility {
            m1,
            m2,
            m1_lambda_min: lam1,
            m2_lambda_min: lam2,
            phi1: None,
            phi2: None,
            radius1: None,
            radius2: None,
            feasible: false,
        });
    }
    let mih1 = inv_sqrtm_hpd(&m1, tol)?;
    let mih2 = inv_sqrtm_hpd(&m2, tol)?;
    let w1m = &a1.adjoint() * &a2.adjoint();
    let w2m = &a2.adjoint() * &a1.adjoint();
    let phi1 = &(&mih1 * &w1m) * &mih1;
    let phi2 = &(&mih2 * &w2m) * &mih2;
    let radius1 = numerical_radius(&phi1, tol)?;
    let radius2 = numerical_radius(&phi2, tol)?;
    let feasible = radius1 <= 0.5 + tol.eig_floor && radius2 <= 0.5 + tol.eig_floor;
    Ok(RiccatiFeasibility {
        m1,
        m2,
        m1_lambda_min: lam1,
        m2_lambda_min: lam2,
        phi1: Some(phi1),
        phi2: Some(phi2),
        radius1: Some(radius1),
        radius2: Some(radius2),
        feasible,
    })
}

/// Alternating fixed point for Σ1 = I − A2 Σ2⁻¹ A2†, Σ2 = I − A1 Σ1⁻¹ A1†,
/// initialized at the identity, damped by averaging when the residual
/// increases twice in a row. On success both substitution residuals are at
/// most `riccati_tol`, the Σ's are Hermitian PD, and A_i†A_i ⪯ Σ_i.
pub fn riccati_solve(
    a1: &CMatrix,
    a2: &CMatrix,
    tol: &ToleranceConfig,
) -> Result<(CMatrix, CMatrix), RegimeError> {
    let n1 = a1.cols(); // dim of Sigma1 (receiver-2 side)
    let n2 = a1.rows();
    let i1 = CMatrix::identity(n1);
    let i2 = CMatrix::identity(n2);
    let mut s1 = i1.clone();
    let mut s2 = i2.clone();
    let mut prev_residual = f64::INFINITY;
    let mut increases = 0usize;
    let mut damped = false;
    let mut residual = f64::INFINITY;

    for iter in 0..tol.riccati_max_iter {
        let s1_new = &i1
            - &(a2
                * &solve_hpd(&s2, &a2.adjoint()).map_err(|_| RegimeError::NoConvergence {
                    iters: iter,
                    residual,
                })?);
        let s1_next = if damped {
            (&s1_new + &s1).scale(0.5).hermitian_part()
        } else {
            s1_new.hermitian_part()
        };
        let s2_new = &i2
            - &(a1
                * &solve_hpd(&s1_next, &a1.adjoint()).map_err(|_| RegimeError::NoConvergence {
                    iters: iter,
                    residual,
                })?);
        let s2_next = if damped {
            (&s2_new + &s2).scale(0.5).hermitian_part()
        } else {
            s2_new.hermitian_part()
        };
        residual = s1.distance(&s1_next) + s2.distance(&s2_next);
        s1 = s1_next;
        s2 = s2_next;
        if residual > prev_residual {
            increases += 1;
            if increases >= 2 {
                damped = true;
            }
        } else {
            increases = 0;
        }
        prev_residual = residual;
        if residual <= tol.riccati_tol {
            break;
        }
    }

    // Substitution residuals of the converged pair.
    let sub1 = s1.distance(&(&i1 - &(a2 * &solve_hpd(&s2, &a2.adjoint())?)));
    let sub2 = s2.distance(&(&i2 - &(a1 * &solve_hpd(&s1, &a1.adjoint())?)));
    if sub1 + sub2 > tol.riccati_tol * 10.0 {
        return Err(RegimeError::NoConvergence {
            iters: tol.riccati_max_iter,
            residual: sub1 + sub2,
        });
    }
    // Positive definiteness and the ordering A_i†A_i ⪯ Σ_i.
    let (w1, _) = eigh(&s1)?;
    let (w2, _) = eigh(&s2)?;
    if w1[0] <= 0.0 || w2[0] <= 0.0 {
        return Err(RegimeError::NoConvergence {
            iters: tol.riccati_max_iter,
            residual: sub1 + sub2,
        });
    }
    let a1a = &a1.adjoint() * a1;
    let a2a = &a2.adjoint() * a2;
    let floor1 = -tol.eig_floor * (1.0 + a1a.frobenius_norm() + s1.frobenius_norm());
    let floor2 = -tol.eig_floor * (1.0 + a2a.frobenius_norm() + s2.frobenius_norm());
    if loewner_margin(&a1a, &s1, tol)? < floor1 || loewner_margin(&a2a, &s2, tol)? < floor2 {
        return Err(RegimeError::NoConvergence {
            iters: tol.riccati_max_iter,
            residual: sub1 + sub2,
        });
    }
    Ok((s1, s2))
}

/// Two-sided noisy-interference check: constructs offsets (minimal-norm
/// consistent, zero when the direct links are left-invertible), builds the
/// alignment matrices, runs the radius feasibility test, and solves the
/// fixed point when feasible. The certificate carries everything needed for
/// independent re-verification.
pub fn check_noisy_two_sided(
    inst: &ChannelInstance,
    b1_override: Option<&CMatrix>,
    b2_override: Option<&CMatrix>,
    tol: &ToleranceConfig,
) -> Result<(Verdict, RiccatiCertificate), RegimeError> {
    let space1 = null_offset_space(inst, 1, tol)?;
    let space2 = null_offset_space(inst, 2, tol)?;
    let b1 = match b1_override {
        Some(b) => b.clone(),
        None => consistent_offset(&inst.h3, &inst.h1, &space1, tol),
    };
    let b2 = match b2_override {
        Some(b) => b.clone(),
        None => consistent_offset(&inst.h2, &inst.h4, &space2, tol),
    };
    let (a1, a2) = build_noisy_a(inst, &b1, &b2, tol)?;
    let feas = riccati_feasible(&a1, &a2, tol)?;

    let (sigma1, sigma2, sigma_note) = if feas.feasible {
        match riccati_solve(&a1, &a2, tol) {
            Ok((s1, s2)) => (Some(s1), Some(s2), None),
            Err(RegimeError::NoConvergence { iters, residual }) => (
                None,
                None,
                Some(format!(
                    "fixed point did not converge ({iters} iterations, residual {residual:.3e}); feasibility stands on the radius test"
                )),
            ),
            Err(e) => return Err(e),
        }
    } else {
        (None, None, None)
    };

    let cert = RiccatiCertificate {
        w1: &a1.adjoint() * &a2.adjoint(),
        w2: &a2.adjoint() * &a1.adjoint(),
        a1,
        a2,
        b1,
        b2,
        m1: feas.m1.clone(),
        m2: feas.m2.clone(),
        phi1: feas.phi1.clone(),
        phi2: feas.phi2.clone(),
        radius1: feas.radius1,
        radius2: feas.radius2,
        sigma1,
        sigma2,
        feasible: feas.feasible,
    };

    let mut metrics = vec![
        ("lambda_min_M1".into(), feas.m1_lambda_min),
        ("lambda_min_M2".into(), feas.m2_lambda_min),
    ];
    let margin;
    let satisfaction;
    match (feas.radius1, feas.radius2) {
        (Some(r1), Some(r2)) => {
            metrics.push(("radius1".into(), r1));
            metrics.push(("radius2".into(), r2));
            margin = 0.5 - r1.max(r2);
            satisfaction = if feas.feasible {
                if margin > 0.0 {
                    Satisfaction::Satisfied
                } else {
                    Satisfaction::SatisfiedWithinTolerance
                }
            } else {
                Satisfaction::NotSatisfied
            };
        }
        _ => {
            margin = feas.m1_lambda_min.min(feas.m2_lambda_min);
            satisfaction = Satisfaction::NotSatisfied;
        }
    }
    let verdict = Verdict {
        satisfaction,
        margin: Some(margin),
        metrics,
        note: sigma_note,
        witness: Some(RegimeWitness::Riccati(Box::new(cert.clone()))),
    };
    Ok((verdict, cert))
}
