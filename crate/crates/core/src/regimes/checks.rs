//! Regime decision procedures: very strong interference (rate-margin
//! inequalities), aligned strong interference (contraction factorizations),
//! mixed aligned interference, the Gaussian Markov-chain test, and the
//! aggregate classifier.

use super::contraction::{solve_contraction, ContractionOutcome};
use super::error::RegimeError;
use super::noisy::{check_noisy_two_sided, check_noisy_zic};
use super::report::{Regime, RegimeReport, RegimeWitness, Satisfaction, Verdict};
use super::witness::{ContractionRole, ContractionWitness};
use crate::channel::{null_offset_space, ChannelInstance};
use crate::matlib::{logdet_hpd, solve_hpd, CMatrix, MatError, ToleranceConfig};

fn gram(h: &CMatrix, s: &CMatrix) -> CMatrix {
    (&(h * s) * &h.adjoint()).hermitian_part()
}

fn logdet_i_plus(terms: &[CMatrix], n: usize, tol: &ToleranceConfig) -> Result<f64, MatError> {
    let mut m = CMatrix::identity(n);
    for t in terms {
        m = &m + t;
    }
    logdet_hpd(&m.hermitian_part(), tol)
}

/// The two very-strong-interference rate margins:
/// m1 = log|I + H1S1H1† + H2S2H2†| − log|I + H1S1H1†| − log|I + H4S2H4†|
/// and the symmetric m2. Nonnegativity of the applicable margins is the
/// regime condition.
pub fn very_strong_margins(
    inst: &ChannelInstance,
    tol: &ToleranceConfig,
) -> Result<(f64, f64), RegimeError> {
    let g11 = gram(&inst.h1, &inst.s1);
    let g22 = gram(&inst.h2, &inst.s2);
    let g31 = gram(&inst.h3, &inst.s1);
    let g42 = gram(&inst.h4, &inst.s2);
    let su1 = logdet_i_plus(std::slice::from_ref(&g11), inst.r1(), tol)?;
    let su2 = logdet_i_plus(std::slice::from_ref(&g42), inst.r2(), tol)?;
    let m1 = logdet_i_plus(&[g11, g22], inst.r1(), tol)? - su1 - su2;
    let m2 = logdet_i_plus(&[g31, g42], inst.r2(), tol)? - su2 - su1;
    Ok((m1, m2))
}

fn margin_verdict(margin: f64, scale: f64, tol: &ToleranceConfig) -> Satisfaction {
    let floor = tol.eig_floor * (1.0 + scale);
    if margin >= floor {
        Satisfaction::Satisfied
    } else if margin >= -floor {
        Satisfaction::SatisfiedWithinTolerance
    } else {
        Satisfaction::NotSatisfied
    }
}

/// Very strong interference. For a one-sided instance only the margin of
/// the present cross link applies (the Z-variant); the two-sided variant
/// requires both. Returns (z_verdict, two_sided_verdict).
pub fn check_very_strong(
    inst: &ChannelInstance,
    tol: &ToleranceConfig,
) -> Result<(Verdict, Verdict), RegimeError> {
    let (m1, m2) = very_strong_margins(inst, tol)?;
    let scale = m1.abs() + m2.abs();
    let metrics = vec![("margin1".into(), m1), ("margin2".into(), m2)];
    let zic = inst.is_zic();
    let mirror = inst.is_mirror_zic();

    let z_verdict = if zic || mirror {
        // H3 = 0 leaves the receiver-1 margin m1; H2 = 0 leaves m2.
        let margin = if zic { m1 } else { m2 };
        Verdict {
            satisfaction: margin_verdict(margin, scale, tol),
            margin: Some(margin),
            metrics: metrics.clone(),
            note: mirror.then(|| "one-sided with H2 = 0 (mirrored)".to_string()),
            witness: None,
        }
    } else {
        Verdict::not_applicable("both cross links present")
    };

    let two_sided = if !zic && !mirror {
        let margin = m1.min(m2);
        Verdict {
            satisfaction: margin_verdict(margin, scale, tol),
            margin: Some(margin),
            metrics,
            note: None,
            witness: None,
        }
    } else {
        Verdict::not_applicable("requires H2 != 0 and H3 != 0")
    };
    Ok((z_verdict, two_sided))
}

fn contraction_side(
    inst: &ChannelInstance,
    role: ContractionRole,
    b_override: Option<&CMatrix>,
    tol: &ToleranceConfig,
) -> Result<ContractionOutcome, RegimeError> {
    let (g, f, s) = role.triple(inst);
    let user = match role {
        ContractionRole::AlignedDirect1 | ContractionRole::NoisyCross1 => 1,
        _ => 2,
    };
    let space = null_offset_space(inst, user, tol)?;
    solve_contraction(g, f, &space, b_override, tol, s)
}

fn aligned_verdict_from(
    sides: Vec<(ContractionRole, ContractionOutcome)>,
) -> (Verdict, Vec<(ContractionRole, ContractionWitness)>) {
    let mut witnesses = Vec::new();
    let mut margin = f64::INFINITY;
    let mut all_feasible = true;
    let mut any_within_tol = false;
    let mut notes = Vec::new();
    let mut metrics = Vec::new();
    let mut exhaustive_fail = true;
    for (role, outcome) in sides {
        margin = margin.min(outcome.margin());
        metrics.push((format!("margin[{}]", role.name()), outcome.margin()));
        match outcome {
            ContractionOutcome::Feasible(w) => {
                if w.loewner_margin <= 0.0 {
                    any_within_tol = true;
                }
                metrics.push((format!("sigma_max[{}]", role.name()), w.sigma_max_a));
                witnesses.push((role, w));
            }
            ContractionOutcome::Infeasible {
                diagnostics,
                exhaustive,
                ..
            } => {
                all_feasible = false;
                exhaustive_fail &= exhaustive;
                notes.push(format!("{}: {}", role.name(), diagnostics));
            }
        }
    }
    let satisfaction = if all_feasible {
        if any_within_tol {
            Satisfaction::SatisfiedWithinTolerance
        } else {
            Satisfaction::Satisfied
        }
    } else {
        Satisfaction::NotSatisfied
    };
    let note = if notes.is_empty() {
        None
    } else if exhaustive_fail {
        Some(notes.join("; "))
    } else {
        Some(format!(
            "not satisfied via constructive search; {}",
            notes.join("; ")
        ))
    };
    let verdict = Verdict {
        satisfaction,
        margin: Some(margin),
        metrics,
        note,
        witness: (!witnesses.is_empty()).then(|| RegimeWitness::Contractions(witnesses.clone())),
    };
    (verdict, witnesses)
}

/// Aligned strong interference: H1 = A1·H3 + B1 and H4 = A2·H2 + B2 with
/// contractions A_i and admissible offsets. A one-sided instance needs only
/// the condition of its present cross link. Returns (z_verdict, two_sided).
pub fn check_aligned_strong(
    inst: &ChannelInstance,
    tol: &ToleranceConfig,
) -> Result<(Verdict, Verdict), RegimeError> {
    let zic = inst.is_zic();
    let mirror = inst.is_mirror_zic();
    if zic || mirror {
        let role = if zic {
            ContractionRole::AlignedDirect2
        } else {
            ContractionRole::AlignedDirect1
        };
        let outcome = contraction_side(inst, role, None, tol)?;
        let (mut verdict, _) = aligned_verdict_from(vec![(role, outcome)]);
        if mirror {
            verdict.note = Some(match verdict.note.take() {
                Some(n) => format!("one-sided with H2 = 0 (mirrored); {n}"),
                None => "one-sided with H2 = 0 (mirrored)".to_string(),
            });
        }
        Ok((verdict, Verdict::not_applicable("one-sided instance")))
    } else {
        let o1 = contraction_side(inst, ContractionRole::AlignedDirect1, None, tol)?;
        let o2 = contraction_side(inst, ContractionRole::AlignedDirect2, None, tol)?;
        let (verdict, _) = aligned_verdict_from(vec![
            (ContractionRole::AlignedDirect1, o1),
            (ContractionRole::AlignedDirect2, o2),
        ]);
        Ok((Verdict::not_applicable("two-sided instance"), verdict))
    }
}

/// Mixed aligned interference: strong at receiver 2 (H1 = A1·H3 + B1) and
/// weak at receiver 1 (H2 = A2†·H4 + B2 with a strictly positive Loewner
/// margin). Boundary weak-side margins are reported, not accepted.
pub fn check_mixed(
    inst: &ChannelInstance,
    tol: &ToleranceConfig,
) -> Result<(Verdict, Vec<(ContractionRole, ContractionWitness)>), RegimeError> {
    let strong = contraction_side(inst, ContractionRole::AlignedDirect1, None, tol)?;
    let weak = contraction_side(inst, ContractionRole::NoisyCross2, None, tol)?;

    let weak_scale = {
        let f = &inst.h4;
        let g = &inst.h2;
        1.0 + (&f.adjoint() * f).frobenius_norm() + (&g.adjoint() * g).frobenius_norm()
    };
    let strict_floor = tol.eig_floor * weak_scale;

    let mut metrics = vec![
        ("margin[strong]".into(), strong.margin()),
        ("margin[weak]".into(), weak.margin()),
    ];
    let mut witnesses = Vec::new();
    let mut note = None;

    let strong_ok = strong.witness().is_some();
    let weak_strict = match &weak {
        ContractionOutcome::Feasible(w) => {
            metrics.push(("sigma_max[weak]".into(), w.sigma_max_a));
            if w.loewner_margin > strict_floor {
                true
            } else {
                note = Some(format!(
                    "weak side is a boundary case (margin {:.3e} not strictly positive)",
                    w.loewner_margin
                ));
                false
            }
        }
        ContractionOutcome::Infeasible { diagnostics, .. } => {
            note = Some(format!("weak side: {diagnostics}"));
            false
        }
    };
    if let ContractionOutcome::Feasible(w) = &strong {
        metrics.push(("sigma_max[strong]".into(), w.sigma_max_a));
    } else if let ContractionOutcome::Infeasible { diagnostics, .. } = &strong {
        let prev = note.take();
        note = Some(match prev {
            Some(p) => format!("strong side: {diagnostics}; {p}"),
            None => format!("strong side: {diagnostics}"),
        });
    }

    let satisfaction = if strong_ok && weak_strict {
        witnesses.push((
            ContractionRole::AlignedDirect1,
            strong.witness().unwrap().clone(),
        ));
        witnesses.push((
            ContractionRole::NoisyCross2,
            weak.witness().unwrap().clone(),
        ));
        Satisfaction::Satisfied
    } else {
        Satisfaction::NotSatisfied
    };
    let margin = strong.margin().min(weak.margin() - strict_floor);
    let verdict = Verdict {
        satisfaction,
        margin: Some(margin),
        metrics,
        note,
        witness: (!witnesses.is_empty()).then(|| RegimeWitness::Contractions(witnesses.clone())),
    };
    Ok((verdict, witnesses))
}

/// Gaussian Markov-chain criterion for x → Hx+u → Gx+v with x independent
/// of (u, v): the chain holds iff Sx·G† = Sx·H†·Su⁻¹·Suv.
pub fn check_markov_condition(
    sx: &CMatrix,
    h: &CMatrix,
    g: &CMatrix,
    su: &CMatrix,
    suv: &CMatrix,
    tol: &ToleranceConfig,
) -> Result<bool, RegimeError> {
    let lhs = &sx.clone() * &g.adjoint();
    let rhs = &(sx * &h.adjoint()) * &solve_hpd(su, suv)?;
    let scale = 1.0 + lhs.frobenius_norm() + rhs.frobenius_norm();
    Ok(lhs.distance(&rhs) <= tol.eq_tol * scale)
}

fn verdict_from_error(e: &RegimeError) -> Verdict {
    Verdict {
        satisfaction: Satisfaction::NotSatisfied,
        margin: None,
        metrics: Vec::new(),
        note: Some(format!("constructive check unavailable: {e}")),
        witness: None,
    }
}

/// Witnesses computed on a user-swapped instance certify the swapped roles
/// of the original instance.
fn remap_swapped_witness(verdict: &mut Verdict) {
    if let Some(RegimeWitness::Contractions(list)) = &mut verdict.witness {
        for (role, _) in list.iter_mut() {
            *role = role.swapped();
        }
    }
}

/// Evaluate all seven regime verdicts. Regimes are not mutually exclusive;
/// every satisfied verdict carries a re-verifiable witness. One-sided checks
/// are applied to the mirrored instance when H2 = 0.
pub fn classify(
    inst: &ChannelInstance,
    tol: &ToleranceConfig,
) -> Result<RegimeReport, RegimeError> {
    let (vs_z, vs_two) = check_very_strong(inst, tol)?;
    let (al_z, al_two) = check_aligned_strong(inst, tol)?;

    let noisy_z = if inst.is_zic() {
        check_noisy_zic(inst, tol)?.0
    } else if inst.is_mirror_zic() {
        let swapped = inst.swap_users();
        let mut v = check_noisy_zic(&swapped, tol)?.0;
        remap_swapped_witness(&mut v);
        v.note = Some(match v.note.take() {
            Some(n) => format!("one-sided with H2 = 0 (mirrored); {n}"),
            None => "one-sided with H2 = 0 (mirrored)".to_string(),
        });
        v
    } else {
        Verdict::not_applicable("both cross links present")
    };

    let noisy_two = match check_noisy_two_sided(inst, None, None, tol) {
        Ok((v, _)) => v,
        Err(e @ (RegimeError::NotLeftInvertible { .. } | RegimeError::BadOffset { .. })) => {
            verdict_from_error(&e)
        }
        Err(e) => return Err(e),
    };

    let mixed = {
        let (direct, _) = check_mixed(inst, tol)?;
        if direct.satisfaction.is_satisfied() || inst.is_zic() || inst.is_mirror_zic() {
            direct
        } else {
            // The check treats receiver 2 as the strong side; the mirrored
            // orientation is the same condition after swapping users.
            let (mut swapped, _) = check_mixed(&inst.swap_users(), tol)?;
            remap_swapped_witness(&mut swapped);
            if swapped.satisfaction.is_satisfied() {
                swapped.note = Some(match swapped.note.take() {
                    Some(n) => format!("mirrored orientation (strong at receiver 1); {n}"),
                    None => "mirrored orientation (strong at receiver 1)".to_string(),
                });
                swapped
            } else {
                direct
            }
        }
    };

    Ok(RegimeReport {
        verdicts: vec![
            (Regime::VeryStrongZ, vs_z),
            (Regime::VeryStrong, vs_two),
            (Regime::AlignedStrongZ, al_z),
            (Regime::AlignedStrong, al_two),
            (Regime::NoisyZ, noisy_z),
            (Regime::NoisyTwoSided, noisy_two),
            (Regime::MixedAligned, mixed),
        ],
    })
}
