//! Feasibility of factorizations G = A·F + B with σ_max(A) ≤ 1 and B an
//! admissible null-space offset.
//!
//! The test is Douglas' criterion (G−B)†(G−B) ⪯ F†F, which for a fixed B is
//! exact: when it holds, A = (G−B)·pinv(F) is a contraction solving the
//! equation. Any feasible offset must also cancel G on null(F) (otherwise
//! the equation itself is unsolvable), so for a singular covariance the
//! search first restricts to offsets with zero null-space leakage and then
//! walks down the convex objective λ_max((G−B)†(G−B) − F†F) within that
//! affine slice until a feasible offset appears. Every witness is
//! re-verified before it is returned.

use super::error::RegimeError;
use super::witness::{factor_for, projection_offset, ContractionWitness};
use crate::channel::{membership_b, offset_residual, NullOffsetSpace};
use crate::matlib::{eigh, sigma_max, CMatrix, ToleranceConfig};

/// Singular values of unit-scale products below this count as zero. The
/// inputs of the consistency system are products of orthonormal bases and
/// projectors, so their meaningful singular values are O(1).
const UNIT_SCALE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone)]
pub enum ContractionOutcome {
    Feasible(ContractionWitness),
    /// No admissible offset found; `margin` is the best (largest) Loewner
    /// slack reached and `best_b` the offset achieving it. For a nonsingular
    /// covariance this is a proof of infeasibility (the offset is forced to
    /// zero and the test is exact); otherwise it only means the constructive
    /// search failed.
    Infeasible {
        margin: f64,
        best_b: CMatrix,
        exhaustive: bool,
        diagnostics: String,
    },
}

impl ContractionOutcome {
    pub fn witness(&self) -> Option<&ContractionWitness> {
        match self {
            ContractionOutcome::Feasible(w) => Some(w),
            ContractionOutcome::Infeasible { .. } => None,
        }
    }

    pub fn margin(&self) -> f64 {
        match self {
            ContractionOutcome::Feasible(w) => w.loewner_margin,
            ContractionOutcome::Infeasible { margin, .. } => *margin,
        }
    }
}

/// λ_min(F†F − (G−B)†(G−B)) and the acceptance floor for that comparison.
fn douglas_margin(
    g: &CMatrix,
    f: &CMatrix,
    b: &CMatrix,
    tol: &ToleranceConfig,
) -> Result<(f64, f64), RegimeError> {
    let gb = g - b;
    let lhs = (&gb.adjoint() * &gb).hermitian_part();
    let rhs = (&f.adjoint() * f).hermitian_part();
    let (w, _) = eigh(&(&rhs - &lhs))?;
    let floor = -tol.eig_floor * (1.0 + lhs.frobenius_norm() + rhs.frobenius_norm());
    Ok((w[0], floor))
}

fn build_witness(
    g: &CMatrix,
    f: &CMatrix,
    s: &CMatrix,
    b: &CMatrix,
    margin: f64,
    tol: &ToleranceConfig,
) -> Result<ContractionWitness, String> {
    let a = factor_for(g, f, b, tol);
    let sigma = sigma_max(&a);
    if sigma > 1.0 + tol.eig_floor {
        return Err(format!("constructed factor has sigma_max {sigma:.9}"));
    }
    let recon = &(&a * f) + b;
    let resid = recon.distance(g) / (1.0 + g.frobenius_norm());
    if resid > tol.eq_tol {
        return Err(format!("factorization residual {resid:.3e}"));
    }
    let off = offset_residual(b, s);
    if off > tol.eq_tol {
        return Err(format!("offset residual {off:.3e}"));
    }
    Ok(ContractionWitness {
        a,
        b: b.clone(),
        sigma_max_a: sigma,
        offset_residual: off,
        factor_residual: resid,
        loewner_margin: margin,
    })
}

/// Pseudo-inverse with an absolute unit-scale cutoff, for matrices whose
/// genuine singular values are O(1) by construction.
fn pinv_unit_scale(m: &CMatrix) -> CMatrix {
    crate::matlib::pinv_with_cutoff(m, UNIT_SCALE_FLOOR)
}

/// Orthonormal basis of {w : w†M = 0} for the consistency map M (unit
/// scale), or `None` when the map has full row rank.
fn left_null_basis_unit_scale(m: &CMatrix) -> Option<CMatrix> {
    let gram = (&m.clone() * &m.adjoint()).hermitian_part();
    let (w, v) = eigh(&gram).expect("Hermitian by construction");
    let idx: Vec<usize> = (0..w.len())
        .filter(|&i| w[i] <= UNIT_SCALE_FLOOR * UNIT_SCALE_FLOOR * 1e6 + UNIT_SCALE_FLOOR)
        .collect();
    if idx.is_empty() {
        None
    } else {
        Some(v.select_columns(&idx))
    }
}

/// Decide whether G = A·F + B is solvable with a contraction A and an
/// offset B ∈ span(null basis of S). `b_override` pins the offset; the
/// default search tries the projection offset and zero, then the leakage-
/// consistent offset, then the convex descent within the consistent slice.
pub fn solve_contraction(
    g: &CMatrix,
    f: &CMatrix,
    space: &NullOffsetSpace,
    b_override: Option<&CMatrix>,
    tol: &ToleranceConfig,
    s: &CMatrix,
) -> Result<ContractionOutcome, RegimeError> {
    if g.cols() != f.cols() || g.cols() != space.s_dim() {
        return Err(RegimeError::Shape(format!(
            "column counts must agree with the covariance: G is {}x{}, F is {}x{}, S is {}x{}",
            g.rows(),
            g.cols(),
            f.rows(),
            f.cols(),
            space.s_dim(),
            space.s_dim()
        )));
    }

    let mut diagnostics: Vec<String> = Vec::new();
    let mut best_margin = f64::NEG_INFINITY;
    let mut best_b = CMatrix::zeros(g.rows(), g.cols());

    let try_offset = |b: &CMatrix,
                      diagnostics: &mut Vec<String>,
                      best_margin: &mut f64,
                      best_b: &mut CMatrix|
     -> Result<Option<ContractionWitness>, RegimeError> {
        let (margin, floor) = douglas_margin(g, f, b, tol)?;
        if margin > *best_margin {
            *best_margin = margin;
            *best_b = b.clone();
        }
        if margin >= floor {
            match build_witness(g, f, s, b, margin, tol) {
                Ok(w) => return Ok(Some(w)),
                Err(d) => diagnostics.push(d),
            }
        }
        Ok(None)
    };

    if let Some(b) = b_override {
        if !membership_b(b, s, tol)? {
            return Err(RegimeError::BadOffset {
                residual: offset_residual(b, s),
            });
        }
        if let Some(w) = try_offset(b, &mut diagnostics, &mut best_margin, &mut best_b)? {
            return Ok(ContractionOutcome::Feasible(w));
        }
        return Ok(ContractionOutcome::Infeasible {
            margin: best_margin,
            best_b,
            exhaustive: true,
            diagnostics: join_diagnostics(diagnostics),
        });
    }

    // Fixed candidates: the projection offset and zero.
    let proj = projection_offset(g, &space.projector_range);
    let proj_nonzero = proj.frobenius_norm() > 1e-14 * (1.0 + g.frobenius_norm());
    if let Some(w) = try_offset(&proj, &mut diagnostics, &mut best_margin, &mut best_b)? {
        return Ok(ContractionOutcome::Feasible(w));
    }
    if proj_nonzero {
        let zero = CMatrix::zeros(g.rows(), g.cols());
        if let Some(w) = try_offset(&zero, &mut diagnostics, &mut best_margin, &mut best_b)? {
            return Ok(ContractionOutcome::Feasible(w));
        }
    }

    if space.dim() == 0 {
        return Ok(ContractionOutcome::Infeasible {
            margin: best_margin,
            best_b,
            exhaustive: true,
            diagnostics: join_diagnostics(diagnostics),
        });
    }

    // Restrict to offsets cancelling G on null(F): B = (C0 + T·K†)·V†.
    // Every exactly feasible offset lies in this slice, because the Douglas
    // condition forces null(F) ⊆ null(G − B).
    let v = space.basis.as_ref().expect("dim > 0");
    let t_dim = g.cols();
    let p_row = &pinv_unit_scale(f) * f;
    let ip = &CMatrix::identity(t_dim) - &p_row;
    let m_map = &v.adjoint() * &ip; // k x t
    let r_target = g * &ip; // rows x t
    let c0 = &r_target * &pinv_unit_scale(&m_map);
    let b0 = &c0 * &v.adjoint();
    let leakage = (&(g - &b0) * &ip).frobenius_norm() / (1.0 + g.frobenius_norm());
    if leakage > tol.eq_tol {
        // No offset in the span can make the equation solvable.
        diagnostics.push(format!(
            "null-space leakage {leakage:.3e} cannot be cancelled by any admissible offset"
        ));
        return Ok(ContractionOutcome::Infeasible {
            margin: best_margin,
            best_b,
            exhaustive: false,
            diagnostics: join_diagnostics(diagnostics),
        });
    }
    if let Some(w) = try_offset(&b0, &mut diagnostics, &mut best_margin, &mut best_b)? {
        return Ok(ContractionOutcome::Feasible(w));
    }

    if let Some(kernel) = left_null_basis_unit_scale(&m_map) {
        let descent = consistent_descent(g, f, s, v, &c0, &kernel, tol)?;
        if descent.best_margin > best_margin {
            best_margin = descent.best_margin;
            best_b = descent.best_b;
        }
        if let Some(w) = descent.witness {
            return Ok(ContractionOutcome::Feasible(w));
        }
    }

    Ok(ContractionOutcome::Infeasible {
        margin: best_margin,
        best_b,
        exhaustive: false,
        diagnostics: join_diagnostics(diagnostics),
    })
}

fn join_diagnostics(diagnostics: Vec<String>) -> String {
    if diagnostics.is_empty() {
        "Loewner condition fails".to_string()
    } else {
        diagnostics.join("; ")
    }
}

struct DescentResult {
    witness: Option<ContractionWitness>,
    best_b: CMatrix,
    best_margin: f64,
}

/// Polyak subgradient descent on φ(T) = λ_max((G−B(T))†(G−B(T)) − F†F)
/// over the consistent slice B(T) = (C0 + T·K†)·V†, with the usual
/// adaptive target for an unknown optimum. Whenever an iterate clears the
/// Loewner floor a witness build is attempted; descent continues past
/// boundary iterates whose factor narrowly misses the contraction bound.
fn consistent_descent(
    g: &CMatrix,
    f: &CMatrix,
    s: &CMatrix,
    v: &CMatrix,
    c0: &CMatrix,
    kernel: &CMatrix,
    tol: &ToleranceConfig,
) -> Result<DescentResult, RegimeError> {
    let ftf = (&f.adjoint() * f).hermitian_part();
    let rows = g.rows();
    let q = kernel.cols();
    // Start points: the consistent minimal-norm offset and the projection
    // offset mapped into the slice.
    let t_zero = CMatrix::zeros(rows, q);
    let t_proj = &(&(g * v) - c0) * kernel;

    let mut out = DescentResult {
        witness: None,
        best_b: &c0.clone() * &v.adjoint(),
        best_margin: f64::NEG_INFINITY,
    };

    'starts: for start in [t_zero, t_proj] {
        let mut t_var = start;
        let mut phi_best = f64::INFINITY;
        let mut delta: Option<f64> = None;
        let mut stall = 0usize;
        let mut last_attempt_margin = f64::NEG_INFINITY;
        for _iter in 0..6000 {
            let c = c0 + &(&t_var * &kernel.adjoint());
            let b = &c * &v.adjoint();
            let gb = g - &b;
            let lhs = (&gb.adjoint() * &gb).hermitian_part();
            let d = &ftf - &lhs;
            let (w, qv) = eigh(&d)?;
            let margin = w[0];
            let floor = -tol.eig_floor * (1.0 + lhs.frobenius_norm() + ftf.frobenius_norm());
            if margin > out.best_margin {
                out.best_margin = margin;
                out.best_b = b.clone();
            }
            if margin >= floor && margin > last_attempt_margin {
                last_attempt_margin = margin;
                if let Ok(wit) = build_witness(g, f, s, &b, margin, tol) {
                    out.witness = Some(wit);
                    break 'starts;
                }
            }
            let phi = -margin;
            if phi < phi_best - 1e-14 * (1.0 + phi.abs()) {
                phi_best = phi;
                stall = 0;
            } else {
                stall += 1;
                if stall > 40 {
                    // shrink the optimism of the target
                    if let Some(dl) = delta.as_mut() {
                        *dl *= 0.5;
                        if *dl < 1e-15 {
                            break;
                        }
                    }
                    stall = 0;
                }
            }
            let dl = *delta.get_or_insert_with(|| (phi.abs() * 0.5).max(1e-6));
            let target = phi_best - dl;
            let vmin = qv.column(0);
            let u = v.adjoint().mul_vec(&vmin);
            let u_red = kernel.adjoint().mul_vec(&u);
            let wv = gb.mul_vec(&vmin);
            let wn: f64 = wv.iter().map(|z| z.norm_sqr()).sum();
            let un: f64 = u_red.iter().map(|z| z.norm_sqr()).sum();
            let grad_norm_sq = 4.0 * wn * un;
            if grad_norm_sq <= 1e-26 {
                break; // stationary within the slice
            }
            let mut step = (phi - target).max(0.0) / grad_norm_sq;
            let update_norm = 2.0 * step * (wn * un).sqrt();
            let cap = 1.0 + t_var.frobenius_norm() + c0.frobenius_norm();
            if update_norm > cap {
                step *= cap / update_norm;
            }
            if step <= 0.0 {
                break;
            }
            for i in 0..rows {
                for j in 0..q {
                    t_var[(i, j)] += 2.0 * step * wv[i] * u_red[j].conj();
                }
            }
            if !t_var.all_finite() {
                break;
            }
        }
    }
    Ok(out)
}

/// Convenience wrapper used by tests: run the solver against an explicit
/// covariance, deriving the offset space on the fly.
pub fn solve_contraction_for(
    g: &CMatrix,
    f: &CMatrix,
    s: &CMatrix,
    b_override: Option<&CMatrix>,
    tol: &ToleranceConfig,
) -> Result<ContractionOutcome, RegimeError> {
    let space = NullOffsetSpace::from_covariance(s, 0, tol)?;
    solve_contraction(g, f, &space, b_override, tol, s)
}
