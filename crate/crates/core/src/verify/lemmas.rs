//! Cross-checking oracles for the block-PSD, left-invertibility and
//! Riccati-solvability lemmas. Each oracle evaluates its equivalent
//! predicates by independent routes and reports whether they agree; any
//! disagreement outside the declared tolerance bands is a build failure in
//! the acceptance suite, not a statistic.

use crate::matlib::{eigh, inv_hpd, loewner_margin, CMatrix, MatError, ToleranceConfig};
use crate::regimes::{riccati_feasible, riccati_solve, RegimeError};

/// Block-PSD equivalence: [[I, A], [A†, B]] ⪰ 0 ⟺ B ⪰ A†A, and for
/// B ≻ 0 additionally ⟺ I ⪰ A·B⁻¹·A†. Evaluates every applicable
/// predicate independently (block eigensolve, two Loewner tests) and
/// returns whether they all agree.
pub fn lemma_pd_oracle(a: &CMatrix, b: &CMatrix, tol: &ToleranceConfig) -> Result<bool, MatError> {
    if a.cols() != b.rows() || !b.is_square() {
        return Err(MatError::ShapeMismatch {
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: b.rows(),
            right_cols: b.cols(),
        });
    }
    let dev = b.hermitian_deviation();
    if dev > tol.eq_tol * (1.0 + b.frobenius_norm()) {
        return Err(MatError::NotHermitian {
            deviation: dev,
            allowed: tol.eq_tol * (1.0 + b.frobenius_norm()),
        });
    }
    let ia = CMatrix::identity(a.rows());
    let block = CMatrix::block2x2(&ia, a, &a.adjoint(), b);
    let (w, _) = eigh(&block)?;
    let floor = -tol.eig_floor * (1.0 + block.frobenius_norm());
    let block_psd = w[0] >= floor;

    let ata = (&a.adjoint() * a).hermitian_part();
    let margin = loewner_margin(&ata, b, tol)?;
    let loewner_holds =
        margin >= -tol.eig_floor * (1.0 + ata.frobenius_norm() + b.frobenius_norm());

    let mut agree = block_psd == loewner_holds;

    // Third route only applies for positive definite B.
    let (wb, _) = eigh(b)?;
    if wb[0] > tol.eig_floor * (1.0 + b.frobenius_norm()) {
        let binv = inv_hpd(b)?;
        let aba = (&(a * &binv) * &a.adjoint()).hermitian_part();
        let ib = CMatrix::identity(a.rows());
        let margin2 = loewner_margin(&aba, &ib, tol)?;
        let third = margin2 >= -tol.eig_floor * (1.0 + aba.frobenius_norm() + ib.frobenius_norm());
        agree = agree && (third == loewner_holds);
    }
    Ok(agree)
}

/// Left-invertibility equivalence: with A = B(B†B)⁻¹C†, the contraction
/// property A†A ⪯ I holds iff B†B ⪰ C†C. Returns whether the two predicates
/// agree when evaluated independently.
pub fn lemma_leftinv_oracle(
    b: &CMatrix,
    c: &CMatrix,
    tol: &ToleranceConfig,
) -> Result<bool, RegimeError> {
    if b.cols() != c.cols() {
        return Err(RegimeError::Shape(format!(
            "B is {}x{}, C is {}x{}: column counts must match",
            b.rows(),
            b.cols(),
            c.rows(),
            c.cols()
        )));
    }
    if !crate::matlib::is_left_invertible(b, tol) {
        return Err(RegimeError::NotLeftInvertible { residual: 0.0 });
    }
    let btb = (&b.adjoint() * b).hermitian_part();
    let a = &(b * &inv_hpd(&btb)?) * &c.adjoint();
    let ata = (&a.adjoint() * &a).hermitian_part();
    let i = CMatrix::identity(ata.rows());
    let m1 = loewner_margin(&ata, &i, tol)?;
    let contraction = m1 >= -tol.eig_floor * (1.0 + ata.frobenius_norm() + i.frobenius_norm());
    let ctc = (&c.adjoint() * c).hermitian_part();
    let m2 = loewner_margin(&ctc, &btb, tol)?;
    let gram_order = m2 >= -tol.eig_floor * (1.0 + ctc.frobenius_norm() + btb.frobenius_norm());
    Ok(contraction == gram_order)
}

/// Outcome of the Riccati solvability cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiccatiAgreement {
    Agree,
    Disagree,
    /// Radii within the excluded band around 1/2; no claim either way.
    Boundary,
}

/// Solvability-vs-radius cross-check: radii at most 1/2 − band must make
/// the fixed point deliver a valid solution; radii of at least 1/2 + band
/// must make it fail (either no convergence or an invalid candidate).
/// `band` of 0.02 matches the acceptance suite.
pub fn lemma_riccati_oracle(
    a1: &CMatrix,
    a2: &CMatrix,
    band: f64,
    tol: &ToleranceConfig,
) -> Result<RiccatiAgreement, RegimeError> {
    let feas = riccati_feasible(a1, a2, tol)?;
    let (Some(r1), Some(r2)) = (feas.radius1, feas.radius2) else {
        // M not positive definite: precondition of the lemma fails.
        return Ok(RiccatiAgreement::Boundary);
    };
    let rmax = r1.max(r2);
    if (rmax - 0.5).abs() < band {
        return Ok(RiccatiAgreement::Boundary);
    }
    let solvable = rmax <= 0.5;
    match riccati_solve(a1, a2, tol) {
        Ok(_) => Ok(if solvable {
            RiccatiAgreement::Agree
        } else {
            RiccatiAgreement::Disagree
        }),
        Err(_) => Ok(if solvable {
            RiccatiAgreement::Disagree
        } else {
            RiccatiAgreement::Agree
        }),
    }
}
