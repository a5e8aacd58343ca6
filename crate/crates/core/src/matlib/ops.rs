//! The public operations of the matrix kernel: log-det, Loewner comparisons,
//! numerical radius, pseudo-inverse, null bases, Hermitian square root and
//! contraction tests.

use num_complex::Complex64;

use super::cmatrix::CMatrix;
use super::eig::eigh;
use super::error::MatError;
use super::svd::{sigma_max, svd};
use super::tolerance::ToleranceConfig;

fn require_hermitian(m: &CMatrix, tol: &ToleranceConfig) -> Result<(), MatError> {
    if !m.is_square() {
        return Err(MatError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let dev = m.hermitian_deviation();
    let allowed = tol.eq_tol * (1.0 + m.frobenius_norm());
    if dev > allowed {
        return Err(MatError::NotHermitian {
            deviation: dev,
            allowed,
        });
    }
    Ok(())
}

/// log det of a Hermitian positive definite matrix, in nats, computed as the
/// sum of log-eigenvalues.
pub fn logdet_hpd(m: &CMatrix, tol: &ToleranceConfig) -> Result<f64, MatError> {
    require_hermitian(m, tol)?;
    let (w, _) = eigh(m)?;
    let lam_min = w[0];
    if lam_min <= tol.eig_floor * m.frobenius_norm().max(1.0) {
        return Err(MatError::NotPositiveDefinite {
            lambda_min: lam_min,
        });
    }
    Ok(w.iter().map(|&l| l.ln()).sum())
}

/// λ_min(B − A), the margin of the Loewner comparison A ⪯ B.
pub fn loewner_margin(a: &CMatrix, b: &CMatrix, tol: &ToleranceConfig) -> Result<f64, MatError> {
    if !a.same_shape(b) {
        return Err(MatError::ShapeMismatch {
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: b.rows(),
            right_cols: b.cols(),
        });
    }
    require_hermitian(a, tol)?;
    require_hermitian(b, tol)?;
    let (w, _) = eigh(&(b - a))?;
    Ok(w[0])
}

/// Loewner order test A ⪯ B: true iff λ_min(B − A) ≥ −eig_floor·(1 + ‖A‖ + ‖B‖).
pub fn loewner_leq(a: &CMatrix, b: &CMatrix, tol: &ToleranceConfig) -> Result<bool, MatError> {
    let margin = loewner_margin(a, b, tol)?;
    Ok(margin >= -tol.eig_floor * (1.0 + a.frobenius_norm() + b.frobenius_norm()))
}

/// Result of the numerical-radius computation: the value is a lower bound
/// tight to the refinement tolerance, `bracket_width` is the final width of
/// the golden-section bracket in the angle variable.
#[derive(Debug, Clone, Copy)]
pub struct RadiusEstimate {
    pub value: f64,
    pub bracket_width: f64,
}

/// max over unit vectors α of |α† X α|, by the rotated-Hermitian-part
/// characterization: max over θ of λ_max((e^{iθ} X + e^{−iθ} X†)/2),
/// evaluated on a grid of `radius_grid` angles over [0, 2π) followed by
/// golden-section refinement of the best bracket.
pub fn numerical_radius_detailed(
    x: &CMatrix,
    tol: &ToleranceConfig,
) -> Result<RadiusEstimate, MatError> {
    if !x.is_square() {
        return Err(MatError::NotSquare {
            rows: x.rows(),
            cols: x.cols(),
        });
    }
    let xh = x.adjoint();
    let g = |theta: f64| -> f64 {
        let e = Complex64::from_polar(1.0, theta);
        let m = &x.scale_complex(e) + &xh.scale_complex(e.conj());
        let m = m.scale(0.5);
        let (w, _) = eigh(&m).expect("Hermitian by construction");
        w[w.len() - 1]
    };

    let n = tol.radius_grid.max(8);
    let step = std::f64::consts::TAU / n as f64;
    let mut best_k = 0usize;
    let mut best_val = f64::NEG_INFINITY;
    let vals: Vec<f64> = (0..n).map(|k| g(k as f64 * step)).collect();
    for (k, &v) in vals.iter().enumerate() {
        if v > best_val {
            best_val = v;
            best_k = k;
        }
    }

    // Golden-section refinement of the bracketing interval around the best
    // grid point (wrapping around the circle).
    let mut lo = (best_k as f64 - 1.0) * step;
    let mut hi = (best_k as f64 + 1.0) * step;
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut m1 = hi - INV_PHI * (hi - lo);
    let mut m2 = lo + INV_PHI * (hi - lo);
    let mut f1 = g(m1);
    let mut f2 = g(m2);
    for _ in 0..80 {
        if hi - lo < 1e-10 {
            break;
        }
        if f1 < f2 {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + INV_PHI * (hi - lo);
            f2 = g(m2);
        } else {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - INV_PHI * (hi - lo);
            f1 = g(m1);
        }
    }
    let refined = best_val.max(f1).max(f2);
    Ok(RadiusEstimate {
        value: refined,
        bracket_width: hi - lo,
    })
}

/// Numerical radius of a square matrix.
pub fn numerical_radius(x: &CMatrix, tol: &ToleranceConfig) -> Result<f64, MatError> {
    numerical_radius_detailed(x, tol).map(|r| r.value)
}

/// Moore–Penrose pseudo-inverse with singular values below
/// `rank_tol · σ_max` treated as zero.
pub fn pinv(x: &CMatrix, tol: &ToleranceConfig) -> CMatrix {
    let smax = sigma_max(x);
    pinv_with_cutoff(x, tol.rank_tol * smax)
}

/// Pseudo-inverse with an explicit absolute singular-value cutoff. Used
/// where the caller knows the natural scale of the matrix (products of
/// orthonormal bases and projectors are O(1), so their sub-noise singular
/// values must not be inverted no matter how the largest one shrinks).
pub fn pinv_with_cutoff(x: &CMatrix, cutoff: f64) -> CMatrix {
    let dec = svd(x);
    let mut out = CMatrix::zeros(x.cols(), x.rows());
    // out = sum_j sigma_j^{-1} v_j u_j†
    for (j, &s) in dec.sigma.iter().enumerate() {
        if s <= cutoff || s <= 0.0 {
            continue;
        }
        let inv = 1.0 / s;
        for r in 0..x.cols() {
            let vr = dec.v[(r, j)];
            if vr.re == 0.0 && vr.im == 0.0 {
                continue;
            }
            for c in 0..x.rows() {
                out[(r, c)] += vr * dec.u[(c, j)].conj() * inv;
            }
        }
    }
    out
}

/// Numerical rank at the `rank_tol` relative cutoff.
pub fn rank(x: &CMatrix, tol: &ToleranceConfig) -> usize {
    let dec = svd(x);
    let smax = dec.sigma.first().copied().unwrap_or(0.0);
    if smax <= 0.0 {
        return 0;
    }
    dec.sigma
        .iter()
        .filter(|&&s| s > tol.rank_tol * smax)
        .count()
}

/// True iff the matrix has full column rank.
pub fn is_left_invertible(x: &CMatrix, tol: &ToleranceConfig) -> bool {
    rank(x, tol) == x.cols()
}

/// Orthonormal basis of the null space of a Hermitian PSD matrix
/// (eigenvectors with eigenvalue below `rank_tol · λ_max`). Returns `None`
/// when the matrix is nonsingular at that cutoff.
pub fn null_basis(s: &CMatrix, tol: &ToleranceConfig) -> Result<Option<CMatrix>, MatError> {
    require_hermitian(s, tol)?;
    let (w, v) = eigh(s)?;
    let lam_max = w[w.len() - 1];
    let scale = s.frobenius_norm().max(1.0);
    if w[0] < -tol.eig_floor * scale {
        return Err(MatError::NotPsd { lambda_min: w[0] });
    }
    if lam_max <= tol.rank_tol * scale {
        // Zero matrix: the whole space is the null space.
        return Ok(Some(CMatrix::identity(s.rows())));
    }
    let idx: Vec<usize> = (0..w.len())
        .filter(|&i| w[i] < tol.rank_tol * lam_max)
        .collect();
    if idx.is_empty() {
        Ok(None)
    } else {
        Ok(Some(v.select_columns(&idx)))
    }
}

/// Hermitian positive definite square root, `R R = M`.
pub fn sqrtm_hpd(m: &CMatrix, tol: &ToleranceConfig) -> Result<CMatrix, MatError> {
    require_hermitian(m, tol)?;
    let (w, v) = eigh(m)?;
    if w[0] <= tol.eig_floor * m.frobenius_norm().max(1.0) {
        return Err(MatError::NotPositiveDefinite { lambda_min: w[0] });
    }
    Ok(rebuild_hermitian(
        &v,
        &w.iter().map(|&l| l.sqrt()).collect::<Vec<_>>(),
    ))
}

/// Inverse Hermitian square root, `R M R = I`.
pub fn inv_sqrtm_hpd(m: &CMatrix, tol: &ToleranceConfig) -> Result<CMatrix, MatError> {
    require_hermitian(m, tol)?;
    let (w, v) = eigh(m)?;
    if w[0] <= tol.eig_floor * m.frobenius_norm().max(1.0) {
        return Err(MatError::NotPositiveDefinite { lambda_min: w[0] });
    }
    Ok(rebuild_hermitian(
        &v,
        &w.iter().map(|&l| 1.0 / l.sqrt()).collect::<Vec<_>>(),
    ))
}

fn rebuild_hermitian(v: &CMatrix, diag: &[f64]) -> CMatrix {
    let n = v.rows();
    let mut out = CMatrix::zeros(n, n);
    for k in 0..n {
        let d = diag[k];
        for i in 0..n {
            let vik = v[(i, k)];
            for j in 0..n {
                out[(i, j)] += vik * v[(j, k)].conj() * d;
            }
        }
    }
    out.hermitian_part()
}

/// Contraction test σ_max(A) ≤ 1 + eig_floor; equivalent to A†A ⪯ I and to
/// A A† ⪯ I.
pub fn is_contraction(a: &CMatrix, tol: &ToleranceConfig) -> bool {
    sigma_max(a) <= 1.0 + tol.eig_floor
}

/// Relative matrix equality at the shared tolerance scaling.
pub fn approx_eq(a: &CMatrix, b: &CMatrix, tol: &ToleranceConfig) -> bool {
    a.same_shape(b) && a.distance(b) <= tol.eq_tol * (1.0 + a.frobenius_norm() + b.frobenius_norm())
}
