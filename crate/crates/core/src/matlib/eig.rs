//! Dense Hermitian eigendecomposition (cyclic complex Jacobi) and Cholesky.
//!
//! Jacobi is chosen over tridiagonalization because every matrix in this
//! problem domain is small (channel dimensions are single digits) and Jacobi
//! delivers eigenvalues with high relative accuracy, which the rank and
//! null-space decisions depend on.

use num_complex::Complex64;

use super::cmatrix::CMatrix;
use super::error::MatError;

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition of the Hermitian part of `m`.
///
/// Returns eigenvalues in ascending order and the matrix of eigenvectors as
/// columns, so that `m ≈ V diag(w) V†`. The input is symmetrized first; the
/// caller is responsible for rejecting matrices that are not Hermitian to
/// within its own tolerance.
pub fn eigh(m: &CMatrix) -> Result<(Vec<f64>, CMatrix), MatError> {
    if !m.is_square() {
        return Err(MatError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);
    if n == 1 {
        return Ok((vec![a[(0, 0)].re], v));
    }

    let scale = a.frobenius_norm().max(1e-300);
    let stop = scale * 1e-15;

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let off = off_diag_norm(&a);
        if off <= stop {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diag_norm(&a) > stop * 10.0 {
        return Err(MatError::NoConvergence {
            sweeps: MAX_SWEEPS,
            off: off_diag_norm(&a),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let evals: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| evals[i].partial_cmp(&evals[j]).unwrap());
    let sorted: Vec<f64> = order.iter().map(|&i| evals[i]).collect();
    Ok((sorted, v.select_columns(&order)))
}

fn off_diag_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                s += a[(p, q)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One complex Jacobi rotation zeroing the (p, q) entry of Hermitian `a`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    let alpha = a[(p, p)].re;
    let beta = a[(q, q)].re;
    if r <= 1e-300 || r <= 1e-17 * (alpha.abs() + beta.abs()) {
        return;
    }
    let phase = apq / r;

    // Zeroing condition: (alpha - beta) t + r (1 - t^2) = 0 with t = tan(theta);
    // pick the smaller-magnitude root for stability.
    let tau = (alpha - beta) / (2.0 * r);
    let t = if tau >= 0.0 {
        -1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let s_c = phase * s; // complex rotation entry

    let n = a.rows();
    // A <- U† A U with U = I except U[pp]=c, U[pq]=s_c, U[qp]=-conj(s_c), U[qq]=c.
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * s_c.conj();
        a[(k, q)] = akp * s_c + akq * c;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * s_c;
        a[(q, k)] = apk * s_c.conj() + aqk * c;
    }
    // Clean up rounding on the pivot pair.
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * s_c.conj();
        v[(k, q)] = vkp * s_c + vkq * c;
    }
}

/// Cholesky factor L (lower triangular) of a Hermitian positive definite
/// matrix, `m = L L†`.
pub fn cholesky(m: &CMatrix) -> Result<CMatrix, MatError> {
    if !m.is_square() {
        return Err(MatError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let a = m.hermitian_part();
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d <= 0.0 || !d.is_finite() {
            return Err(MatError::NotPositiveDefinite { lambda_min: d });
        }
        let dj = d.sqrt();
        l[(j, j)] = Complex64::new(dj, 0.0);
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / dj;
        }
    }
    Ok(l)
}

/// Solve `M X = B` for Hermitian positive definite `M` via Cholesky.
pub fn solve_hpd(m: &CMatrix, b: &CMatrix) -> Result<CMatrix, MatError> {
    if m.rows() != b.rows() {
        return Err(MatError::ShapeMismatch {
            left_rows: m.rows(),
            left_cols: m.cols(),
            right_rows: b.rows(),
            right_cols: b.cols(),
        });
    }
    let l = cholesky(m)?;
    let n = m.rows();
    let k = b.cols();
    // forward: L y = b
    let mut y = b.clone();
    for col in 0..k {
        for i in 0..n {
            let mut s = y[(i, col)];
            for j in 0..i {
                s -= l[(i, j)] * y[(j, col)];
            }
            y[(i, col)] = s / l[(i, i)].re;
        }
    }
    // backward: L† x = y
    for col in 0..k {
        for i in (0..n).rev() {
            let mut s = y[(i, col)];
            for j in i + 1..n {
                s -= l[(j, i)].conj() * y[(j, col)];
            }
            y[(i, col)] = s / l[(i, i)].re;
        }
    }
    Ok(y)
}

/// Inverse of a Hermitian positive definite matrix.
pub fn inv_hpd(m: &CMatrix) -> Result<CMatrix, MatError> {
    solve_hpd(m, &CMatrix::identity(m.rows()))
}
