//! One-sided Jacobi singular value decomposition.
//!
//! Works column-by-column on the tall orientation of the input, which gives
//! small singular values with high relative accuracy — rank decisions at
//! `rank_tol = 1e-10` relative would not survive the squared conditioning of
//! an eigendecomposition of A†A.

use num_complex::Complex64;

use super::cmatrix::CMatrix;

const MAX_SWEEPS: usize = 60;

/// Thin SVD `a = U diag(sigma) V†` with `sigma` descending.
///
/// `u` is rows×k and `v` is cols×k with k = min(rows, cols). Columns of `u`
/// corresponding to zero singular values are zero vectors (they never enter
/// pseudo-inverse or rank computations, which cut at `rank_tol`).
pub struct Svd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

pub fn svd(a: &CMatrix) -> Svd {
    if a.rows() < a.cols() {
        let t = svd(&a.adjoint());
        return Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        };
    }
    let m = a.rows();
    let n = a.cols();
    let mut w = a.clone();
    let mut v = CMatrix::identity(n);

    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n.saturating_sub(1) {
            for j in i + 1..n {
                if orthogonalize_pair(&mut w, &mut v, i, j) {
                    rotated = true;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| w[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap());
    let w = w.select_columns(&order);
    let v = v.select_columns(&order);
    sigma = order.iter().map(|&i| sigma[i]).collect();

    let mut u = CMatrix::zeros(m, n);
    for j in 0..n {
        if sigma[j] > 0.0 {
            for i in 0..m {
                u[(i, j)] = w[(i, j)] / sigma[j];
            }
        }
    }
    Svd { u, sigma, v }
}

/// Rotate columns (i, j) of `w` to make them orthogonal; returns whether a
/// rotation was applied.
fn orthogonalize_pair(w: &mut CMatrix, v: &mut CMatrix, i: usize, j: usize) -> bool {
    let m = w.rows();
    let mut gii = 0.0;
    let mut gjj = 0.0;
    let mut gij = Complex64::new(0.0, 0.0);
    for k in 0..m {
        let wi = w[(k, i)];
        let wj = w[(k, j)];
        gii += wi.norm_sqr();
        gjj += wj.norm_sqr();
        gij += wi.conj() * wj;
    }
    let r = gij.norm();
    if r <= 1e-300 || r * r <= 1e-30 * gii * gjj {
        return false;
    }
    let phase = gij / r;

    // Same rotation as the Hermitian Jacobi applied to the 2x2 Gram matrix.
    let tau = (gii - gjj) / (2.0 * r);
    let t = if tau >= 0.0 {
        -1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let s_c = phase * s;

    for k in 0..m {
        let wi = w[(k, i)];
        let wj = w[(k, j)];
        w[(k, i)] = wi * c - wj * s_c.conj();
        w[(k, j)] = wi * s_c + wj * c;
    }
    let nv = v.rows();
    for k in 0..nv {
        let vi = v[(k, i)];
        let vj = v[(k, j)];
        v[(k, i)] = vi * c - vj * s_c.conj();
        v[(k, j)] = vi * s_c + vj * c;
    }
    true
}

/// Largest singular value; zero matrices report 0.
pub fn sigma_max(a: &CMatrix) -> f64 {
    svd(a).sigma.first().copied().unwrap_or(0.0)
}
