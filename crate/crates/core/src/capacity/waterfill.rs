//! Trace-constrained covariance optimization: classic single-user
//! waterfilling over the channel's singular modes, and the joint
//! treat-interference-as-noise power allocation for diagonal (parallel)
//! channels.

use crate::matlib::{svd, CMatrix, ToleranceConfig};

/// The covariance maximizing log|I + H S H†| subject to trace(S) ≤ P,
/// S ⪰ 0: water levels over the positive squared singular values of H,
/// with the level found by bisection to 1e-12 relative.
pub fn waterfill(h: &CMatrix, p: f64, tol: &ToleranceConfig) -> CMatrix {
    let t = h.cols();
    if p <= 0.0 {
        return CMatrix::zeros(t, t);
    }
    let dec = svd(h);
    let smax = dec.sigma.first().copied().unwrap_or(0.0);
    if smax <= 0.0 {
        return CMatrix::zeros(t, t);
    }
    let cutoff = tol.rank_tol * smax;
    let inv_gains: Vec<f64> = dec
        .sigma
        .iter()
        .filter(|&&s| s > cutoff)
        .map(|&s| 1.0 / (s * s))
        .collect();
    if inv_gains.is_empty() {
        return CMatrix::zeros(t, t);
    }
    let total = |mu: f64| -> f64 { inv_gains.iter().map(|&g| (mu - g).max(0.0)).sum() };
    let mut lo = 0.0;
    let mut hi = inv_gains.iter().cloned().fold(0.0, f64::max) + p;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if total(mid) > p {
            hi = mid;
        } else {
            lo = mid;
        }
        if (hi - lo) <= 1e-12 * (1.0 + hi.abs()) {
            break;
        }
    }
    let mu = 0.5 * (lo + hi);
    // S = V diag(max(mu - 1/lambda, 0)) V† over the retained modes.
    let mut s = CMatrix::zeros(t, t);
    let mut mode = 0usize;
    for (j, &sv) in dec.sigma.iter().enumerate() {
        if sv <= cutoff {
            continue;
        }
        let power = (mu - inv_gains[mode]).max(0.0);
        mode += 1;
        if power <= 0.0 {
            continue;
        }
        for r in 0..t {
            let vr = dec.v[(r, j)];
            for c in 0..t {
                s[(r, c)] += vr * dec.v[(c, j)].conj() * power;
            }
        }
    }
    s.hermitian_part()
}

/// Per-mode water levels of a waterfilled covariance against channel `h`:
/// used by the KKT verification (all active modes share one level).
pub fn water_levels(h: &CMatrix, s: &CMatrix, tol: &ToleranceConfig) -> Vec<(f64, f64)> {
    let dec = svd(h);
    let smax = dec.sigma.first().copied().unwrap_or(0.0);
    let cutoff = tol.rank_tol * smax;
    let mut out = Vec::new();
    for (j, &sv) in dec.sigma.iter().enumerate() {
        if sv <= cutoff {
            continue;
        }
        let vj = dec.v.column(j);
        let sv_j = s.mul_vec(&vj);
        let power: f64 = vj
            .iter()
            .zip(sv_j.iter())
            .map(|(a, b)| (a.conj() * b).re)
            .sum();
        out.push((power, 1.0 / (sv * sv)));
    }
    out
}

/// Joint treat-interference-as-noise power allocation for a parallel
/// (all-diagonal) channel under per-user total power budgets: projected
/// gradient ascent on the TIN sum rate over the two power simplices.
/// Deterministic; not certified globally optimal (the objective is not
/// jointly concave), which is all the reproduction harness requires.
pub fn parallel_tin_powers(
    h1: &CMatrix,
    h2: &CMatrix,
    h3: &CMatrix,
    h4: &CMatrix,
    p1: f64,
    p2: f64,
    iters: usize,
) -> Result<(Vec<f64>, Vec<f64>), String> {
    let n = h1.rows();
    for (name, h) in [("H1", h1), ("H2", h2), ("H3", h3), ("H4", h4)] {
        if !h.is_square() || h.rows() != n {
            return Err(format!("{name} must be square of the shared dimension"));
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && h[(i, j)].norm() > 0.0 {
                    return Err(format!("{name} is not diagonal"));
                }
            }
        }
    }
    let a: Vec<f64> = (0..n).map(|i| h1[(i, i)].norm_sqr()).collect();
    let b: Vec<f64> = (0..n).map(|i| h2[(i, i)].norm_sqr()).collect();
    let c: Vec<f64> = (0..n).map(|i| h3[(i, i)].norm_sqr()).collect();
    let d: Vec<f64> = (0..n).map(|i| h4[(i, i)].norm_sqr()).collect();

    let mut q1 = vec![p1 / n as f64; n];
    let mut q2 = vec![p2 / n as f64; n];
    let step = 0.5;
    for _ in 0..iters {
        let mut g1 = vec![0.0; n];
        let mut g2 = vec![0.0; n];
        for k in 0..n {
            let x = 1.0 + b[k] * q2[k] + a[k] * q1[k];
            let y = 1.0 + c[k] * q1[k] + d[k] * q2[k];
            let z1 = 1.0 + c[k] * q1[k];
            let z2 = 1.0 + b[k] * q2[k];
            g1[k] = a[k] / x + c[k] / y - c[k] / z1;
            g2[k] = b[k] / x - b[k] / z2 + d[k] / y;
        }
        for k in 0..n {
            q1[k] += step * g1[k];
            q2[k] += step * g2[k];
        }
        project_simplex(&mut q1, p1);
        project_simplex(&mut q2, p2);
    }
    Ok((q1, q2))
}

/// Euclidean projection onto {p ≥ 0, Σp = budget}.
fn project_simplex(p: &mut [f64], budget: f64) {
    if budget <= 0.0 {
        p.iter_mut().for_each(|x| *x = 0.0);
        return;
    }
    let mut sorted: Vec<f64> = p.to_vec();
    sorted.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let mut acc = 0.0;
    let mut theta = 0.0;
    for (i, &u) in sorted.iter().enumerate() {
        acc += u;
        let cand = (acc - budget) / (i as f64 + 1.0);
        if u - cand > 0.0 {
            theta = cand;
        }
    }
    for x in p.iter_mut() {
        *x = (*x - theta).max(0.0);
    }
}

/// TIN sum rate of a parallel channel at the given diagonal powers.
pub fn parallel_tin_sum_rate(
    h1: &CMatrix,
    h2: &CMatrix,
    h3: &CMatrix,
    h4: &CMatrix,
    q1: &[f64],
    q2: &[f64],
) -> f64 {
    let n = h1.rows();
    let mut total = 0.0;
    for k in 0..n {
        let a = h1[(k, k)].norm_sqr();
        let b = h2[(k, k)].norm_sqr();
        let c = h3[(k, k)].norm_sqr();
        let d = h4[(k, k)].norm_sqr();
        total += (1.0 + b * q2[k] + a * q1[k]).ln() - (1.0 + b * q2[k]).ln();
        total += (1.0 + c * q1[k] + d * q2[k]).ln() - (1.0 + c * q1[k]).ln();
    }
    total
}
