use serde_json::{json, Value};

/// A rate bound c1·R1 + c2·R2 ≤ limit with c ∈ {0,1}².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBound {
    pub coeffs: (u8, u8),
    pub limit: f64,
}

/// A rate polytope in the nonnegative orthant described by per-user and sum
/// bounds, together with its extreme points. Rates are in nats per channel
/// use.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRegion {
    pub bounds: Vec<RateBound>,
    pub vertices: Vec<(f64, f64)>,
}

impl RateRegion {
    /// Rectangle 0 ≤ R1 ≤ a, 0 ≤ R2 ≤ b.
    pub fn rectangle(a: f64, b: f64) -> RateRegion {
        let bounds = vec![
            RateBound {
                coeffs: (1, 0),
                limit: a,
            },
            RateBound {
                coeffs: (0, 1),
                limit: b,
            },
        ];
        RateRegion {
            bounds,
            vertices: enumerate_vertices(a, b, None),
        }
    }

    /// Pentagon 0 ≤ R1 ≤ a, 0 ≤ R2 ≤ b, R1 + R2 ≤ c (with degenerate
    /// collapses when the sum bound is inactive or dominant).
    pub fn pentagon(a: f64, b: f64, c: f64) -> RateRegion {
        let bounds = vec![
            RateBound {
                coeffs: (1, 0),
                limit: a,
            },
            RateBound {
                coeffs: (0, 1),
                limit: b,
            },
            RateBound {
                coeffs: (1, 1),
                limit: c,
            },
        ];
        RateRegion {
            bounds,
            vertices: enumerate_vertices(a, b, Some(c)),
        }
    }

    pub fn max_sum_rate(&self) -> f64 {
        self.vertices
            .iter()
            .map(|(r1, r2)| r1 + r2)
            .fold(0.0, f64::max)
    }

    pub fn contains(&self, r1: f64, r2: f64, slack: f64) -> bool {
        if r1 < -slack || r2 < -slack {
            return false;
        }
        self.bounds
            .iter()
            .all(|b| b.coeffs.0 as f64 * r1 + b.coeffs.1 as f64 * r2 <= b.limit + slack)
    }

    pub fn to_json(&self) -> Value {
        let bounds: Vec<Value> = self
            .bounds
            .iter()
            .map(|b| {
                json!({
                    "coeffs": [b.coeffs.0, b.coeffs.1],
                    "limit": b.limit,
                })
            })
            .collect();
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .map(|(r1, r2)| json!([r1, r2]))
            .collect();
        json!({ "bounds": bounds, "vertices": vertices })
    }
}

/// Extreme points of {R ≥ 0, R1 ≤ a, R2 ≤ b, R1+R2 ≤ c}: candidates are the
/// pairwise constraint intersections, filtered for feasibility, deduplicated
/// and ordered counterclockwise from the origin. No LP machinery is needed
/// for this fixed constraint family.
fn enumerate_vertices(a: f64, b: f64, c: Option<f64>) -> Vec<(f64, f64)> {
    let a = a.max(0.0);
    let b = b.max(0.0);
    let mut candidates: Vec<(f64, f64)> = vec![(0.0, 0.0)];
    match c {
        None => {
            candidates.push((a, 0.0));
            candidates.push((a, b));
            candidates.push((0.0, b));
        }
        Some(c) => {
            let c = c.max(0.0);
            candidates.push((a.min(c), 0.0));
            if c <= a + b {
                if c >= a {
                    candidates.push((a, c - a));
                }
                if c >= b {
                    candidates.push((c - b, b));
                }
            } else {
                candidates.push((a, b));
            }
            candidates.push((0.0, b.min(c)));
        }
    }
    let feasible = |&(r1, r2): &(f64, f64)| -> bool {
        r1 >= 0.0
            && r2 >= 0.0
            && r1 <= a + 1e-12
            && r2 <= b + 1e-12
            && c.is_none_or(|c| r1 + r2 <= c + 1e-12)
    };
    let mut vertices: Vec<(f64, f64)> = Vec::new();
    for cand in candidates.into_iter().filter(|p| feasible(p)) {
        let dup = vertices
            .iter()
            .any(|v| (v.0 - cand.0).abs() <= 1e-12 && (v.1 - cand.1).abs() <= 1e-12);
        if !dup {
            vertices.push(cand);
        }
    }
    // Counterclockwise from the origin: sort by angle around the centroid,
    // then rotate so (0, 0) leads.
    if vertices.len() > 2 {
        let cx = vertices.iter().map(|v| v.0).sum::<f64>() / vertices.len() as f64;
        let cy = vertices.iter().map(|v| v.1).sum::<f64>() / vertices.len() as f64;
        vertices.sort_by(|p, q| {
            let ap = (p.1 - cy).atan2(p.0 - cx);
            let aq = (q.1 - cy).atan2(q.0 - cx);
            ap.partial_cmp(&aq).unwrap()
        });
        if let Some(pos) = vertices
            .iter()
            .position(|v| v.0.abs() <= 1e-12 && v.1.abs() <= 1e-12)
        {
            vertices.rotate_left(pos);
        }
    }
    vertices
}
