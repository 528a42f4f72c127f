use itertools::Itertools;

use super::matrix::{dot, norm, solve_dense};

/// Brute-force vertex enumeration of `{x : ⟨a_i, x⟩ ≤ 1}`.
///
/// Tries every n-subset of rows, so only use it on small inputs. Duplicate
/// vertices (from degenerate corners) are merged.
pub fn enumerate_vertices(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let Some(n) = rows.first().map(Vec::len) else { return Vec::new() };
    let normed: Vec<(Vec<f64>, f64)> = rows
        .iter()
        .map(|r| {
            let s = norm(r);
            (r.iter().map(|v| v / s).collect(), 1.0 / s)
        })
        .collect();
    let mut out: Vec<Vec<f64>> = Vec::new();
    for combo in (0..rows.len()).combinations(n) {
        let a: Vec<Vec<f64>> = combo.iter().map(|&i| normed[i].0.clone()).collect();
        let b: Vec<f64> = combo.iter().map(|&i| normed[i].1).collect();
        let Ok(x) = solve_dense(a, b) else { continue };
        if !x.iter().all(|v| v.is_finite()) {
            continue;
        }
        let feasible = normed.iter().all(|(a, b)| dot(a, &x) <= b + 1e-9 * (1.0 + b.abs()));
        if !feasible {
            continue;
        }
        let scale = 1.0 + norm(&x);
        if !out.iter().any(|v| v.iter().zip(&x).all(|(p, q)| (p - q).abs() <= 1e-9 * scale)) {
            out.push(x);
        }
    }
    out
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Vertices of the planar polygon `{x : ⟨a_i, x⟩ ≤ 1}`, counterclockwise.
///
/// Works through the polar: the hull of the rows is `C°`, and each hull
/// edge `(a, b)` yields the vertex solving `⟨a, x⟩ = ⟨b, x⟩ = 1` by
/// Cramer's rule. No pivoting threshold is involved, so very elongated
/// polygons stay exact to rounding. Returns `None` when the origin is not
/// strictly inside the hull of the rows (the polygon is unbounded).
pub fn polygon_vertices(rows: &[Vec<f64>]) -> Option<Vec<[f64; 2]>> {
    if rows.len() < 3 || rows.iter().any(|r| r.len() != 2) {
        return None;
    }
    let mut pts: Vec<[f64; 2]> = rows.iter().map(|r| [r[0], r[1]]).collect();
    pts.sort_by(|p, q| p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1])));
    pts.dedup();
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() < 3 {
        return None;
    }
    let k = hull.len();
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let (a, b) = (hull[i], hull[(i + 1) % k]);
        let det = a[0] * b[1] - a[1] * b[0];
        if det <= 0.0 {
            return None;
        }
        out.push([(b[1] - a[1]) / det, (a[0] - b[0]) / det]);
    }
    Some(out)
}

/// Sorts planar points counterclockwise by angle around the origin.
pub fn sort_by_angle(points: &mut [Vec<f64>]) {
    points.sort_by(|p, q| p[1].atan2(p[0]).total_cmp(&q[1].atan2(q[0])));
}
