//! Dense tableau simplex with Bland's rule, sized for support-function queries.

use serde::{Deserialize, Serialize};

use super::matrix::{dot, norm};
use super::vertices::polygon_vertices;
use crate::{Error, Result};

/// Halfspace data `{x : ⟨a_i, x⟩ ≤ 1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HPolyData {
    pub rows: Vec<Vec<f64>>,
}

impl HPolyData {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.first().map(Vec::len).ok_or_else(|| Error::InvalidSet("no rows".into()))?;
        for r in &rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: r.len() });
            }
            if r.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidSet("row entries must be finite".into()));
            }
            if norm(r) == 0.0 {
                return Err(Error::InvalidSet("zero constraint row".into()));
            }
        }
        Ok(HPolyData { rows })
    }

    pub fn dim(&self) -> usize {
        self.rows[0].len()
    }
}

/// `max ⟨c, x⟩` over `{x : ⟨a_i, x⟩ ≤ 1}`.
///
/// Bounded planar inputs are answered from the exact polygon vertices; the
/// tableau handles everything else.
pub fn lp_support(c: &[f64], h: &HPolyData) -> Result<f64> {
    if c.len() == 2 {
        if let Some(v) = polygon_vertices(&h.rows) {
            return Ok(v.iter().map(|p| c[0] * p[0] + c[1] * p[1]).fold(f64::NEG_INFINITY, f64::max));
        }
    }
    let rhs = vec![1.0; h.rows.len()];
    lp_max(c, &h.rows, &rhs).map(|(v, _)| v)
}

const EPS: f64 = 1e-12;
/// Smallest accepted pivot. Rows are normalized, so entries are O(1);
/// pivoting on anything smaller amplifies rounding at degenerate vertices.
const PIVOT_EPS: f64 = 1e-9;

/// `max ⟨c, x⟩` s.t. `⟨a_i, x⟩ ≤ b_i` with every `b_i ≥ 0`, `x` free.
///
/// Returns the optimal value and an optimal point. Since `x = 0` is
/// feasible the slack basis is a valid start and no phase 1 is needed.
pub(crate) fn lp_max(c: &[f64], rows: &[Vec<f64>], rhs: &[f64]) -> Result<(f64, Vec<f64>)> {
    let n = c.len();
    let m = rows.len();
    debug_assert!(rhs.iter().all(|&b| b >= 0.0));
    // Columns: x⁺ (n), x⁻ (n), slacks (m), rhs.
    let width = 2 * n + m + 1;
    let mut t = vec![vec![0.0; width]; m + 1];
    for (i, (r, &b)) in rows.iter().zip(rhs).enumerate() {
        let s = norm(r);
        for j in 0..n {
            t[i][j] = r[j] / s;
            t[i][n + j] = -r[j] / s;
        }
        t[i][2 * n + i] = 1.0;
        t[i][width - 1] = b / s;
    }
    // Objective row stores reduced costs as -c (we maximize).
    let cscale = norm(c).max(f64::MIN_POSITIVE);
    for j in 0..n {
        t[m][j] = -c[j] / cscale;
        t[m][n + j] = c[j] / cscale;
    }
    let mut basis: Vec<usize> = (0..m).map(|i| 2 * n + i).collect();

    // Bland: lowest-index column with negative reduced cost enters.
    while let Some(enter) = (0..width - 1).find(|&j| t[m][j] < -EPS) {
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            let a = t[i][enter];
            if a > PIVOT_EPS {
                let ratio = t[i][width - 1] / a;
                let better = match leave {
                    None => true,
                    Some(l) => ratio < best - EPS || (ratio <= best + EPS && basis[i] < basis[l]),
                };
                if better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(p) = leave else { return Err(Error::UnboundedLp) };
        pivot(&mut t, p, enter);
        basis[p] = enter;
        for row in t.iter_mut().take(m) {
            if row[width - 1] < 0.0 && row[width - 1] > -EPS {
                row[width - 1] = 0.0;
            }
        }
    }

    let mut x = vec![0.0; n];
    for (i, &b) in basis.iter().enumerate() {
        let v = t[i][width - 1];
        if b < n {
            x[b] += v;
        } else if b < 2 * n {
            x[b - n] -= v;
        }
    }
    Ok((dot(c, &x), x))
}

fn pivot(t: &mut [Vec<f64>], p: usize, q: usize) {
    let pv = t[p][q];
    t[p].iter_mut().for_each(|v| *v /= pv);
    let prow = t[p].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == p {
            continue;
        }
        let f = row[q];
        if f == 0.0 {
            continue;
        }
        for (v, pr) in row.iter_mut().zip(&prow) {
            *v -= f * pr;
        }
        row[q] = 0.0;
    }
}
