use serde::Serialize;

use crate::polarity::{polarity_map, Operator};
use crate::sets::ConvexSet;
use crate::verify::{compare, VerifyConfig};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "period", rename_all = "snake_case")]
pub enum IterationVerdict {
    Converged,
    Cycled(usize),
    NoFixedPointWithinBudget,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationRow {
    pub step: usize,
    /// Residual between `C_k` and `T_G(C_k)`.
    #[serde(with = "crate::extended")]
    pub self_residual: f64,
    /// Residual between `C_k` and `C_{k-1}`; absent at step 0.
    #[serde(with = "crate::extended::option")]
    pub consecutive_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationTrace {
    pub sets: Vec<ConvexSet>,
    pub rows: Vec<IterationRow>,
    pub verdict: IterationVerdict,
}

impl IterationTrace {
    pub fn min_self_residual(&self) -> f64 {
        self.rows.iter().map(|r| r.self_residual).fold(f64::INFINITY, f64::min)
    }
}

const MAX_PERIOD: usize = 4;

/// Iterates `C_{k+1} = T_G(C_k)` for at most `max_steps` steps.
///
/// Stops with `Converged` once `C_k` matches its own image, or with
/// `Cycled(p)` once `C_k` matches `C_{k−p}` for some `2 ≤ p ≤ 4`.
pub fn iterate_polarity(
    g: &Operator,
    c0: &ConvexSet,
    max_steps: usize,
    tol: f64,
    cfg: &VerifyConfig,
) -> Result<IterationTrace> {
    let cfg = VerifyConfig { tol, ..*cfg };
    let mut sets = vec![c0.clone()];
    let mut rows = Vec::new();
    let mut verdict = IterationVerdict::NoFixedPointWithinBudget;
    for k in 0..max_steps.max(1) {
        let ck = &sets[k];
        let image = polarity_map(g, ck)?;
        let self_residual = compare(ck, &image, &cfg)?.max_residual;
        let consecutive_residual = if k > 0 { Some(compare(ck, &sets[k - 1], &cfg)?.max_residual) } else { None };
        rows.push(IterationRow { step: k, self_residual, consecutive_residual });
        if self_residual <= tol {
            verdict = IterationVerdict::Converged;
            break;
        }
        let mut cycled = None;
        for p in 2..=MAX_PERIOD.min(k) {
            if compare(ck, &sets[k - p], &cfg)?.max_residual <= tol {
                cycled = Some(p);
                break;
            }
        }
        if let Some(p) = cycled {
            verdict = IterationVerdict::Cycled(p);
            break;
        }
        if k + 1 < max_steps {
            sets.push(image);
        }
    }
    Ok(IterationTrace { sets, rows, verdict })
}
