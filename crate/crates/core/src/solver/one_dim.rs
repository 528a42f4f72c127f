use serde::Serialize;

use crate::sets::ConvexSet;
use crate::{Error, Result};

/// All solutions of `C = (γC)°` on the real line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneDimSolutionFamily {
    pub gamma: f64,
    /// The single solution when `γ > 0`.
    pub unique: Option<ConvexSet>,
    /// Human-readable form of the bounded family when `γ < 0`.
    pub family: Option<String>,
    /// `(−∞, 0]` and `[0, ∞)` when `γ < 0`.
    pub rays: Vec<ConvexSet>,
}

impl OneDimSolutionFamily {
    /// The bounded member `[1/(γb), b]`; only defined for `γ < 0`.
    pub fn member(&self, b: f64) -> Result<ConvexSet> {
        if self.gamma > 0.0 {
            return Err(Error::BadParams("gamma > 0 has a unique solution".into()));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::BadParams("b must be positive and finite".into()));
        }
        ConvexSet::interval(1.0 / (self.gamma * b), b)
    }

    /// Every listed solution, with `b` values for the bounded family.
    pub fn solutions(&self, bs: &[f64]) -> Result<Vec<ConvexSet>> {
        if let Some(u) = &self.unique {
            return Ok(vec![u.clone()]);
        }
        let mut out = bs.iter().map(|&b| self.member(b)).collect::<Result<Vec<_>>>()?;
        out.extend(self.rays.iter().cloned());
        Ok(out)
    }
}

pub fn classify_1d(gamma: f64) -> Result<OneDimSolutionFamily> {
    if gamma == 0.0 || gamma.is_nan() {
        return Err(Error::ZeroGamma);
    }
    if gamma > 0.0 {
        let r = 1.0 / gamma.sqrt();
        return Ok(OneDimSolutionFamily {
            gamma,
            unique: Some(ConvexSet::interval(-r, r)?),
            family: None,
            rays: Vec::new(),
        });
    }
    Ok(OneDimSolutionFamily {
        gamma,
        unique: None,
        family: Some(format!("b -> [1/({gamma}*b), b], b > 0")),
        rays: vec![ConvexSet::interval(f64::NEG_INFINITY, 0.0)?, ConvexSet::interval(0.0, f64::INFINITY)?],
    })
}

/// One representative of each endpoint pattern `[a, b]` with `a ≤ 0 ≤ b`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseShape {
    pub label: &'static str,
    pub shape: &'static str,
    pub set: ConvexSet,
    pub solves: bool,
}

/// The nine endpoint patterns for `γ < 0`, each with a concrete representative.
///
/// Only `(−∞, 0]`, `[1/(γb), b]` and `[0, ∞)` solve; the bounded
/// representative uses `b = 2`.
pub fn case_table(gamma: f64) -> Result<Vec<CaseShape>> {
    if gamma >= 0.0 || gamma.is_nan() {
        return Err(Error::BadParams("the case table is for gamma < 0".into()));
    }
    let inf = f64::INFINITY;
    let rows: [(&str, &str, f64, f64, bool); 9] = [
        ("I", "(-inf, 0]", -inf, 0.0, true),
        ("II", "(-inf, b], b finite", -inf, 1.0, false),
        ("III", "(-inf, inf)", -inf, inf, false),
        ("IV", "[a, 0], a finite", -1.0, 0.0, false),
        ("V", "[a, b] with a = 1/(gamma b)", 1.0 / (gamma * 2.0), 2.0, true),
        ("VI", "[a, inf), a finite", -1.0, inf, false),
        ("VII", "{0}", 0.0, 0.0, false),
        ("VIII", "[0, b], b finite", 0.0, 2.0, false),
        ("IX", "[0, inf)", 0.0, inf, true),
    ];
    rows.iter()
        .map(|&(label, shape, lo, hi, solves)| {
            Ok(CaseShape { label, shape, set: ConvexSet::interval(lo, hi)?, solves })
        })
        .collect()
}
