//! Residual reports certifying (or refuting) `C = (GC)°`.
//!
//! Sampled residuals are lower bounds on the true distance: a Fail is
//! rigorous, a Pass means no violation was found at the sampled resolution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::{norm, normalized};
use crate::polarity::{polarity_map, Operator};
use crate::sets::ConvexSet;
use crate::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_DIRS: usize = 512;
pub const DEFAULT_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub tol: f64,
    pub dirs: usize,
    pub seed: u64,
    pub margin: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { tol: DEFAULT_TOL, dirs: DEFAULT_DIRS, seed: 0, margin: DEFAULT_MARGIN }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualKind {
    Support,
    Gauge,
    ConeMembership,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Sanity {
    pub zero_in_set: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub kind: ResidualKind,
    pub dirs: usize,
    #[serde(with = "crate::extended")]
    pub max_residual: f64,
    pub argmax: Vec<f64>,
    pub verdict: Verdict,
    pub tolerance: f64,
    pub sanity: Sanity,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disagreements: Option<usize>,
    /// Set when the residual was computed by exact endpoint arithmetic.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
    /// Set when the residual is a sampled lower bound on the true distance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<bool>,
}

impl ResidualReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Re-judges the report against another tolerance.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self.verdict = judge(self.max_residual, tol);
        self
    }
}

fn judge(r: f64, tol: f64) -> Verdict {
    if r <= tol {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

/// Deterministic unit directions in ℝⁿ.
///
/// The sequence is prefix-nested (the first `k` of `count` directions do
/// not depend on `count`) and interleaves antipodal pairs. Dimensions 2 and
/// 3 use low-discrepancy sequences with a seeded offset; higher dimensions
/// use normalized Gaussian samples.
pub fn sample_directions(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = count.div_ceil(2);
    let base: Vec<Vec<f64>> = match dim {
        0 => Vec::new(),
        1 => vec![vec![1.0]; pairs],
        2 => {
            let golden = (5f64.sqrt() - 1.0) / 2.0;
            let off: f64 = rng.gen();
            (0..pairs)
                .map(|i| {
                    let t = std::f64::consts::TAU * frac(off + i as f64 * golden);
                    vec![t.cos(), t.sin()]
                })
                .collect()
        }
        3 => {
            let g = 1.324_717_957_244_746_f64;
            let (a1, a2) = (1.0 / g, 1.0 / (g * g));
            let (o1, o2): (f64, f64) = (rng.gen(), rng.gen());
            (0..pairs)
                .map(|i| {
                    let z = 1.0 - 2.0 * frac(o1 + i as f64 * a1);
                    let phi = std::f64::consts::TAU * frac(o2 + i as f64 * a2);
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    vec![r * phi.cos(), r * phi.sin(), z]
                })
                .collect()
        }
        _ => (0..pairs)
            .map(|_| loop {
                let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
                if norm(&v) > 1e-6 {
                    break normalized(&v);
                }
            })
            .collect(),
    };
    base.into_iter()
        .flat_map(|d| {
            let neg = d.iter().map(|v| -v).collect();
            [d, neg]
        })
        .take(count)
        .collect()
}

fn zero_in(c: &ConvexSet) -> bool {
    let z = vec![0.0; c.dim()];
    c.contains(&z, 0.0).unwrap_or(false) && c.gauge(&z).map(|g| g == 0.0).unwrap_or(false)
}

fn check_pair(c: &ConvexSet, d: &ConvexSet) -> Result<()> {
    if c.dim() != d.dim() {
        return Err(Error::DimensionMismatch { expected: c.dim(), found: d.dim() });
    }
    Ok(())
}

/// `|a − b|` with equal infinities at distance 0.
fn gap(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs()
    }
}

fn sampled(
    c: &ConvexSet,
    d: &ConvexSet,
    dirs: usize,
    seed: u64,
    kind: ResidualKind,
    eval: impl Fn(&ConvexSet, &[f64]) -> Result<f64> + Sync,
) -> Result<ResidualReport> {
    check_pair(c, d)?;
    if !c.is_bounded() || !d.is_bounded() {
        return Err(Error::UnboundedSet);
    }
    let us = sample_directions(c.dim(), dirs, seed);
    let res: Vec<f64> = us.par_iter().map(|u| Ok(gap(eval(c, u)?, eval(d, u)?))).collect::<Result<Vec<f64>>>()?;
    let (mut best, mut arg) = (0.0, 0);
    for (i, &r) in res.iter().enumerate() {
        if r > best || r.is_nan() {
            best = if r.is_nan() { f64::INFINITY } else { r };
            arg = i;
        }
    }
    Ok(ResidualReport {
        kind,
        dirs: us.len(),
        max_residual: best,
        argmax: us.get(arg).cloned().unwrap_or_default(),
        verdict: judge(best, DEFAULT_TOL),
        tolerance: DEFAULT_TOL,
        sanity: Sanity { zero_in_set: zero_in(c) },
        disagreements: None,
        exact: None,
        lower_bound: Some(true),
    })
}

/// `max_u |h_C(u) − h_D(u)|` over sampled unit directions.
pub fn support_residual(c: &ConvexSet, d: &ConvexSet, dirs: usize, seed: u64) -> Result<ResidualReport> {
    sampled(c, d, dirs, seed, ResidualKind::Support, |s, u| s.support(u))
}

/// `max_u |γ_C(u) − γ_D(u)|` over sampled unit directions.
pub fn gauge_residual(c: &ConvexSet, d: &ConvexSet, dirs: usize, seed: u64) -> Result<ResidualReport> {
    sampled(c, d, dirs, seed, ResidualKind::Gauge, |s, u| s.gauge(u))
}

/// Counts sampled directions where cone memberships disagree, skipping
/// directions within `margin` of either boundary.
pub fn cone_residual(c: &ConvexSet, d: &ConvexSet, dirs: usize, seed: u64, margin: f64) -> Result<ResidualReport> {
    check_pair(c, d)?;
    if !c.is_cone() || !d.is_cone() {
        return Err(Error::NotACone);
    }
    let us = sample_directions(c.dim(), dirs, seed);
    let flags: Vec<bool> = us
        .par_iter()
        .map(|u| {
            if c.near_cone_boundary(u, margin)? || d.near_cone_boundary(u, margin)? {
                return Ok(false);
            }
            Ok(c.contains(u, 0.0)? != d.contains(u, 0.0)?)
        })
        .collect::<Result<Vec<bool>>>()?;
    let count = flags.iter().filter(|&&f| f).count();
    let first = flags.iter().position(|&f| f);
    Ok(ResidualReport {
        kind: ResidualKind::ConeMembership,
        dirs: us.len(),
        max_residual: count as f64,
        argmax: first.map(|i| us[i].clone()).unwrap_or_default(),
        verdict: judge(count as f64, 0.0),
        tolerance: 0.0,
        sanity: Sanity { zero_in_set: zero_in(c) },
        disagreements: Some(count),
        exact: None,
        lower_bound: Some(true),
    })
}

/// Exact endpoint comparison of two intervals.
pub fn interval_residual(c: &ConvexSet, d: &ConvexSet) -> Result<ResidualReport> {
    let (ConvexSet::Interval { lo: a, hi: b }, ConvexSet::Interval { lo: p, hi: q }) = (c, d) else {
        return Err(Error::UnsupportedRepresentation("interval residual needs two intervals".into()));
    };
    let (gl, gh) = (gap(*a, *p), gap(*b, *q));
    let (r, arg) = if gl > gh { (gl, -1.0) } else { (gh, 1.0) };
    Ok(ResidualReport {
        kind: ResidualKind::Support,
        dirs: 2,
        max_residual: r,
        argmax: vec![arg],
        verdict: judge(r, 0.0),
        tolerance: 0.0,
        sanity: Sanity { zero_in_set: zero_in(c) },
        disagreements: None,
        exact: Some(true),
        lower_bound: None,
    })
}

/// Compares `C` with `T_G(C)` using the residual suited to its representation.
pub fn verify_fixed_point(g: &Operator, c: &ConvexSet, cfg: &VerifyConfig) -> Result<ResidualReport> {
    let t = polarity_map(g, c)?;
    compare(c, &t, cfg)
}

/// Residual between two sets under `cfg`, dispatching on representation.
pub fn compare(c: &ConvexSet, d: &ConvexSet, cfg: &VerifyConfig) -> Result<ResidualReport> {
    if matches!(c, ConvexSet::Interval { .. }) && matches!(d, ConvexSet::Interval { .. }) {
        return Ok(interval_residual(c, d)?.with_tolerance(cfg.tol));
    }
    if c.is_cone() || d.is_cone() {
        return cone_residual(c, d, cfg.dirs, cfg.seed, cfg.margin);
    }
    Ok(support_residual(c, d, cfg.dirs, cfg.seed)?.with_tolerance(cfg.tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    fn square() -> ConvexSet {
        ConvexSet::polytope_v(vec![vec![1.0, 1.0], vec![-1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0]]).unwrap()
    }

    fn rhombus() -> ConvexSet {
        ConvexSet::polytope_v(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]]).unwrap()
    }

    #[test]
    fn directions_are_unit_nested_and_paired() {
        for dim in 1..6 {
            let a = sample_directions(dim, 64, 3);
            let b = sample_directions(dim, 128, 3);
            assert_eq!(a.len(), 64);
            assert_eq!(&b[..64], &a[..]);
            for u in &a {
                assert!((norm(u) - 1.0).abs() < 1e-12);
            }
            for p in a.chunks(2) {
                assert!(p[0].iter().zip(&p[1]).all(|(x, y)| x == &-y));
            }
        }
    }

    #[test]
    fn square_vs_rhombus() {
        let r = support_residual(&square(), &rhombus(), 4096, 0).unwrap();
        // Sampled max approaches 1/√2 from below.
        assert!(r.max_residual <= std::f64::consts::FRAC_1_SQRT_2 + 1e-12);
        assert!(r.max_residual > 0.70);
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn ellipse_fixed_point() {
        let g = Operator::new(Matrix::from_diag(&[0.25, 4.0])).unwrap();
        let c = ConvexSet::ellipsoid(Matrix::from_diag(&[0.25, 4.0])).unwrap();
        let r = verify_fixed_point(&g, &c, &VerifyConfig::default()).unwrap();
        assert!(r.max_residual <= 1e-12);
        assert!(r.passed() && r.sanity.zero_in_set);
    }

    #[test]
    fn cones() {
        let neg = Operator::scalar(3, -1.0).unwrap();
        let l = ConvexSet::lorentz(vec![0.0, 0.0, 1.0]).unwrap();
        let o = ConvexSet::orthant(vec![1.0, 1.0, 1.0]).unwrap();
        let cfg = VerifyConfig { dirs: 2000, ..Default::default() };
        assert!(verify_fixed_point(&neg, &l, &cfg).unwrap().passed());
        assert!(verify_fixed_point(&neg, &o, &cfg).unwrap().passed());
        let r = cone_residual(&l, &o, 2000, 0, 1e-9).unwrap();
        assert!(r.disagreements.unwrap() > 0);
        assert!(matches!(support_residual(&l, &l, 8, 0), Err(Error::UnboundedSet)));
    }

    #[test]
    fn intervals_exact() {
        let g = Operator::scalar(1, -1.0).unwrap();
        let pass = verify_fixed_point(&g, &ConvexSet::interval(-0.5, 2.0).unwrap(), &VerifyConfig::default()).unwrap();
        assert_eq!(pass.max_residual, 0.0);
        assert_eq!(pass.exact, Some(true));
        let fail = verify_fixed_point(&g, &ConvexSet::interval(0.0, 2.0).unwrap(), &VerifyConfig::default()).unwrap();
        assert_eq!(fail.verdict, Verdict::Fail);
        assert_eq!(fail.max_residual, f64::INFINITY);
    }
}
