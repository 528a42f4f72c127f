//! Closed-form convex sets with gauge, support and membership.

mod doc;

use serde::Serialize;

use crate::linalg::{
    dot, enumerate_vertices, is_positive_definite, lp_max, lp_support, norm, sym_eig, unit, HPolyData, Matrix,
};
use crate::{Error, Result};

pub use doc::SetDoc;

/// `{x : ⟨Ax, x⟩ ≤ 1}` with the inverse cached for support evaluation.
#[derive(Debug, Clone)]
pub struct Ellipsoid {
    a: Matrix,
    a_inv: Matrix,
}

/// The set is determined by `A`; the cached inverse may differ in the last
/// bits depending on how it was obtained.
impl PartialEq for Ellipsoid {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a
    }
}

impl Ellipsoid {
    pub fn new(a: Matrix) -> Result<Self> {
        if !is_positive_definite(&a) {
            return Err(Error::NotPositiveDefinite);
        }
        let a = a.symmetrized();
        let a_inv = a.inverse()?.symmetrized();
        Ok(Ellipsoid { a, a_inv })
    }

    /// Builds from a known inverse pair without recomputing; both must be SPD.
    pub(crate) fn from_pair(a: Matrix, a_inv: Matrix) -> Self {
        Ellipsoid { a: a.symmetrized(), a_inv: a_inv.symmetrized() }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn inverse(&self) -> &Matrix {
        &self.a_inv
    }

    pub fn polar(&self) -> Ellipsoid {
        Ellipsoid { a: self.a_inv.clone(), a_inv: self.a.clone() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConvexSet {
    Ball {
        dim: usize,
        radius: f64,
    },
    Ellipsoid(Ellipsoid),
    /// Convex hull of the vertices; 0 lies in its interior.
    PolytopeV(Vec<Vec<f64>>),
    /// `{x : ⟨a_i, x⟩ ≤ 1}`, bounded.
    PolytopeH(HPolyData),
    /// Conic hull of the generators.
    ConeV(Vec<Vec<f64>>),
    /// `{x : ⟨a_i, x⟩ ≤ 0}`.
    ConeH(Vec<Vec<f64>>),
    /// Circular cone of half-aperture π/4 about a unit axis.
    Lorentz(Vec<f64>),
    /// `{x : s_i x_i ≥ 0}` with `s_i = ±1`.
    Orthant(Vec<f64>),
    /// `[lo, hi]` in one dimension, endpoints possibly infinite.
    Interval {
        lo: f64,
        hi: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SetClass {
    pub bounded: bool,
    pub zero_interior: bool,
    pub cone: bool,
    pub centrally_symmetric: bool,
}

fn check_points(pts: &[Vec<f64>], what: &str) -> Result<usize> {
    let dim = pts.first().map(Vec::len).ok_or_else(|| Error::InvalidSet(format!("no {what}")))?;
    if dim == 0 {
        return Err(Error::InvalidSet(format!("{what} must have positive dimension")));
    }
    for p in pts {
        if p.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSet(format!("{what} must be finite")));
        }
    }
    Ok(dim)
}

/// True when `{x : ⟨a_i, x⟩ ≤ 1}` is bounded.
fn h_bounded(rows: &[Vec<f64>]) -> bool {
    let dim = rows[0].len();
    let rhs = vec![1.0; rows.len()];
    (0..dim).all(|j| {
        let e = unit(dim, j);
        let ne: Vec<f64> = e.iter().map(|v| -v).collect();
        lp_max(&e, rows, &rhs).is_ok() && lp_max(&ne, rows, &rhs).is_ok()
    })
}

impl ConvexSet {
    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSet("ball dimension must be positive".into()));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidSet("ball radius must be positive and finite".into()));
        }
        Ok(ConvexSet::Ball { dim, radius })
    }

    pub fn ellipsoid(a: Matrix) -> Result<Self> {
        Ok(ConvexSet::Ellipsoid(Ellipsoid::new(a)?))
    }

    pub fn polytope_v(vertices: Vec<Vec<f64>>) -> Result<Self> {
        check_points(&vertices, "vertices")?;
        // 0 is interior to the hull iff the polar is bounded.
        if !h_bounded(&vertices_nonzero(&vertices)) {
            return Err(Error::InvalidSet("0 is not interior to the convex hull".into()));
        }
        Ok(ConvexSet::PolytopeV(vertices))
    }

    pub fn polytope_h(normals: Vec<Vec<f64>>) -> Result<Self> {
        let h = HPolyData::new(normals)?;
        if !h_bounded(&h.rows) {
            return Err(Error::InvalidSet("halfspace intersection is unbounded".into()));
        }
        Ok(ConvexSet::PolytopeH(h))
    }

    pub fn cone_v(generators: Vec<Vec<f64>>) -> Result<Self> {
        check_points(&generators, "generators")?;
        if generators.iter().any(|g| norm(g) == 0.0) {
            return Err(Error::InvalidSet("zero generator".into()));
        }
        Ok(ConvexSet::ConeV(generators))
    }

    pub fn cone_h(normals: Vec<Vec<f64>>) -> Result<Self> {
        check_points(&normals, "normals")?;
        if normals.iter().any(|g| norm(g) == 0.0) {
            return Err(Error::InvalidSet("zero normal".into()));
        }
        Ok(ConvexSet::ConeH(normals))
    }

    /// Lorentz cone about `axis`, which is normalized here.
    pub fn lorentz(axis: Vec<f64>) -> Result<Self> {
        check_points(std::slice::from_ref(&axis), "axis")?;
        let n = norm(&axis);
        if n == 0.0 {
            return Err(Error::InvalidSet("zero axis".into()));
        }
        Ok(ConvexSet::Lorentz(axis.iter().map(|v| v / n).collect()))
    }

    pub fn orthant(signs: Vec<f64>) -> Result<Self> {
        if signs.is_empty() || signs.iter().any(|&s| s != 1.0 && s != -1.0) {
            return Err(Error::InvalidSet("orthant signs must be ±1".into()));
        }
        Ok(ConvexSet::Orthant(signs))
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || !(lo <= 0.0 && 0.0 <= hi) {
            return Err(Error::InvalidSet(format!("interval [{lo}, {hi}] must contain 0")));
        }
        Ok(ConvexSet::Interval { lo, hi })
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexSet::Ball { dim, .. } => *dim,
            ConvexSet::Ellipsoid(e) => e.a.dim(),
            ConvexSet::PolytopeV(v) | ConvexSet::ConeV(v) | ConvexSet::ConeH(v) => v[0].len(),
            ConvexSet::PolytopeH(h) => h.dim(),
            ConvexSet::Lorentz(a) | ConvexSet::Orthant(a) => a.len(),
            ConvexSet::Interval { .. } => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ConvexSet::Ball { .. } => "ball",
            ConvexSet::Ellipsoid(_) => "ellipsoid",
            ConvexSet::PolytopeV(_) => "polytope_v",
            ConvexSet::PolytopeH(_) => "polytope_h",
            ConvexSet::ConeV(_) => "cone_v",
            ConvexSet::ConeH(_) => "cone_h",
            ConvexSet::Lorentz(_) => "lorentz",
            ConvexSet::Orthant(_) => "orthant",
            ConvexSet::Interval { .. } => "interval",
        }
    }

    pub fn is_cone(&self) -> bool {
        self.classify().cone
    }

    pub fn is_bounded(&self) -> bool {
        self.classify().bounded
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        Ok(())
    }

    /// Minkowski gauge `inf{μ ≥ 0 : x ∈ μC}`, `+∞` when no such μ exists.
    pub fn gauge(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(match self {
            ConvexSet::Ball { radius, .. } => norm(x) / radius,
            ConvexSet::Ellipsoid(e) => e.a.quad_form(x).max(0.0).sqrt(),
            ConvexSet::PolytopeV(v) => {
                if norm(x) == 0.0 {
                    0.0
                } else {
                    let h = HPolyData { rows: vertices_nonzero(v) };
                    lp_support(x, &h)?.max(0.0)
                }
            }
            ConvexSet::PolytopeH(h) => h.rows.iter().map(|a| dot(a, x)).fold(0.0, f64::max),
            ConvexSet::Interval { lo, hi } => interval_gauge(*lo, *hi, x[0]),
            _ => {
                if self.contains_cone(x, 0.0)? {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        })
    }

    /// Support function `sup{⟨u, c⟩ : c ∈ C}`, `+∞` allowed.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        self.check_dim(u)?;
        Ok(match self {
            ConvexSet::Ball { radius, .. } => radius * norm(u),
            ConvexSet::Ellipsoid(e) => e.a_inv.quad_form(u).max(0.0).sqrt(),
            ConvexSet::PolytopeV(v) => v.iter().map(|p| dot(p, u)).fold(f64::NEG_INFINITY, f64::max),
            ConvexSet::PolytopeH(h) => lp_support(u, h)?,
            ConvexSet::Interval { lo, hi } => {
                let t = u[0];
                if t > 0.0 {
                    t * hi
                } else if t < 0.0 {
                    t * lo
                } else {
                    0.0
                }
            }
            // A cone's support is the indicator of its polar cone.
            ConvexSet::ConeV(g) => {
                let scale = norm(u);
                if g.iter().all(|g| dot(g, u) <= 1e-12 * scale * norm(g)) {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            ConvexSet::ConeH(a) => {
                if cone_v_contains(a, u, 1e-12)? {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            ConvexSet::Lorentz(axis) => {
                let neg: Vec<f64> = axis.iter().map(|v| -v).collect();
                if lorentz_contains(&neg, u, 0.0) {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            ConvexSet::Orthant(s) => {
                if s.iter().zip(u).all(|(s, x)| -s * x >= 0.0) {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        })
    }

    /// Membership with tolerance `tol`: gauge ≤ 1 + tol for bodies, closed-form
    /// tests for cones and intervals.
    pub fn contains(&self, x: &[f64], tol: f64) -> Result<bool> {
        self.check_dim(x)?;
        match self {
            ConvexSet::Interval { lo, hi } => Ok(*lo - tol <= x[0] && x[0] <= *hi + tol),
            ConvexSet::ConeV(_) | ConvexSet::ConeH(_) | ConvexSet::Lorentz(_) | ConvexSet::Orthant(_) => {
                self.contains_cone(x, tol)
            }
            _ => Ok(self.gauge(x)? <= 1.0 + tol),
        }
    }

    fn contains_cone(&self, x: &[f64], tol: f64) -> Result<bool> {
        let nx = norm(x);
        Ok(match self {
            ConvexSet::Lorentz(axis) => lorentz_contains(axis, x, tol),
            ConvexSet::Orthant(s) => s.iter().zip(x).all(|(s, v)| s * v >= -tol * nx),
            ConvexSet::ConeH(a) => a.iter().all(|a| dot(a, x) <= tol * norm(a) * nx),
            ConvexSet::ConeV(g) => cone_v_contains(g, x, tol)?,
            ConvexSet::Interval { lo, hi } => *lo - tol <= x[0] && x[0] <= *hi + tol,
            _ => return Err(Error::NotACone),
        })
    }

    /// True when `x` lies within angular distance ~`margin` of the boundary of a cone.
    pub fn near_cone_boundary(&self, x: &[f64], margin: f64) -> Result<bool> {
        self.check_dim(x)?;
        let nx = norm(x);
        if nx == 0.0 {
            return Ok(true);
        }
        Ok(match self {
            ConvexSet::Lorentz(axis) => (dot(axis, x) / nx - std::f64::consts::FRAC_1_SQRT_2).abs() <= margin,
            ConvexSet::Orthant(_) => x.iter().any(|v| v.abs() <= margin * nx),
            ConvexSet::ConeH(a) => a.iter().any(|a| dot(a, x).abs() <= margin * norm(a) * nx),
            ConvexSet::ConeV(g) => {
                // Probe the membership of nearby points along each axis.
                let inside = cone_v_contains(g, x, 0.0)?;
                let mut near = false;
                for j in 0..x.len() {
                    for s in [-1.0, 1.0] {
                        let mut y = x.to_vec();
                        y[j] += s * margin * nx;
                        if cone_v_contains(g, &y, 0.0)? != inside {
                            near = true;
                        }
                    }
                }
                near
            }
            ConvexSet::Interval { .. } => false,
            _ => return Err(Error::NotACone),
        })
    }

    pub fn classify(&self) -> SetClass {
        let body = |sym| SetClass { bounded: true, zero_interior: true, cone: false, centrally_symmetric: sym };
        let cone = SetClass { bounded: false, zero_interior: false, cone: true, centrally_symmetric: false };
        match self {
            ConvexSet::Ball { .. } | ConvexSet::Ellipsoid(_) => body(true),
            ConvexSet::PolytopeV(v) => body(symmetric_list(v)),
            ConvexSet::PolytopeH(h) => body(symmetric_list(&h.rows)),
            ConvexSet::ConeV(_) | ConvexSet::ConeH(_) | ConvexSet::Lorentz(_) | ConvexSet::Orthant(_) => cone,
            ConvexSet::Interval { lo, hi } => {
                let bounded = lo.is_finite() && hi.is_finite();
                let conic = |e: f64| e == 0.0 || e.is_infinite();
                SetClass {
                    bounded,
                    zero_interior: *lo < 0.0 && *hi > 0.0,
                    cone: !bounded && conic(*lo) && conic(*hi),
                    centrally_symmetric: *lo == -*hi,
                }
            }
        }
    }

    /// `‖C‖ = sup{‖c‖ : c ∈ C}`, `+∞` for unbounded sets.
    pub fn outer_radius(&self) -> f64 {
        match self {
            ConvexSet::Ball { radius, .. } => *radius,
            ConvexSet::Ellipsoid(e) => 1.0 / sym_eig(&e.a).expect("SPD").eigenvalues[0].sqrt(),
            ConvexSet::PolytopeV(v) => v.iter().map(|p| norm(p)).fold(0.0, f64::max),
            ConvexSet::PolytopeH(h) => enumerate_vertices(&h.rows).iter().map(|p| norm(p)).fold(0.0, f64::max),
            ConvexSet::Interval { lo, hi } => lo.abs().max(hi.abs()),
            _ => f64::INFINITY,
        }
    }

    /// Largest `r` with `B(0, r) ⊆ C`; 0 when 0 is not interior.
    pub fn inner_radius(&self) -> f64 {
        match self {
            ConvexSet::Ball { radius, .. } => *radius,
            ConvexSet::Ellipsoid(e) => {
                1.0 / sym_eig(&e.a).expect("SPD").eigenvalues.last().copied().expect("nonempty").sqrt()
            }
            ConvexSet::PolytopeV(v) => {
                // Facet normals of the hull are the vertices of the polar.
                enumerate_vertices(&vertices_nonzero(v)).iter().map(|w| 1.0 / norm(w)).fold(f64::INFINITY, f64::min)
            }
            ConvexSet::PolytopeH(h) => h.rows.iter().map(|a| 1.0 / norm(a)).fold(f64::INFINITY, f64::min),
            ConvexSet::Interval { lo, hi } => lo.abs().min(hi.abs()),
            _ => 0.0,
        }
    }
}

/// Zero vertices carry no constraint in the polar; drop them so the LP rows are valid.
fn vertices_nonzero(v: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let kept: Vec<Vec<f64>> = v.iter().filter(|p| norm(p) > 0.0).cloned().collect();
    if kept.is_empty() {
        v.to_vec()
    } else {
        kept
    }
}

fn symmetric_list(v: &[Vec<f64>]) -> bool {
    v.iter().all(|p| {
        let scale = 1.0 + norm(p);
        v.iter().any(|q| p.iter().zip(q).all(|(a, b)| (a + b).abs() <= 1e-12 * scale))
    })
}

fn interval_gauge(lo: f64, hi: f64, x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x > 0.0 {
        if hi == 0.0 {
            f64::INFINITY
        } else {
            x / hi
        }
    } else if lo == 0.0 {
        f64::INFINITY
    } else {
        x / lo
    }
}

fn lorentz_contains(axis: &[f64], x: &[f64], tol: f64) -> bool {
    let d = dot(axis, x);
    let n2 = dot(x, x);
    if n2 == 0.0 {
        return true;
    }
    // Exact form of ⟨x/‖x‖, axis⟩ ≥ 1/√2, then the tolerant angular form.
    (d >= 0.0 && 2.0 * d * d >= n2) || d / n2.sqrt() >= std::f64::consts::FRAC_1_SQRT_2 - tol
}

/// `x ∈ cone(g)` by Farkas: `max ⟨x, y⟩` over the polar cone cut by the unit box is 0.
fn cone_v_contains(g: &[Vec<f64>], x: &[f64], tol: f64) -> Result<bool> {
    let n = x.len();
    let nx = norm(x);
    if nx == 0.0 {
        return Ok(true);
    }
    let mut rows: Vec<Vec<f64>> = g.to_vec();
    let mut rhs = vec![0.0; g.len()];
    for j in 0..n {
        let e = unit(n, j);
        rows.push(e.iter().map(|v| -v).collect());
        rows.push(e);
        rhs.extend([1.0, 1.0]);
    }
    let (v, _) = lp_max(x, &rows, &rhs)?;
    Ok(v <= (tol + 1e-12) * nx)
}
