//! The polar map, linear pushforward and the polarity map `T_G(C) = (GC)°`.

use serde::Serialize;

use crate::linalg::{is_positive_definite, is_symmetric, is_unitary, norm, unitary_scale, HPolyData, Matrix};
use crate::sets::{ConvexSet, Ellipsoid};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OperatorFlags {
    pub symmetric: bool,
    pub positive_definite: bool,
    pub unitary: bool,
    pub semi_skew: bool,
}

/// An invertible matrix with its inverse, transpose and inverse transpose cached.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    m: Matrix,
    inv: Matrix,
    tr: Matrix,
    inv_tr: Matrix,
    flags: OperatorFlags,
}

impl Operator {
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::InvalidSet("operator entries must be finite".into()));
        }
        let inv = m.inverse()?;
        let n = m.dim();
        let check = (&(&m * &inv) - &Matrix::identity(n)).max_abs();
        if check > 1e-9 {
            return Err(Error::SingularOperator);
        }
        Ok(Self::from_parts(m, inv))
    }

    /// `γ·I` in dimension `dim`.
    pub fn scalar(dim: usize, gamma: f64) -> Result<Self> {
        if gamma == 0.0 {
            return Err(Error::SingularOperator);
        }
        Self::new(Matrix::scalar(dim, gamma))
    }

    fn from_parts(m: Matrix, inv: Matrix) -> Self {
        let tr = m.transpose();
        let inv_tr = inv.transpose();
        let symmetric = is_symmetric(&m);
        let flags = OperatorFlags {
            symmetric,
            positive_definite: symmetric && is_positive_definite(&m),
            unitary: is_unitary(&m),
            semi_skew: m.dim() == 2 && crate::solver::semi_skew_decompose(&m, 1e-10).is_ok(),
        };
        Operator { m, inv, tr, inv_tr, flags }
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn inverse(&self) -> &Matrix {
        &self.inv
    }

    pub fn transpose(&self) -> &Matrix {
        &self.tr
    }

    pub fn inv_transpose(&self) -> &Matrix {
        &self.inv_tr
    }

    pub fn flags(&self) -> OperatorFlags {
        self.flags
    }

    /// `(Gᵀ)⁻¹` as an operator, reusing the cached matrices.
    pub fn inv_transpose_op(&self) -> Operator {
        Self::from_parts(self.inv_tr.clone(), self.tr.clone())
    }

    /// `Gᵀ` as an operator.
    pub fn transpose_op(&self) -> Operator {
        Self::from_parts(self.tr.clone(), self.inv_tr.clone())
    }

    /// `G⁻¹` as an operator.
    pub fn inverse_op(&self) -> Operator {
        Self::from_parts(self.inv.clone(), self.m.clone())
    }

    /// `Some(γ)` when the operator is `γ·I`.
    pub fn as_scalar(&self) -> Option<f64> {
        let g = self.m[(0, 0)];
        (&self.m - &Matrix::scalar(self.dim(), g)).max_abs().eq(&0.0).then_some(g)
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.m.mul_vec(x)
    }
}

/// Reciprocal of an interval endpoint; `zero` is the value assigned to 1/0.
fn recip(e: f64, zero: f64) -> f64 {
    if e == 0.0 {
        zero
    } else if e.is_infinite() {
        0.0
    } else {
        1.0 / e
    }
}

/// Polar set `C° = {y : ⟨y, c⟩ ≤ 1 ∀c ∈ C}`.
pub fn polar(c: &ConvexSet) -> Result<ConvexSet> {
    Ok(match c {
        ConvexSet::Ball { dim, radius } => ConvexSet::Ball { dim: *dim, radius: 1.0 / radius },
        ConvexSet::Ellipsoid(e) => ConvexSet::Ellipsoid(e.polar()),
        ConvexSet::PolytopeV(v) => {
            let rows: Vec<Vec<f64>> = v.iter().filter(|p| norm(p) > 0.0).cloned().collect();
            ConvexSet::PolytopeH(HPolyData::new(rows)?)
        }
        ConvexSet::PolytopeH(h) => ConvexSet::PolytopeV(h.rows.clone()),
        ConvexSet::ConeV(g) => ConvexSet::ConeH(g.clone()),
        ConvexSet::ConeH(a) => ConvexSet::ConeV(a.clone()),
        ConvexSet::Lorentz(u) => ConvexSet::Lorentz(u.iter().map(|v| -v).collect()),
        ConvexSet::Orthant(s) => ConvexSet::Orthant(s.iter().map(|v| -v).collect()),
        ConvexSet::Interval { lo, hi } => {
            ConvexSet::Interval { lo: recip(*lo, f64::NEG_INFINITY), hi: recip(*hi, f64::INFINITY) }
        }
    })
}

fn check_dim(g: &Operator, c: &ConvexSet) -> Result<()> {
    if g.dim() != c.dim() {
        return Err(Error::DimensionMismatch { expected: c.dim(), found: g.dim() });
    }
    Ok(())
}

fn map_rows(m: &Matrix, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    rows.iter().map(|r| m.mul_vec(r)).collect()
}

/// Image `GC` of a set under the linear map `G`.
pub fn pushforward(g: &Operator, c: &ConvexSet) -> Result<ConvexSet> {
    check_dim(g, c)?;
    Ok(match c {
        ConvexSet::Ball { dim, radius } => match unitary_scale(g.matrix()) {
            Some(s) => ConvexSet::Ball { dim: *dim, radius: radius * s },
            None => {
                let a = (g.inv_transpose() * g.inverse()).scale(1.0 / (radius * radius));
                let a_inv = (g.matrix() * g.transpose()).scale(radius * radius);
                ConvexSet::Ellipsoid(Ellipsoid::from_pair(a, a_inv))
            }
        },
        ConvexSet::Ellipsoid(e) => {
            let a = &(g.inv_transpose() * e.matrix()) * g.inverse();
            let a_inv = &(g.matrix() * e.inverse()) * g.transpose();
            ConvexSet::Ellipsoid(Ellipsoid::from_pair(a, a_inv))
        }
        ConvexSet::PolytopeV(v) => ConvexSet::PolytopeV(map_rows(g.matrix(), v)),
        ConvexSet::PolytopeH(h) => ConvexSet::PolytopeH(HPolyData { rows: map_rows(g.inv_transpose(), &h.rows) }),
        ConvexSet::ConeV(gs) => ConvexSet::ConeV(map_rows(g.matrix(), gs)),
        ConvexSet::ConeH(a) => ConvexSet::ConeH(map_rows(g.inv_transpose(), a)),
        ConvexSet::Lorentz(u) => {
            if unitary_scale(g.matrix()).is_none() {
                return Err(Error::UnsupportedPushforward(
                    "Lorentz cone needs a positive multiple of a unitary operator".into(),
                ));
            }
            let w = g.apply(u);
            let n = norm(&w);
            ConvexSet::Lorentz(w.iter().map(|v| v / n).collect())
        }
        ConvexSet::Orthant(s) => ConvexSet::Orthant(orthant_image(g.matrix(), s)?),
        ConvexSet::Interval { lo, hi } => {
            let gamma = g.matrix()[(0, 0)];
            let (a, b) = (gamma * lo, gamma * hi);
            ConvexSet::Interval { lo: a.min(b), hi: a.max(b) }
        }
    })
}

/// Orthant signs after a monomial (scaled signed permutation) matrix.
fn orthant_image(m: &Matrix, s: &[f64]) -> Result<Vec<f64>> {
    let n = m.dim();
    let mut out = vec![0.0; n];
    let mut used = vec![false; n];
    for i in 0..n {
        let nz: Vec<usize> = (0..n).filter(|&j| m[(i, j)] != 0.0).collect();
        match nz.as_slice() {
            [j] if !used[*j] => {
                used[*j] = true;
                out[i] = m[(i, *j)].signum() * s[*j];
            }
            _ => {
                return Err(Error::UnsupportedPushforward(
                    "orthant needs a monomial (scaled signed permutation) operator".into(),
                ))
            }
        }
    }
    Ok(out)
}

/// `T_G(C) = (GC)°`, computed as `(Gᵀ)⁻¹C°` with a fallback to `polar(GC)`.
pub fn polarity_map(g: &Operator, c: &ConvexSet) -> Result<ConvexSet> {
    check_dim(g, c)?;
    if let ConvexSet::Interval { lo, hi } = c {
        // Divide by γ rather than multiply by 1/γ so exact cases stay exact.
        let gamma = g.matrix()[(0, 0)];
        let (p, q) = (recip(*lo, f64::NEG_INFINITY) / gamma, recip(*hi, f64::INFINITY) / gamma);
        let (p, q) = (if p == 0.0 { 0.0 } else { p }, if q == 0.0 { 0.0 } else { q });
        return Ok(ConvexSet::Interval { lo: p.min(q), hi: p.max(q) });
    }
    match pushforward(&g.inv_transpose_op(), &polar(c)?) {
        Err(Error::UnsupportedPushforward(why)) => {
            polar(&pushforward(g, c)?).map_err(|_| Error::UnsupportedPushforward(why))
        }
        r => r,
    }
}
