//! Constructive solutions of `C = (GC)°` and related diagnostics.

mod iterate;
mod one_dim;
mod semi_skew;

pub use iterate::{iterate_polarity, IterationRow, IterationTrace, IterationVerdict};
pub use one_dim::{case_table, classify_1d, CaseShape, OneDimSolutionFamily};
pub use semi_skew::{semi_skew_decompose, SemiSkewForm};

use crate::linalg::{is_positive_definite, is_symmetric, operator_norm, spectral_abs, Matrix};
use crate::polarity::{pushforward, Operator};
use crate::sets::ConvexSet;
use crate::{Error, Result};

/// Picks the simplest representation of `{x : ⟨Ax, x⟩ ≤ 1}`.
fn ellipsoid_or_ball(a: Matrix) -> Result<ConvexSet> {
    let n = a.dim();
    if n == 1 {
        let r = 1.0 / a[(0, 0)].sqrt();
        return ConvexSet::interval(-r, r);
    }
    let c = a.trace() / n as f64;
    if (&a - &Matrix::scalar(n, c)).max_abs() <= 1e-12 * c.abs().max(1.0) {
        return ConvexSet::ball(n, 1.0 / c.sqrt());
    }
    ConvexSet::ellipsoid(a)
}

/// The unique solution `{x : ⟨Gx, x⟩ ≤ 1}` for positive-definite `G`.
pub fn solve_positive_definite(g: &Operator) -> Result<ConvexSet> {
    if !is_positive_definite(g.matrix()) {
        return Err(Error::NotPositiveDefinite);
    }
    ellipsoid_or_ball(g.matrix().symmetrized())
}

/// Ellipsoid solution `A = |G|` for symmetric invertible `G`.
pub fn solve_symmetric(g: &Operator) -> Result<(Matrix, ConvexSet)> {
    let m = g.matrix();
    if !is_symmetric(m) {
        return Err(Error::NotSymmetric((m - &m.transpose()).frobenius_norm()));
    }
    let a = spectral_abs(m)?;
    let c = ellipsoid_or_ball(a.clone())?;
    Ok((a, c))
}

/// `‖A − G·A⁻¹·Gᵀ‖`; zero means `Ellipsoid(A)` solves the equation.
pub fn operator_equation_residual(a: &Matrix, g: &Operator) -> Result<f64> {
    if !is_positive_definite(a) {
        return Err(Error::NotPositiveDefinite);
    }
    let a_inv = a.inverse()?;
    let rhs = &(g.matrix() * &a_inv) * g.transpose();
    Ok(operator_norm(&(a - &rhs)))
}

/// `‖(A⁻¹)ᵀ·G·A⁻¹ − G‖`; zero means `A` maps solutions to solutions.
pub fn transport_residual(a: &Operator, g: &Operator) -> Result<f64> {
    if a.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: a.dim() });
    }
    let lhs = &(a.inv_transpose() * g.matrix()) * a.inverse();
    Ok(operator_norm(&(&lhs - g.matrix())))
}

/// `A·C`, a new solution when `C` is one and the transport residual vanishes.
pub fn transport_solution(a: &Operator, c: &ConvexSet) -> Result<ConvexSet> {
    pushforward(a, c)
}
