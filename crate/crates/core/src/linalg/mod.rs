//! Dense real linear algebra for the small operators used throughout.

mod eigen;
mod matrix;
mod simplex;
mod vertices;

pub use eigen::{coercivity_constant, coercivity_witness, operator_norm, spectral_abs, sym_eig, SpectralDecomposition};
#[allow(unused_imports)]
pub(crate) use matrix::solve_dense;
pub use matrix::{add, dot, norm, normalized, scaled, sub, unit, Matrix};
pub(crate) use simplex::lp_max;
pub use simplex::{lp_support, HPolyData};
pub use vertices::{enumerate_vertices, polygon_vertices, sort_by_angle};

/// Hybrid tolerance `max(TOL_ABS, TOL_ABS·‖M‖_F)` used by the detectors.
pub(crate) fn tol_for(m: &Matrix) -> f64 {
    crate::TOL_ABS * m.frobenius_norm().max(1.0)
}

pub(crate) fn asymmetry(m: &Matrix) -> f64 {
    (m - &m.transpose()).frobenius_norm()
}

pub fn is_symmetric(m: &Matrix) -> bool {
    asymmetry(m) <= tol_for(m)
}

pub fn is_positive_definite(m: &Matrix) -> bool {
    is_symmetric(m) && sym_eig(m).map(|e| e.eigenvalues[0] > crate::TOL_ABS).unwrap_or(false)
}

pub fn is_unitary(m: &Matrix) -> bool {
    let n = m.dim();
    (&(&m.transpose() * m) - &Matrix::identity(n)).frobenius_norm() <= crate::TOL_ABS * 10.0
}

/// `Some(c)` when `M = c·U` with `U` unitary and `c > 0`.
pub fn unitary_scale(m: &Matrix) -> Option<f64> {
    let n = m.dim();
    let mtm = &m.transpose() * m;
    let c2 = mtm.trace() / n as f64;
    if c2 <= 0.0 {
        return None;
    }
    let dev = (&mtm - &Matrix::scalar(n, c2)).frobenius_norm();
    (dev <= crate::TOL_ABS * 10.0 * c2.max(1.0)).then(|| c2.sqrt())
}

/// Modified Gram–Schmidt on the columns of `m`.
pub fn orthonormalize(m: &Matrix) -> Matrix {
    let n = m.dim();
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = m.column(j);
        for q in &cols {
            let p = dot(q, &v);
            v.iter_mut().zip(q).for_each(|(a, b)| *a -= p * b);
        }
        cols.push(normalized(&v));
    }
    Matrix::from_columns(&cols)
}
