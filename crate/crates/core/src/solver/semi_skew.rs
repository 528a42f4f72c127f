use serde::Serialize;

use crate::linalg::{dot, Matrix};
use crate::{Error, Result, SemiSkewReason};

/// A 2×2 semi-skew operator `E(x₁u + x₂u⊥) = α₂x₂u − α₁x₁u⊥`, where
/// `u⊥` is `u` rotated by +90°.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemiSkewForm {
    pub u: [f64; 2],
    pub alpha1: f64,
    pub alpha2: f64,
}

impl SemiSkewForm {
    pub fn new(u: [f64; 2], alpha1: f64, alpha2: f64) -> Result<Self> {
        let n = (u[0] * u[0] + u[1] * u[1]).sqrt();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::BadParams("u must be a unit vector".into()));
        }
        if alpha1 == 0.0 || alpha2 == 0.0 || alpha1.signum() != alpha2.signum() {
            return Err(Error::BadParams("alpha1, alpha2 must be nonzero with the same sign".into()));
        }
        if (alpha1 - alpha2).abs() <= 1e-9 * alpha1.abs().max(alpha2.abs()) {
            return Err(Error::NotSemiSkew(SemiSkewReason::ScaledRotation));
        }
        Ok(SemiSkewForm { u, alpha1, alpha2 })
    }

    pub fn u_perp(&self) -> [f64; 2] {
        [-self.u[1], self.u[0]]
    }

    /// `a·u uᵀ + b·u u⊥ᵀ + c·u⊥ uᵀ + d·u⊥ u⊥ᵀ`.
    fn in_frame(&self, a: f64, b: f64, c: f64, d: f64) -> Matrix {
        let u = self.u;
        let w = self.u_perp();
        let mut m = Matrix::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = a * u[i] * u[j] + b * u[i] * w[j] + c * w[i] * u[j] + d * w[i] * w[j];
            }
        }
        m
    }

    pub fn matrix(&self) -> Matrix {
        self.in_frame(0.0, self.alpha2, -self.alpha1, 0.0)
    }

    /// `E*`, the semi-skew form of `(u, −α₂, −α₁)`.
    pub fn adjoint(&self) -> SemiSkewForm {
        SemiSkewForm { u: self.u, alpha1: -self.alpha2, alpha2: -self.alpha1 }
    }

    /// `E⁻¹`, the semi-skew form of `(u, −1/α₂, −1/α₁)`.
    pub fn inverse(&self) -> SemiSkewForm {
        SemiSkewForm { u: self.u, alpha1: -1.0 / self.alpha2, alpha2: -1.0 / self.alpha1 }
    }

    /// Diagonal of `E⁻¹E*` in the `(u, u⊥)` frame.
    pub fn e_inv_e_adjoint_diag(&self) -> [f64; 2] {
        [-self.alpha2 / self.alpha1, -self.alpha1 / self.alpha2]
    }

    /// `E⁻¹E*` in the standard basis.
    pub fn e_inv_e_adjoint(&self) -> Matrix {
        let [d1, d2] = self.e_inv_e_adjoint_diag();
        self.in_frame(d1, 0.0, 0.0, d2)
    }
}

/// Decomposes a 2×2 matrix as a semi-skew operator.
pub fn semi_skew_decompose(m: &Matrix, tol: f64) -> Result<SemiSkewForm> {
    if m.dim() != 2 {
        return Err(Error::NotSemiSkew(SemiSkewReason::NotTwoDimensional));
    }
    if m.trace().abs() > tol {
        return Err(Error::NotSemiSkew(SemiSkewReason::NonzeroTrace));
    }
    let det = m.determinant();
    if det <= tol {
        return Err(Error::NotSemiSkew(SemiSkewReason::NonpositiveDeterminant));
    }
    let dev = (&(&m.transpose() * m) - &Matrix::scalar(2, det)).frobenius_norm();
    if dev <= tol {
        return Err(Error::NotSemiSkew(SemiSkewReason::ScaledRotation));
    }
    // ⟨Mu, u⟩ = p·cos2θ + s·sin2θ for M = [[p, q], [r, −p]], s = (q + r)/2.
    let p = 0.5 * (m[(0, 0)] - m[(1, 1)]);
    let s = 0.5 * (m[(0, 1)] + m[(1, 0)]);
    let theta = 0.5 * (-p).atan2(s);
    let u = [theta.cos(), theta.sin()];
    let w = [-u[1], u[0]];
    let alpha2 = dot(&u, &m.mul_vec(&w));
    let alpha1 = -dot(&w, &m.mul_vec(&u));
    let form = SemiSkewForm::new(u, alpha1, alpha2)?;
    let err = (&form.matrix() - m).max_abs();
    if err > 1e-9 * m.max_abs().max(1.0) {
        return Err(Error::NotSemiSkew(SemiSkewReason::NonzeroTrace));
    }
    Ok(form)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[[f64; 2]; 2]) -> Matrix {
        Matrix::from_rows(&[rows[0].to_vec(), rows[1].to_vec()]).unwrap()
    }

    #[test]
    fn canonical_example() {
        let f = semi_skew_decompose(&m(&[[0.0, 2.0], [-1.0, 0.0]]), 1e-10).unwrap();
        assert_eq!(f.u, [1.0, 0.0]);
        assert_eq!((f.alpha1, f.alpha2), (1.0, 2.0));
        assert_eq!(f.e_inv_e_adjoint(), Matrix::from_diag(&[-2.0, -0.5]));
    }

    #[test]
    fn rejections() {
        let r = |x| semi_skew_decompose(&x, 1e-10).unwrap_err();
        assert_eq!(r(m(&[[0.0, 1.0], [-1.0, 0.0]])), Error::NotSemiSkew(SemiSkewReason::ScaledRotation));
        assert_eq!(r(Matrix::identity(2)), Error::NotSemiSkew(SemiSkewReason::NonzeroTrace));
        assert_eq!(r(m(&[[0.0, 1.0], [1.0, 0.0]])), Error::NotSemiSkew(SemiSkewReason::NonpositiveDeterminant));
        assert_eq!(r(Matrix::identity(3)), Error::NotSemiSkew(SemiSkewReason::NotTwoDimensional));
    }

    #[test]
    fn rotated_frame_recovered() {
        let f = SemiSkewForm::new([0.6, 0.8], -3.0, -0.5).unwrap();
        let g = semi_skew_decompose(&f.matrix(), 1e-10).unwrap();
        assert!((&g.matrix() - &f.matrix()).max_abs() < 1e-12);
    }
}
