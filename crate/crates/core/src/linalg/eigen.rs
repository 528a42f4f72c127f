use super::matrix::Matrix;
use super::{asymmetry, tol_for};
use crate::{Error, Result};

/// `M = U·diag(eigenvalues)·Uᵀ`, eigenvalues ascending, eigenvectors as columns of `U`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

impl SpectralDecomposition {
    pub fn reconstruct(&self) -> Matrix {
        self.map_eigenvalues(|l| l)
    }

    /// `U·diag(f(λ))·Uᵀ`.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let u = &self.eigenvectors;
        let n = u.dim();
        let mut out = Matrix::zeros(n);
        for (k, &l) in self.eigenvalues.iter().enumerate() {
            let fl = f(l);
            for i in 0..n {
                let a = u[(i, k)] * fl;
                for j in 0..n {
                    out[(i, j)] += a * u[(j, k)];
                }
            }
        }
        out
    }

    pub fn eigenvector(&self, k: usize) -> Vec<f64> {
        self.eigenvectors.column(k)
    }
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
pub fn sym_eig(m: &Matrix) -> Result<SpectralDecomposition> {
    let n = m.dim();
    let asym = asymmetry(m);
    if asym > tol_for(m) {
        return Err(Error::NotSymmetric(asym));
    }
    let mut a = m.symmetrized();
    let mut v = Matrix::identity(n);
    let scale = a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, &mut v, p, q, c, s);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| a[(k, k)]).collect();
    let cols: Vec<Vec<f64>> = order.iter().map(|&k| fix_sign(v.column(k))).collect();
    Ok(SpectralDecomposition { eigenvalues, eigenvectors: Matrix::from_columns(&cols) })
}

/// Applies the Jacobi rotation in the (p, q) plane: `A ← JᵀAJ`, `V ← VJ`.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Makes the largest-magnitude component positive; the first one wins near-ties.
fn fix_sign(mut col: Vec<f64>) -> Vec<f64> {
    let max = col.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let lead = col.iter().copied().find(|v| v.abs() >= max - 1e-12).unwrap_or(0.0);
    if lead < 0.0 {
        col.iter_mut().for_each(|v| *v = -*v);
    }
    col
}

/// `U·|Λ|·Uᵀ` for a symmetric invertible `M`.
pub fn spectral_abs(m: &Matrix) -> Result<Matrix> {
    let eig = sym_eig(m)?;
    if eig.eigenvalues.iter().any(|l| l.abs() < crate::TOL_ABS) {
        return Err(Error::SingularOperator);
    }
    Ok(eig.map_eigenvalues(f64::abs).symmetrized())
}

/// Largest singular value.
pub fn operator_norm(m: &Matrix) -> f64 {
    let mtm = (&m.transpose() * m).symmetrized();
    let eig = sym_eig(&mtm).expect("MᵀM is symmetric");
    eig.eigenvalues.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Optimal coercivity coefficient `λ_min(A) = 1/‖A⁻¹‖` of a positive-definite `A`.
pub fn coercivity_constant(a: &Matrix) -> Result<f64> {
    Ok(coercivity_witness(a)?.0)
}

/// `(λ_min, unit eigenvector attaining it)`.
pub fn coercivity_witness(a: &Matrix) -> Result<(f64, Vec<f64>)> {
    let eig = sym_eig(a).map_err(|_| Error::NotPositiveDefinite)?;
    let lmin = eig.eigenvalues[0];
    if lmin <= crate::TOL_ABS {
        return Err(Error::NotPositiveDefinite);
    }
    Ok((lmin, eig.eigenvector(0)))
}
