//! Seeded generators for random operators and bodies used by tests and demos.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{orthonormalize, Matrix};
use crate::sets::ConvexSet;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_matrix(n: usize, rng: &mut TestRng) -> Matrix {
    let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()).collect();
    Matrix::from_rows(&rows).expect("finite square")
}

/// Haar-like orthogonal matrix from Gram–Schmidt on a Gaussian matrix.
pub fn orthogonal(n: usize, rng: &mut TestRng) -> Matrix {
    loop {
        let g = gaussian_matrix(n, rng);
        if g.determinant().abs() > 1e-6 {
            return orthonormalize(&g);
        }
    }
}

/// Log-uniform magnitude in `[0.1, 10]`.
fn log_uniform(rng: &mut TestRng) -> f64 {
    10f64.powf(rng.gen_range(-1.0..=1.0))
}

/// `Q·diag(λ)·Qᵀ`.
pub fn with_spectrum(q: &Matrix, lambda: &[f64]) -> Matrix {
    (&(q * &Matrix::from_diag(lambda)) * &q.transpose()).symmetrized()
}

/// Symmetric positive definite, eigenvalues log-uniform in `[0.1, 10]`.
pub fn spd(n: usize, rng: &mut TestRng) -> Matrix {
    let q = orthogonal(n, rng);
    let lambda: Vec<f64> = (0..n).map(|_| log_uniform(rng)).collect();
    with_spectrum(&q, &lambda)
}

/// Symmetric invertible with both signs present in the spectrum when `n ≥ 2`.
pub fn symmetric_mixed(n: usize, rng: &mut TestRng) -> Matrix {
    let q = orthogonal(n, rng);
    let mut lambda: Vec<f64> = (0..n)
        .map(|_| {
            let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            s * log_uniform(rng)
        })
        .collect();
    if n >= 2 {
        lambda[0] = lambda[0].abs();
        lambda[1] = -lambda[1].abs();
    }
    with_spectrum(&q, &lambda)
}

/// Invertible with singular values in `[0.5, 2]`.
pub fn invertible(n: usize, rng: &mut TestRng) -> Matrix {
    let u = orthogonal(n, rng);
    let v = orthogonal(n, rng);
    let sigma: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..=2.0)).collect();
    &(&u * &Matrix::from_diag(&sigma)) * &v.transpose()
}

pub fn unit_vector(n: usize, rng: &mut TestRng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let s = crate::linalg::norm(&v);
        if s > 1e-6 {
            return v.iter().map(|x| x / s).collect();
        }
    }
}

/// V-polytope from `k` random points plus `±0.3·e_i`, so 0 is interior.
pub fn polytope_v(n: usize, k: usize, rng: &mut TestRng) -> ConvexSet {
    let mut v: Vec<Vec<f64>> = (0..k)
        .map(|_| {
            let r = rng.gen_range(0.5..=1.5);
            unit_vector(n, rng).iter().map(|x| x * r).collect()
        })
        .collect();
    for i in 0..n {
        for s in [0.3, -0.3] {
            let mut e = vec![0.0; n];
            e[i] = s;
            v.push(e);
        }
    }
    ConvexSet::polytope_v(v).expect("0 is interior by construction")
}

pub fn ellipsoid(n: usize, rng: &mut TestRng) -> ConvexSet {
    ConvexSet::ellipsoid(spd(n, rng)).expect("SPD by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{is_positive_definite, is_unitary, sym_eig};

    #[test]
    fn generators_respect_contracts() {
        let mut r = rng(7);
        for n in 1..7 {
            assert!(is_unitary(&orthogonal(n, &mut r)));
            let a = spd(n, &mut r);
            assert!(is_positive_definite(&a));
            let e = sym_eig(&a).unwrap().eigenvalues;
            assert!(e[n - 1] / e[0] <= 100.0 + 1e-9);
            let s = symmetric_mixed(n, &mut r);
            let e = sym_eig(&s).unwrap().eigenvalues;
            if n >= 2 {
                assert!(e[0] < 0.0 && e[n - 1] > 0.0);
            }
        }
    }
}
