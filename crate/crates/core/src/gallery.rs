//! Worked examples: each entry pairs an operator with sets and their expected verdicts.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::linalg::{dot, norm, sub, Matrix};
use crate::polarity::{pushforward, Operator};
use crate::sets::ConvexSet;
use crate::solver::{case_table, classify_1d, SemiSkewForm};
use crate::verify::Verdict;
use crate::{Error, Result};

pub const ENTRIES: [&str; 11] = [
    "lorentz",
    "orthant",
    "simplex",
    "ellipse_family",
    "ellipse_family_2n",
    "square_rhombus_disc",
    "rotation_invariance",
    "one_d",
    "f_b",
    "unbounded_ellipsoid_demo",
    "semi_skew_nonexistence",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GallerySet {
    pub label: String,
    pub set: ConvexSet,
    pub expected: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GalleryEntry {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub g: Operator,
    pub sets: Vec<GallerySet>,
    pub description: String,
}

pub type Params = BTreeMap<String, f64>;

fn param(p: &Params, key: &str, default: f64) -> f64 {
    p.get(key).copied().unwrap_or(default)
}

fn int_param(p: &Params, key: &str, default: usize, min: usize) -> Result<usize> {
    let v = param(p, key, default as f64);
    if v.fract() != 0.0 || v < min as f64 || v > 4096.0 {
        return Err(Error::BadParams(format!("{key} must be an integer >= {min}")));
    }
    Ok(v as usize)
}

fn positive(p: &Params, key: &str, default: f64) -> Result<f64> {
    let v = param(p, key, default);
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::BadParams(format!("{key} must be positive")));
    }
    Ok(v)
}

fn set(label: impl Into<String>, set: ConvexSet, expected: Verdict) -> GallerySet {
    GallerySet { label: label.into(), set, expected }
}

/// Vertices of a regular simplex in ℝⁿ with circumradius `r`, centroid 0.
///
/// Built by lifting: `S₁ = {1, −1}`, and `Sₙ` is `e₁` together with
/// `(−1/n, √(1 − 1/n²)·w)` for every `w ∈ Sₙ₋₁`.
pub fn simplex_vertices(n: usize, r: f64) -> Result<Vec<Vec<f64>>> {
    if n < 2 {
        return Err(Error::BadParams("simplex needs n >= 2".into()));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::BadParams("circumradius must be positive".into()));
    }
    let mut s: Vec<Vec<f64>> = vec![vec![1.0], vec![-1.0]];
    for k in 2..=n {
        let kf = k as f64;
        let c = (1.0 - 1.0 / (kf * kf)).sqrt();
        let mut next = vec![{
            let mut e = vec![0.0; k];
            e[0] = 1.0;
            e
        }];
        for w in &s {
            let mut v = Vec::with_capacity(k);
            v.push(-1.0 / kf);
            v.extend(w.iter().map(|x| c * x));
            next.push(v);
        }
        s = next;
    }
    Ok(s.into_iter().map(|v| v.iter().map(|x| x * r).collect()).collect())
}

/// Largest deviation in the facet–vertex correspondence: for every vertex
/// `v`, the point `−v/n` is the centroid of the opposite facet and the
/// facet is orthogonal to `v`.
pub fn simplex_facet_error(vertices: &[Vec<f64>]) -> f64 {
    let n = vertices.len() - 1;
    let mut err = 0.0f64;
    for (i, v) in vertices.iter().enumerate() {
        let p: Vec<f64> = v.iter().map(|x| -x / n as f64).collect();
        let others: Vec<&Vec<f64>> = vertices.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, w)| w).collect();
        let mut centroid = vec![0.0; v.len()];
        for w in &others {
            for (c, x) in centroid.iter_mut().zip(w.iter()) {
                *c += x / n as f64;
            }
        }
        err = err.max(norm(&sub(&centroid, &p)));
        let vn = norm(v);
        for w in &others {
            err = err.max((dot(&sub(w, &p), v) / vn).abs());
        }
    }
    err
}

/// Norms of `e_k/√λ_k` for `A = diag(1, 1/2, …, 1/n)`: each lies on the
/// boundary of `{⟨Ax, x⟩ ≤ 1}` and the norms grow like `√k`.
pub fn unbounded_ellipsoid_demo(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::BadParams("n must be at least 2".into()));
    }
    let a = Matrix::from_diag(&(1..=n).map(|k| 1.0 / k as f64).collect::<Vec<_>>());
    Ok((0..n)
        .map(|k| {
            let mut x = vec![0.0; n];
            x[k] = 1.0 / a[(k, k)].sqrt();
            norm(&x)
        })
        .collect())
}

fn square(s: f64) -> ConvexSet {
    ConvexSet::PolytopeV(vec![vec![s, s], vec![-s, s], vec![-s, -s], vec![s, -s]])
}

fn rhombus(t: f64) -> ConvexSet {
    ConvexSet::PolytopeV(vec![vec![t, 0.0], vec![0.0, t], vec![-t, 0.0], vec![0.0, -t]])
}

fn rotation_about_x3(alpha: f64) -> Matrix {
    let (s, c) = alpha.sin_cos();
    Matrix::from_rows(&[vec![c, -s, 0.0], vec![s, c, 0.0], vec![0.0, 0.0, 1.0]]).expect("3x3")
}

/// Block-diagonal `(x₁, x₂, …) ↦ (x₂, −x₁, …)` on ℝ²ⁿ.
fn quarter_turn_blocks(n: usize) -> Matrix {
    let mut m = Matrix::zeros(2 * n);
    for i in 0..n {
        m[(2 * i, 2 * i + 1)] = 1.0;
        m[(2 * i + 1, 2 * i)] = -1.0;
    }
    m
}

pub fn gallery(name: &str, params: &Params) -> Result<GalleryEntry> {
    use Verdict::{Fail, Pass};
    let mut used = Params::new();
    let mut record = |k: &str, v: f64| {
        used.insert(k.to_string(), v);
        v
    };
    let (g, sets, description) = match name {
        "lorentz" => {
            let n = record("n", int_param(params, "n", 3, 2)? as f64) as usize;
            let axis = vec![1.0; n];
            (
                Operator::scalar(n, -1.0)?,
                vec![set("lorentz cone about (1,...,1)/sqrt(n)", ConvexSet::lorentz(axis)?, Pass)],
                "Lorentz cone of half-aperture pi/4 solves C = (-C)°; in the plane it coincides with the nonnegative quadrant".to_string(),
            )
        }
        "orthant" => {
            let n = record("n", int_param(params, "n", 3, 1)? as f64) as usize;
            (
                Operator::scalar(n, -1.0)?,
                vec![set("nonnegative orthant", ConvexSet::orthant(vec![1.0; n])?, Pass)],
                "nonnegative orthant solves C = (-C)°".to_string(),
            )
        }
        "simplex" => {
            let n = record("n", int_param(params, "n", 2, 2)? as f64) as usize;
            let nf = n as f64;
            (
                Operator::scalar(n, -1.0)?,
                vec![
                    set("S(sqrt(n))", ConvexSet::polytope_v(simplex_vertices(n, nf.sqrt())?)?, Pass),
                    set("S(1)", ConvexSet::polytope_v(simplex_vertices(n, 1.0)?)?, Fail),
                ],
                "regular simplex of circumradius sqrt(n) solves C = (-C)°".to_string(),
            )
        }
        "ellipse_family" => {
            let l = record("lambda", positive(params, "lambda", 3.0)?);
            (
                Operator::new(quarter_turn_blocks(1))?,
                vec![set(
                    "lambda^2 x1^2 + x2^2/lambda^2 <= 1",
                    ConvexSet::ellipsoid(Matrix::from_diag(&[l * l, 1.0 / (l * l)]))?,
                    Pass,
                )],
                "every ellipse of the family solves the equation for G(x1,x2) = (x2,-x1)".to_string(),
            )
        }
        "ellipse_family_2n" => {
            let l1 = record("lambda1", positive(params, "lambda1", 0.5)?);
            let l2 = record("lambda2", positive(params, "lambda2", 3.0)?);
            let d = [l1 * l1, 1.0 / (l1 * l1), l2 * l2, 1.0 / (l2 * l2)];
            (
                Operator::new(quarter_turn_blocks(2))?,
                vec![set("block ellipsoid in R^4", ConvexSet::ellipsoid(Matrix::from_diag(&d))?, Pass)],
                "block version of the ellipse family in R^4".to_string(),
            )
        }
        "square_rhombus_disc" => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            let g = Matrix::from_rows(&[vec![r, r], vec![-r, r]])?;
            let s = 2f64.powf(-0.25);
            let t = 2f64.powf(0.25);
            (
                Operator::new(g)?,
                vec![
                    set("square max|x_i| <= 2^-0.25", square(s), Pass),
                    set("rhombus |x1|+|x2| <= 2^0.25", rhombus(t), Pass),
                    set("unit disc", ConvexSet::ball(2, 1.0)?, Pass),
                ],
                "three distinct solutions for a rotation by -pi/4".to_string(),
            )
        }
        "rotation_invariance" => {
            let alpha = record("alpha", param(params, "alpha", std::f64::consts::FRAC_PI_3));
            if !alpha.is_finite() {
                return Err(Error::BadParams("alpha must be finite".into()));
            }
            let l = record("lambda", positive(params, "lambda", 2.0)?);
            let g = Operator::new(Matrix::from_diag(&[1.0, 1.0, l]))?;
            let c = ConvexSet::ellipsoid(Matrix::from_diag(&[1.0, 1.0, l]))?;
            let a = Operator::new(rotation_about_x3(alpha))?;
            let moved = pushforward(&a, &c)?;
            (
                g,
                vec![set("ellipsoid of diag(1,1,lambda)", c, Pass), set("rotated about x3", moved, Pass)],
                "a rotation about the x3 axis satisfies the transport identity and fixes the unique solution"
                    .to_string(),
            )
        }
        "one_d" => {
            let gamma = record("gamma", param(params, "gamma", -1.0));
            let fam = classify_1d(gamma)?;
            let mut sets = Vec::new();
            if let Some(u) = fam.unique {
                sets.push(set("unique [-1/sqrt(gamma), 1/sqrt(gamma)]", u, Pass));
            } else {
                let b = record("b", positive(params, "b", 2.0)?);
                sets.push(set(format!("C_b with b = {b}"), fam.member(b)?, Pass));
                for case in case_table(gamma)? {
                    if case.label == "V" {
                        continue;
                    }
                    let verdict = if case.solves { Pass } else { Fail };
                    sets.push(set(format!("case {}: {}", case.label, case.shape), case.set, verdict));
                }
            }
            (Operator::scalar(1, gamma)?, sets, "complete classification on the real line".to_string())
        }
        "f_b" => {
            let b = record("b", positive(params, "b", 2.0)?);
            (
                Operator::scalar(1, -1.0)?,
                vec![set("C_b = [-1/b, b], f_b = gauge^2/2", ConvexSet::interval(-1.0 / b, b)?, Pass)],
                "f_b is half the squared gauge of [-1/b, b] and satisfies f_b(x) = f_b*(-x)".to_string(),
            )
        }
        "unbounded_ellipsoid_demo" => {
            let n = record("n", int_param(params, "n", 4, 2)? as f64) as usize;
            let a = Matrix::from_diag(&(1..=n).map(|k| 1.0 / k as f64).collect::<Vec<_>>());
            (
                Operator::new(a.clone())?,
                vec![set("diag(1, 1/2, ..., 1/n) ellipsoid", ConvexSet::ellipsoid(a)?, Pass)],
                "finite truncation of an ellipsoid whose operator has no bounded inverse in the limit".to_string(),
            )
        }
        "semi_skew_nonexistence" => {
            let a1 = record("alpha1", param(params, "alpha1", 1.0));
            let a2 = record("alpha2", param(params, "alpha2", 2.0));
            let form =
                SemiSkewForm::new([1.0, 0.0], a1, a2).map_err(|e| Error::BadParams(format!("alpha1, alpha2: {e}")))?;
            (
                Operator::new(form.matrix())?,
                vec![set("unit square", square(1.0), Fail), set("unit disc", ConvexSet::ball(2, 1.0)?, Fail)],
                "semi-skew G admits no bounded solution with 0 in the interior".to_string(),
            )
        }
        other => return Err(Error::UnknownEntry(other.to_string())),
    };
    Ok(GalleryEntry { name: name.to_string(), params: used, g, sets, description })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{verify_fixed_point, VerifyConfig};

    #[test]
    fn simplex_invariants() {
        let v = simplex_vertices(2, 1.0).unwrap();
        let h = 3f64.sqrt() / 2.0;
        let want = [[1.0, 0.0], [-0.5, h], [-0.5, -h]];
        for (a, b) in v.iter().zip(want) {
            assert!((a[0] - b[0]).abs() < 1e-15 && (a[1] - b[1]).abs() < 1e-15);
        }
        for n in 2..8 {
            let r = (n as f64).sqrt();
            let v = simplex_vertices(n, r).unwrap();
            assert_eq!(v.len(), n + 1);
            for i in 0..=n {
                assert!((norm(&v[i]) - r).abs() < 1e-12);
                for j in 0..i {
                    assert!((dot(&v[i], &v[j]) + r * r / n as f64).abs() < 1e-10);
                }
            }
            for k in 0..n {
                assert!(v.iter().map(|p| p[k]).sum::<f64>().abs() < 1e-12);
            }
            assert!(simplex_facet_error(&v) < 1e-10);
        }
        assert!(simplex_vertices(1, 1.0).is_err());
    }

    #[test]
    fn demo_norms() {
        let w = unbounded_ellipsoid_demo(4).unwrap();
        assert!((w[1] - 2f64.sqrt()).abs() < 1e-15 && (w[3] - 2.0).abs() < 1e-15);
        assert!((unbounded_ellipsoid_demo(100).unwrap()[99] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn every_entry_reproduces() {
        for name in ENTRIES {
            let e = gallery(name, &Params::new()).unwrap();
            for s in &e.sets {
                let r = verify_fixed_point(&e.g, &s.set, &VerifyConfig::default()).unwrap();
                assert_eq!(r.verdict, s.expected, "{name}: {}", s.label);
            }
        }
    }

    #[test]
    fn bad_requests() {
        assert_eq!(gallery("nope", &Params::new()).unwrap_err(), Error::UnknownEntry("nope".into()));
        let p = Params::from([("lambda".to_string(), -1.0)]);
        assert!(matches!(gallery("ellipse_family", &p), Err(Error::BadParams(_))));
        let p = Params::from([("alpha1".to_string(), 1.0), ("alpha2".to_string(), 1.0)]);
        assert!(matches!(gallery("semi_skew_nonexistence", &p), Err(Error::BadParams(_))));
    }
}
