//! Legendre–Fenchel transforms: closed forms and brute-force grid conjugates.

use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::{coercivity_witness, is_positive_definite, Matrix};
use crate::polarity::Operator;
use crate::sets::ConvexSet;
use crate::verify::sample_directions;
use crate::{Error, Result};

/// Grid error allowance, as a multiple of the primal spacing `h`.
pub const GRID_TOL_FACTOR: f64 = 5.0;

/// Samples of a function on a regular 1D or 2D box grid.
///
/// Values are stored with the first axis varying slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    lo: Vec<f64>,
    hi: Vec<f64>,
    nodes: Vec<usize>,
    values: Vec<f64>,
}

/// A symmetric box `[−half_width, half_width]ᵈ` with `nodes` samples per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub half_width: f64,
    pub nodes: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { half_width: 4.0, nodes: 257 }
    }
}

impl GridSpec {
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.nodes - 1) as f64
    }
}

impl GridFunction {
    fn check_box(lo: &[f64], hi: &[f64], nodes: &[usize]) -> Result<()> {
        let d = lo.len();
        if d == 0 || d > 2 || hi.len() != d || nodes.len() != d {
            return Err(Error::InvalidGrid("grids are 1D or 2D".into()));
        }
        for j in 0..d {
            let ok = lo[j] < hi[j] && lo[j] <= 0.0 && 0.0 <= hi[j] && lo[j].is_finite() && hi[j].is_finite();
            if !ok {
                return Err(Error::InvalidGrid("each axis must be a finite interval containing 0".into()));
            }
            if nodes[j] < 9 {
                return Err(Error::InvalidGrid("at least 9 nodes per axis".into()));
            }
        }
        Ok(())
    }

    /// Samples `f` at every node of the box.
    pub fn sample(lo: &[f64], hi: &[f64], nodes: &[usize], f: impl Fn(&[f64]) -> f64 + Sync) -> Result<Self> {
        Self::check_box(lo, hi, nodes)?;
        let total: usize = nodes.iter().product();
        let mut g = GridFunction { lo: lo.to_vec(), hi: hi.to_vec(), nodes: nodes.to_vec(), values: Vec::new() };
        let values: Vec<f64> = (0..total).into_par_iter().map(|k| f(&g.point(k))).collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("sampled values must be finite".into()));
        }
        g.values = values;
        Ok(g)
    }

    pub fn on_spec(dim: usize, spec: GridSpec, f: impl Fn(&[f64]) -> f64 + Sync) -> Result<Self> {
        let w = spec.half_width;
        Self::sample(&vec![-w; dim], &vec![w; dim], &vec![spec.nodes; dim], f)
    }

    pub fn dim(&self) -> usize {
        self.nodes.len()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn bounds(&self) -> (&[f64], &[f64]) {
        (&self.lo, &self.hi)
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    fn step(&self, j: usize) -> f64 {
        (self.hi[j] - self.lo[j]) / (self.nodes[j] - 1) as f64
    }

    /// Largest per-axis spacing.
    pub fn spacing(&self) -> f64 {
        (0..self.dim()).map(|j| self.step(j)).fold(0.0, f64::max)
    }

    fn coord(&self, j: usize, i: usize) -> f64 {
        if i == self.nodes[j] - 1 {
            self.hi[j]
        } else {
            self.lo[j] + i as f64 * self.step(j)
        }
    }

    fn axis(&self, j: usize) -> Vec<f64> {
        (0..self.nodes[j]).map(|i| self.coord(j, i)).collect()
    }

    fn multi_index(&self, k: usize) -> Vec<usize> {
        match self.dim() {
            1 => vec![k],
            _ => vec![k / self.nodes[1], k % self.nodes[1]],
        }
    }

    /// Coordinates of the `k`-th node.
    pub fn point(&self, k: usize) -> Vec<f64> {
        self.multi_index(k).iter().enumerate().map(|(j, &i)| self.coord(j, i)).collect()
    }

    fn flat(&self, idx: &[usize]) -> usize {
        match self.dim() {
            1 => idx[0],
            _ => idx[0] * self.nodes[1] + idx[1],
        }
    }

    /// Multilinear interpolation; `None` outside the box or when a cell
    /// corner is rejected by `usable`.
    fn interpolate_with(&self, x: &[f64], usable: impl Fn(usize) -> bool) -> Option<f64> {
        let d = self.dim();
        let mut base = Vec::with_capacity(d);
        let mut t = Vec::with_capacity(d);
        for (j, &xj) in x.iter().enumerate().take(d) {
            let eps = 1e-12 * (self.hi[j] - self.lo[j]);
            if xj < self.lo[j] - eps || xj > self.hi[j] + eps {
                return None;
            }
            let s = ((xj - self.lo[j]) / self.step(j)).clamp(0.0, (self.nodes[j] - 1) as f64);
            let i = (s.floor() as usize).min(self.nodes[j] - 2);
            base.push(i);
            t.push(s - i as f64);
        }
        let mut acc = 0.0;
        for corner in 0..(1usize << d) {
            let mut w = 1.0;
            let mut idx = base.clone();
            for j in 0..d {
                if corner >> j & 1 == 1 {
                    idx[j] += 1;
                    w *= t[j];
                } else {
                    w *= 1.0 - t[j];
                }
            }
            if w == 0.0 {
                continue;
            }
            let k = self.flat(&idx);
            if !usable(k) {
                return None;
            }
            acc += w * self.values[k];
        }
        Some(acc)
    }

    pub fn interpolate(&self, x: &[f64]) -> Option<f64> {
        self.interpolate_with(x, |_| true)
    }

    /// Writes `x0[,x1],value` rows.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let mut header: Vec<String> = (0..self.dim()).map(|j| format!("x{j}")).collect();
        header.push("value".into());
        let io = |e: csv::Error| Error::InvalidGrid(e.to_string());
        wr.write_record(&header).map_err(io)?;
        for k in 0..self.len() {
            let mut row: Vec<String> = self.point(k).iter().map(|v| v.to_string()).collect();
            row.push(self.values[k].to_string());
            wr.write_record(&row).map_err(io)?;
        }
        wr.flush().map_err(|e| Error::InvalidGrid(e.to_string()))?;
        Ok(())
    }
}

/// A grid conjugate together with the dual nodes whose maximizer is
/// interior to the primal box (only those are trusted).
#[derive(Debug, Clone, PartialEq)]
pub struct GridConjugate {
    pub values: GridFunction,
    pub reliable: Vec<bool>,
}

impl GridConjugate {
    /// Interpolates `f*` using only cells whose corners are all reliable.
    pub fn eval(&self, y: &[f64]) -> Option<f64> {
        self.values.interpolate_with(y, |k| self.reliable[k])
    }
}

/// Dual box half-widths `0.8·max|∂_j f|`, estimated by one-sided differences.
fn default_dual_box(f: &GridFunction) -> Vec<f64> {
    let d = f.dim();
    let mut l = vec![0.0f64; d];
    for k in 0..f.len() {
        let idx = f.multi_index(k);
        for j in 0..d {
            if idx[j] + 1 < f.nodes[j] {
                let mut n = idx.clone();
                n[j] += 1;
                let g = (f.values[f.flat(&n)] - f.values[k]) / f.step(j);
                l[j] = l[j].max(g.abs());
            }
        }
    }
    l.iter().map(|v| (0.8 * v).max(1e-3)).collect()
}

/// `f*(y) = max_x ⟨y, x⟩ − f(x)` over grid nodes, on the default dual box
/// with the same node counts.
pub fn legendre_grid(f: &GridFunction) -> GridConjugate {
    let l = default_dual_box(f);
    let lo: Vec<f64> = l.iter().map(|v| -v).collect();
    legendre_grid_on(f, &lo, &l, &f.nodes.clone()).expect("default dual box is valid")
}

/// Grid conjugate on an explicit dual box.
///
/// The 2D supremum is taken axis by axis,
/// `max_{x₀} (y₀x₀ + max_{x₁} (y₁x₁ − f(x₀, x₁)))`, which visits the same
/// node pairs as the direct double loop.
pub fn legendre_grid_on(f: &GridFunction, lo: &[f64], hi: &[f64], nodes: &[usize]) -> Result<GridConjugate> {
    GridFunction::check_box(lo, hi, nodes)?;
    if lo.len() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: lo.len() });
    }
    let mut dual = GridFunction { lo: lo.to_vec(), hi: hi.to_vec(), nodes: nodes.to_vec(), values: Vec::new() };
    let xs: Vec<Vec<f64>> = (0..f.dim()).map(|j| f.axis(j)).collect();
    let ys: Vec<Vec<f64>> = (0..f.dim()).map(|j| dual.axis(j)).collect();
    let interior = |j: usize, i: usize| i > 0 && i + 1 < f.nodes[j];

    let (values, reliable): (Vec<f64>, Vec<bool>) = match f.dim() {
        1 => ys[0]
            .par_iter()
            .map(|&y| {
                let (best, arg) = argmax(xs[0].iter().zip(&f.values).map(|(&x, &v)| y * x - v));
                (best, interior(0, arg))
            })
            .unzip(),
        _ => {
            let (n0, n1) = (f.nodes[0], f.nodes[1]);
            // inner[i0][k1] = max_{i1} y1·x1 − f(x0_i0, x1_i1)
            let inner: Vec<Vec<(f64, usize)>> = (0..n0)
                .into_par_iter()
                .map(|i0| {
                    let row = &f.values[i0 * n1..(i0 + 1) * n1];
                    ys[1].iter().map(|&y1| argmax(xs[1].iter().zip(row).map(|(&x, &v)| y1 * x - v))).collect()
                })
                .collect();
            let m1 = nodes[1];
            (0..nodes[0] * m1)
                .into_par_iter()
                .map(|k| {
                    let (k0, k1) = (k / m1, k % m1);
                    let y0 = ys[0][k0];
                    let (best, i0) = argmax((0..n0).map(|i0| y0 * xs[0][i0] + inner[i0][k1].0));
                    let i1 = inner[i0][k1].1;
                    (best, interior(0, i0) && interior(1, i1))
                })
                .unzip()
        }
    };
    dual.values = values;
    Ok(GridConjugate { values: dual, reliable })
}

/// First index attaining the maximum.
fn argmax(it: impl Iterator<Item = f64>) -> (f64, usize) {
    let mut best = f64::NEG_INFINITY;
    let mut arg = 0;
    for (i, v) in it.enumerate() {
        if v > best {
            best = v;
            arg = i;
        }
    }
    (best, arg)
}

/// `½⟨A⁻¹x*, x*⟩`, the conjugate of `½⟨Ax, x⟩`.
pub fn quadratic_conjugate(a: &Matrix, xstar: &[f64]) -> Result<f64> {
    if !is_positive_definite(a) {
        return Err(Error::NotPositiveDefinite);
    }
    if xstar.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: xstar.len() });
    }
    Ok(0.5 * a.inverse()?.quad_form(xstar))
}

/// Conjugate of `φ(γ_C)` for `φ(t) = tᵖ/p`: `h_C(x*)^q / q` with `1/p + 1/q = 1`.
pub fn gauge_power_conjugate(c: &ConvexSet, p: f64, xstar: &[f64]) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::BadParams("p must be a finite real > 1".into()));
    }
    if !c.is_bounded() {
        return Err(Error::UnboundedSet);
    }
    let q = p / (p - 1.0);
    let h = c.support(xstar)?;
    Ok(if q == 2.0 { 0.5 * h * h } else { h.powf(q) / q })
}

/// `½γ_C²` sampled on a grid.
pub fn half_gauge_squared(c: &ConvexSet, spec: GridSpec) -> Result<GridFunction> {
    if !c.is_bounded() {
        return Err(Error::UnboundedSet);
    }
    let d = c.dim();
    if d > 2 {
        return Err(Error::InvalidGrid("grid work is limited to 1D and 2D".into()));
    }
    // Validate once; the sampler itself cannot propagate errors.
    c.gauge(&vec![0.0; d])?;
    GridFunction::on_spec(d, spec, |x| {
        let g = c.gauge(x).unwrap_or(f64::NAN);
        0.5 * g * g
    })
}

/// Max of `|a(x) − b(x)|` over points where both are defined, with the argmax point.
fn max_gap(points: impl ParallelIterator<Item = Option<(f64, Vec<f64>)>>) -> (f64, Option<Vec<f64>>, usize) {
    let all: Vec<Option<(f64, Vec<f64>)>> = points.collect();
    let mut best = 0.0;
    let mut arg = None;
    let mut used = 0;
    for (v, x) in all.into_iter().flatten() {
        used += 1;
        if v > best || arg.is_none() {
            best = v.max(best);
            arg = Some(x);
        }
    }
    (best, arg, used)
}

/// Result of a grid identity check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridResidual {
    pub residual: f64,
    pub h: f64,
    /// `5h`, the allowance for first-order grid error.
    pub tolerance: f64,
    pub nodes_used: usize,
    pub argmax: Option<Vec<f64>>,
}

impl GridResidual {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// `sup_x |f(x) − f*(Gᵀx)|` for `f = ½γ_C²`; small when `C` solves `C = (GC)°`.
pub fn fixedpoint_function_residual(c: &ConvexSet, g: &Operator, spec: GridSpec) -> Result<GridResidual> {
    if g.dim() != c.dim() {
        return Err(Error::DimensionMismatch { expected: c.dim(), found: g.dim() });
    }
    let f = half_gauge_squared(c, spec)?;
    let conj = legendre_grid(&f);
    let gt = g.transpose();
    let (residual, argmax, nodes_used) = max_gap((0..f.len()).into_par_iter().map(|k| {
        let x = f.point(k);
        conj.eval(&gt.mul_vec(&x)).map(|v| ((f.values[k] - v).abs(), x))
    }));
    let h = f.spacing();
    Ok(GridResidual { residual, h, tolerance: GRID_TOL_FACTOR * h, nodes_used, argmax })
}

/// `sup_x |f(x) − f(E⁻¹Eᵀx)|` over nodes whose image stays inside the box.
pub fn functional_equation_residual(f: &GridFunction, e: &Operator) -> Result<GridResidual> {
    if e.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: e.dim() });
    }
    let s = e.inverse() * e.transpose();
    let (residual, argmax, nodes_used) = max_gap((0..f.len()).into_par_iter().map(|k| {
        let x = f.point(k);
        f.interpolate(&s.mul_vec(&x)).map(|v| ((f.values[k] - v).abs(), x))
    }));
    let h = f.spacing();
    Ok(GridResidual { residual, h, tolerance: GRID_TOL_FACTOR * h, nodes_used, argmax })
}

/// `max |closed form − grid|` over reliable dual nodes.
pub fn conjugate_gap(conj: &GridConjugate, exact: impl Fn(&[f64]) -> f64 + Sync, h: f64) -> GridResidual {
    let d = &conj.values;
    let (residual, argmax, nodes_used) = max_gap((0..d.len()).into_par_iter().map(|k| {
        conj.reliable[k].then(|| {
            let y = d.point(k);
            ((d.values[k] - exact(&y)).abs(), y)
        })
    }));
    GridResidual { residual, h, tolerance: GRID_TOL_FACTOR * h, nodes_used, argmax }
}

/// `f_b(x) = b²x²/2` for `x ≤ 0` and `x²/(2b²)` for `x ≥ 0`.
pub fn f_b(b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.5 * b * b * x * x
    } else {
        0.5 * x * x / (b * b)
    }
}

/// `sup_x |f_b(x) − f_b*(−x)|` on `[−w, w]` with `nodes` samples.
pub fn f_b_self_duality(b: f64, spec: GridSpec) -> Result<GridResidual> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::BadParams("b must be positive".into()));
    }
    let f = GridFunction::on_spec(1, spec, |x| f_b(b, x[0]))?;
    let conj = legendre_grid(&f);
    let (residual, argmax, nodes_used) = max_gap((0..f.len()).into_par_iter().map(|k| {
        let x = f.point(k);
        conj.eval(&[-x[0]]).map(|v| ((f.values[k] - v).abs(), x))
    }));
    let h = f.spacing();
    Ok(GridResidual { residual, h, tolerance: GRID_TOL_FACTOR * h, nodes_used, argmax })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoercivityReport {
    pub beta: f64,
    pub attained_at: Vec<f64>,
    /// Smallest `⟨Ax, x⟩` over the sampled unit vectors.
    pub sampled_min: f64,
}

/// `β = λ_min(A)`, its eigenvector witness, and a sampled check of `⟨Ax,x⟩ ≥ β`.
pub fn coercivity_check(a: &Matrix, samples: usize, seed: u64) -> Result<CoercivityReport> {
    let (beta, v) = coercivity_witness(a)?;
    let sampled_min =
        sample_directions(a.dim(), samples, seed).iter().map(|u| a.quad_form(u)).fold(f64::INFINITY, f64::min);
    Ok(CoercivityReport { beta, attained_at: v, sampled_min })
}
