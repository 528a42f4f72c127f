//! Planar figures: boundaries of 2D sets on the fixed box [−3, 3]².

use std::f64::consts::TAU;
use std::fmt::Write;

use polarfix::linalg::polygon_vertices;
use polarfix::{ConvexSet, Error, Result};

const HALF: f64 = 3.0;
const SEGMENTS: usize = 128;
/// Cone wedges are drawn out to this radius and clipped to the box.
const FAR: f64 = 10.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

pub struct Layer {
    pub set: ConvexSet,
    pub label: String,
    pub dashed: bool,
    pub color: usize,
}

enum Shape {
    /// Closed polygon.
    Closed(Vec<[f64; 2]>),
    /// Wedge: origin, then points along the arc.
    Wedge(Vec<[f64; 2]>),
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counterclockwise convex hull (monotone chain).
fn hull(points: &[Vec<f64>]) -> Vec<[f64; 2]> {
    let mut p: Vec<[f64; 2]> = points.iter().map(|v| [v[0], v[1]]).collect();
    p.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut h: Vec<[f64; 2]> = Vec::with_capacity(2 * p.len());
    for pass in 0..2 {
        let start = h.len();
        let seq: Vec<[f64; 2]> = if pass == 0 { p.clone() } else { p.iter().rev().cloned().collect() };
        for q in seq {
            while h.len() >= start + 2 && cross(h[h.len() - 2], h[h.len() - 1], q) <= 0.0 {
                h.pop();
            }
            h.push(q);
        }
        h.pop();
    }
    h
}

fn angle(v: [f64; 2]) -> f64 {
    v[1].atan2(v[0])
}

/// The two extreme rays of a pointed planar cone, as `(start, sweep)` with
/// the cone covering angles `start ..= start + sweep`.
fn wedge_span(rays: &[[f64; 2]]) -> Result<(f64, f64)> {
    if rays.is_empty() {
        return Err(Error::UnsupportedRepresentation("cone without rays".into()));
    }
    let mut a: Vec<f64> = rays.iter().map(|r| angle(*r).rem_euclid(TAU)).collect();
    a.sort_by(f64::total_cmp);
    // The largest gap between consecutive ray angles lies outside the cone.
    let k = a.len();
    let (mut gap, mut after) = (TAU - a[k - 1] + a[0], 0);
    for i in 1..k {
        if a[i] - a[i - 1] > gap {
            gap = a[i] - a[i - 1];
            after = i;
        }
    }
    let start = a[after];
    Ok((start, TAU - gap))
}

fn cone_rays(c: &ConvexSet) -> Result<Vec<[f64; 2]>> {
    Ok(match c {
        ConvexSet::Orthant(s) => vec![[s[0], 0.0], [0.0, s[1]]],
        ConvexSet::Lorentz(a) => {
            let (s, co) = std::f64::consts::FRAC_PI_4.sin_cos();
            vec![[co * a[0] - s * a[1], s * a[0] + co * a[1]], [co * a[0] + s * a[1], -s * a[0] + co * a[1]]]
        }
        ConvexSet::ConeV(g) => g.iter().map(|v| [v[0], v[1]]).collect(),
        ConvexSet::ConeH(rows) => {
            let mut out = Vec::new();
            for r in rows {
                for cand in [[-r[1], r[0]], [r[1], -r[0]]] {
                    let scale = cand[0].hypot(cand[1]);
                    if c.contains(&cand, 1e-9 * scale)? {
                        out.push(cand);
                    }
                }
            }
            out
        }
        _ => unreachable!("only cones reach cone_rays"),
    })
}

fn shape(c: &ConvexSet) -> Result<Shape> {
    if c.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: c.dim() });
    }
    let circle = |f: &dyn Fn([f64; 2]) -> f64| {
        (0..SEGMENTS)
            .map(|i| {
                let t = TAU * i as f64 / SEGMENTS as f64;
                let d = [t.cos(), t.sin()];
                let r = f(d);
                [d[0] * r, d[1] * r]
            })
            .collect::<Vec<_>>()
    };
    Ok(match c {
        ConvexSet::Ball { radius, .. } => Shape::Closed(circle(&|_| *radius)),
        ConvexSet::Ellipsoid(e) => {
            let a = e.matrix();
            Shape::Closed(circle(&|d| 1.0 / a.quad_form(&d).sqrt()))
        }
        ConvexSet::PolytopeV(v) => Shape::Closed(hull(v)),
        ConvexSet::PolytopeH(h) => Shape::Closed(polygon_vertices(&h.rows).ok_or(Error::UnboundedSet)?),
        _ if c.is_cone() => {
            let (start, sweep) = wedge_span(&cone_rays(c)?)?;
            let steps = ((sweep / TAU) * SEGMENTS as f64).ceil().max(1.0) as usize;
            let mut pts = vec![[0.0, 0.0]];
            for i in 0..=steps {
                let t = start + sweep * i as f64 / steps as f64;
                pts.push([FAR * t.cos(), FAR * t.sin()]);
            }
            Shape::Wedge(pts)
        }
        _ => return Err(Error::UnsupportedRepresentation(format!("cannot draw {}", c.kind()))),
    })
}

fn points_attr(pts: &[[f64; 2]]) -> String {
    pts.iter().map(|p| format!("{:.6},{:.6}", p[0], p[1])).collect::<Vec<_>>().join(" ")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// One SVG document with every layer overlaid. The y axis points up.
pub fn render(layers: &[Layer]) -> Result<String> {
    let mut s = String::new();
    let w = 2.0 * HALF;
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {w} {w}" width="480" height="480">"#,
        -HALF, -HALF
    );
    let _ = writeln!(
        s,
        r#"<defs><clipPath id="box"><rect x="{0}" y="{0}" width="{w}" height="{w}"/></clipPath></defs>"#,
        -HALF
    );
    let _ = writeln!(s, r##"<rect x="{0}" y="{0}" width="{w}" height="{w}" fill="#ffffff"/>"##, -HALF);
    let _ = writeln!(s, r#"<g transform="scale(1,-1)" clip-path="url(#box)" fill="none" stroke-width="0.02">"#);
    let _ =
        writeln!(s, r##"<path d="M {0} 0 H {1} M 0 {0} V {1}" stroke="#bbbbbb" stroke-width="0.01"/>"##, -HALF, HALF);
    for l in layers {
        let color = PALETTE[l.color % PALETTE.len()];
        let dash = if l.dashed { r#" stroke-dasharray="0.08 0.05""# } else { "" };
        let (pts, fill) = match shape(&l.set)? {
            Shape::Closed(p) => (p, String::new()),
            Shape::Wedge(p) => (p, format!(r#" fill="{color}" fill-opacity="0.12""#)),
        };
        let _ = writeln!(
            s,
            r#"<polygon points="{}" stroke="{color}"{fill}{dash}><title>{}</title></polygon>"#,
            points_attr(&pts),
            escape(&l.label)
        );
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}
