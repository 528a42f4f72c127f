//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Exits nonzero only when a criterion fails that is not listed in
//! `KNOWN_UNATTAINABLE`. Those are still run and reported honestly.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};
use std::time::Instant;

use polarfix::conjugate::{
    coercivity_check, conjugate_gap, f_b_self_duality, fixedpoint_function_residual, functional_equation_residual,
    half_gauge_squared, legendre_grid, quadratic_conjugate, GridFunction, GridSpec,
};
use polarfix::gallery::{gallery, simplex_facet_error, simplex_vertices, Params};
use polarfix::linalg::{coercivity_witness, norm, operator_norm, spectral_abs, sub, Matrix};
use polarfix::polarity::{polar, polarity_map, pushforward, Operator};
use polarfix::random;
use polarfix::solver::{
    case_table, classify_1d, iterate_polarity, operator_equation_residual, solve_positive_definite, transport_residual,
    IterationVerdict,
};
use polarfix::verify::{cone_residual, sample_directions, support_residual, verify_fixed_point, VerifyConfig};
use polarfix::{ConvexSet, Result};

/// Criteria whose thresholds contradict the mathematics.
///
/// C6: the three planar solutions are only 2^{1/4} − 1 ≈ 0.189 apart, below
/// the required 0.2.
/// C9: even iterates from the square are diag(2^{-j}, 2^j)·square, so the
/// absolute self-residual halves every two steps (about 5e-8 at step 48),
/// below the required floor of 1e-3.
const KNOWN_UNATTAINABLE: [&str; 2] = ["C6", "C9"];

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { ok, detail: detail.into() })
}

fn cfg(tol: f64) -> VerifyConfig {
    VerifyConfig { tol, ..VerifyConfig::default() }
}

fn params(kv: &[(&str, f64)]) -> Params {
    kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn c1() -> Result<Outcome> {
    let start = Instant::now();
    let mut rng = random::rng(1);
    let mut worst_pass = 0.0f64;
    let mut weakest_fail = f64::INFINITY;
    let mut ok = true;
    for i in 0..100 {
        let n = 1 + i % 6;
        let a = random::spd(n, &mut rng);
        let g = Operator::new(a.clone())?;
        let c = solve_positive_definite(&g)?;
        let r = verify_fixed_point(&g, &c, &cfg(1e-8))?;
        ok &= r.passed();
        worst_pass = worst_pass.max(r.max_residual);
        let bumped = a.scale(1.01);
        let wrong = if n == 1 {
            let s = 1.0 / bumped[(0, 0)].sqrt();
            ConvexSet::interval(-s, s)?
        } else {
            ConvexSet::ellipsoid(bumped)?
        };
        let r = verify_fixed_point(&g, &wrong, &cfg(1e-8))?;
        ok &= r.max_residual >= 1e-3;
        weakest_fail = weakest_fail.min(r.max_residual);
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 5.0;
    outcome(
        ok,
        format!("max solution residual {worst_pass:.2e}, min perturbed residual {weakest_fail:.2e}, {secs:.2}s"),
    )
}

fn c2() -> Result<Outcome> {
    let mut rng = random::rng(2);
    let (mut eq, mut fp) = (0.0f64, 0.0f64);
    for i in 0..100 {
        let n = 2 + i % 5;
        let g = Operator::new(random::symmetric_mixed(n, &mut rng))?;
        let a = spectral_abs(g.matrix())?;
        eq = eq.max(operator_equation_residual(&a, &g)?);
        fp = fp.max(verify_fixed_point(&g, &ConvexSet::ellipsoid(a)?, &cfg(1e-8))?.max_residual);
    }
    outcome(eq <= 1e-10 && fp <= 1e-8, format!("operator residual {eq:.2e}, fixed-point residual {fp:.2e}"))
}

fn c3() -> Result<Outcome> {
    let exact = VerifyConfig { tol: 0.0, ..VerifyConfig::default() };
    let mut ok = true;
    let mut checked = 0;
    for gamma in [0.25, 1.0, 9.0] {
        let fam = classify_1d(gamma)?;
        let r = verify_fixed_point(&Operator::scalar(1, gamma)?, fam.unique.as_ref().expect("unique"), &exact)?;
        ok &= r.max_residual == 0.0;
        checked += 1;
    }
    let g = Operator::scalar(1, -1.0)?;
    let fam = classify_1d(-1.0)?;
    for c in fam.solutions(&[0.5, 1.0, 2.0])? {
        ok &= verify_fixed_point(&g, &c, &exact)?.max_residual == 0.0;
        checked += 1;
    }
    let mut rejected = 0;
    for case in case_table(-1.0)? {
        let r = verify_fixed_point(&g, &case.set, &exact)?;
        if case.solves {
            ok &= r.max_residual == 0.0;
        } else {
            ok &= r.max_residual > 0.0;
            rejected += 1;
        }
    }
    ok &= rejected == 6;
    outcome(ok, format!("{checked} solutions exact, {rejected} case shapes rejected"))
}

fn c4() -> Result<Outcome> {
    let mut ok = true;
    let mut worst = 0.0f64;
    let mut facet = 0.0f64;
    for n in 2..=6 {
        let v = simplex_vertices(n, (n as f64).sqrt())?;
        facet = facet.max(simplex_facet_error(&v));
        let r = verify_fixed_point(&Operator::scalar(n, -1.0)?, &ConvexSet::polytope_v(v)?, &cfg(1e-8))?;
        ok &= r.passed();
        worst = worst.max(r.max_residual);
    }
    let circ = polar(&ConvexSet::polytope_v(simplex_vertices(2, 1.0)?)?)?.outer_radius();
    ok &= (circ - 2.0).abs() <= 1e-9 && facet <= 1e-10;
    outcome(ok, format!("max residual {worst:.2e}, polar circumradius {circ:.12}, facet error {facet:.2e}"))
}

fn c5() -> Result<Outcome> {
    let mut ok = true;
    let mut total = 0;
    for n in [2, 3, 5] {
        let g = Operator::scalar(n, -1.0)?;
        for c in [ConvexSet::lorentz(vec![1.0; n])?, ConvexSet::orthant(vec![1.0; n])?] {
            let d = polarity_map(&g, &c)?;
            let r = cone_residual(&c, &d, 10_000, 0, 1e-9)?;
            let k = r.disagreements.unwrap_or(usize::MAX);
            ok &= k == 0 && r.passed();
            total += k;
        }
    }
    outcome(ok, format!("{total} disagreements over 6 cones x 10000 directions"))
}

fn c6() -> Result<Outcome> {
    let e = gallery("square_rhombus_disc", &Params::new())?;
    let mut ok = true;
    let mut worst = 0.0f64;
    for s in &e.sets {
        let r = verify_fixed_point(&e.g, &s.set, &cfg(1e-12))?;
        ok &= r.passed();
        worst = worst.max(r.max_residual);
    }
    let mut sep = f64::INFINITY;
    for i in 0..e.sets.len() {
        for j in 0..i {
            sep = sep.min(support_residual(&e.sets[i].set, &e.sets[j].set, 512, 0)?.max_residual);
        }
    }
    ok &= sep >= 0.2;
    outcome(ok, format!("all three fixed (max residual {worst:.2e}); min pairwise separation {sep:.5} vs required 0.2"))
}

fn c7() -> Result<Outcome> {
    let mut ok = true;
    let mut worst = 0.0f64;
    for l in [0.5, 1.0, 3.0] {
        let e = gallery("ellipse_family", &params(&[("lambda", l)]))?;
        let r = verify_fixed_point(&e.g, &e.sets[0].set, &cfg(1e-10))?;
        ok &= r.passed();
        worst = worst.max(r.max_residual);
    }
    let e = gallery("ellipse_family_2n", &params(&[("lambda1", 0.5), ("lambda2", 3.0)]))?;
    let r = verify_fixed_point(&e.g, &e.sets[0].set, &cfg(1e-10))?;
    ok &= r.passed();
    worst = worst.max(r.max_residual);
    outcome(ok, format!("max residual {worst:.2e}"))
}

fn c8() -> Result<Outcome> {
    let (mut tr, mut moved) = (0.0f64, 0.0f64);
    for alpha in [0.0, FRAC_PI_6, FRAC_PI_3] {
        for l in [0.5, 2.0] {
            let (s, c) = alpha.sin_cos();
            let a = Operator::new(Matrix::from_rows(&[vec![c, -s, 0.0], vec![s, c, 0.0], vec![0.0, 0.0, 1.0]])?)?;
            let g = Operator::new(Matrix::from_diag(&[1.0, 1.0, l]))?;
            tr = tr.max(transport_residual(&a, &g)?);
            let set = ConvexSet::ellipsoid(Matrix::from_diag(&[1.0, 1.0, l]))?;
            moved = moved.max(support_residual(&pushforward(&a, &set)?, &set, 512, 0)?.max_residual);
        }
    }
    outcome(tr <= 1e-12 && moved <= 1e-9, format!("transport residual {tr:.2e}, moved-set residual {moved:.2e}"))
}

fn unit_square() -> ConvexSet {
    ConvexSet::PolytopeV(vec![vec![1.0, 1.0], vec![-1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0]])
}

fn c9() -> Result<Outcome> {
    let g = Operator::new(Matrix::from_rows(&[vec![0.0, 2.0], vec![-1.0, 0.0]])?)?;
    let trace = iterate_polarity(&g, &unit_square(), 50, 1e-8, &VerifyConfig::default())?;
    let floor = trace.min_self_residual();
    let f = half_gauge_squared(&unit_square(), GridSpec { half_width: 4.0, nodes: 257 })?;
    let fe = functional_equation_residual(&f, &g.transpose_op())?;
    let ok = trace.verdict == IterationVerdict::NoFixedPointWithinBudget
        && trace.rows.len() == 50
        && floor >= 1e-3
        && fe.residual >= 10.0 * fe.tolerance;
    outcome(
        ok,
        format!(
            "{:?} after {} steps, min self residual {floor:.3e} vs floor 1e-3, functional residual {:.3} vs 10*5h = {:.3}",
            trace.verdict,
            trace.rows.len(),
            fe.residual,
            10.0 * fe.tolerance
        ),
    )
}

/// `sup_x ⟨u, x⟩ / γ_C(x)` over sampled points, refined by random local moves.
///
/// The pool holds sphere samples plus, for V-polytopes, the listed
/// vertices: in higher dimensions the maximizing cone around a vertex is too
/// thin for sphere samples alone.
fn sampled_polar_gauge(c: &ConvexSet, u: &[f64], seed: u64) -> Result<f64> {
    let n = u.len();
    let ratio = |x: &[f64]| -> Result<f64> { Ok(polarfix::linalg::dot(u, x) / c.gauge(x)?) };
    let mut pool = sample_directions(n, 2048, seed);
    if let ConvexSet::PolytopeV(v) = c {
        pool.extend(v.iter().cloned());
    }
    let mut best_x = u.to_vec();
    let mut best = ratio(&best_x)?;
    for x in pool {
        let r = ratio(&x)?;
        if r > best {
            best = r;
            best_x = x;
        }
    }
    let mut rng = random::rng(seed);
    let mut step = 0.2;
    while step > 1e-7 {
        let mut improved = false;
        for _ in 0..(8 * n) {
            let dir = random::unit_vector(n, &mut rng);
            let x: Vec<f64> = best_x.iter().zip(&dir).map(|(a, b)| a + step * b).collect();
            let r = ratio(&x)?;
            if r > best {
                best = r;
                best_x = x;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(best)
}

fn c10() -> Result<Outcome> {
    let mut rng = random::rng(10);
    let mut fails: Vec<String> = Vec::new();
    let mut worst_route = 0.0f64;
    let mut worst_bipolar = 0.0f64;
    let mut worst_duality = 0.0f64;
    for i in 0..50 {
        let n = 2 + i % 5;
        let c = if i % 2 == 0 { random::ellipsoid(n, &mut rng) } else { random::polytope_v(n, 2 * n, &mut rng) };
        let g = Operator::new(random::invertible(n, &mut rng))?;
        let seed = i as u64;

        let a = polar(&pushforward(&g, &c)?)?;
        let b = pushforward(&g.inv_transpose_op(), &polar(&c)?)?;
        let route = support_residual(&a, &b, 512, seed)?.max_residual;
        worst_route = worst_route.max(route);
        if route > 1e-10 {
            fails.push(format!("route#{i}"));
        }

        let bip = support_residual(&polar(&polar(&c)?)?, &c, 512, seed)?.max_residual;
        worst_bipolar = worst_bipolar.max(bip);
        if bip > 1e-10 {
            fails.push(format!("bipolar#{i}"));
        }

        let cp = polar(&c)?;
        if !(cp.contains(&vec![0.0; n], 0.0)? && c.gauge(&vec![0.0; n])? == 0.0) {
            fails.push(format!("zero#{i}"));
        }

        let (outer, inner) = (c.outer_radius(), c.inner_radius());
        let xs = sample_directions(n, 64, seed);
        for (k, u) in xs.iter().enumerate().take(4) {
            let exact = cp.gauge(u)?;
            let sampled = sampled_polar_gauge(&c, u, seed * 7 + k as u64)?;
            let rel = (exact - sampled) / exact;
            worst_duality = worst_duality.max(rel.abs());
            // The sampled sup is a lower bound: it may fall short by 2%, never exceed.
            if !(-1e-9..=0.02).contains(&rel) {
                fails.push(format!("duality#{i}"));
            }
        }
        for (k, x) in xs.iter().enumerate() {
            let s = 0.3 + k as f64 * 0.05;
            let x: Vec<f64> = x.iter().map(|v| v * s).collect();
            let y = &xs[(k * 7 + 3) % xs.len()];
            let gx = c.gauge(&x)?;
            let gy = c.gauge(y)?;
            let nx = norm(&x);
            if !(nx / outer <= gx * (1.0 + 1e-9) && gx <= nx / inner * (1.0 + 1e-9)) {
                fails.push(format!("sandwich#{i}"));
            }
            if (gx - gy).abs() > norm(&sub(&x, y)) / inner + 1e-9 {
                fails.push(format!("lipschitz#{i}"));
            }
            let xy: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
            if c.gauge(&xy)? > gx + gy + 1e-9 {
                fails.push(format!("subadditive#{i}"));
            }
        }
    }
    fails.dedup();
    outcome(
        fails.is_empty(),
        format!(
            "route {worst_route:.2e}, bipolar {worst_bipolar:.2e}, duality rel {worst_duality:.2e}, violations {:?}",
            fails
        ),
    )
}

fn c11() -> Result<Outcome> {
    let mut rng = random::rng(11);
    let (mut prod, mut dip, mut attain) = (0.0f64, f64::NEG_INFINITY, 0.0f64);
    for i in 0..100 {
        let n = 1 + i % 6;
        let a = random::spd(n, &mut rng);
        let (beta, v) = coercivity_witness(&a)?;
        prod = prod.max((beta * operator_norm(&a.inverse()?) - 1.0).abs());
        let rep = coercivity_check(&a, 10_000, i as u64)?;
        dip = dip.max(beta - rep.sampled_min);
        attain = attain.max((a.quad_form(&v) - beta).abs());
    }
    outcome(
        prod <= 1e-10 && dip <= 1e-10 && attain <= 1e-10,
        format!("|beta*||A^-1|| - 1| {prod:.2e}, max dip {dip:.2e}, witness gap {attain:.2e}"),
    )
}

fn c12() -> Result<Outcome> {
    let start = Instant::now();
    let spec = GridSpec { half_width: 4.0, nodes: 513 };
    let mut lines = Vec::new();
    let mut ok = true;

    let a1 = Matrix::from_diag(&[2.0]);
    let a2 = Matrix::from_diag(&[2.0, 3.0]);
    for a in [a1, a2] {
        let d = a.dim();
        let f = GridFunction::on_spec(d, spec, |x| 0.5 * a.quad_form(x))?;
        let conj = legendre_grid(&f);
        let r = conjugate_gap(&conj, |y| quadratic_conjugate(&a, y).expect("pd"), f.spacing());
        ok &= r.passed() && r.nodes_used > 0;
        lines.push(format!("quadratic {d}D {:.2e}", r.residual));
    }
    for b in [0.5, 1.0, 2.0] {
        let r = f_b_self_duality(b, spec)?;
        ok &= r.passed();
        lines.push(format!("f_b({b}) {:.2e}", r.residual));
    }
    let pd = Operator::new(Matrix::from_diag(&[0.25, 4.0]))?;
    let mut cases = vec![("ellipse".to_string(), pd.clone(), solve_positive_definite(&pd)?)];
    let e = gallery("square_rhombus_disc", &Params::new())?;
    for s in &e.sets {
        cases.push((s.label.split_whitespace().next().unwrap_or("set").to_string(), e.g.clone(), s.set.clone()));
    }
    for (label, g, c) in &cases {
        let r = fixedpoint_function_residual(c, g, spec)?;
        ok &= r.passed() && r.nodes_used > 0;
        lines.push(format!("{label} {:.2e}", r.residual));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 30.0;
    outcome(ok, format!("5h = {:.4}; {}; {secs:.2}s", 5.0 * spec.spacing(), lines.join(", ")))
}

type Criterion = (&'static str, &'static str, fn() -> Result<Outcome>);

fn main() {
    let criteria: [Criterion; 12] = [
        ("C1", "positive-definite existence and uniqueness", c1),
        ("C2", "spectral solver", c2),
        ("C3", "1D classification", c3),
        ("C4", "regular simplex", c4),
        ("C5", "self-polar cones", c5),
        ("C6", "three distinct planar solutions", c6),
        ("C7", "ellipse family", c7),
        ("C8", "transport", c8),
        ("C9", "semi-skew non-existence", c9),
        ("C10", "identity suites", c10),
        ("C11", "coercivity converse", c11),
        ("C12", "conjugate bridge", c12),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let (ok, detail) = match run() {
            Ok(o) => (o.ok, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let tag = if ok { "PASS" } else { "FAIL" };
        let note = if !ok && KNOWN_UNATTAINABLE.contains(&id) { " [known unattainable]" } else { "" };
        println!("{tag} {id} {name}: {detail}{note}");
        if !ok && note.is_empty() {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {}", unexpected.join(", "));
        std::process::exit(1);
    }
}
