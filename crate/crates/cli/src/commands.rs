use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use polarfix::conjugate::{
    conjugate_gap, f_b, f_b_self_duality, fixedpoint_function_residual, half_gauge_squared, legendre_grid,
    quadratic_conjugate, GridConjugate, GridFunction, GridResidual, GridSpec,
};
use polarfix::gallery::{self, Params, ENTRIES};
use polarfix::linalg::is_positive_definite;
use polarfix::polarity::{polar, polarity_map};
use polarfix::solver::{
    classify_1d, iterate_polarity, semi_skew_decompose, solve_positive_definite, solve_symmetric, IterationVerdict,
};
use polarfix::verify::{verify_fixed_point, Verdict};
use polarfix::{ConvexSet, Error, Matrix, Operator};
use serde_json::{json, Value};

use crate::docs::{emit, parse_operator, parse_set, read_json, read_pair, to_text, OperatorDoc};
use crate::svg::{render, Layer};
use crate::{Failure, Mode, RunConfig, EXIT_FAIL, EXIT_NO_SOLVER, EXIT_PASS, EXIT_UNKNOWN};

fn code(pass: bool) -> u8 {
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn write_svg(path: Option<&Path>, layers: Vec<Layer>) -> Result<()> {
    let Some(p) = path else { return Ok(()) };
    if layers.iter().any(|l| l.set.dim() != 2) {
        eprintln!("polarfix: figures are only drawn for planar sets; {} not written", p.display());
        return Ok(());
    }
    let text = render(&layers)?;
    std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))
}

/// `C` solid and `T_G(C)` dashed, in the same color.
fn set_and_image(g: &Operator, c: &ConvexSet, label: &str, color: usize) -> Result<Vec<Layer>> {
    Ok(vec![
        Layer { set: c.clone(), label: label.to_string(), dashed: false, color },
        Layer { set: polarity_map(g, c)?, label: format!("image of {label}"), dashed: true, color },
    ])
}

fn no_solver(g: &Operator, why: &str) -> anyhow::Error {
    let mut report = json!({
        "status": "no_constructive_solver",
        "reason": why,
        "operator": OperatorDoc::of(g),
    });
    if g.dim() == 2 {
        match semi_skew_decompose(g.matrix(), polarfix::TOL_ABS.max(1e-10)) {
            Ok(form) => {
                report["semi_skew"] = serde_json::to_value(&form).expect("serializable");
                report["note"] = json!("semi-skew operators admit no bounded solution with 0 in the interior");
            }
            Err(Error::NotSemiSkew(r)) => report["not_semi_skew"] = json!(r),
            Err(_) => {}
        }
    }
    Failure { code: EXIT_NO_SOLVER, message: format!("no constructive solver: {why}"), report: Some(report) }.into()
}

pub fn solve(cfg: &RunConfig, path: Option<&Path>, mode: Mode) -> Result<u8> {
    let g = parse_operator(&read_json(path)?)?;
    let flags = g.flags();
    let chosen = match mode {
        Mode::Auto if flags.positive_definite => Mode::Pd,
        Mode::Auto if g.dim() == 1 => Mode::OneD,
        Mode::Auto if flags.symmetric => Mode::Symmetric,
        Mode::Auto => return Err(no_solver(&g, "operator is neither symmetric nor one-dimensional")),
        m => m,
    };
    let vcfg = cfg.verify();
    let mut out = json!({ "operator": OperatorDoc::of(&g) });
    let (solutions, pass) = match chosen {
        Mode::Pd | Mode::Symmetric => {
            let c = if chosen == Mode::Pd {
                out["mode"] = json!("pd");
                solve_positive_definite(&g).map_err(|e| no_solver(&g, &e.to_string()))?
            } else {
                out["mode"] = json!("symmetric");
                let (a, c) = solve_symmetric(&g).map_err(|e| no_solver(&g, &e.to_string()))?;
                out["spectral_abs"] = serde_json::to_value(&a)?;
                c
            };
            let report = verify_fixed_point(&g, &c, &vcfg)?;
            let pass = report.passed();
            out["solution"] = c.to_json();
            out["report"] = serde_json::to_value(&report)?;
            (vec![c], pass)
        }
        Mode::OneD => {
            out["mode"] = json!("1d");
            if g.dim() != 1 {
                return Err(Error::DimensionMismatch { expected: 1, found: g.dim() }.into());
            }
            let fam = classify_1d(g.matrix()[(0, 0)])?;
            let sets = fam.solutions(&[1.0, 2.0])?;
            let mut listed = Vec::new();
            let mut pass = true;
            for c in &sets {
                let r = verify_fixed_point(&g, c, &vcfg)?;
                pass &= r.passed();
                listed.push(json!({ "set": c, "report": r }));
            }
            out["family"] = serde_json::to_value(&fam)?;
            out["solution"] = sets[0].to_json();
            out["solutions"] = Value::Array(listed);
            (sets, pass)
        }
        Mode::Auto => unreachable!(),
    };
    emit(cfg.out.as_deref(), &to_text(&out))?;
    if solutions[0].dim() == 2 {
        write_svg(cfg.svg.as_deref(), set_and_image(&g, &solutions[0], "solution", 0)?)?;
    }
    Ok(code(pass))
}

pub fn verify(cfg: &RunConfig, set: Option<&Path>, op: Option<&Path>) -> Result<u8> {
    let (c, g) = read_pair(set, op)?;
    if c.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: c.dim(), found: g.dim() }.into());
    }
    let report = verify_fixed_point(&g, &c, &cfg.verify())?;
    emit(cfg.out.as_deref(), &to_text(&report))?;
    write_svg(cfg.svg.as_deref(), set_and_image(&g, &c, "C", 0)?)?;
    Ok(code(report.passed()))
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn iterate(cfg: &RunConfig, set: Option<&Path>, op: Option<&Path>, report: Option<&Path>) -> Result<u8> {
    let (c, g) = read_pair(set, op)?;
    if c.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: c.dim(), found: g.dim() }.into());
    }
    let trace = iterate_polarity(&g, &c, cfg.steps, cfg.tol, &cfg.verify())?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["step", "self_residual", "consecutive_residual"])?;
    for r in &trace.rows {
        w.write_record([r.step.to_string(), r.self_residual.to_string(), cell(r.consecutive_residual)])?;
    }
    let text = String::from_utf8(w.into_inner()?)?;
    emit(cfg.out.as_deref(), &text)?;
    let summary = json!({
        "verdict": trace.verdict,
        "steps": trace.rows.len(),
        "min_self_residual": polarfix::extended::to_json(trace.min_self_residual()),
        "final_set": trace.sets.last(),
    });
    if let Some(p) = report {
        emit(Some(p), &to_text(&summary))?;
    }
    let layers = trace
        .sets
        .iter()
        .take(trace.rows.len())
        .enumerate()
        .map(|(k, s)| Layer { set: s.clone(), label: format!("C_{k}"), dashed: false, color: k })
        .collect();
    write_svg(cfg.svg.as_deref(), layers)?;
    Ok(code(trace.verdict == IterationVerdict::Converged))
}

fn parse_params(raw: &[String]) -> Result<Params> {
    let mut p = Params::new();
    for kv in raw {
        let (k, v) = kv.split_once('=').ok_or_else(|| Failure::input(format!("expected key=value, got `{kv}`")))?;
        let v: f64 = v.trim().parse().map_err(|_| Failure::input(format!("`{k}` needs a number")))?;
        p.insert(k.trim().to_string(), v);
    }
    Ok(p)
}

pub fn gallery(cfg: &RunConfig, name: Option<&str>, raw: &[String], list: bool) -> Result<u8> {
    let Some(name) = name.filter(|_| !list) else {
        emit(cfg.out.as_deref(), &to_text(&ENTRIES))?;
        return Ok(EXIT_PASS);
    };
    let entry = gallery::gallery(name, &parse_params(raw)?)?;
    let vcfg = cfg.verify();
    let mut sets = Vec::new();
    let mut layers = Vec::new();
    let mut all = true;
    for (i, s) in entry.sets.iter().enumerate() {
        let report = verify_fixed_point(&entry.g, &s.set, &vcfg)?;
        let matches = report.verdict == s.expected;
        all &= matches;
        sets.push(json!({
            "label": s.label,
            "set": s.set,
            "expected": s.expected,
            "report": report,
            "matches_expected": matches,
        }));
        if s.set.dim() == 2 {
            layers.extend(set_and_image(&entry.g, &s.set, &s.label, i)?);
        }
    }
    let out = json!({
        "name": entry.name,
        "params": entry.params,
        "description": entry.description,
        "operator": OperatorDoc::of(&entry.g),
        "sets": sets,
        "reproduced": all,
    });
    emit(cfg.out.as_deref(), &to_text(&out))?;
    if entry.g.dim() == 2 {
        write_svg(cfg.svg.as_deref(), layers)?;
    } else if let Some(p) = &cfg.svg {
        eprintln!("polarfix: `{name}` is not planar; {} not written", p.display());
    }
    Ok(code(all))
}

pub struct ConjugateArgs {
    pub family: String,
    pub matrix: Option<String>,
    pub set: Option<PathBuf>,
    pub operator: Option<PathBuf>,
    pub b: f64,
    pub half_width: f64,
    pub csv: Option<PathBuf>,
}

fn write_samples(path: &Path, f: &GridFunction, conj: &GridConjugate) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    let d = f.dim();
    let mut header = vec!["function".to_string()];
    header.extend((0..d).map(|j| format!("x{j}")));
    header.extend(["value".to_string(), "reliable".to_string()]);
    w.write_record(&header)?;
    for (name, g, reliable) in [("f", f, None), ("f_star", &conj.values, Some(&conj.reliable))] {
        for k in 0..g.len() {
            let mut row = vec![name.to_string()];
            row.extend(g.point(k).iter().map(|v| v.to_string()));
            row.push(g.values()[k].to_string());
            row.push(reliable.is_none_or(|r| r[k]).to_string());
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn conjugate(cfg: &RunConfig, a: &ConjugateArgs) -> Result<u8> {
    if !(a.half_width > 0.0 && a.half_width.is_finite()) {
        return Err(Failure::input("--half-width must be positive").into());
    }
    let spec = GridSpec { half_width: a.half_width, nodes: cfg.grid };
    let h = spec.spacing();
    let (f, identity, residual, params): (GridFunction, &str, GridResidual, Value) = match a.family.as_str() {
        "quadratic" => {
            let rows: Vec<Vec<f64>> = match &a.matrix {
                Some(s) => serde_json::from_str(s).map_err(|e| Failure::input(format!("--matrix: {e}")))?,
                None => vec![vec![2.0, 0.0], vec![0.0, 3.0]],
            };
            let m = Matrix::from_rows(&rows)?;
            if !is_positive_definite(&m) {
                return Err(Error::NotPositiveDefinite.into());
            }
            let f = GridFunction::on_spec(m.dim(), spec, |x| 0.5 * m.quad_form(x))?;
            let conj = legendre_grid(&f);
            quadratic_conjugate(&m, &vec![0.0; m.dim()])?;
            let r = conjugate_gap(&conj, |y| quadratic_conjugate(&m, y).expect("validated"), h);
            (f, "grid f* against the closed form <A^-1 y, y>/2", r, json!({ "matrix": m }))
        }
        "gauge2" => {
            let c = parse_set(&read_json(a.set.as_deref())?)?;
            let f = half_gauge_squared(&c, spec)?;
            match &a.operator {
                Some(p) => {
                    let g = parse_operator(&read_json(Some(p))?)?;
                    let r = fixedpoint_function_residual(&c, &g, spec)?;
                    (f, "f(x) = f*(G^T x) for f = gauge^2/2", r, json!({ "set": c, "operator": OperatorDoc::of(&g) }))
                }
                None => {
                    let conj = legendre_grid(&f);
                    let pc = polar(&c)?;
                    pc.gauge(&vec![0.0; c.dim()])?;
                    let r = conjugate_gap(&conj, |y| 0.5 * pc.gauge(y).expect("validated").powi(2), h);
                    (f, "grid f* against half the squared gauge of the polar", r, json!({ "set": c }))
                }
            }
        }
        "f_b" => {
            let b = a.b;
            let r = f_b_self_duality(b, spec)?;
            let f = GridFunction::on_spec(1, spec, |x| f_b(b, x[0]))?;
            (f, "f_b(x) = f_b*(-x)", r, json!({ "b": b }))
        }
        other => {
            return Err(Failure {
                code: EXIT_UNKNOWN,
                message: format!("unknown family `{other}` (expected quadratic, gauge2 or f_b)"),
                report: None,
            }
            .into())
        }
    };
    if let Some(p) = &a.csv {
        write_samples(p, &f, &legendre_grid(&f))?;
    }
    let pass = residual.passed();
    let out = json!({
        "family": a.family,
        "params": params,
        "grid": spec,
        "identity": identity,
        "residual": residual,
        "verdict": if pass { Verdict::Pass } else { Verdict::Fail },
    });
    emit(cfg.out.as_deref(), &to_text(&out))?;
    Ok(code(pass))
}
