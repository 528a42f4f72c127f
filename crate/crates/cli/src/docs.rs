//! Operator documents and JSON/stdio plumbing.

use std::io::{Read, Write};
use std::path::Path;

use anyhow::{Context, Result};
use polarfix::{ConvexSet, Matrix, Operator};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::Failure;

/// `{"matrix": [[…]]}` or `{"scalar": γ, "dim": n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum OperatorDoc {
    Matrix { matrix: Vec<Vec<f64>> },
    Scalar { scalar: f64, dim: usize },
}

impl OperatorDoc {
    pub fn build(&self) -> polarfix::Result<Operator> {
        match self {
            OperatorDoc::Matrix { matrix } => Operator::new(Matrix::from_rows(matrix)?),
            OperatorDoc::Scalar { scalar, dim } => Operator::scalar(*dim, *scalar),
        }
    }

    pub fn of(g: &Operator) -> Self {
        match g.as_scalar() {
            Some(s) => OperatorDoc::Scalar { scalar: s, dim: g.dim() },
            None => OperatorDoc::Matrix { matrix: g.matrix().rows() },
        }
    }
}

fn read_text(path: Option<&Path>) -> Result<String> {
    let mut s = String::new();
    match path {
        Some(p) if p != Path::new("-") => {
            s = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        }
        _ => {
            std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        }
    }
    Ok(s)
}

pub fn read_json(path: Option<&Path>) -> Result<Value> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("malformed JSON: {e}")).into())
}

pub fn parse_operator(v: &Value) -> Result<Operator> {
    let doc: OperatorDoc =
        serde_json::from_value(v.clone()).map_err(|e| Failure::input(format!("bad operator document: {e}")))?;
    Ok(doc.build()?)
}

pub fn parse_set(v: &Value) -> Result<ConvexSet> {
    Ok(ConvexSet::from_json(v)?)
}

/// Either two files, or one document `{"set": …, "operator": …}`.
pub fn read_pair(set: Option<&Path>, op: Option<&Path>) -> Result<(ConvexSet, Operator)> {
    match (set, op) {
        (Some(s), Some(o)) => Ok((parse_set(&read_json(Some(s))?)?, parse_operator(&read_json(Some(o))?)?)),
        (None, None) | (Some(_), None) => {
            let v = read_json(set)?;
            let (Some(s), Some(o)) = (v.get("set"), v.get("operator")) else {
                return Err(Failure::input("expected {\"set\": ..., \"operator\": ...}").into());
            };
            Ok((parse_set(s)?, parse_operator(o)?))
        }
        (None, Some(_)) => unreachable!("clap requires the set before the operator"),
    }
}

/// Pretty JSON with sorted keys (serde_json maps are ordered).
pub fn to_text<T: Serialize>(v: &T) -> String {
    let value = serde_json::to_value(v).expect("reports always serialize");
    let mut s = serde_json::to_string_pretty(&value).expect("values always serialize");
    s.push('\n');
    s
}

pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut o = std::io::stdout().lock();
            o.write_all(text.as_bytes())?;
            o.flush()?;
            Ok(())
        }
    }
}
