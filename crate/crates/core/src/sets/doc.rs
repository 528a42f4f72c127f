use serde::{Deserialize, Serialize};

use super::ConvexSet;
use crate::linalg::Matrix;
use crate::{Error, Result};

/// JSON form of a [`ConvexSet`], tagged by `"kind"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetDoc {
    Ellipsoid {
        matrix: Vec<Vec<f64>>,
    },
    Ball {
        radius: f64,
        #[serde(default = "default_dim")]
        dim: usize,
    },
    PolytopeV {
        vertices: Vec<Vec<f64>>,
    },
    PolytopeH {
        normals: Vec<Vec<f64>>,
    },
    ConeV {
        generators: Vec<Vec<f64>>,
    },
    ConeH {
        normals: Vec<Vec<f64>>,
    },
    Lorentz {
        axis: Vec<f64>,
    },
    Orthant {
        signs: Vec<f64>,
    },
    Interval {
        #[serde(with = "crate::extended")]
        lo: f64,
        #[serde(with = "crate::extended")]
        hi: f64,
    },
}

fn default_dim() -> usize {
    2
}

impl From<&ConvexSet> for SetDoc {
    fn from(c: &ConvexSet) -> Self {
        match c {
            ConvexSet::Ball { dim, radius } => SetDoc::Ball { radius: *radius, dim: *dim },
            ConvexSet::Ellipsoid(e) => SetDoc::Ellipsoid { matrix: e.matrix().rows() },
            ConvexSet::PolytopeV(v) => SetDoc::PolytopeV { vertices: v.clone() },
            ConvexSet::PolytopeH(h) => SetDoc::PolytopeH { normals: h.rows.clone() },
            ConvexSet::ConeV(g) => SetDoc::ConeV { generators: g.clone() },
            ConvexSet::ConeH(a) => SetDoc::ConeH { normals: a.clone() },
            ConvexSet::Lorentz(a) => SetDoc::Lorentz { axis: a.clone() },
            ConvexSet::Orthant(s) => SetDoc::Orthant { signs: s.clone() },
            ConvexSet::Interval { lo, hi } => SetDoc::Interval { lo: *lo, hi: *hi },
        }
    }
}

impl TryFrom<SetDoc> for ConvexSet {
    type Error = Error;

    fn try_from(d: SetDoc) -> Result<Self> {
        match d {
            SetDoc::Ellipsoid { matrix } => ConvexSet::ellipsoid(Matrix::from_rows(&matrix)?),
            SetDoc::Ball { radius, dim } => ConvexSet::ball(dim, radius),
            SetDoc::PolytopeV { vertices } => ConvexSet::polytope_v(vertices),
            SetDoc::PolytopeH { normals } => ConvexSet::polytope_h(normals),
            SetDoc::ConeV { generators } => ConvexSet::cone_v(generators),
            SetDoc::ConeH { normals } => ConvexSet::cone_h(normals),
            SetDoc::Lorentz { axis } => ConvexSet::lorentz(axis),
            SetDoc::Orthant { signs } => ConvexSet::orthant(signs),
            SetDoc::Interval { lo, hi } => ConvexSet::interval(lo, hi),
        }
    }
}

impl Serialize for ConvexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SetDoc::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConvexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = SetDoc::deserialize(d)?;
        ConvexSet::try_from(doc).map_err(serde::de::Error::custom)
    }
}

impl ConvexSet {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("set documents always serialize")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let doc: SetDoc = serde_json::from_value(v.clone()).map_err(|e| Error::InvalidSet(e.to_string()))?;
        ConvexSet::try_from(doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn parses_every_kind() {
        let docs = [
            json!({"kind":"ellipsoid","matrix":[[0.25,0],[0,4]]}),
            json!({"kind":"ball","radius":1.5}),
            json!({"kind":"polytope_v","vertices":[[1,1],[-1,1],[-1,-1],[1,-1]]}),
            json!({"kind":"polytope_h","normals":[[1,0],[-1,0],[0,1],[0,-1]]}),
            json!({"kind":"cone_v","generators":[[1,0],[0,1]]}),
            json!({"kind":"cone_h","normals":[[-1,0],[0,-1]]}),
            json!({"kind":"lorentz","axis":[0,0,1]}),
            json!({"kind":"orthant","signs":[1,-1]}),
            json!({"kind":"interval","lo":"-inf","hi":2}),
        ];
        for d in docs {
            let c = ConvexSet::from_json(&d).unwrap();
            let back = ConvexSet::from_json(&c.to_json()).unwrap();
            assert_eq!(c, back);
        }
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(ConvexSet::from_json(&json!({"kind":"blob"})).is_err());
        assert!(ConvexSet::from_json(&json!({"kind":"ellipsoid","matrix":[[1,2],[2,1]]})).is_err());
        assert!(ConvexSet::from_json(&json!({"kind":"interval","lo":1,"hi":2})).is_err());
    }
}
