//! JSON file formats: graph files (with optional vanishing subgroup) and
//! point files.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::rational::{format_rational, parse_rational};
use crate::arith::QuadFieldElem;
use crate::graph::{Graph, GraphError, OneChain};
use crate::invariants::{is_vanishing_subgroup, SubgroupError, VanishingSubgroup};
use crate::quadric::ProjectivePoint;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Subgroup(#[from] SubgroupError),
    #[error("UnknownEdge: {0} in vanishing_group")]
    UnknownEdge(String),
    #[error("bad point file: {0}")]
    Point(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub id: String,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vanishing_group: Option<Vec<BTreeMap<String, i64>>>,
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<GraphFile, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_graph(g: &Graph, h: Option<&VanishingSubgroup>) -> GraphFile {
        let edges = g
            .edges()
            .iter()
            .map(|e| EdgeRecord {
                id: e.id.clone(),
                from: g.vertices()[e.origin].clone(),
                to: g.vertices()[e.terminus].clone(),
            })
            .collect();
        let vanishing_group = h.map(|h| {
            h.generators()
                .iter()
                .map(|a| {
                    a.iter()
                        .map(|(&e, k)| (g.edge(e).id.clone(), i64::try_from(k).expect("coefficient fits in i64")))
                        .collect()
                })
                .collect()
        });
        GraphFile { vertices: g.vertices().to_vec(), edges, vanishing_group }
    }

    /// The graph, without the degree and connectivity checks.
    pub fn graph(&self) -> Result<Graph, IoError> {
        let edges = self.edges.iter().map(|e| (e.id.clone(), e.from.clone(), e.to.clone())).collect();
        Ok(Graph::new(self.vertices.clone(), edges)?)
    }

    /// Generators as 1-chains; `None` when the file has no subgroup.
    pub fn generators(&self, g: &Graph) -> Result<Option<Vec<OneChain>>, IoError> {
        let Some(rows) = &self.vanishing_group else { return Ok(None) };
        let mut out = Vec::with_capacity(rows.len());
        for row in rows {
            let mut c = OneChain::zero();
            for (id, k) in row {
                let e = g.edge_index(id).ok_or_else(|| IoError::UnknownEdge(id.clone()))?;
                c.add_term(e, &BigInt::from(*k));
            }
            out.push(c);
        }
        Ok(Some(out))
    }

    /// The validated subgroup. A missing `vanishing_group` means `H = 0`,
    /// which is only valid when `b₁ = 2`.
    pub fn subgroup(&self, g: &Graph) -> Result<VanishingSubgroup, IoError> {
        let gens = self.generators(g)?.unwrap_or_default();
        Ok(is_vanishing_subgroup(g, &gens)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoordRecord {
    pub a: String,
    pub b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointFile {
    #[serde(rename = "D")]
    pub d: u64,
    pub coords: Vec<CoordRecord>,
}

impl PointFile {
    pub fn parse(text: &str) -> Result<PointFile, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_coords(coords: &[QuadFieldElem]) -> PointFile {
        let d = coords.iter().find(|z| !z.is_rational()).map_or(1, |z| z.d());
        let coords =
            coords.iter().map(|z| CoordRecord { a: format_rational(z.re()), b: format_rational(z.im_coeff()) }).collect();
        PointFile { d, coords }
    }

    pub fn elements(&self) -> Result<Vec<QuadFieldElem>, IoError> {
        if self.d == 0 {
            return Err(IoError::Point("D must be positive".into()));
        }
        self.coords
            .iter()
            .map(|c| {
                let a = parse_rational(&c.a).map_err(|e| IoError::Point(e.to_string()))?;
                let b = parse_rational(&c.b).map_err(|e| IoError::Point(e.to_string()))?;
                QuadFieldElem::new(a, b, self.d).map_err(|e| IoError::Point(e.to_string()))
            })
            .collect()
    }

    pub fn point(&self) -> Result<ProjectivePoint, IoError> {
        ProjectivePoint::new(self.elements()?).map_err(|e| IoError::Point(e.to_string()))
    }
}

/// Pretty JSON with object keys in sorted order.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    // serde_json's map is ordered by key
    let v = serde_json::to_value(value).expect("serializable");
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}
