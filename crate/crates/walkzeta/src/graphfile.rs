//! JSON graph files shared by the CLI and the browser demo.
//!
//! ```json
//! { "dim": 1,
//!   "vertices": 2,
//!   "edges": [ { "from": 0, "to": 1, "shift": [0] } ] }
//! ```
//!
//! `dim: 0` describes a finite simple graph and the `shift` field must be
//! omitted; `dim >= 1` describes a crystal graph and every edge must carry
//! a shift of that rank. Vertices are either a count or a list of names;
//! names are resolved to 0-based indices in list order and exist only in
//! this layer.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::periodic::{CrystalEdge, CrystalGraph};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum VertexSpec {
    Count(usize),
    Names(Vec<String>),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum VertexRef {
    Index(usize),
    Name(String),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EdgeSpec {
    pub from: VertexRef,
    pub to: VertexRef,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GraphFile {
    pub dim: usize,
    pub vertices: VertexSpec,
    pub edges: Vec<EdgeSpec>,
}

/// Either kind of parsed graph.
#[derive(Debug, Clone)]
pub enum ParsedGraph {
    Finite(Graph),
    Crystal(CrystalGraph),
}

impl GraphFile {
    /// Parses a JSON document; syntax errors keep serde_json's line/column.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph files always serialize")
    }

    pub fn vertex_count(&self) -> usize {
        match &self.vertices {
            VertexSpec::Count(n) => *n,
            VertexSpec::Names(names) => names.len(),
        }
    }

    fn resolve(&self, vref: &VertexRef, edge_index: usize) -> Result<usize> {
        match vref {
            VertexRef::Index(i) => Ok(*i),
            VertexRef::Name(name) => match &self.vertices {
                VertexSpec::Names(names) => {
                    names.iter().position(|n| n == name).ok_or_else(|| {
                        Error::Parse(format!("edge {edge_index}: unknown vertex name {name:?}"))
                    })
                }
                VertexSpec::Count(_) => Err(Error::Parse(format!(
                    "edge {edge_index}: vertex name {name:?} used without a name list"
                ))),
            },
        }
    }

    /// Validates and builds the graph the file describes.
    pub fn build(&self) -> Result<ParsedGraph> {
        let n = self.vertex_count();
        let mut resolved = Vec::with_capacity(self.edges.len());
        for (idx, e) in self.edges.iter().enumerate() {
            let from = self.resolve(&e.from, idx)?;
            let to = self.resolve(&e.to, idx)?;
            match (&e.shift, self.dim) {
                (Some(_), 0) => {
                    return Err(Error::Parse(format!(
                        "edge {idx}: shift given but dim = 0 (finite graph)"
                    )))
                }
                (None, d) if d > 0 => {
                    return Err(Error::Parse(format!(
                        "edge {idx}: missing shift field (dim = {d})"
                    )))
                }
                (Some(s), d) if s.len() != d => {
                    return Err(Error::Parse(format!(
                        "edge {idx}: shift has rank {}, expected {d}",
                        s.len()
                    )))
                }
                _ => {}
            }
            resolved.push((from, to, e.shift.clone().unwrap_or_default()));
        }
        if self.dim == 0 {
            let edges: Vec<(usize, usize)> = resolved.iter().map(|&(u, v, _)| (u, v)).collect();
            Ok(ParsedGraph::Finite(Graph::new(n, &edges)?))
        } else {
            let edges: Vec<CrystalEdge> = resolved
                .into_iter()
                .map(|(from, to, shift)| CrystalEdge { from, to, shift })
                .collect();
            Ok(ParsedGraph::Crystal(CrystalGraph::new(self.dim, n, edges)?))
        }
    }

    pub fn from_graph(g: &Graph) -> Self {
        GraphFile {
            dim: 0,
            vertices: VertexSpec::Count(g.vertex_count()),
            edges: g
                .edges()
                .iter()
                .map(|&(u, v)| EdgeSpec {
                    from: VertexRef::Index(u),
                    to: VertexRef::Index(v),
                    shift: None,
                })
                .collect(),
        }
    }

    pub fn from_crystal(cg: &CrystalGraph) -> Self {
        GraphFile {
            dim: cg.lattice_rank(),
            vertices: VertexSpec::Count(cg.vertex_count()),
            edges: cg
                .edges()
                .iter()
                .map(|e| EdgeSpec {
                    from: VertexRef::Index(e.from),
                    to: VertexRef::Index(e.to),
                    shift: Some(e.shift.clone()),
                })
                .collect(),
        }
    }
}
