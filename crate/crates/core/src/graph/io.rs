use std::collections::HashMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::MetricGraph;
use crate::error::{Error, Result};
use crate::valfield::Q;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: usize,
    pub weight: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub id: usize,
    pub from: usize,
    pub to: usize,
    pub length: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
}

pub fn to_json(g: &MetricGraph) -> GraphJson {
    GraphJson {
        vertices: g
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| VertexJson { id: i, weight: v.weight, label: v.label.clone() })
            .collect(),
        edges: g
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| EdgeJson { id: i, from: e.u, to: e.v, length: e.length.to_string() })
            .collect(),
    }
}

pub fn parse_length(s: &str) -> Result<Q> {
    let q: Q = s.trim().parse().map_err(|_| Error::Parse(format!("length '{s}'")))?;
    if q <= Q::from(0) {
        return Err(Error::Input(format!("nonpositive length {s}")));
    }
    Ok(q)
}

pub fn from_json(j: &GraphJson) -> Result<MetricGraph> {
    let mut index = HashMap::new();
    let mut g = MetricGraph::new();
    for v in &j.vertices {
        if index.insert(v.id, g.n_vertices()).is_some() {
            return Err(Error::Input(format!("duplicate vertex id {}", v.id)));
        }
        g.vertices.push(super::Vertex { weight: v.weight, label: v.label.clone() });
    }
    let mut edges: Vec<&EdgeJson> = j.edges.iter().collect();
    edges.sort_by_key(|e| e.id);
    for e in edges {
        let u = *index.get(&e.from).ok_or_else(|| Error::Input(format!("edge {} has dangling endpoint", e.id)))?;
        let v = *index.get(&e.to).ok_or_else(|| Error::Input(format!("edge {} has dangling endpoint", e.id)))?;
        g.add_edge(u, v, parse_length(&e.length)?);
    }
    Ok(g)
}

/// Graphviz export: vertex label `id (g=weight)`, edge label the length.
pub fn to_dot(g: &MetricGraph, name: &str) -> String {
    let mut s = String::new();
    writeln!(s, "graph {name} {{").unwrap();
    for (i, v) in g.vertices.iter().enumerate() {
        writeln!(s, "  v{i} [label=\"{i} (g={})\"];", v.weight).unwrap();
    }
    for e in &g.edges {
        writeln!(s, "  v{} -- v{} [label=\"{}\"];", e.u, e.v, e.length).unwrap();
    }
    s.push_str("}\n");
    s
}
