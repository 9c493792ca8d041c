use std::collections::{BTreeSet, HashSet};

use super::{Edge, MetricGraph};
use crate::error::{Error, Result};
use crate::valfield::Q;

/// A graph automorphism as permutations of vertex and edge indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    pub vertex: Vec<usize>,
    pub edge: Vec<usize>,
}

impl Automorphism {
    pub fn identity(g: &MetricGraph) -> Self {
        Automorphism { vertex: (0..g.n_vertices()).collect(), edge: (0..g.n_edges()).collect() }
    }
    /// self after o.
    pub fn compose(&self, o: &Self) -> Self {
        Automorphism {
            vertex: o.vertex.iter().map(|&v| self.vertex[v]).collect(),
            edge: o.edge.iter().map(|&e| self.edge[e]).collect(),
        }
    }
    pub fn check(&self, g: &MetricGraph) -> Result<()> {
        let perm = |p: &[usize], n: usize| p.len() == n && p.iter().collect::<HashSet<_>>().len() == n && p.iter().all(|&x| x < n);
        if !perm(&self.vertex, g.n_vertices()) || !perm(&self.edge, g.n_edges()) {
            return Err(Error::NotAutomorphism("not a permutation".into()));
        }
        for (i, e) in g.edges.iter().enumerate() {
            let t = &g.edges[self.edge[i]];
            if t.length != e.length {
                return Err(Error::NotAutomorphism(format!("edge {i} changes length")));
            }
            let (a, b) = (self.vertex[e.u], self.vertex[e.v]);
            if !((t.u == a && t.v == b) || (t.u == b && t.v == a)) {
                return Err(Error::NotAutomorphism(format!("edge {i} breaks incidence")));
            }
        }
        Ok(())
    }
    fn inverts(&self, g: &MetricGraph, i: usize) -> bool {
        let e = &g.edges[i];
        self.edge[i] == i && !e.is_loop() && self.vertex[e.u] == e.v
    }
}

/// Closure of a generating set under composition.
pub fn generate_group(g: &MetricGraph, gens: &[Automorphism]) -> Vec<Automorphism> {
    let mut seen: BTreeSet<Automorphism> = BTreeSet::new();
    let id = Automorphism::identity(g);
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for s in gens {
            let y = s.compose(&x);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LengthMode {
    /// Quotient edge carries the representative's length.
    Verbatim,
    /// Quotient edge length is the representative's length times the edge-stabilizer order.
    Stabilizer,
}

#[derive(Clone, Debug)]
pub struct Quotient {
    pub graph: MetricGraph,
    /// Vertex of the (possibly subdivided) input -> quotient vertex.
    pub vertex_class: Vec<usize>,
    pub edge_class: Vec<usize>,
    pub vertex_stabilizer: Vec<usize>,
    pub edge_stabilizer: Vec<usize>,
    /// The input had inverted edges and was barycentrically subdivided first.
    pub subdivided: Option<MetricGraph>,
}

fn subdivide(g: &MetricGraph, group: &[Automorphism]) -> (MetricGraph, Vec<Automorphism>) {
    let nv = g.n_vertices();
    let mut h = MetricGraph { vertices: g.vertices.clone(), edges: vec![] };
    for e in &g.edges {
        let m = h.add_vertex(0);
        let half = e.length / Q::from(2);
        h.edges.push(Edge { u: e.u, v: m, length: half });
        h.edges.push(Edge { u: m, v: e.v, length: half });
    }
    let acts = group
        .iter()
        .map(|a| {
            let mut vertex = a.vertex.clone();
            vertex.extend(a.edge.iter().map(|&t| nv + t));
            let mut edge = vec![0; 2 * g.n_edges()];
            for (i, e) in g.edges.iter().enumerate() {
                let t = a.edge[i];
                let forward = g.edges[t].u == a.vertex[e.u];
                let (x, y) = if forward || e.is_loop() { (2 * t, 2 * t + 1) } else { (2 * t + 1, 2 * t) };
                edge[2 * i] = x;
                edge[2 * i + 1] = y;
            }
            Automorphism { vertex, edge }
        })
        .collect();
    (h, acts)
}

/// Quotient of g by a finite group of automorphisms given as the full list of elements.
/// Weights of the quotient are left at 0 for the caller to fill in.
pub fn quotient(g: &MetricGraph, group: &[Automorphism], mode: LengthMode) -> Result<Quotient> {
    for a in group {
        a.check(g)?;
    }
    let inverted = group.iter().any(|a| (0..g.n_edges()).any(|i| a.inverts(g, i)));
    if inverted {
        let (h, acts) = subdivide(g, group);
        let mut q = quotient(&h, &acts, mode)?;
        q.subdivided = Some(h);
        return Ok(q);
    }
    let nv = g.n_vertices();
    let mut vertex_class = vec![usize::MAX; nv];
    let mut out = MetricGraph::new();
    let mut vertex_stabilizer = Vec::new();
    for v in 0..nv {
        if vertex_class[v] != usize::MAX {
            continue;
        }
        let c = out.add_vertex(0);
        out.vertices[c].label = g.vertices[v].label.clone();
        for a in group {
            vertex_class[a.vertex[v]] = c;
        }
        vertex_stabilizer.push(group.iter().filter(|a| a.vertex[v] == v).count());
    }
    let mut edge_class = vec![usize::MAX; g.n_edges()];
    let mut edge_stabilizer = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        if edge_class[i] != usize::MAX {
            continue;
        }
        let stab = group.iter().filter(|a| a.edge[i] == i).count();
        let length = match mode {
            LengthMode::Verbatim => e.length,
            LengthMode::Stabilizer => e.length * Q::from(stab as i64),
        };
        let c = out.add_edge(vertex_class[e.u], vertex_class[e.v], length);
        for a in group {
            edge_class[a.edge[i]] = c;
        }
        edge_stabilizer.push(stab);
    }
    Ok(Quotient { graph: out, vertex_class, edge_class, vertex_stabilizer, edge_stabilizer, subdivided: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn trivial_action() {
        let g = MetricGraph::from_parts(&[1, 0], &[(0, 1, Q::one()), (0, 1, Q::from(2))]);
        let q = quotient(&g, &[Automorphism::identity(&g)], LengthMode::Verbatim).unwrap();
        let mut qg = q.graph.clone();
        qg.vertices[0].weight = 1;
        assert!(super::super::iso_check(&qg, &g).unwrap());
    }

    #[test]
    fn rotation_of_a_cycle() {
        let n = 6;
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, Q::one())).collect();
        let g = MetricGraph::from_parts(&[0; 6], &edges);
        let rot = Automorphism { vertex: (0..n).map(|i| (i + 2) % n).collect(), edge: (0..n).map(|i| (i + 2) % n).collect() };
        let group = generate_group(&g, &[rot]);
        assert_eq!(group.len(), 3);
        let q = quotient(&g, &group, LengthMode::Verbatim).unwrap();
        assert_eq!((q.graph.n_vertices(), q.graph.n_edges()), (2, 2));
    }

    #[test]
    fn inversion_is_subdivided() {
        let g = MetricGraph::from_parts(&[0, 0], &[(0, 1, Q::one())]);
        let flip = Automorphism { vertex: vec![1, 0], edge: vec![0] };
        let group = generate_group(&g, &[flip]);
        let q = quotient(&g, &group, LengthMode::Verbatim).unwrap();
        assert_eq!((q.graph.n_vertices(), q.graph.n_edges()), (2, 1));
        assert_eq!(q.graph.edges[0].length, Q::new(1, 2));
    }

    #[test]
    fn bad_action_rejected() {
        let g = MetricGraph::from_parts(&[0, 0, 0], &[(0, 1, Q::one()), (1, 2, Q::from(2))]);
        let a = Automorphism { vertex: vec![2, 1, 0], edge: vec![1, 0] };
        assert!(matches!(a.check(&g), Err(Error::NotAutomorphism(_))));
    }
}
