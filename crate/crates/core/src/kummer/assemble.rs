use serde::Serialize;

use super::{reduced_function, CoveringData, FactoredFn};
use crate::error::{Error, Result};
use crate::graph::{generate_group, quotient, to_json, Automorphism, GraphJson, LengthMode, MetricGraph, Quotient};
use crate::septree::SeparatingTree;
use crate::valfield::{Fq, Q};

/// Residue values g_v(P_e) of chosen roots g_v (g_v^{s_v} = reduced f at v) at both ends of
/// each edge. For a unit at the node these are plain evaluations; otherwise leading coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistCocycle {
    /// Per base edge: values at its first and second endpoint.
    pub values: Vec<Option<(Fq, Fq)>>,
}

impl TwistCocycle {
    pub fn empty(n_edges: usize) -> Self {
        TwistCocycle { values: vec![None; n_edges] }
    }

    /// Ratio g_v(P_1) / g_v(P_2) of the values at vertex v on two incident edges.
    pub fn ratio(&self, base: &MetricGraph, v: usize, e1: usize, e2: usize) -> Option<Fq> {
        let at = |e: usize| {
            let (a, b) = self.values[e]?;
            Some(if base.edges[e].u == v { a } else { b })
        };
        at(e1)?.div(&at(e2)?)
    }

    /// Multiply all values at vertex v by c.
    pub fn gauge(&self, base: &MetricGraph, v: usize, c: &Fq) -> Self {
        let mut out = self.clone();
        for (e, val) in out.values.iter_mut().enumerate() {
            if let Some((a, b)) = val {
                if base.edges[e].u == v {
                    *a = a.mul(c);
                }
                if base.edges[e].v == v {
                    *b = b.mul(c);
                }
            }
        }
        out
    }
}

/// A cyclic cover of metric graphs with its harmonic morphism and group action.
#[derive(Clone, Debug)]
pub struct CoveringGraph {
    pub n: u64,
    pub base: MetricGraph,
    pub cover: MetricGraph,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
    pub dilatation: Vec<u64>,
    /// The generator of the cyclic group.
    pub action: Automorphism,
}

#[derive(Clone, Debug, Serialize)]
pub struct ActionJson {
    pub vertex: Vec<usize>,
    pub edge: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoveringJson {
    pub degree: u64,
    pub base: GraphJson,
    pub cover: GraphJson,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
    pub dilatation: Vec<u64>,
    pub action: ActionJson,
}

impl CoveringGraph {
    pub fn to_json(&self) -> CoveringJson {
        CoveringJson {
            degree: self.n,
            base: to_json(&self.base),
            cover: to_json(&self.cover),
            vertex_map: self.vertex_map.clone(),
            edge_map: self.edge_map.clone(),
            dilatation: self.dilatation.clone(),
            action: ActionJson { vertex: self.action.vertex.clone(), edge: self.action.edge.clone() },
        }
    }

    /// Sum of dilatations over the preimages of each base edge.
    pub fn harmonic_degrees(&self) -> Vec<u64> {
        let mut deg = vec![0u64; self.base.n_edges()];
        for (i, &e) in self.edge_map.iter().enumerate() {
            deg[e] += self.dilatation[i];
        }
        deg
    }

    /// Powers of the generator.
    pub fn group(&self) -> Vec<Automorphism> {
        generate_group(&self.cover, std::slice::from_ref(&self.action))
    }

    /// Quotient by the subgroup generated by the k-th power of the generator; for the full group
    /// the base weights are copied onto the quotient.
    pub fn quotient_by_power(&self, k: u64) -> Result<Quotient> {
        let mut g = Automorphism::identity(&self.cover);
        for _ in 0..k.max(1) {
            g = self.action.compose(&g);
        }
        let group = generate_group(&self.cover, &[g]);
        let mut q = quotient(&self.cover, &group, LengthMode::Verbatim)?;
        // stabilizers in the abstract subgroup, which may act on the graph with a kernel
        let order = self.n / num_integer::gcd(self.n, k.max(1));
        if q.subdivided.is_none() {
            for (e, &c) in q.edge_class.iter().enumerate() {
                q.graph.edges[c].length = self.cover.edges[e].length * Q::from(num_integer::gcd(order, self.dilatation[e]) as i64);
            }
        }
        if k <= 1 {
            for (i, &c) in q.vertex_class.iter().enumerate() {
                q.graph.vertices[c].weight = self.base.vertices[self.vertex_map[i]].weight;
            }
        }
        Ok(q)
    }
}

/// Edges whose twist is relevant: both endpoints carry more than one component.
fn split_edges(base: &MetricGraph, data: &CoveringData) -> Vec<bool> {
    base.edges
        .iter()
        .map(|e| data.vertex_preimages(e.u) > 1 && data.vertex_preimages(e.v) > 1)
        .collect()
}

/// Split edges lying on a cycle of split edges.
fn cyclic_split_edges(base: &MetricGraph, split: &[bool]) -> Vec<bool> {
    let n = base.n_vertices();
    (0..base.n_edges())
        .map(|e| {
            if !split[e] {
                return false;
            }
            let (s, t) = (base.edges[e].u, base.edges[e].v);
            if s == t {
                return true;
            }
            let mut seen = vec![false; n];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(x) = stack.pop() {
                for f in base.incident(x) {
                    if f == e || !split[f] {
                        continue;
                    }
                    let y = base.edges[f].other(x);
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            seen[t]
        })
        .collect()
}

fn dlog_in_subgroup(x: &Fq, s: u64) -> Result<u64> {
    let f = x.field();
    if s == 1 {
        return Ok(0);
    }
    if !(f.q - 1).is_multiple_of(s) {
        return Err(Error::NoRootInResidueField(order_of(f.q, s)));
    }
    let d = x.dlog().ok_or_else(|| Error::Inconsistent("zero twisting value".into()))?;
    let step = (f.q - 1) / s;
    if d % step != 0 {
        return Err(Error::Inconsistent("twisting values are not compatible roots".into()));
    }
    Ok(d / step)
}

/// Multiplicative order of q modulo s: the extension degree containing the s-th roots of unity.
fn order_of(q: u64, s: u64) -> usize {
    let mut k = 1usize;
    let mut x = q % s;
    while x != 1 % s {
        x = x * (q % s) % s;
        k += 1;
    }
    k
}

/// Twist k_e: copy c of edge e joins component c mod s_u at u to component c + k_e mod s_v at v.
fn edge_twist(data: &CoveringData, base: &MetricGraph, e: usize, vals: (Fq, Fq)) -> Result<u64> {
    let ed = &base.edges[e];
    let (su, sv) = (data.vertex_preimages(ed.u), data.vertex_preimages(ed.v));
    let d = data.edge_preimages(e);
    let a = vals.0.pow(su);
    if a != vals.1.pow(sv) {
        return Err(Error::Inconsistent(format!("twisting values on edge {e} are roots of different residues")));
    }
    let beta = match a.nth_root(d) {
        Some(b) => b,
        None => return Err(Error::NoRootInResidueField(super::ratfn::root_extension_degree(&a, d))),
    };
    let ju = dlog_in_subgroup(&beta.pow(d / su).div(&vals.0).unwrap(), su)?;
    let jv = dlog_in_subgroup(&beta.pow(d / sv).div(&vals.1).unwrap(), sv)?;
    Ok((jv as i64 - ju as i64).rem_euclid(d as i64) as u64)
}

/// Build the cover graph: n/|D_v| vertices over v, n/|I_e| edges over e of length l(e)/|I_e|,
/// glued along the cyclic action and the twist cocycle.
pub fn assemble_cover(base: &MetricGraph, data: &CoveringData, twist: Option<&TwistCocycle>) -> Result<CoveringGraph> {
    let split = split_edges(base, data);
    let cyclic = cyclic_split_edges(base, &split);
    let mut k = vec![0u64; base.n_edges()];
    for e in 0..base.n_edges() {
        let val = twist.and_then(|t| t.values.get(e).copied().flatten());
        match val {
            Some(v) if split[e] => k[e] = edge_twist(data, base, e, v)?,
            None if cyclic[e] => return Err(Error::MissingTwist),
            _ => {}
        }
    }
    let mut cover = MetricGraph::new();
    let mut vertex_map = Vec::new();
    let mut first = Vec::new();
    let mut action_v = Vec::new();
    for v in 0..base.n_vertices() {
        let s = data.vertex_preimages(v) as usize;
        first.push(cover.n_vertices());
        for j in 0..s {
            let id = cover.add_labeled(data.genus[v], format!("{v}.{j}"));
            vertex_map.push(v);
            action_v.push(id - j + (j + 1) % s);
        }
    }
    let mut edge_map = Vec::new();
    let mut dilatation = Vec::new();
    let mut action_e = Vec::new();
    for (e, ed) in base.edges.iter().enumerate() {
        let d = data.edge_preimages(e);
        let (su, sv) = (data.vertex_preimages(ed.u), data.vertex_preimages(ed.v));
        let len = ed.length / Q::from(data.edge_inertia[e] as i64);
        let start = cover.n_edges();
        for c in 0..d {
            let a = first[ed.u] + (c % su) as usize;
            let b = first[ed.v] + ((c + k[e]) % sv) as usize;
            cover.add_edge(a, b, len);
            edge_map.push(e);
            dilatation.push(data.edge_inertia[e]);
            action_e.push(start + ((c + 1) % d) as usize);
        }
    }
    if !cover.is_connected() {
        return Err(Error::Disconnected);
    }
    let action = Automorphism { vertex: action_v, edge: action_e };
    action.check(&cover)?;
    Ok(CoveringGraph { n: data.n, base: base.clone(), cover, vertex_map, edge_map, dilatation, action })
}

/// Twisting values on a separating tree from chosen roots of the reduced functions.
pub fn twisting_values(tree: &SeparatingTree, f: &FactoredFn, data: &CoveringData) -> Result<TwistCocycle> {
    let base = &tree.graph;
    let mut roots = Vec::new();
    for v in 0..base.n_vertices() {
        let r = reduced_function(tree, f, v)?;
        let s = data.vertex_preimages(v);
        let g = r.f.nth_root(s)?.ok_or_else(|| Error::Inconsistent(format!("reduced function at {v} is not a power")))?;
        roots.push(g);
    }
    let mut out = TwistCocycle::empty(base.n_edges());
    for (e, ed) in base.edges.iter().enumerate() {
        let (parent, child) = if tree.vertices[ed.v].parent == Some(ed.u) { (ed.u, ed.v) } else { (ed.v, ed.u) };
        let at_parent = tree.vertices[child].coord_in_parent.expect("child coordinate");
        let gp = roots[parent].lead(&at_parent);
        let gc = roots[child].lead(&crate::septree::Coord::Infinity);
        out.values[e] = Some(if parent == ed.u { (gp, gc) } else { (gc, gp) });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::iso_check;
    use crate::valfield::field;

    fn two_cycle(n: u64) -> (MetricGraph, CoveringData) {
        let base = MetricGraph::from_parts(&[0, 0], &[(0, 1, Q::from(1)), (0, 1, Q::from(1))]);
        let data = CoveringData {
            n,
            edge_slope: vec![0, 0],
            edge_inertia: vec![1, 1],
            decomposition: vec![1, 1],
            genus: vec![0, 0],
            ramified: vec![0, 0],
            orders: vec![vec![0, 0], vec![0, 0]],
        };
        (base, data)
    }

    #[test]
    fn three_torsion_pattern_is_a_six_cycle() {
        let f = field(13, 1).unwrap();
        let z = f.zeta(3).unwrap();
        let m1 = f.from_int(-1);
        let (base, data) = two_cycle(3);
        let t = TwistCocycle { values: vec![Some((m1, m1.mul(&z))), Some((m1, m1.mul(&z.pow(2))))] };
        let c = assemble_cover(&base, &data, Some(&t)).unwrap();
        assert_eq!(c.cover.n_vertices(), 6);
        assert_eq!(c.cover.n_edges(), 6);
        assert_eq!(c.cover.betti().unwrap(), 1);
        let gauged = assemble_cover(&base, &data, Some(&t.gauge(&base, 1, &z))).unwrap();
        assert!(iso_check(&c.cover, &gauged.cover).unwrap());
        assert_eq!(c.harmonic_degrees(), vec![3, 3]);
    }

    #[test]
    fn trivial_cocycle_disconnects() {
        let f = field(13, 1).unwrap();
        let (base, data) = two_cycle(3);
        let t = TwistCocycle { values: vec![Some((f.one(), f.one())); 2] };
        assert_eq!(assemble_cover(&base, &data, Some(&t)).unwrap_err(), Error::Disconnected);
        assert_eq!(assemble_cover(&base, &data, None).unwrap_err(), Error::MissingTwist);
    }

    #[test]
    fn trampoline_pattern_is_a_four_cycle() {
        let f = field(13, 1).unwrap();
        let (base, data) = two_cycle(2);
        let t = TwistCocycle { values: vec![Some((f.one(), f.one())), Some((f.one(), f.from_int(-1)))] };
        let c = assemble_cover(&base, &data, Some(&t)).unwrap();
        let square = MetricGraph::from_parts(
            &[0; 4],
            &[(0, 1, Q::from(1)), (1, 2, Q::from(1)), (2, 3, Q::from(1)), (3, 0, Q::from(1))],
        );
        assert!(iso_check(&c.cover, &square).unwrap());
        let q = c.quotient_by_power(0).unwrap();
        assert!(iso_check(&q.graph, &base).unwrap());
    }
}
