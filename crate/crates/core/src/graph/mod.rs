//! Weighted metric graphs: divisors, Laplacians, Jacobians, refinement, quotients, pruning.

mod canon;
mod io;
mod linalg;
mod quotient;

pub use canon::{canonical_form, iso_check, CanonicalForm};
pub use io::{from_json, parse_length, to_dot, to_json, GraphJson};
pub use linalg::{smith_diagonal, spanning_tree_count};
pub use quotient::{generate_group, quotient, Automorphism, LengthMode, Quotient};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::valfield::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub weight: u32,
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub length: Q,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Weighted metric graph. Vertices and edges are addressed by index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MetricGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

/// Integer divisor on the vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphDivisor(pub Vec<i64>);

impl GraphDivisor {
    pub fn zero(n: usize) -> Self {
        GraphDivisor(vec![0; n])
    }
    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }
    pub fn add(&self, o: &Self) -> Self {
        GraphDivisor(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
    pub fn neg(&self) -> Self {
        GraphDivisor(self.0.iter().map(|a| -a).collect())
    }
}

/// Rational potential on the vertices.
pub type Potential = Vec<Q>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobianStructure {
    pub order: u128,
    pub factors: Vec<u128>,
}

impl MetricGraph {
    pub fn new() -> Self {
        Self::default()
    }
    pub fn add_vertex(&mut self, weight: u32) -> usize {
        self.vertices.push(Vertex { weight, label: None });
        self.vertices.len() - 1
    }
    pub fn add_labeled(&mut self, weight: u32, label: impl Into<String>) -> usize {
        self.vertices.push(Vertex { weight, label: Some(label.into()) });
        self.vertices.len() - 1
    }
    pub fn add_edge(&mut self, u: usize, v: usize, length: Q) -> usize {
        assert!(u < self.vertices.len() && v < self.vertices.len(), "edge endpoint out of range");
        assert!(length > Q::zero(), "edge length must be positive");
        self.edges.push(Edge { u, v, length });
        self.edges.len() - 1
    }
    /// Graph with the given weights and unit-free edge list.
    pub fn from_parts(weights: &[u32], edges: &[(usize, usize, Q)]) -> Self {
        let mut g = Self::new();
        for &w in weights {
            g.add_vertex(w);
        }
        for &(u, v, l) in edges {
            g.add_edge(u, v, l);
        }
        g
    }
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }
    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].u == v || self.edges[e].v == v).collect()
    }
    /// Valence, loops counted twice.
    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().map(|e| (e.u == v) as usize + (e.v == v) as usize).sum()
    }
    pub fn weights(&self) -> Vec<u32> {
        self.vertices.iter().map(|v| v.weight).collect()
    }
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.vertices.len()];
        let mut c = 0;
        for s in 0..self.vertices.len() {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            comp[s] = c;
            while let Some(x) = stack.pop() {
                for e in self.incident(x) {
                    let y = self.edges[e].other(x);
                    if comp[y] == usize::MAX {
                        comp[y] = c;
                        stack.push(y);
                    }
                }
            }
            c += 1;
        }
        comp
    }
    pub fn is_connected(&self) -> bool {
        !self.vertices.is_empty() && self.components().iter().all(|&c| c == 0)
    }
    pub fn betti(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(self.edges.len() + 1 - self.vertices.len())
    }
    pub fn total_genus(&self) -> Result<usize> {
        Ok(self.betti()? + self.vertices.iter().map(|v| v.weight as usize).sum::<usize>())
    }
    pub fn total_length(&self) -> Q {
        self.edges.iter().map(|e| e.length).sum()
    }

    fn check_no_loops(&self) -> Result<()> {
        match self.edges.iter().position(|e| e.is_loop()) {
            Some(i) => Err(Error::LoopEdge(i)),
            None => Ok(()),
        }
    }

    /// Delta(phi)(v) = sum over edges vw of (phi(v) - phi(w)) / l(vw); slopes must be integers.
    pub fn apply_laplacian(&self, phi: &[Q]) -> Result<GraphDivisor> {
        self.check_no_loops()?;
        let mut d = vec![0i64; self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            let s = (phi[e.v] - phi[e.u]) / e.length;
            if !s.is_integer() {
                return Err(Error::NonIntegralSlope(i));
            }
            let s = s.to_integer();
            d[e.u] -= s;
            d[e.v] += s;
        }
        Ok(GraphDivisor(d))
    }

    /// Slope of phi along edge i, oriented from u to v.
    pub fn slope(&self, phi: &[Q], i: usize) -> Q {
        let e = &self.edges[i];
        (phi[e.v] - phi[e.u]) / e.length
    }

    /// The potential with Delta(phi) = D and phi(anchor) = 0.
    ///
    /// Solved exactly over the rationals on the weighted Laplacian; D is principal iff the
    /// resulting slopes are integral (integrality on the unit refinement).
    pub fn solve_laplacian(&self, d: &GraphDivisor, anchor: usize) -> Result<Potential> {
        self.check_no_loops()?;
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        if d.degree() != 0 {
            return Err(Error::NotPrincipal);
        }
        let n = self.vertices.len();
        let idx: Vec<usize> = (0..n).filter(|&v| v != anchor).collect();
        let pos = |v: usize| idx.iter().position(|&x| x == v);
        let m = idx.len();
        let mut a = vec![vec![BigRational::zero(); m + 1]; m];
        for e in &self.edges {
            let w = BigRational::new(1.into(), 1.into()) / big(e.length);
            for (x, y) in [(e.u, e.v), (e.v, e.u)] {
                if let Some(i) = pos(x) {
                    a[i][i] += w.clone();
                    if let Some(j) = pos(y) {
                        a[i][j] -= w.clone();
                    }
                }
            }
        }
        for (i, &v) in idx.iter().enumerate() {
            a[i][m] = BigRational::from_integer(d.0[v].into());
        }
        let sol = linalg::solve_dense(a)?;
        let mut phi = vec![Q::zero(); n];
        for (i, &v) in idx.iter().enumerate() {
            phi[v] = small(&sol[i])?;
        }
        for i in 0..self.edges.len() {
            if !self.slope(&phi, i).is_integer() {
                return Err(Error::NotPrincipal);
            }
        }
        Ok(phi)
    }

    /// lcm of length denominators: the scale making every length integral.
    pub fn length_scale(&self) -> i64 {
        self.edges.iter().fold(1i64, |acc, e| acc.lcm(e.length.denom()))
    }

    /// Subdivide every edge into unit pieces after scaling lengths by `scale`.
    /// Returns the refined graph; original vertices keep their indices.
    pub fn unit_refinement(&self, scale: i64) -> Result<MetricGraph> {
        let mut g = MetricGraph { vertices: self.vertices.clone(), edges: vec![] };
        for e in &self.edges {
            let l = e.length * Q::from(scale);
            if !l.is_integer() {
                return Err(Error::Input("scale does not clear length denominators".into()));
            }
            let k = l.to_integer();
            let mut prev = e.u;
            for _ in 1..k {
                let w = g.add_vertex(0);
                g.add_edge(prev, w, Q::one());
                prev = w;
            }
            g.add_edge(prev, e.v, Q::one());
        }
        Ok(g)
    }

    /// Tropical Jacobian of the unit refinement (lengths scaled to integers first).
    pub fn jacobian(&self) -> Result<JacobianStructure> {
        self.check_no_loops()?;
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let g = self.unit_refinement(self.length_scale())?;
        let n = g.vertices.len();
        if n == 1 {
            return Ok(JacobianStructure { order: 1, factors: vec![] });
        }
        let lap = g.reduced_laplacian_int();
        let diag = smith_diagonal(lap);
        let mut order: u128 = 1;
        let mut factors = Vec::new();
        for d in diag {
            let d: u128 = d.abs().try_into().map_err(|_| Error::Overflow("jacobian"))?;
            if d == 0 {
                return Err(Error::Inconsistent("singular reduced Laplacian".into()));
            }
            order = order.checked_mul(d).ok_or(Error::Overflow("jacobian"))?;
            if d > 1 {
                factors.push(d);
            }
        }
        Ok(JacobianStructure { order, factors })
    }

    /// Integer Laplacian of a unit graph with the last vertex removed.
    pub(crate) fn reduced_laplacian_int(&self) -> Vec<Vec<num_bigint::BigInt>> {
        let n = self.vertices.len() - 1;
        let mut a = vec![vec![num_bigint::BigInt::zero(); n]; n];
        for e in &self.edges {
            if e.is_loop() {
                continue;
            }
            for (x, y) in [(e.u, e.v), (e.v, e.u)] {
                if x < n {
                    a[x][x] += 1;
                    if y < n {
                        a[x][y] -= 1;
                    }
                }
            }
        }
        a
    }

    /// Replace edge `e` by a path with the given lengths through new weight-0 vertices.
    pub fn refine(&self, e: usize, parts: &[Q]) -> Result<MetricGraph> {
        let edge = self.edges.get(e).ok_or_else(|| Error::Input(format!("no edge {e}")))?.clone();
        if parts.iter().any(|p| *p <= Q::zero()) || parts.iter().copied().sum::<Q>() != edge.length {
            return Err(Error::LengthMismatch);
        }
        let mut g = self.clone();
        g.edges.remove(e);
        let mut prev = edge.u;
        for (i, &p) in parts.iter().enumerate() {
            let next = if i + 1 == parts.len() { edge.v } else { g.add_vertex(0) };
            g.add_edge(prev, next, p);
            prev = next;
        }
        Ok(g)
    }

    /// Remove the vertex set `drop` and all incident edges, renumbering the rest.
    pub fn remove_vertices(&self, drop: &[bool]) -> MetricGraph {
        let mut map = vec![usize::MAX; self.vertices.len()];
        let mut g = MetricGraph::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if !drop[i] {
                map[i] = g.vertices.len();
                g.vertices.push(v.clone());
            }
        }
        for e in &self.edges {
            if !drop[e.u] && !drop[e.v] {
                g.edges.push(Edge { u: map[e.u], v: map[e.v], length: e.length });
            }
        }
        g
    }

    /// Repeatedly delete weight-0 vertices of valence 1. A graph collapsing entirely
    /// leaves one vertex carrying the total weight.
    pub fn prune_leaves(&self) -> MetricGraph {
        let mut g = self.clone();
        loop {
            if g.vertices.len() <= 1 {
                return g;
            }
            let leaf = (0..g.vertices.len()).find(|&v| g.vertices[v].weight == 0 && g.valence(v) == 1);
            let Some(v) = leaf else { return g };
            let mut drop = vec![false; g.vertices.len()];
            drop[v] = true;
            g = g.remove_vertices(&drop);
        }
    }

    /// Merge the two edges at each weight-0 vertex of valence 2 (not a loop) into one.
    pub fn smooth(&self) -> MetricGraph {
        let mut g = self.clone();
        loop {
            let cand = (0..g.vertices.len()).find(|&v| {
                let inc = g.incident(v);
                g.vertices[v].weight == 0 && inc.len() == 2 && inc.iter().all(|&e| !g.edges[e].is_loop())
            });
            let Some(v) = cand else { return g };
            let inc = g.incident(v);
            let (a, b) = (g.edges[inc[0]].clone(), g.edges[inc[1]].clone());
            let (x, y) = (a.other(v), b.other(v));
            let mut h = g.clone();
            h.edges = g.edges.iter().enumerate().filter(|(i, _)| !inc.contains(i)).map(|(_, e)| e.clone()).collect();
            h.edges.push(Edge { u: x, v: y, length: a.length + b.length });
            let mut drop = vec![false; h.vertices.len()];
            drop[v] = true;
            g = h.remove_vertices(&drop);
        }
    }

    /// Leafless model with no removable valence-2 vertices.
    pub fn minimal_skeleton(&self) -> MetricGraph {
        self.prune_leaves().smooth()
    }

    /// Multiply every length by a rational factor.
    pub fn scale_lengths(&self, factor: Q) -> MetricGraph {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.length *= factor;
        }
        g
    }
}

fn big(q: Q) -> BigRational {
    BigRational::new((*q.numer()).into(), (*q.denom()).into())
}

fn small(q: &BigRational) -> Result<Q> {
    let n: i64 = q.numer().try_into().map_err(|_| Error::Overflow("potential"))?;
    let d: i64 = q.denom().try_into().map_err(|_| Error::Overflow("potential"))?;
    Ok(Q::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn banana() -> MetricGraph {
        MetricGraph::from_parts(&[0, 0], &[(0, 1, Q::one()), (0, 1, Q::one()), (0, 1, Q::one())])
    }

    #[test]
    fn banana_genus_and_jacobian() {
        let g = banana();
        assert_eq!(g.betti().unwrap(), 2);
        assert_eq!(g.total_genus().unwrap(), 2);
        assert_eq!(g.jacobian().unwrap(), JacobianStructure { order: 3, factors: vec![3] });
    }

    #[test]
    fn laplacian_examples() {
        let g = banana();
        let d = g.apply_laplacian(&[Q::one(), Q::zero()]).unwrap();
        assert_eq!(d, GraphDivisor(vec![3, -3]));
        let h = MetricGraph::from_parts(&[0, 0], &[(0, 1, Q::one())]);
        assert_eq!(h.apply_laplacian(&[Q::zero(), Q::from(-2)]).unwrap(), GraphDivisor(vec![2, -2]));
        assert_eq!(g.apply_laplacian(&[Q::from(5), Q::from(5)]).unwrap(), GraphDivisor(vec![0, 0]));
    }

    #[test]
    fn solve_on_banana() {
        let g = banana();
        let phi = g.solve_laplacian(&GraphDivisor(vec![3, -3]), 1).unwrap();
        assert_eq!(phi, vec![Q::one(), Q::zero()]);
        assert_eq!(g.solve_laplacian(&GraphDivisor(vec![1, -1]), 1), Err(Error::NotPrincipal));
        assert_eq!(g.solve_laplacian(&GraphDivisor(vec![0, 0]), 0).unwrap(), vec![Q::zero(), Q::zero()]);
    }

    #[test]
    fn cycle_jacobian() {
        for n in 3..=8usize {
            let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, Q::one())).collect();
            let g = MetricGraph::from_parts(&vec![0; n], &edges);
            assert_eq!(g.jacobian().unwrap(), JacobianStructure { order: n as u128, factors: vec![n as u128] });
        }
    }

    #[test]
    fn refine_and_prune() {
        let g = MetricGraph::from_parts(&[1, 0], &[(0, 1, Q::from(3))]);
        let r = g.refine(0, &[Q::one(), Q::one(), Q::one()]).unwrap();
        assert_eq!(r.n_vertices(), 4);
        assert_eq!(r.total_genus().unwrap(), 1);
        assert_eq!(g.refine(0, &[Q::one(), Q::one()]), Err(Error::LengthMismatch));
        let p = r.prune_leaves();
        assert_eq!(p.n_vertices(), 1);
        assert_eq!(p.vertices[0].weight, 1);
        let half = MetricGraph::from_parts(&[0, 0], &[(0, 1, Q::one())])
            .refine(0, &[Q::new(1, 2), Q::new(1, 2)])
            .unwrap();
        assert_eq!(half.n_edges(), 2);
        assert_eq!(banana().prune_leaves(), banana());
    }

    #[test]
    fn loops_rejected_by_laplacian() {
        let g = MetricGraph::from_parts(&[0], &[(0, 0, Q::one())]);
        assert_eq!(g.apply_laplacian(&[Q::zero()]), Err(Error::LoopEdge(0)));
        assert_eq!(g.jacobian(), Err(Error::LoopEdge(0)));
    }
}
