//! Cyclic covers z^n = f over metric graphs: covering data, twisting data and assembly.

pub mod assemble;
pub mod hyperelliptic;
pub mod ratfn;
pub mod superelliptic;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::graph::{GraphDivisor, MetricGraph, Potential};
use crate::septree::{Point, SeparatingTree};
use crate::valfield::{Padic, Q};

pub use assemble::{assemble_cover, twisting_values, CoveringGraph, CoveringJson, TwistCocycle};
pub use ratfn::RatFn;
pub use superelliptic::{superelliptic, Superelliptic, SuperellipticInput};

/// f = lc * prod (x - a)^m; negative multiplicities are poles.
#[derive(Clone, Debug)]
pub struct FactoredFn {
    pub lc: Padic,
    pub factors: Vec<(Padic, i64)>,
}

impl FactoredFn {
    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|f| f.1).sum()
    }

    /// Zeros and poles on P^1 including infinity (multiplicity -degree, omitted when zero).
    pub fn divisor(&self) -> Vec<(Point, i64)> {
        let mut out: Vec<(Point, i64)> = self.factors.iter().map(|(a, m)| (Point::Finite(a.clone()), *m)).collect();
        if self.degree() != 0 {
            out.push((Point::Infinity, -self.degree()));
        }
        out
    }
}

/// Specialization of a divisor on P^1 to the vertices of a tree.
#[derive(Clone, Debug, PartialEq)]
pub struct TropicalDivisor {
    pub divisor: GraphDivisor,
    /// (index in the input list, vertex, multiplicity)
    pub provenance: Vec<(usize, usize, i64)>,
}

pub fn tropical_divisor(tree: &SeparatingTree, div: &[(Point, i64)]) -> Result<TropicalDivisor> {
    let mut d = GraphDivisor::zero(tree.graph.n_vertices());
    let mut provenance = Vec::new();
    for (i, (p, m)) in div.iter().enumerate() {
        let v = match tree.points.iter().position(|q| q == p) {
            Some(j) => tree.reduction[j].0,
            None => {
                tree.reduction_vertex(p)
                    .map_err(|e| match e {
                        Error::InsufficientPrecision(_) => Error::UnreducedPoint,
                        e => e,
                    })?
                    .0
            }
        };
        d.0[v] += m;
        provenance.push((i, v, *m));
    }
    Ok(TropicalDivisor { divisor: d, provenance })
}

/// The potential phi with Laplacian rho(div f), anchored at the root by the pi-content of f.
pub fn laplacian_of_f(tree: &SeparatingTree, div: &TropicalDivisor, content: Q) -> Result<Potential> {
    let phi = tree.graph.solve_laplacian(&div.divisor, tree.root())?;
    Ok(phi.into_iter().map(|x| x + content).collect())
}

/// Inertia order n / gcd(n, slope) of an edge along which phi_f has the given slope.
pub fn edge_inertia(n: u64, slope: i64) -> u64 {
    n / n.gcd(&slope.unsigned_abs())
}

/// Inertia of the i-th subdivision component of an edge with inertia ie.
pub fn subdivision_inertia(ie: u64, i: u64) -> u64 {
    ie / ie.gcd(&i)
}

/// Base-change degree killing all vertical ramification.
pub fn global_ramification_lcm(orders: &[u64]) -> u64 {
    orders.iter().fold(1u64, |a, &b| a.lcm(&b))
}

/// Decomposition order on a genus-0 component: lcm of the local inertias n / gcd(n, ord).
pub fn vertex_splitting(n: u64, orders: &[i64]) -> u64 {
    orders.iter().fold(1u64, |a, &m| a.lcm(&edge_inertia(n, m)))
}

/// Genus of one component above a base component of genus g, mapping with degree r.
pub fn genus_above(n: u64, r: u64, g: u32, orders: &[i64]) -> Result<u32> {
    let mut twice = r as i64 * (2 * g as i64 - 2);
    for &m in orders {
        let e = edge_inertia(n, m);
        if !r.is_multiple_of(e) {
            return Err(Error::Inconsistent(format!("local inertia {e} does not divide {r}")));
        }
        twice += (r - r / e) as i64;
    }
    if twice < -2 || twice % 2 != 0 {
        return Err(Error::Inconsistent(format!("Riemann-Hurwitz gives 2g-2 = {twice}")));
    }
    Ok(((twice + 2) / 2) as u32)
}

/// Per-vertex input to covering data: orders of the reduced function at marked points, and the
/// decomposition order when the component is not rational.
#[derive(Clone, Debug, Default)]
pub struct VertexLocal {
    pub marked: Vec<i64>,
    pub decomposition: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoveringData {
    pub n: u64,
    /// Slope of phi along each edge, oriented from its first to its second endpoint.
    pub edge_slope: Vec<i64>,
    pub edge_inertia: Vec<u64>,
    /// |D_v|: degree of each component above v over the base component.
    pub decomposition: Vec<u64>,
    pub genus: Vec<u32>,
    pub ramified: Vec<usize>,
    /// Orders of the reduced function at all special points of each vertex.
    pub orders: Vec<Vec<i64>>,
}

impl CoveringData {
    pub fn vertex_preimages(&self, v: usize) -> u64 {
        self.n / self.decomposition[v]
    }
    pub fn edge_preimages(&self, e: usize) -> u64 {
        self.n / self.edge_inertia[e]
    }
}

/// Covering data of z^n = f over a base graph whose vertex weights are the component genera.
pub fn covering_data(n: u64, base: &MetricGraph, phi: &[Q], local: &[VertexLocal]) -> Result<CoveringData> {
    let mut edge_slope = Vec::with_capacity(base.n_edges());
    for i in 0..base.n_edges() {
        let s = base.slope(phi, i);
        if !s.is_integer() {
            return Err(Error::NonIntegralSlope(i));
        }
        edge_slope.push(s.to_integer());
    }
    let inertia: Vec<u64> = edge_slope.iter().map(|&s| edge_inertia(n, s)).collect();
    let mut orders = Vec::new();
    let mut decomposition = Vec::new();
    let mut genus = Vec::new();
    let mut ramified = Vec::new();
    for v in 0..base.n_vertices() {
        let mut ords = local[v].marked.clone();
        for e in base.incident(v) {
            let ed = &base.edges[e];
            if ed.u == v {
                ords.push(edge_slope[e]);
            }
            if ed.v == v {
                ords.push(-edge_slope[e]);
            }
        }
        let g = base.vertices[v].weight;
        let lcm = vertex_splitting(n, &ords);
        let r = match (g, local[v].decomposition) {
            (_, Some(r)) => {
                if r % lcm != 0 || !n.is_multiple_of(r) {
                    return Err(Error::Inconsistent(format!("decomposition order {r} at vertex {v}")));
                }
                r
            }
            (0, None) => lcm,
            _ => return Err(Error::ChartUnavailable(v)),
        };
        genus.push(genus_above(n, r, g, &ords)?);
        ramified.push(ords.iter().filter(|&&m| edge_inertia(n, m) > 1).count());
        decomposition.push(r);
        orders.push(ords);
    }
    Ok(CoveringData { n, edge_slope, edge_inertia: inertia, decomposition, genus, ramified, orders })
}

/// Riemann-Hurwitz genus of z^n = f on P^1 from the multiplicities of div f (infinity included).
pub fn generic_genus(n: u64, div: &[i64]) -> Result<u32> {
    let mut twice = -2 * n as i64;
    for &m in div {
        twice += (n - n.gcd(&m.unsigned_abs())) as i64;
    }
    if twice < -2 || twice % 2 != 0 {
        return Err(Error::Inconsistent(format!("Riemann-Hurwitz gives 2g-2 = {twice}")));
    }
    Ok(((twice + 2) / 2) as u32)
}

/// Check that z^n = f is geometrically irreducible: gcd(n, all multiplicities) = 1.
pub fn check_irreducible(n: u64, div: &[i64]) -> Result<()> {
    let g = div.iter().fold(n, |a, &m| a.gcd(&m.unsigned_abs()));
    if g != 1 {
        return Err(Error::Input(format!("z^{n} = f is reducible: multiplicities share the factor {g}")));
    }
    Ok(())
}

/// Reduction of f at a tree vertex: f = pi^phi * (fbar(t) + higher order) in the vertex chart.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedFunction {
    pub phi: Q,
    pub f: RatFn,
}

pub fn reduced_function(tree: &SeparatingTree, f: &FactoredFn, v: usize) -> Result<ReducedFunction> {
    let param = tree.chart_param(v);
    let lead = f.lc.lead().ok_or_else(|| Error::Input("zero function".into()))?;
    let mut phi = f.lc.val().finite().unwrap();
    let mut r = RatFn::constant(lead);
    for (a, m) in &f.factors {
        let (w, num, den) = param.linear_factor(a)?;
        phi += w * Q::from(*m);
        r = r.mul(&RatFn::new(num, den).powi(*m));
    }
    Ok(ReducedFunction { phi, f: r })
}
