//! Covering data of the S3 closure over the separating tree from inertia groups alone.

use serde::Serialize;

use super::quadratic::{quadratic_subcover, w_divisor};
use super::{inertia_case, CubicCover, S3Options};
use crate::error::{Error, Result};
use crate::kummer::{covering_data, global_ramification_lcm};
use crate::septree::SeparatingTree;
use crate::valfield::Q;

#[derive(Clone, Debug, Serialize)]
pub struct InertiaRoute {
    #[serde(skip)]
    pub tree: SeparatingTree,
    /// Base-change degree making every vertex unramified.
    pub scale: u64,
    /// S3 inertia orders of the tree vertices before base change.
    pub vertex_inertia: Vec<u64>,
    pub edge_inertia: Vec<u64>,
    pub decomposition: Vec<u64>,
    /// Vertices whose decomposition order was read off the quadratic subcover.
    pub borrowed: Vec<usize>,
}

impl InertiaRoute {
    pub fn edge_preimages(&self) -> Vec<u64> {
        self.edge_inertia.iter().map(|i| 6 / i).collect()
    }
    pub fn vertex_preimages(&self) -> Vec<u64> {
        self.decomposition.iter().map(|d| 6 / d).collect()
    }
}

/// Gauss valuations of p, q, Delta at every vertex of a tree.
pub fn potentials(tree: &SeparatingTree, cc: &CubicCover) -> Result<Vec<[Q; 3]>> {
    (0..tree.n_vertices())
        .map(|v| {
            let cp = tree.chart_param(v);
            Ok([cp.pullback_poly(&cc.p)?.0, cp.pullback_poly(&cc.q)?.0, cp.pullback_poly(&cc.delta)?.0])
        })
        .collect()
}

fn order_of(vals: [Q; 3]) -> Result<u64> {
    if vals.iter().any(|v| !v.is_integer()) {
        return Err(Error::Inconsistent("valuations off the value group".into()));
    }
    Ok(inertia_case(vals[0].to_integer(), vals[1].to_integer(), vals[2].to_integer()).order)
}

/// Vertical inertia of the closure at each vertex of any tree for the cover, in the vertex's own
/// normalized valuation. The value group used is generated by 1, the height and the three
/// potentials, which all lie in it.
pub fn vertical_inertia(tree: &SeparatingTree, cc: &CubicCover) -> Result<Vec<u64>> {
    let phi = potentials(tree, cc)?;
    phi.iter()
        .zip(&tree.vertices)
        .map(|(v, tv)| {
            let d = Q::from(lcm_denominators(v.iter().copied().chain([tv.height])) as i64);
            order_of([v[0] * d, v[1] * d, v[2] * d])
        })
        .collect()
}

fn lcm_denominators(xs: impl Iterator<Item = Q>) -> u64 {
    xs.fold(1u64, |acc, x| num_integer::lcm(acc, *x.denom() as u64))
}

/// Covering data of C-bar over the separating tree of Supp(p, q, Delta) by continuity of inertia.
pub fn closure_covering_data_inertia(cc: &CubicCover, opts: &S3Options) -> Result<InertiaRoute> {
    let qc = quadratic_subcover(cc, opts)?;
    let tree = qc.tree.clone();
    let g = &tree.graph;
    let phi = potentials(&tree, cc)?;
    let vertex_inertia = vertical_inertia(&tree, cc)?;
    let base = lcm_denominators(phi.iter().flatten().copied().chain(g.edges.iter().map(|e| e.length)));
    let mut scale = base;
    let unramified = |e: u64| -> Result<bool> {
        for v in &phi {
            let s = Q::from(e as i64);
            if order_of([v[0] * s, v[1] * s, v[2] * s])? != 1 {
                return Ok(false);
            }
        }
        Ok(true)
    };
    while !unramified(scale)? {
        scale += base;
        if scale > 6 * base * global_ramification_lcm(&vertex_inertia).max(1) {
            return Err(Error::Inconsistent("no base change makes the vertices unramified".into()));
        }
    }
    let s = Q::from(scale as i64);
    let mut edge_inertia = Vec::new();
    for ed in &g.edges {
        let (a, b) = (phi[ed.u], phi[ed.v]);
        let mut vals = [Q::from(0); 3];
        for k in 0..3 {
            let slope = (b[k] - a[k]) / ed.length;
            vals[k] = a[k] * s + slope;
        }
        edge_inertia.push(order_of(vals)?);
    }
    let inert = cc.point_inertia();
    let mut decomposition = Vec::new();
    let mut borrowed = Vec::new();
    let mut closure_data = None;
    for v in 0..tree.n_vertices() {
        let mut orders: Vec<u64> =
            tree.reduction.iter().zip(&inert).filter(|((w, _), _)| *w == v).map(|(_, &o)| o).collect();
        orders.extend(tree.directions(v).iter().map(|d| edge_inertia[d.0]));
        let has = |k: u64| orders.contains(&k);
        let d = match (has(2), has(3)) {
            (true, true) => 6,
            (false, true) => 3,
            (false, false) => 1,
            (true, false) => {
                borrowed.push(v);
                if closure_data.is_none() {
                    let wd = w_divisor(cc, &qc)?;
                    closure_data = Some(covering_data(3, &qc.cover.cover, &wd.psi, &wd.local)?);
                }
                let data = closure_data.as_ref().unwrap();
                let above: Vec<usize> = (0..qc.cover.vertex_map.len()).filter(|&i| qc.cover.vertex_map[i] == v).collect();
                (2 / above.len() as u64) * data.decomposition[above[0]]
            }
        };
        decomposition.push(d);
    }
    Ok(InertiaRoute { tree, scale, vertex_inertia, edge_inertia, decomposition, borrowed })
}
