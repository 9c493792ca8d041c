//! The S3 closure C-bar as a cyclic triple cover of Sigma(D), the lifted involution tau and the
//! quotient skeleton of the trigonal curve itself.

use std::collections::VecDeque;

use serde::Serialize;

use super::quadratic::{fiber_starts, quadratic_subcover, w_divisor, DFun, QuadraticCover, Sheet, WDivisor};
use super::{with_tower, CubicCover, S3Options};
use crate::error::{Error, Result};
use crate::graph::{generate_group, quotient, Automorphism, LengthMode, MetricGraph, Quotient};
use crate::kummer::{assemble_cover, covering_data, CoveringData, CoveringGraph, TwistCocycle};
use crate::septree::Coord;
use crate::valfield::{Fq, ValuedPoly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenusLedger {
    /// Branch points with inertia of order 2 and of order 3.
    pub n2: usize,
    pub n3: usize,
    pub genus_c: i64,
    pub genus_closure: i64,
    pub genus_d: i64,
    /// Points of D ramified in C-bar.
    pub ramified_in_d: i64,
    /// Total genera of the computed skeleta of D, C-bar and C.
    pub graph_d: i64,
    pub graph_closure: i64,
    pub graph_c: i64,
}

impl GenusLedger {
    /// Riemann-Hurwitz for C-bar over D and over C, and agreement with the graphs.
    pub fn check(&self) -> Result<()> {
        let ok = self.genus_closure - 1 == 3 * (self.genus_d - 1) + self.ramified_in_d
            && 2 * self.genus_closure - 2 == 2 * (2 * self.genus_c - 2) + self.n2 as i64
            && self.graph_d == self.genus_d
            && self.graph_closure == self.genus_closure
            && self.graph_c == self.genus_c;
        if ok {
            Ok(())
        } else {
            Err(Error::Inconsistent(format!("genus ledger does not balance: {self:?}")))
        }
    }
}

#[derive(Clone, Debug)]
pub struct S3Result {
    pub cubic: CubicCover,
    pub quadratic: QuadraticCover,
    pub w: WDivisor,
    pub closure_data: CoveringData,
    /// C-bar over Sigma(D); its action is sigma.
    pub closure: CoveringGraph,
    pub tau: Automorphism,
    /// Sigma(C-bar) / tau with genera filled in.
    pub quotient: Quotient,
    /// Minimal skeleton of C.
    pub skeleton: MetricGraph,
    pub ledger: GenusLedger,
    pub tower_degree: usize,
}

impl S3Result {
    /// Number of closure edges over each tree edge.
    pub fn edge_preimages(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.quadratic.tree.graph.n_edges()];
        for &de in &self.closure.edge_map {
            out[self.quadratic.cover.edge_map[de]] += 1;
        }
        out
    }

    /// Number of closure vertices over each tree vertex.
    pub fn vertex_preimages(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.quadratic.tree.n_vertices()];
        for &dv in &self.closure.vertex_map {
            out[self.quadratic.cover.vertex_map[dv]] += 1;
        }
        out
    }

    /// Quotient of the closure by all of S3, with edge lengths scaled by the inertia orders.
    pub fn full_quotient(&self) -> Result<Quotient> {
        let cover = &self.closure.cover;
        let group = generate_group(cover, &[self.closure.action.clone(), self.tau.clone()]);
        let mut q = quotient(cover, &group, LengthMode::Verbatim)?;
        let counts = self.edge_preimages();
        for (e, &c) in q.edge_class.iter().enumerate() {
            let t = self.quadratic.cover.edge_map[self.closure.edge_map[e]];
            q.graph.edges[c].length = cover.edges[e].length * num_rational::Ratio::from(6 / counts[t] as i64);
        }
        Ok(q)
    }
}

pub(crate) fn genus_ledger(cc: &CubicCover) -> GenusLedger {
    let inert = cc.point_inertia();
    let n2 = inert.iter().filter(|&&o| o == 2).count();
    let n3 = inert.iter().filter(|&&o| o == 3).count();
    let b = cc.table.iter().filter(|r| r[2].rem_euclid(2) == 1).count() as i64;
    let mut r = 0;
    for row in &cc.table {
        let [vp, vq, vd] = *row;
        let values: Vec<i64> = match super::inertia_case(vp, vq, vd).case {
            super::Case::I => vec![3 * vp - vq, vq],
            super::Case::II if vp.rem_euclid(2) == 0 => vec![3 * vp / 2; 2],
            super::Case::II => vec![3 * vp],
            super::Case::III if vd.rem_euclid(2) == 0 => vec![vq; 2],
            super::Case::III => vec![2 * vq],
        };
        r += values.iter().filter(|v| v.rem_euclid(3) != 0).count() as i64;
    }
    GenusLedger {
        n2,
        n3,
        genus_c: (-6 + 2 * n3 as i64 + n2 as i64) / 2 + 1,
        genus_closure: (-12 + 3 * n2 as i64 + 4 * n3 as i64) / 2 + 1,
        genus_d: b / 2 - 1,
        ramified_in_d: r,
        graph_d: 0,
        graph_closure: 0,
        graph_c: 0,
    }
}

/// Cube roots of the reduced w^3 on split rational sheets, evaluated at both ends of each D-edge.
fn closure_twist(qc: &QuadraticCover, wd: &WDivisor, data: &CoveringData) -> Result<TwistCocycle> {
    let d = &qc.cover.cover;
    let tree = &qc.tree;
    let mut roots = Vec::new();
    for (i, comp) in wd.components.iter().enumerate() {
        let s = data.vertex_preimages(i);
        roots.push(match (&qc.sheets[i], &comp.f) {
            (Sheet::Split { .. }, DFun::Rational(r)) if s > 1 => Some(
                r.nth_root(s)?
                    .ok_or_else(|| Error::Inconsistent(format!("w^3 on component {i} is not a cube")))?,
            ),
            _ => None,
        });
    }
    let mut out = TwistCocycle::empty(d.n_edges());
    for (de, ed) in d.edges.iter().enumerate() {
        let (Some(gu), Some(gv)) = (&roots[ed.u], &roots[ed.v]) else { continue };
        let (tu, tv) = (qc.cover.vertex_map[ed.u], qc.cover.vertex_map[ed.v]);
        let lead_at = |g: &crate::kummer::RatFn, me: usize, other: usize| -> Fq {
            if tree.vertices[other].parent == Some(me) {
                g.lead(&tree.vertices[other].coord_in_parent.expect("child coordinate"))
            } else {
                g.lead(&Coord::Infinity)
            }
        };
        out.values[de] = Some((lead_at(gu, tu, tv), lead_at(gv, tv, tu)));
    }
    Ok(out)
}

/// Lift of the involution of D to C-bar with tau sigma tau = sigma^-1.
pub fn lift_involution(d: &CoveringGraph, cbar: &CoveringGraph) -> Result<Automorphism> {
    let dg = &d.cover;
    let iota = &d.action;
    let (vstart, estart) = fiber_starts(cbar);
    let s = |x: usize| cbar.vertex_map.iter().filter(|&&y| y == x).count();
    let twist = |e: usize| (cbar.cover.edges[estart[e]].v - vstart[dg.edges[e].v]) as i64;
    // one offset per iota-orbit, indexed by its smaller member
    let orbit = |x: usize| x.min(iota.vertex[x]);
    let mut constraints: Vec<Vec<(usize, i64)>> = vec![Vec::new(); dg.n_vertices()];
    for (e, ed) in dg.edges.iter().enumerate() {
        if s(ed.u) == 3 && s(ed.v) == 3 {
            let c = twist(e) + twist(iota.edge[e]);
            constraints[orbit(ed.u)].push((orbit(ed.v), c));
            constraints[orbit(ed.v)].push((orbit(ed.u), -c));
        }
    }
    let mut offset: Vec<Option<i64>> = vec![None; dg.n_vertices()];
    for root in 0..dg.n_vertices() {
        if offset[orbit(root)].is_some() {
            continue;
        }
        offset[orbit(root)] = Some(0);
        let mut queue = VecDeque::from([orbit(root)]);
        while let Some(x) = queue.pop_front() {
            let ax = offset[x].unwrap();
            for &(y, c) in &constraints[x] {
                let want = (ax + c).rem_euclid(3);
                match offset[y] {
                    Some(ay) if ay != want => return Err(Error::ActionLiftFailed),
                    Some(_) => {}
                    None => {
                        offset[y] = Some(want);
                        queue.push_back(y);
                    }
                }
            }
        }
    }
    let a = |x: usize| offset[orbit(x)].unwrap();
    let mut vertex = vec![0; cbar.cover.n_vertices()];
    for (i, &x) in cbar.vertex_map.iter().enumerate() {
        let sx = s(x) as i64;
        let j = (i - vstart[x]) as i64;
        let y = iota.vertex[x];
        vertex[i] = vstart[y] + (a(x) - j).rem_euclid(sx) as usize;
    }
    let n_copies = |e: usize| cbar.edge_map.iter().filter(|&&y| y == e).count() as i64;
    let mut edge = vec![0; cbar.cover.n_edges()];
    for (i, &e) in cbar.edge_map.iter().enumerate() {
        let ed = &dg.edges[e];
        let (su, sv) = (s(ed.u) as i64, s(ed.v) as i64);
        let dcount = n_copies(e);
        let b = if su > 1 {
            a(ed.u)
        } else if sv > 1 {
            a(ed.v) - twist(e) - twist(iota.edge[e])
        } else {
            0
        };
        let c = (i - estart[e]) as i64;
        edge[i] = estart[iota.edge[e]] + (b - c).rem_euclid(dcount) as usize;
    }
    let tau = Automorphism { vertex, edge };
    tau.check(&cbar.cover).map_err(|_| Error::ActionLiftFailed)?;
    let id = Automorphism::identity(&cbar.cover);
    let sigma = &cbar.action;
    let sigma_inv = sigma.compose(sigma);
    if tau.compose(&tau) != id || tau.compose(sigma).compose(&tau) != sigma_inv {
        return Err(Error::ActionLiftFailed);
    }
    Ok(tau)
}

/// S3 inertia order along each tree edge.
fn tree_edge_inertia(qc: &QuadraticCover, data: &CoveringData) -> Result<Vec<u64>> {
    let mut out = vec![0u64; qc.tree.graph.n_edges()];
    for (de, &e) in qc.cover.edge_map.iter().enumerate() {
        let i = qc.data.edge_inertia[e] * data.edge_inertia[de];
        if out[e] != 0 && out[e] != i {
            return Err(Error::Inconsistent(format!("edge inertia varies over tree edge {e}")));
        }
        out[e] = i;
    }
    Ok(out)
}

fn quotient_by_tau(cc: &CubicCover, qc: &QuadraticCover, data: &CoveringData, cbar: &CoveringGraph, tau: &Automorphism) -> Result<Quotient> {
    let group = generate_group(&cbar.cover, std::slice::from_ref(tau));
    let mut q = quotient(&cbar.cover, &group, LengthMode::Stabilizer)?;
    let inertia = tree_edge_inertia(qc, data)?;
    let point_inertia = cc.point_inertia();
    let tree = &qc.tree;
    for i in 0..cbar.cover.n_vertices() {
        let g = cbar.cover.vertices[i].weight as i64;
        let weight = if tau.vertex[i] != i {
            g
        } else {
            let v = qc.cover.vertex_map[cbar.vertex_map[i]];
            let marked = tree.reduction.iter().zip(&point_inertia).filter(|((w, _), &o)| *w == v && o == 2).count();
            let dirs = tree.directions(v).iter().filter(|d| inertia[d.0] == 2).count();
            let n2 = (marked + dirs) as i64;
            let twice = 2 * g - 2 - n2;
            if twice.rem_euclid(4) != 0 {
                return Err(Error::Inconsistent(format!("fixed points of tau on vertex {i} break Riemann-Hurwitz")));
            }
            twice / 4 + 1
        };
        q.graph.vertices[q.vertex_class[i]].weight = weight as u32;
    }
    Ok(q)
}

fn run(p: &ValuedPoly, q: &ValuedPoly, opts: &S3Options) -> Result<S3Result> {
    let cc = CubicCover::new(p, q, opts.precision)?;
    let qc = quadratic_subcover(&cc, opts)?;
    let wd = w_divisor(&cc, &qc)?;
    let data = covering_data(3, &qc.cover.cover, &wd.psi, &wd.local)?;
    let twist = closure_twist(&qc, &wd, &data)?;
    let cbar = assemble_cover(&qc.cover.cover, &data, Some(&twist))?;
    let tau = lift_involution(&qc.cover, &cbar)?;
    let quot = quotient_by_tau(&cc, &qc, &data, &cbar, &tau)?;
    let skeleton = quot.graph.minimal_skeleton();
    let mut ledger = genus_ledger(&cc);
    ledger.graph_d = qc.cover.cover.total_genus()? as i64;
    ledger.graph_closure = cbar.cover.total_genus()? as i64;
    ledger.graph_c = quot.graph.total_genus()? as i64;
    ledger.check()?;
    Ok(S3Result {
        tower_degree: cc.field().m,
        cubic: cc,
        quadratic: qc,
        w: wd,
        closure_data: data,
        closure: cbar,
        tau,
        quotient: quot,
        skeleton,
        ledger,
    })
}

/// Skeleton of z^3 + p z + q = 0 through its S3 closure.
pub fn galois_closure(p: &ValuedPoly, q: &ValuedPoly, opts: &S3Options) -> Result<S3Result> {
    with_tower(p, q, |p, q| run(p, q, opts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::iso_check;
    use crate::s3cover::closure_covering_data_inertia;
    use crate::valfield::{field, parse_poly, Q};

    fn opts() -> S3Options {
        S3Options { precision: 32, point_leaves: None }
    }

    fn run_str(p: &str, q: &str) -> S3Result {
        let f = field(13, 1).unwrap();
        let p = parse_poly(p, f, "x").unwrap();
        let q = parse_poly(q, f, "x").unwrap();
        galois_closure(&p, &q, &opts()).unwrap()
    }

    fn sorted(mut v: Vec<u64>) -> Vec<u64> {
        v.sort();
        v
    }

    fn quotient_checks(r: &S3Result) {
        let by_sigma = r.closure.quotient_by_power(1).unwrap();
        assert!(iso_check(&by_sigma.graph, &r.quadratic.cover.cover).unwrap());
        let full = r.full_quotient().unwrap();
        assert!(iso_check(&full.graph, &r.quadratic.tree.graph).unwrap());
    }

    #[test]
    fn standard_curve() {
        let r = run_str("x^3", "x^3+pi^3");
        assert_eq!(sorted(r.edge_preimages()), vec![2, 2, 2, 6]);
        let over_core = r.vertex_preimages()[r.quadratic.tree.vertices.iter().position(|v| v.height == Q::from(1)).unwrap()];
        assert_eq!(over_core, 2);
        assert_eq!(r.quotient.graph.n_vertices(), 5);
        let s = &r.skeleton;
        assert_eq!((s.n_vertices(), s.n_edges()), (2, 3));
        assert_eq!(sorted(s.weights().into_iter().map(u64::from).collect()), vec![0, 1]);
        assert_eq!(r.ledger.genus_c, 3);
        assert_eq!(r.ledger.genus_closure, 10);
        assert_eq!(r.ledger.genus_d, 4);
        quotient_checks(&r);
    }

    #[test]
    fn standard_curve_minimal_graphs() {
        let r = run_str("x^3", "x^3+pi^3");
        let d = r.quadratic.cover.cover.minimal_skeleton();
        let one = Q::from(1);
        let three = Q::from(3);
        let expect_d = MetricGraph::from_parts(
            &[1, 0, 0],
            &[(0, 1, one), (0, 2, one), (1, 2, three), (1, 2, three), (1, 2, three)],
        );
        assert!(iso_check(&d, &expect_d).unwrap(), "{d:?}");
        let c = r.closure.cover.minimal_skeleton();
        assert_eq!((c.n_vertices(), c.n_edges()), (3, 9));
        assert_eq!(c.weights(), vec![1, 1, 1]);
        assert_eq!(c.total_genus().unwrap(), 10);
    }

    #[test]
    fn potential_good_reduction() {
        let r = run_str("x^3", "x^4+pi^4");
        let core: Vec<u32> =
            (0..r.quotient.graph.n_vertices()).filter(|&v| r.quotient.graph.valence(v) > 1).map(|v| r.quotient.graph.vertices[v].weight).collect();
        assert_eq!(core, vec![3]);
        let s = &r.skeleton;
        assert_eq!((s.n_vertices(), s.n_edges(), s.weights()), (1, 0, vec![3]));
        quotient_checks(&r);
    }

    #[test]
    fn routes_agree() {
        for (p, q) in [("x^3", "x^3+pi^3"), ("x^3", "x^4+pi^4"), ("x", "x^2+pi"), ("pi*x+1", "x^3+pi^2*x")] {
            let r = run_str(p, q);
            let ir = closure_covering_data_inertia(&r.cubic, &opts()).unwrap();
            assert_eq!(ir.edge_preimages(), r.edge_preimages(), "{p}, {q}");
            assert_eq!(ir.vertex_preimages(), r.vertex_preimages(), "{p}, {q}");
            quotient_checks(&r);
        }
    }
}
