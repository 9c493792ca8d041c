//! The quadratic subcover y^2 = Delta and the divisor of w^3 = y - sqrt(27) q on it.

use std::collections::BTreeMap;

use super::{CubicCover, S3Options};
use crate::error::{Error, Result};
use crate::graph::{GraphDivisor, Potential};
use crate::kummer::hyperelliptic::{HFun, Hyperelliptic};
use crate::kummer::{
    assemble_cover, covering_data, laplacian_of_f, tropical_divisor, CoveringData, CoveringGraph, RatFn, VertexLocal,
};
use crate::septree::{separate_with, Coord, SeparatingTree};
use crate::valfield::{FfPoly, Fq, Q};

/// y' = y / pi^(phi_Delta / 2) on a component of the quadratic cover.
#[derive(Clone, Debug)]
pub enum Sheet {
    /// A rational sheet: y' = sign * s.
    Split { sign: i64, s: RatFn },
    /// y' = s * Y on Y^2 = H.
    Curve { curve: Hyperelliptic, s: RatFn },
}

/// The reduced function w^3 on a component.
#[derive(Clone, Debug)]
pub enum DFun {
    Rational(RatFn),
    Curve(HFun),
}

#[derive(Clone, Debug)]
pub struct VertexReduction {
    /// Gauss valuations of p, q, Delta.
    pub phi: [Q; 3],
    pub red: [RatFn; 3],
}

#[derive(Clone, Debug)]
pub struct QuadraticCover {
    pub tree: SeparatingTree,
    pub reductions: Vec<VertexReduction>,
    pub data: CoveringData,
    pub cover: CoveringGraph,
    /// Per vertex of the cover: tree vertex and sheet.
    pub sheets: Vec<Sheet>,
}

#[derive(Clone, Debug)]
pub struct DComponent {
    pub tree_vertex: usize,
    pub psi: Q,
    pub f: DFun,
}

#[derive(Clone, Debug)]
pub struct WDivisor {
    pub components: Vec<DComponent>,
    /// Valuation of y - sqrt(27) q on the vertices of the quadratic cover.
    pub psi: Potential,
    /// Orders at the marked points, and decomposition orders of positive-genus components.
    pub local: Vec<VertexLocal>,
    /// Specialization of div(y - sqrt(27) q).
    pub divisor: GraphDivisor,
}

pub(crate) fn sqrt27(f: &'static crate::valfield::FieldData) -> Result<Fq> {
    f.from_int(27).nth_root(2).ok_or(Error::NoRootInResidueField(2))
}

fn reduce_at(tree: &SeparatingTree, v: usize, f: &crate::valfield::ValuedPoly) -> Result<(Q, RatFn)> {
    let (w, num, den) = tree.chart_param(v).pullback_poly(f)?;
    Ok((w, RatFn::new(num, den)))
}

/// First cover vertex over each base vertex.
pub(crate) fn fiber_starts(cov: &CoveringGraph) -> (Vec<usize>, Vec<usize>) {
    let mut vs = vec![usize::MAX; cov.base.n_vertices()];
    for (i, &v) in cov.vertex_map.iter().enumerate() {
        vs[v] = vs[v].min(i);
    }
    let mut es = vec![usize::MAX; cov.base.n_edges()];
    for (i, &e) in cov.edge_map.iter().enumerate() {
        es[e] = es[e].min(i);
    }
    (vs, es)
}

/// Delta-bar = S^2 * H with H squarefree (H a constant on split vertices).
fn square_split(d: &RatFn) -> Result<(RatFn, FfPoly)> {
    let f = d.field();
    let mut s = RatFn::one(f);
    for (c, k) in d.divisor()? {
        if let Coord::Finite(a) = c {
            let lin = RatFn::poly(FfPoly::linear(a));
            s = s.mul(&lin.powi(k.div_euclid(2)));
        }
    }
    let h = d.div(&s.mul(&s)).ok_or_else(|| Error::Inconsistent("zero discriminant reduction".into()))?;
    if h.den.deg() != 0 {
        return Err(Error::Inconsistent("square part left a pole".into()));
    }
    let h = h.num.scale(&h.den.lc().inv().unwrap());
    Ok((s, h))
}

fn build_tree(cc: &CubicCover, opts: &S3Options) -> Result<SeparatingTree> {
    let tree = separate_with(&cc.points, opts.precision).map_err(|e| match e {
        Error::DuplicatePoint => Error::Input("p and q share a factor".into()),
        e => e,
    })?;
    match opts.point_leaves {
        Some(len) => tree.attach_point_leaves(len),
        None => Ok(tree),
    }
}

/// Sigma(D) for y^2 = Delta over the separating tree of Supp(p, q, Delta) and infinity.
pub fn quadratic_subcover(cc: &CubicCover, opts: &S3Options) -> Result<QuadraticCover> {
    let tree = build_tree(cc, opts)?;
    let mut reductions = Vec::new();
    for v in 0..tree.n_vertices() {
        let (a, ra) = reduce_at(&tree, v, &cc.p)?;
        let (b, rb) = reduce_at(&tree, v, &cc.q)?;
        let (c, rc) = reduce_at(&tree, v, &cc.delta)?;
        reductions.push(VertexReduction { phi: [a, b, c], red: [ra, rb, rc] });
    }
    let mut phis: [Potential; 3] = Default::default();
    for (k, phi) in phis.iter_mut().enumerate() {
        let div: Vec<_> = cc.points.iter().zip(&cc.table).map(|(p, row)| (p.clone(), row[k])).collect();
        let tdiv = tropical_divisor(&tree, &div)?;
        *phi = laplacian_of_f(&tree, &tdiv, reductions[tree.root()].phi[k])?;
        if phi.iter().zip(&reductions).any(|(x, r)| *x != r.phi[k]) {
            return Err(Error::Inconsistent("Laplacian potential differs from the Gauss valuation".into()));
        }
    }
    let mut local = vec![VertexLocal::default(); tree.n_vertices()];
    for (i, row) in cc.table.iter().enumerate() {
        if row[2] != 0 {
            local[tree.reduction[i].0].marked.push(row[2]);
        }
    }
    let data = covering_data(2, &tree.graph, &phis[2], &local)?;
    let cover = assemble_cover(&tree.graph, &data, None)?;

    let f = cc.field();
    let s27 = sqrt27(f)?;
    let mut base_sheet: Vec<(RatFn, Option<Hyperelliptic>)> = Vec::new();
    for (v, r) in reductions.iter().enumerate() {
        let (s, h) = square_split(&r.red[2])?;
        if data.vertex_preimages(v) == 2 {
            if h.deg() != 0 {
                return Err(Error::Inconsistent(format!("vertex {v} splits but Delta is not a square")));
            }
            let canonical = r.red[1].mul(&r.red[1]).scale(&f.from_int(27));
            let s = if r.phi[2] == r.phi[1] * Q::from(2) && canonical == r.red[2] {
                r.red[1].scale(&s27)
            } else {
                let c = h.lc().nth_root(2).ok_or(Error::NoRootInResidueField(2))?;
                s.scale(&c)
            };
            base_sheet.push((s, None));
        } else {
            base_sheet.push((s, Some(Hyperelliptic::new(h)?)));
        }
    }
    // Continue sheet signs across edges joining two split vertices.
    let mut flip = vec![1i64; tree.n_vertices()];
    let mut order: Vec<usize> = (0..tree.n_vertices()).collect();
    order.sort_by_key(|&v| depth(&tree, v));
    for &v in &order {
        let Some(u) = tree.vertices[v].parent else { continue };
        if base_sheet[u].1.is_some() || base_sheet[v].1.is_some() {
            continue;
        }
        let at = tree.vertices[v].coord_in_parent.expect("child coordinate");
        let ratio = base_sheet[u].0.lead(&at).div(&base_sheet[v].0.lead(&Coord::Infinity)).unwrap();
        flip[v] = flip[u]
            * if ratio.is_one() {
                1
            } else if ratio == f.from_int(-1) {
                -1
            } else {
                return Err(Error::Inconsistent(format!("sheet continuation at vertex {v}")));
            };
    }
    let (starts, _) = fiber_starts(&cover);
    let sheets = cover
        .vertex_map
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let (s, curve) = &base_sheet[v];
            match curve {
                Some(c) => Sheet::Curve { curve: c.clone(), s: s.clone() },
                None => {
                    let j = (i - starts[v]) as i64;
                    Sheet::Split { sign: flip[v] * if j == 0 { 1 } else { -1 }, s: s.clone() }
                }
            }
        })
        .collect();
    Ok(QuadraticCover { tree, reductions, data, cover, sheets })
}

fn depth(tree: &SeparatingTree, mut v: usize) -> usize {
    let mut d = 0;
    while let Some(u) = tree.vertices[v].parent {
        v = u;
        d += 1;
    }
    d
}

/// Valuation and reduction of y - sqrt(27) q on one sheet.
fn w_function(sheet: &Sheet, r: &VertexReduction, s27: &Fq) -> Result<(Q, DFun)> {
    let f = s27.field();
    let [fp, fq, fd] = r.phi;
    let half = fd / Q::from(2);
    let cq = r.red[1].scale(s27);
    let zero = RatFn::poly(FfPoly::zero(f));
    Ok(match sheet {
        Sheet::Split { sign, s } => {
            let y = s.scale(&f.from_int(*sign));
            if half < fq {
                (half, DFun::Rational(y))
            } else if half > fq {
                (fq, DFun::Rational(cq.neg()))
            } else {
                let w = y.sub(&cq);
                if !w.is_zero() {
                    (fq, DFun::Rational(w))
                } else {
                    // w^3 = 4 p^3 / (y + sqrt(27) q) on the sheet where y and sqrt(27) q cancel
                    let num = r.red[0].powi(3).scale(&f.from_int(4));
                    let den = cq.scale(&f.from_int(2));
                    let w = num.div(&den).ok_or_else(|| Error::Inconsistent("q reduces to zero".into()))?;
                    (fp * Q::from(3) - fq, DFun::Rational(w))
                }
            }
        }
        Sheet::Curve { s, .. } => {
            if half < fq {
                (half, DFun::Curve(HFun { a: zero, b: s.clone() }))
            } else if half > fq {
                (fq, DFun::Curve(HFun { a: cq.neg(), b: zero }))
            } else {
                (fq, DFun::Curve(HFun { a: cq.neg(), b: s.clone() }))
            }
        }
    })
}

/// Orders of the reduced w^3 at the points of a component over a residue coordinate.
pub(crate) fn orders_over(sheet: &Sheet, fun: &DFun, c: &Coord) -> Result<Vec<i64>> {
    match (sheet, fun) {
        (_, DFun::Rational(r)) => Ok(vec![r.ord(c)]),
        (Sheet::Curve { curve, .. }, DFun::Curve(h)) => {
            Ok(curve.points_above(c)?.iter().map(|p| curve.ord(h, p)).collect())
        }
        _ => Err(Error::Inconsistent("function does not match its sheet".into())),
    }
}

fn support(sheet: &Sheet, fun: &DFun) -> Result<Vec<Coord>> {
    match (sheet, fun) {
        (_, DFun::Rational(r)) => Ok(r.divisor()?.into_iter().map(|x| x.0).collect()),
        (Sheet::Curve { curve, .. }, DFun::Curve(h)) => {
            Ok(curve.divisor(h)?.iter().map(|(p, _)| Hyperelliptic::base_coord(p)).collect())
        }
        _ => Err(Error::Inconsistent("function does not match its sheet".into())),
    }
}

/// Divisor of y - sqrt(27) q on Sigma(D), its potential, and the local data for the cube-root cover.
pub fn w_divisor(cc: &CubicCover, qc: &QuadraticCover) -> Result<WDivisor> {
    let f = cc.field();
    let s27 = sqrt27(f)?;
    let tree = &qc.tree;
    let dgraph = &qc.cover.cover;
    let mut components = Vec::new();
    for (i, sheet) in qc.sheets.iter().enumerate() {
        let v = qc.cover.vertex_map[i];
        let (psi, fun) = w_function(sheet, &qc.reductions[v], &s27)?;
        components.push(DComponent { tree_vertex: v, psi, f: fun });
    }
    let psi: Potential = components.iter().map(|c| c.psi).collect();
    let mut local = vec![VertexLocal::default(); dgraph.n_vertices()];
    let mut divisor = GraphDivisor::zero(dgraph.n_vertices());
    for (i, comp) in components.iter().enumerate() {
        let v = comp.tree_vertex;
        let sheet = &qc.sheets[i];
        let mut special: Vec<Coord> = Vec::new();
        for (k, &(w, c)) in tree.reduction.iter().enumerate() {
            if w == v && cc.table.get(k).is_some() {
                let ords = orders_over(sheet, &comp.f, &c)?;
                divisor.0[i] += ords.iter().sum::<i64>();
                local[i].marked.extend(ords);
                special.push(c);
            }
        }
        for (e, _, c) in tree.directions(v) {
            let mut ords = orders_over(sheet, &comp.f, &c)?;
            let mut slopes: Vec<i64> = Vec::new();
            for (de, ed) in dgraph.edges.iter().enumerate() {
                if qc.cover.edge_map[de] != e || (ed.u != i && ed.v != i) {
                    continue;
                }
                let other = ed.other(i);
                let s = (psi[other] - psi[i]) / ed.length;
                if !s.is_integer() {
                    return Err(Error::NonIntegralSlope(de));
                }
                slopes.push(s.to_integer());
            }
            ords.sort();
            slopes.sort();
            if ords != slopes {
                return Err(Error::Inconsistent(format!(
                    "orders {ords:?} of w^3 on component {i} disagree with slopes {slopes:?}"
                )));
            }
            special.push(c);
        }
        for c in support(sheet, &comp.f)? {
            if !special.contains(&c) {
                return Err(Error::Inconsistent(format!("w^3 on component {i} vanishes off the special points")));
            }
        }
        if let (Sheet::Curve { curve, .. }, DFun::Curve(h)) = (sheet, &comp.f) {
            if curve.genus() > 0 {
                local[i].decomposition = Some(crate::kummer::hyperelliptic::decomposition_order(3, curve, h)?);
            }
        }
    }
    if dgraph.apply_laplacian(&psi)? != divisor {
        return Err(Error::Inconsistent("Laplacian of the w-potential is not the specialized divisor".into()));
    }
    Ok(WDivisor { components, psi, local, divisor })
}

/// Multiset of orders of w^3 over each special coordinate, keyed for inspection.
pub fn order_profile(cc: &CubicCover, qc: &QuadraticCover, wd: &WDivisor) -> Result<Vec<BTreeMap<Coord, Vec<i64>>>> {
    let _ = cc;
    let mut out = Vec::new();
    for (i, comp) in wd.components.iter().enumerate() {
        let mut m = BTreeMap::new();
        let v = comp.tree_vertex;
        let mut coords: Vec<Coord> = qc.tree.reduction.iter().filter(|r| r.0 == v).map(|r| r.1).collect();
        coords.extend(qc.tree.directions(v).into_iter().map(|d| d.2));
        for c in coords {
            m.insert(c, orders_over(&qc.sheets[i], &comp.f, &c)?);
        }
        out.push(m);
    }
    Ok(out)
}
