//! Tropical separating trees of finite marked sets in the projective line.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{GraphJson, MetricGraph};
use crate::valfield::{FfPoly, Fq, Padic, ValuedPoly, Val, Q};

/// A point of P^1(K).
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Finite(Padic),
    Infinity,
}

/// Coordinate chart: x itself, or y = 1/x around infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Chart {
    X,
    Y,
}

/// Residue coordinate on a component's projective line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    Finite(Fq),
    Infinity,
}

impl Coord {
    pub fn literal(&self) -> String {
        match self {
            Coord::Finite(a) => a.to_literal(),
            Coord::Infinity => "inf".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TreeVertex {
    pub height: Q,
    pub chart: Chart,
    /// The ball is { z : v(z - center) >= height } in the vertex's chart coordinate z.
    pub center: Padic,
    pub members: Vec<usize>,
    pub parent: Option<usize>,
    /// Coordinate of this vertex's direction on its parent's line.
    pub coord_in_parent: Option<Coord>,
}

/// Blow-up parametrization of a vertex: z = center + pi^height * t with z = x or z = 1/x.
#[derive(Clone, Debug)]
pub struct ChartParam {
    pub chart: Chart,
    pub center: Padic,
    pub height: Q,
}

impl ChartParam {
    /// Residue coordinate of a chart value z, or infinity when it lies outside the ball.
    pub fn coordinate_of(&self, z: &Padic) -> Result<Coord> {
        let d = z.sub(&self.center);
        if d.is_zero() {
            if d.prec().is_some_and(|p| p <= self.height) {
                return Err(Error::InsufficientPrecision("reduction coordinate".into()));
            }
            return Ok(Coord::Finite(z.field().zero()));
        }
        let v = d.val().finite().unwrap();
        if v < self.height {
            return Ok(Coord::Infinity);
        }
        if d.prec().is_some_and(|p| p <= self.height) {
            return Err(Error::InsufficientPrecision("reduction coordinate".into()));
        }
        Ok(Coord::Finite(d.coeff_at(self.height)))
    }

    /// Chart coordinate of a point of P^1.
    pub fn chart_value(&self, p: &Point, rel: i64) -> Result<Padic> {
        chart_value(self.chart, p, rel)
    }

    /// Pullback of (x - alpha) as Gauss valuation and reduced rational function num/den in t.
    pub fn linear_factor(&self, alpha: &Padic) -> Result<(Q, FfPoly, FfPoly)> {
        let f = alpha.field();
        let s = Padic::monomial(f.one(), self.height);
        match self.chart {
            Chart::X => {
                let (w, r) = ValuedPoly::new(f, vec![self.center.sub(alpha), s]).reduce_gauss()?;
                Ok((w, r, FfPoly::one(f)))
            }
            Chart::Y => {
                let one = Padic::one(f);
                let num = ValuedPoly::new(f, vec![one.sub(&alpha.mul(&self.center)), alpha.mul(&s).neg()]);
                let den = ValuedPoly::new(f, vec![self.center.clone(), s]);
                let (w1, r1) = num.reduce_gauss()?;
                let (w2, r2) = den.reduce_gauss()?;
                Ok((w1 - w2, r1, r2))
            }
        }
    }

    /// Pullback of a polynomial in x: Gauss valuation and reduced num/den.
    pub fn pullback_poly(&self, p: &ValuedPoly) -> Result<(Q, FfPoly, FfPoly)> {
        let f = p.field();
        let s = Padic::monomial(f.one(), self.height);
        match self.chart {
            Chart::X => {
                let (w, r) = p.compose_linear(&self.center, &s).reduce_gauss()?;
                Ok((w, r, FfPoly::one(f)))
            }
            Chart::Y => {
                let d = p.deg().max(0) as u32;
                let num = p.reversed().compose_linear(&self.center, &s);
                let den = ValuedPoly::new(f, vec![self.center.clone(), s]).pow(d);
                let (w1, r1) = num.reduce_gauss()?;
                let (w2, r2) = den.reduce_gauss()?;
                Ok((w1 - w2, r1, r2))
            }
        }
    }
}

fn chart_value(chart: Chart, p: &Point, rel: i64) -> Result<Padic> {
    match (chart, p) {
        (Chart::X, Point::Finite(a)) => Ok(a.clone()),
        (Chart::X, Point::Infinity) => Err(Error::Input("infinity has no x-coordinate".into())),
        (Chart::Y, Point::Infinity) => Ok(Padic::zero(crate::valfield::field(13, 1)?)),
        (Chart::Y, Point::Finite(a)) => {
            if a.is_zero() {
                return Err(Error::Input("zero has no y-coordinate".into()));
            }
            a.inv(rel)
        }
    }
}

/// Which chart a point's cluster lives in.
pub fn point_chart(p: &Point) -> Chart {
    match p {
        Point::Infinity => Chart::Y,
        Point::Finite(a) => match a.val() {
            Val::Finite(v) if v < Q::zero() => Chart::Y,
            _ => Chart::X,
        },
    }
}

#[derive(Clone, Debug)]
pub struct SeparatingTree {
    pub graph: MetricGraph,
    pub vertices: Vec<TreeVertex>,
    pub points: Vec<Point>,
    /// Point index -> (reduction vertex, residue coordinate there).
    pub reduction: Vec<(usize, Coord)>,
    /// For leaf vertices added by attach_point_leaves: the point they host.
    pub leaf_point: Vec<Option<usize>>,
    rel: i64,
}

#[derive(Serialize)]
struct TreeVertexJson {
    id: usize,
    chart: Chart,
    height: String,
    address: Vec<String>,
}

#[derive(Serialize)]
struct ReductionJson {
    point: String,
    vertex: usize,
    coordinate: String,
}

#[derive(Serialize)]
pub struct TreeJson {
    #[serde(flatten)]
    graph: GraphJson,
    addresses: Vec<TreeVertexJson>,
    reduction: Vec<ReductionJson>,
    separating_height: String,
}

fn zero_of(points: &[Point]) -> Option<Padic> {
    points.iter().find_map(|p| match p {
        Point::Finite(a) => Some(Padic::zero(a.field())),
        Point::Infinity => None,
    })
}

/// Build the separating tree of a marked set.
pub fn separate(points: &[Point]) -> Result<SeparatingTree> {
    separate_with(points, crate::valfield::DEFAULT_PREC)
}

pub fn separate_with(points: &[Point], rel: i64) -> Result<SeparatingTree> {
    let zero = zero_of(points);
    let coords: Vec<(Chart, Padic)> = points
        .iter()
        .map(|p| {
            let ch = point_chart(p);
            let z = match (ch, p) {
                (Chart::Y, Point::Infinity) => zero.clone().unwrap_or_else(|| Padic::zero(crate::valfield::field(13, 1).unwrap())),
                _ => chart_value(ch, p, rel)?,
            };
            Ok((ch, z))
        })
        .collect::<Result<_>>()?;
    let n = points.len();
    let mut dist = vec![vec![None::<Q>; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            if coords[i].0 != coords[j].0 {
                continue;
            }
            let d = coords[i].1.sub(&coords[j].1);
            if d.is_zero() {
                return Err(if d.is_exact() { Error::DuplicatePoint } else { Error::InsufficientPrecision("points agree to full precision".into()) });
            }
            let v = d.val().finite().unwrap();
            dist[i][j] = Some(v);
            dist[j][i] = Some(v);
        }
    }
    let mut clusters: Vec<(Chart, Q, Vec<usize>)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let Some(h) = dist[i][j] else { continue };
            if h <= Q::zero() {
                continue;
            }
            let mut b: Vec<usize> = (0..n).filter(|&k| k == i || dist[i][k].is_some_and(|d| d >= h)).collect();
            b.sort();
            let depth = b
                .iter()
                .flat_map(|&x| b.iter().filter(move |&&y| y > x).map(move |&y| (x, y)))
                .map(|(x, y)| dist[x][y].unwrap())
                .min()
                .unwrap();
            if !clusters.iter().any(|c| c.2 == b) {
                clusters.push((coords[i].0, depth, b));
            }
        }
    }
    clusters.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
    let f = zero.as_ref().map(|z| z.field()).unwrap_or(crate::valfield::field(13, 1)?);
    let mut vertices = vec![TreeVertex {
        height: Q::zero(),
        chart: Chart::X,
        center: Padic::zero(f),
        members: (0..n).collect(),
        parent: None,
        coord_in_parent: None,
    }];
    let mut graph = MetricGraph::new();
    graph.add_labeled(0, "root");
    for (ch, depth, members) in &clusters {
        let first = &coords[members[0]].1;
        let center = first.truncate_below(*depth);
        let parent = clusters
            .iter()
            .enumerate()
            .filter(|(_, c)| c.0 == *ch && c.2.len() > members.len() && members.iter().all(|m| c.2.contains(m)))
            .min_by_key(|(_, c)| c.2.len())
            .map(|(k, _)| k + 1)
            .unwrap_or(0);
        vertices.push(TreeVertex { height: *depth, chart: *ch, center, members: members.clone(), parent: Some(parent), coord_in_parent: None });
        graph.add_vertex(0);
    }
    for v in 1..vertices.len() {
        let p = vertices[v].parent.unwrap();
        let ph = if p == 0 { Q::zero() } else { vertices[p].height };
        let coord = if p == 0 && vertices[v].chart == Chart::Y {
            Coord::Infinity
        } else {
            param_of(&vertices[p]).coordinate_of(&vertices[v].center)?
        };
        vertices[v].coord_in_parent = Some(coord);
        graph.add_edge(p, v, vertices[v].height - ph);
    }
    let mut tree = SeparatingTree { graph, vertices, points: points.to_vec(), reduction: vec![], leaf_point: vec![], rel };
    tree.leaf_point = vec![None; tree.vertices.len()];
    tree.reduction = (0..n).map(|i| tree.reduce_indexed(i, &coords[i])).collect::<Result<_>>()?;
    Ok(tree)
}

fn param_of(v: &TreeVertex) -> ChartParam {
    ChartParam { chart: v.chart, center: v.center.clone(), height: v.height }
}

impl SeparatingTree {
    pub fn root(&self) -> usize {
        0
    }
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn chart_param(&self, v: usize) -> ChartParam {
        param_of(&self.vertices[v])
    }
    pub fn children(&self, v: usize) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&w| self.vertices[w].parent == Some(v)).collect()
    }
    /// Edge joining v to its parent.
    pub fn parent_edge(&self, v: usize) -> Option<usize> {
        let p = self.vertices[v].parent?;
        self.graph.edges.iter().position(|e| (e.u == p && e.v == v) || (e.u == v && e.v == p))
    }
    /// Directions at v: (edge, neighbour, coordinate of the edge point on v's line).
    pub fn directions(&self, v: usize) -> Vec<(usize, usize, Coord)> {
        let mut out = Vec::new();
        if let (Some(p), Some(e)) = (self.vertices[v].parent, self.parent_edge(v)) {
            let _ = p;
            out.push((e, self.vertices[v].parent.unwrap(), Coord::Infinity));
        }
        for w in self.children(v) {
            out.push((self.parent_edge(w).unwrap(), w, self.vertices[w].coord_in_parent.unwrap()));
        }
        out
    }
    /// Deepest height among vertices.
    pub fn separating_height(&self) -> Q {
        self.vertices.iter().map(|v| v.height).max().unwrap_or(Q::zero())
    }

    fn reduce_indexed(&self, i: usize, (ch, z): &(Chart, Padic)) -> Result<(usize, Coord)> {
        let best = (1..self.vertices.len())
            .filter(|&v| self.vertices[v].chart == *ch && self.vertices[v].members.contains(&i))
            .max_by(|&a, &b| self.vertices[a].height.cmp(&self.vertices[b].height).then(Ordering::Equal));
        match best {
            Some(v) => Ok((v, self.chart_param(v).coordinate_of(z)?)),
            None => match ch {
                Chart::X => Ok((0, self.chart_param(0).coordinate_of(z)?)),
                Chart::Y => Ok((0, Coord::Infinity)),
            },
        }
    }

    /// Deepest vertex whose ball contains the point, with its residue coordinate there.
    pub fn reduction_vertex(&self, p: &Point) -> Result<(usize, Coord)> {
        let ch = point_chart(p);
        let z = match p {
            Point::Infinity => Padic::zero(self.vertices[0].center.field()),
            _ => chart_value(ch, p, self.rel)?,
        };
        let mut cur = 0usize;
        loop {
            let next = self.children(cur).into_iter().find(|&w| {
                let tv = &self.vertices[w];
                tv.chart == ch && self.leaf_point[w].is_none() && {
                    let d = z.sub(&tv.center);
                    d.is_zero() || d.val().finite().is_some_and(|v| v >= tv.height)
                }
            });
            match next {
                Some(w) => {
                    let d = z.sub(&self.vertices[w].center);
                    if d.is_zero() && d.prec().is_some_and(|pr| pr <= self.vertices[w].height) {
                        return Err(Error::InsufficientPrecision("reduction vertex".into()));
                    }
                    cur = w;
                }
                None => break,
            }
        }
        if cur == 0 && ch == Chart::Y {
            return Ok((0, Coord::Infinity));
        }
        Ok((cur, self.chart_param(cur).coordinate_of(&z)?))
    }

    /// Attach a weight-0 leaf at every marked point.
    pub fn attach_point_leaves(&self, len: Q) -> Result<SeparatingTree> {
        let all: Vec<usize> = (0..self.points.len()).collect();
        self.attach_leaves_at(&all, len)
    }

    /// Attach a weight-0 leaf of the given length at each chosen marked point.
    pub fn attach_leaves_at(&self, which: &[usize], len: Q) -> Result<SeparatingTree> {
        if len <= Q::zero() {
            return Err(Error::Input("leaf length must be positive".into()));
        }
        let mut t = self.clone();
        for &i in which {
            let (v, coord) = self.reduction[i];
            let ch = point_chart(&self.points[i]);
            let z = match &self.points[i] {
                Point::Infinity => Padic::zero(self.vertices[0].center.field()),
                p => chart_value(ch, p, self.rel)?,
            };
            let base_h = if v == 0 { Q::zero() } else { self.vertices[v].height };
            let height = base_h + len;
            if z.prec().is_some_and(|p| p <= height) {
                return Err(Error::InsufficientPrecision("point leaf".into()));
            }
            let center = z.truncate_below(height);
            let w = t.graph.add_vertex(0);
            t.graph.add_edge(v, w, len);
            t.vertices.push(TreeVertex { height, chart: ch, center, members: vec![i], parent: Some(v), coord_in_parent: Some(coord) });
            t.leaf_point.push(Some(i));
            t.reduction[i] = (w, Coord::Finite(z.coeff_at(height)));
        }
        Ok(t)
    }

    pub fn to_json(&self) -> TreeJson {
        let addresses = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| TreeVertexJson {
                id: i,
                chart: v.chart,
                height: v.height.to_string(),
                address: address_terms(&v.center),
            })
            .collect();
        let reduction = self
            .reduction
            .iter()
            .enumerate()
            .map(|(i, (v, c))| ReductionJson {
                point: match &self.points[i] {
                    Point::Infinity => "inf".into(),
                    Point::Finite(a) => crate::valfield::print_series(a),
                },
                vertex: *v,
                coordinate: c.literal(),
            })
            .collect();
        TreeJson {
            graph: crate::graph::to_json(&self.graph),
            addresses,
            reduction,
            separating_height: self.separating_height().to_string(),
        }
    }
}

fn address_terms(c: &Padic) -> Vec<String> {
    let e = c.e() as i64;
    let v0 = c.v0().unwrap_or(0);
    c.digits()
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(k, a)| {
            let q = Q::new(v0 + k as i64, e);
            if q.is_zero() {
                a.to_literal()
            } else if q.is_one() {
                format!("{}*pi", a.to_literal())
            } else {
                format!("{}*pi^({})", a.to_literal(), q)
            }
        })
        .collect()
}
