use super::{
    assemble_cover, check_irreducible, covering_data, generic_genus, laplacian_of_f, tropical_divisor, CoveringData,
    CoveringGraph, FactoredFn, TropicalDivisor, VertexLocal,
};
use crate::error::{Error, Result};
use crate::graph::Potential;
use crate::septree::{separate_with, Point, SeparatingTree};
use crate::valfield::{field, roots_padic, Padic, ValuedPoly, Q};

#[derive(Clone, Debug)]
pub enum SuperellipticInput {
    Poly(ValuedPoly),
    Factored(FactoredFn),
}

#[derive(Clone, Debug)]
pub struct SuperellipticOptions {
    pub precision: i64,
    /// Length of leaves attached at the marked points, if any.
    pub point_leaves: Option<Q>,
}

impl Default for SuperellipticOptions {
    fn default() -> Self {
        SuperellipticOptions { precision: crate::valfield::DEFAULT_PREC, point_leaves: None }
    }
}

/// Everything computed for z^n = f.
#[derive(Clone, Debug)]
pub struct Superelliptic {
    pub n: u64,
    pub f: FactoredFn,
    pub tree: SeparatingTree,
    pub divisor: TropicalDivisor,
    pub phi: Potential,
    pub data: CoveringData,
    pub cover: CoveringGraph,
    /// Riemann-Hurwitz genus of the generic fibre.
    pub genus: u32,
    /// Degree of the residue field over F_p actually used.
    pub tower_degree: usize,
}

fn factor_poly(f: &ValuedPoly, prec: i64) -> Result<FactoredFn> {
    let mut g = f.clone();
    loop {
        match roots_padic(&g, prec) {
            Ok(rs) => {
                let factors = rs.into_iter().map(|(a, m)| (a, m as i64)).collect();
                return Ok(FactoredFn { lc: g.lc(), factors });
            }
            Err(Error::NoRootInResidueField(d)) => {
                let fd = g.field();
                g = g.embed(field(fd.p, fd.m * d)?);
            }
            Err(e) => return Err(e),
        }
    }
}

fn embed_factored(f: &FactoredFn, m: usize) -> Result<FactoredFn> {
    let fd = f.lc.field();
    let target = field(fd.p, fd.m * m)?;
    Ok(FactoredFn { lc: f.lc.embed(target), factors: f.factors.iter().map(|(a, k)| (a.embed(target), *k)).collect() })
}

/// Separating tree, Laplacian, covering data and the assembled cover of z^n = f.
pub fn superelliptic(n: u64, input: &SuperellipticInput, opts: &SuperellipticOptions) -> Result<Superelliptic> {
    if n < 2 {
        return Err(Error::Input("degree must be at least 2".into()));
    }
    let mut f = match input {
        SuperellipticInput::Poly(p) => {
            if p.deg() < 1 {
                return Err(Error::Input("f must be nonconstant".into()));
            }
            factor_poly(p, opts.precision)?
        }
        SuperellipticInput::Factored(f) => f.clone(),
    };
    let p = f.lc.field().p as u64;
    if n.is_multiple_of(p) {
        return Err(Error::WildExtension(n as u32));
    }
    loop {
        match run(n, &f, opts) {
            Err(Error::NoRootInResidueField(d)) if d > 1 => f = embed_factored(&f, d)?,
            r => return r,
        }
    }
}

fn run(n: u64, f: &FactoredFn, opts: &SuperellipticOptions) -> Result<Superelliptic> {
    let div = f.divisor();
    let mults: Vec<i64> = div.iter().map(|d| d.1).collect();
    check_irreducible(n, &mults)?;
    let mut points: Vec<Point> = div.iter().map(|d| d.0.clone()).collect();
    if !points.contains(&Point::Infinity) {
        points.push(Point::Infinity);
    }
    let mut tree = separate_with(&points, opts.precision)?;
    if let Some(len) = opts.point_leaves {
        tree = tree.attach_point_leaves(len)?;
    }
    let tdiv = tropical_divisor(&tree, &div)?;
    let content = f.lc.val().finite().ok_or_else(|| Error::Input("zero leading coefficient".into()))?
        + f.factors.iter().map(|(a, m)| Q::from(*m) * root_content(a)).sum::<Q>();
    let phi = laplacian_of_f(&tree, &tdiv, content)?;
    let mut local = vec![VertexLocal::default(); tree.graph.n_vertices()];
    for &(_, v, m) in &tdiv.provenance {
        local[v].marked.push(m);
    }
    let data = covering_data(n, &tree.graph, &phi, &local)?;
    let cover = assemble_cover(&tree.graph, &data, None)?;
    let genus = generic_genus(n, &mults)?;
    Ok(Superelliptic { n, f: f.clone(), tree, divisor: tdiv, phi, data, cover, genus, tower_degree: f.lc.field().m })
}

/// Gauss valuation of x - a on the unit disc.
fn root_content(a: &Padic) -> Q {
    match a.val().finite() {
        Some(v) if v < Q::from(0) => v,
        _ => Q::from(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{iso_check, MetricGraph};
    use crate::kummer::reduced_function;
    use crate::septree::Coord;
    use crate::valfield::{field, FieldData};

    fn fd() -> &'static FieldData {
        field(13, 1).unwrap()
    }

    fn pi_mul(c: i64, k: i64) -> Padic {
        Padic::from_int(fd(), c).mul(&Padic::pi_pow(fd(), k, 1))
    }

    /// f = prod (x - a) * g with g of degree c having unit, distinct residue roots.
    fn with_unit_roots(special: Vec<Padic>, c: usize) -> FactoredFn {
        let mut factors: Vec<(Padic, i64)> = special.into_iter().map(|a| (a, 1)).collect();
        for i in 0..c {
            factors.push((Padic::from_int(fd(), 1 + i as i64), 1));
        }
        FactoredFn { lc: Padic::one(fd()), factors }
    }

    fn run_f(n: u64, f: FactoredFn) -> Superelliptic {
        superelliptic(n, &SuperellipticInput::Factored(f), &SuperellipticOptions::default()).unwrap()
    }

    #[test]
    fn two_point_cluster_hyperelliptic() {
        for k in 1..=3u32 {
            let c = 2 * k as usize + 1;
            let s = run_f(2, with_unit_roots(vec![Padic::zero(fd()), pi_mul(1, 1)], c));
            assert_eq!(s.divisor.divisor.0, vec![-2, 2]);
            let expect = MetricGraph::from_parts(&[k, 0], &[(0, 1, Q::from(1)), (0, 1, Q::from(1))]);
            assert!(iso_check(&s.cover.cover, &expect).unwrap(), "k = {k}");
            assert_eq!(s.cover.cover.total_genus().unwrap() as u32, s.genus);
        }
    }

    #[test]
    fn nested_clusters_chain() {
        for k in 1..=2u32 {
            let c = 2 * k as usize;
            let s = run_f(2, with_unit_roots(vec![Padic::zero(fd()), pi_mul(1, 1), pi_mul(1, 2)], c));
            let cov = &s.cover.cover;
            assert_eq!(cov.n_vertices(), 3);
            let mut w = cov.weights();
            w.sort();
            assert_eq!(w, vec![0, 0, k]);
            let mut mult: Vec<usize> = s.cover.base.edges.iter().enumerate().map(|(e, _)| s.data.edge_preimages(e) as usize).collect();
            mult.sort();
            assert_eq!(mult, vec![1, 2]);
            assert_eq!(cov.total_genus().unwrap() as u32, s.genus);
        }
    }

    #[test]
    fn trigonal_examples() {
        for c in [2u32, 4] {
            let s = run_f(3, with_unit_roots(vec![Padic::zero(fd()), pi_mul(1, 1), pi_mul(2, 1)], c as usize));
            let expect = MetricGraph::from_parts(&[1, c - 1], &[(0, 1, Q::from(1)), (0, 1, Q::from(1)), (0, 1, Q::from(1))]);
            assert!(iso_check(&s.cover.cover, &expect).unwrap(), "c = {c}");
            assert_eq!(s.cover.cover.total_genus().unwrap() as u32, s.genus);
        }
        let special = vec![Padic::zero(fd()), pi_mul(1, 1), pi_mul(2, 1), pi_mul(1, 2), pi_mul(2, 2), pi_mul(1, 3)];
        let s = run_f(3, with_unit_roots(special, 2));
        let mut slopes: Vec<i64> = s.data.edge_slope.iter().map(|x| x.abs()).collect();
        slopes.sort();
        assert_eq!(slopes, vec![2, 4, 6]);
        let mut counts: Vec<u64> = (0..3).map(|e| s.data.edge_preimages(e)).collect();
        counts.sort();
        assert_eq!(counts, vec![1, 1, 3]);
        assert_eq!(s.cover.cover.total_genus().unwrap() as u32, s.genus);
        assert_eq!(s.genus, 2 + 5);
    }

    #[test]
    fn potential_and_reduction_match_the_tree() {
        use std::collections::BTreeMap;
        let special = vec![Padic::zero(fd()), pi_mul(1, 1), pi_mul(2, 1), pi_mul(1, 2)];
        let f = with_unit_roots(special, 2);
        let s = run_f(3, f.clone());
        let t = &s.tree;
        for v in 0..t.n_vertices() {
            let r = reduced_function(t, &f, v).unwrap();
            assert_eq!(r.phi, s.phi[v]);
            let got: BTreeMap<Coord, i64> = r.f.divisor().unwrap().into_iter().collect();
            let mut expect: BTreeMap<Coord, i64> = BTreeMap::new();
            for &(i, w, m) in &s.divisor.provenance {
                if w == v {
                    let c = if i < t.points.len() { t.reduction[i].1 } else { unreachable!() };
                    *expect.entry(c).or_default() += m;
                }
            }
            for (e, w, c) in t.directions(v) {
                let slope = (s.phi[w] - s.phi[v]) / t.graph.edges[e].length;
                *expect.entry(c).or_default() += slope.to_integer();
            }
            expect.retain(|_, m| *m != 0);
            assert_eq!(got, expect, "vertex {v}");
        }
    }

    #[test]
    fn computed_twists_on_a_tree_change_nothing() {
        let a = |c: i64, d: i64| pi_mul(c, 1).add(&pi_mul(d, 2));
        let special = vec![a(1, 0), a(1, 1), a(1, 2), a(2, 0), a(2, 1), a(2, 2)];
        let f = with_unit_roots(special, 1);
        let s = run_f(3, f.clone());
        assert!(s.data.decomposition.contains(&1));
        let t = crate::kummer::twisting_values(&s.tree, &f, &s.data).unwrap();
        let twisted = crate::kummer::assemble_cover(&s.tree.graph, &s.data, Some(&t)).unwrap();
        assert!(iso_check(&twisted.cover, &s.cover.cover).unwrap());
        let q = s.cover.quotient_by_power(0).unwrap();
        assert!(iso_check(&q.graph, &s.tree.graph).unwrap());
    }

    #[test]
    fn polynomial_input_and_tower() {
        // x^2 - 2 has no root in F_13
        let f = ValuedPoly::from_ints(fd(), &[-2, 0, 1]);
        let s = superelliptic(3, &SuperellipticInput::Poly(f.mul(&ValuedPoly::x(fd()))), &SuperellipticOptions::default()).unwrap();
        assert_eq!(s.tower_degree, 2);
        assert_eq!(s.genus, 1);
        assert_eq!(s.cover.cover.total_genus().unwrap(), 1);
    }

    #[test]
    fn reducible_and_wild_inputs_are_rejected() {
        let sq = FactoredFn { lc: Padic::one(fd()), factors: vec![(Padic::zero(fd()), 2), (Padic::one(fd()), 2)] };
        assert!(matches!(superelliptic(2, &SuperellipticInput::Factored(sq), &Default::default()), Err(Error::Input(_))));
        let f = with_unit_roots(vec![Padic::zero(fd())], 2);
        assert!(matches!(superelliptic(13, &SuperellipticInput::Factored(f), &Default::default()), Err(Error::WildExtension(13))));
    }
}
