use std::collections::BTreeMap;

use super::MetricGraph;
use crate::error::{Error, Result};
use crate::valfield::Q;

pub const ISO_EDGE_LIMIT: usize = 64;

/// Relabeling-invariant encoding of a weighted metric graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub weights: Vec<u32>,
    pub edges: Vec<(usize, usize, Q)>,
}

type Sig = (usize, Vec<(Q, usize, bool)>);

fn refine(g: &MetricGraph, adj: &[Vec<(usize, Q, bool)>], mut colors: Vec<usize>) -> Vec<usize> {
    let mut classes = count_classes(&colors);
    loop {
        let sigs: Vec<Sig> = (0..g.vertices.len())
            .map(|v| {
                let mut s: Vec<(Q, usize, bool)> = adj[v].iter().map(|&(w, l, lp)| (l, colors[w], lp)).collect();
                s.sort();
                (colors[v], s)
            })
            .collect();
        colors = rank(&sigs);
        let c = count_classes(&colors);
        if c == classes {
            return colors;
        }
        classes = c;
    }
}

fn rank<T: Ord + Clone>(keys: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).unwrap()).collect()
}

fn count_classes(c: &[usize]) -> usize {
    let mut v = c.to_vec();
    v.sort();
    v.dedup();
    v.len()
}

fn encode(g: &MetricGraph, perm: &[usize]) -> CanonicalForm {
    let n = g.vertices.len();
    let mut weights = vec![0; n];
    for (v, &p) in perm.iter().enumerate() {
        weights[p] = g.vertices[v].weight;
    }
    let mut edges: Vec<(usize, usize, Q)> = g
        .edges
        .iter()
        .map(|e| {
            let (a, b) = (perm[e.u], perm[e.v]);
            (a.min(b), a.max(b), e.length)
        })
        .collect();
    edges.sort();
    CanonicalForm { weights, edges }
}

fn search(
    g: &MetricGraph,
    adj: &[Vec<(usize, Q, bool)>],
    colors: Vec<usize>,
    best: &mut Option<(CanonicalForm, Vec<usize>)>,
) {
    let colors = refine(g, adj, colors);
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, &c) in colors.iter().enumerate() {
        cells.entry(c).or_default().push(v);
    }
    let target = cells.values().find(|c| c.len() > 1).cloned();
    match target {
        None => {
            let form = encode(g, &colors);
            if best.as_ref().is_none_or(|(b, _)| form < *b) {
                *best = Some((form, colors));
            }
        }
        Some(cell) => {
            let mut tried: Vec<usize> = Vec::new();
            for &v in &cell {
                // swapping v with an already tried twin gives an isomorphic subtree
                if tried.iter().any(|&u| swaps_to_self(g, u, v)) {
                    continue;
                }
                tried.push(v);
                let keys: Vec<(usize, usize)> =
                    colors.iter().enumerate().map(|(w, &c)| (c, usize::from(w != v))).collect();
                search(g, adj, rank(&keys), best);
            }
        }
    }
}

fn swaps_to_self(g: &MetricGraph, a: usize, b: usize) -> bool {
    let sw = |x: usize| if x == a { b } else if x == b { a } else { x };
    let key = |u: usize, v: usize, l: Q| (u.min(v), u.max(v), l);
    let mut orig: Vec<_> = g.edges.iter().map(|e| key(e.u, e.v, e.length)).collect();
    let mut moved: Vec<_> = g.edges.iter().map(|e| key(sw(e.u), sw(e.v), e.length)).collect();
    orig.sort();
    moved.sort();
    orig == moved && g.vertices[a].weight == g.vertices[b].weight
}

/// Canonical form and the relabeling (old index -> canonical index) achieving it.
pub fn canonical_form(g: &MetricGraph) -> (CanonicalForm, Vec<usize>) {
    let n = g.vertices.len();
    if n == 0 {
        return (CanonicalForm { weights: vec![], edges: vec![] }, vec![]);
    }
    let mut adj = vec![Vec::new(); n];
    for e in &g.edges {
        if e.is_loop() {
            adj[e.u].push((e.u, e.length, true));
        } else {
            adj[e.u].push((e.v, e.length, false));
            adj[e.v].push((e.u, e.length, false));
        }
    }
    let init = rank(&g.vertices.iter().map(|v| v.weight).collect::<Vec<_>>());
    let mut best = None;
    search(g, &adj, init, &mut best);
    best.unwrap()
}

/// Isomorphism preserving incidence, lengths and weights.
pub fn iso_check(a: &MetricGraph, b: &MetricGraph) -> Result<bool> {
    for g in [a, b] {
        if g.edges.len() > ISO_EDGE_LIMIT {
            return Err(Error::TooLarge(g.edges.len()));
        }
    }
    if a.vertices.len() != b.vertices.len() || a.edges.len() != b.edges.len() {
        return Ok(false);
    }
    Ok(canonical_form(a).0 == canonical_form(b).0)
}

impl MetricGraph {
    /// Same graph relabeled into canonical vertex order, edges sorted.
    pub fn canonicalized(&self) -> MetricGraph {
        let (form, perm) = canonical_form(self);
        let mut g = MetricGraph::new();
        let mut inv = vec![0; perm.len()];
        for (v, &p) in perm.iter().enumerate() {
            inv[p] = v;
        }
        for &old in &inv {
            g.vertices.push(self.vertices[old].clone());
        }
        for (u, v, l) in form.edges {
            g.add_edge(u, v, l);
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn cycle(n: usize, offset: usize) -> Vec<(usize, usize, Q)> {
        (0..n).map(|i| (offset + i, offset + (i + 1) % n, Q::one())).collect()
    }

    #[test]
    fn relabeled_graph_is_isomorphic() {
        let g = MetricGraph::from_parts(&[1, 0, 2], &[(0, 1, Q::one()), (1, 2, Q::new(1, 2)), (2, 0, Q::from(3))]);
        let h = MetricGraph::from_parts(&[2, 1, 0], &[(1, 2, Q::one()), (2, 0, Q::new(1, 2)), (0, 1, Q::from(3))]);
        assert!(iso_check(&g, &h).unwrap());
        let k = MetricGraph::from_parts(&[2, 1, 0], &[(1, 2, Q::one()), (2, 0, Q::from(3)), (0, 1, Q::new(1, 2))]);
        assert!(!iso_check(&g, &k).unwrap());
    }

    #[test]
    fn banana_vs_cycle_plus_edge() {
        let banana = MetricGraph::from_parts(&[0, 0], &[(0, 1, Q::one()), (0, 1, Q::one()), (0, 1, Q::one())]);
        let other = MetricGraph::from_parts(&[0, 0], &[(0, 1, Q::one()), (0, 1, Q::one()), (1, 1, Q::one())]);
        assert!(!iso_check(&banana, &other).unwrap());
    }

    #[test]
    fn six_cycle_vs_two_triangles() {
        let six = MetricGraph::from_parts(&[0; 6], &cycle(6, 0));
        let mut e = cycle(3, 0);
        e.extend(cycle(3, 3));
        let two = MetricGraph::from_parts(&[0; 6], &e);
        assert!(!iso_check(&six, &two).unwrap());
        assert!(iso_check(&six, &six.canonicalized()).unwrap());
    }

    #[test]
    fn wide_star_is_fast() {
        let edges: Vec<_> = (1..=40).map(|i| (0, i, Q::one())).collect();
        let g = MetricGraph::from_parts(&[0; 41], &edges);
        let mut h = g.clone();
        h.vertices.swap(0, 7);
        for e in &mut h.edges {
            for x in [&mut e.u, &mut e.v] {
                *x = match *x {
                    0 => 7,
                    7 => 0,
                    y => y,
                };
            }
        }
        assert!(iso_check(&g, &h).unwrap());
    }

    proptest::proptest! {
        #[test]
        fn relabeling_preserves_form(
            edges in proptest::collection::vec((0usize..6, 0usize..6, 1i64..3), 0..10),
            weights in proptest::collection::vec(0u32..2, 6),
            seed in proptest::prelude::any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let parts: Vec<_> = edges.iter().map(|&(u, v, l)| (u, v, Q::from(l))).collect();
            let g = MetricGraph::from_parts(&weights, &parts);
            let mut perm: Vec<usize> = (0..6).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let mut w2 = vec![0; 6];
            for v in 0..6 {
                w2[perm[v]] = weights[v];
            }
            let p2: Vec<_> = edges.iter().rev().map(|&(u, v, l)| (perm[v], perm[u], Q::from(l))).collect();
            let h = MetricGraph::from_parts(&w2, &p2);
            proptest::prop_assert_eq!(canonical_form(&g).0, canonical_form(&h).0);
        }
    }
}
