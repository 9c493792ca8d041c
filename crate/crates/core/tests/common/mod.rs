#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use skeleta::graph::MetricGraph;
use skeleta::kummer::superelliptic::SuperellipticOptions;
use skeleta::kummer::{superelliptic, FactoredFn, Superelliptic, SuperellipticInput};
use skeleta::s3cover::{galois_closure, S3Options, S3Result};
use skeleta::valfield::{field, parse_poly, FieldData, Padic, ValuedPoly, Q};

pub const S3_GOLDEN: [(&str, &str); 4] =
    [("x^3", "x^3+pi^3"), ("x^3", "x^4+pi^4"), ("x", "x^2+pi"), ("pi*x+1", "x^3+pi^2*x")];

pub fn fd() -> &'static FieldData {
    field(13, 1).unwrap()
}

pub fn zero() -> Padic {
    Padic::zero(fd())
}

/// c * pi^k
pub fn pim(c: i64, k: i64) -> Padic {
    Padic::from_int(fd(), c).mul(&Padic::pi_pow(fd(), k, 1))
}

/// prod (x - a) over `special` times c further roots 1, 2, ..., c.
pub fn unit_roots(special: Vec<Padic>, c: usize) -> FactoredFn {
    let mut factors: Vec<(Padic, i64)> = special.into_iter().map(|a| (a, 1)).collect();
    for i in 0..c {
        factors.push((Padic::from_int(fd(), 1 + i as i64), 1));
    }
    FactoredFn { lc: Padic::one(fd()), factors }
}

pub fn run_se(n: u64, f: FactoredFn) -> Superelliptic {
    superelliptic(n, &SuperellipticInput::Factored(f), &SuperellipticOptions::default()).unwrap()
}

pub fn poly(s: &str) -> ValuedPoly {
    parse_poly(s, fd(), "x").unwrap()
}

pub fn s3_opts() -> S3Options {
    S3Options { precision: 32, point_leaves: None }
}

pub fn closure(p: &str, q: &str) -> S3Result {
    galois_closure(&poly(p), &poly(q), &s3_opts()).unwrap()
}

pub fn banana() -> MetricGraph {
    MetricGraph::from_parts(&[0, 0], &[(0, 1, Q::from(1)), (0, 1, Q::from(1)), (0, 1, Q::from(1))])
}

pub fn sorted(mut v: Vec<u32>) -> Vec<u32> {
    v.sort();
    v
}

/// Same incidence with all weights set to zero.
pub fn unweighted(g: &MetricGraph) -> MetricGraph {
    let mut h = g.clone();
    for v in &mut h.vertices {
        v.weight = 0;
    }
    h
}

/// A random connected loopless multigraph with at most `max_v` vertices and lengths in {1, 2, 3}.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, max_v: usize) -> MetricGraph {
    let n = rng.gen_range(1..=max_v);
    let mut g = MetricGraph::from_parts(&vec![0; n], &[]);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        g.add_edge(u, v, Q::from(rng.gen_range(1..=3i64)));
    }
    if n > 1 {
        for _ in 0..rng.gen_range(0..=n) {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                g.add_edge(u, v, Q::from(rng.gen_range(1..=3i64)));
            }
        }
    }
    g
}
