//! Values checked against independent brute-force computations.

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skeleta::graph::{GraphDivisor, MetricGraph};
use skeleta::valfield::{roots_padic, Padic, Val, ValuedPoly, Q};

use common::*;

#[test]
fn planted_cubic_roots_resubstitute() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let target = 20;
    for _ in 0..40 {
        let mut f = ValuedPoly::one(fd());
        for _ in 0..3 {
            let a = pim(rng.gen_range(1..13), rng.gen_range(0..3)).add(&pim(rng.gen_range(0..13), rng.gen_range(3..6)));
            f = f.mul(&ValuedPoly::new(fd(), vec![a.neg(), Padic::one(fd())]));
        }
        let roots = roots_padic(&f, target).unwrap();
        assert_eq!(roots.iter().map(|r| r.1).sum::<usize>(), 3);
        for (r, m) in roots {
            match f.eval(&r).val() {
                Val::Infinity => {}
                Val::Finite(v) => assert!(v >= Q::from(target) * Q::from(m as i64), "{v}"),
            }
        }
    }
}

#[test]
fn banana_unit_divisor_is_not_principal() {
    // every integral potential up to constants, within a window large enough to hit any slope pattern
    let g = banana();
    let target = GraphDivisor(vec![1, -1]);
    let hit = (-30..=30i64).any(|a| g.apply_laplacian(&[Q::from(a), Q::from(0)]).unwrap() == target);
    assert!(!hit);
    assert_eq!(g.solve_laplacian(&target, 1), Err(skeleta::Error::NotPrincipal));
    assert_eq!(g.jacobian().unwrap().order, 3);
}

#[test]
fn cycle_jacobians_match_tree_counts() {
    for n in 2..=8usize {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, Q::from(1))).collect();
        let g = MetricGraph::from_parts(&vec![0; n], &edges);
        let brute = (0u32..1 << n)
            .filter(|mask| mask.count_ones() as usize == n - 1 && connects(&g, *mask))
            .count() as u128;
        let jac = g.jacobian().unwrap();
        assert_eq!(jac.order, brute);
        assert_eq!(jac.factors, vec![n as u128]);
    }
}

fn connects(g: &MetricGraph, mask: u32) -> bool {
    let mut seen = vec![false; g.n_vertices()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for (i, e) in g.edges.iter().enumerate() {
            if mask >> i & 1 == 1 && (e.u == x || e.v == x) {
                let y = e.other(x);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}
