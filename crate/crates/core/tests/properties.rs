//! Property tests for the invariants of each module.

mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skeleta::graph::{iso_check, quotient};
use skeleta::kummer::superelliptic::SuperellipticOptions;
use skeleta::kummer::{assemble_cover, superelliptic, twisting_values, FactoredFn, SuperellipticInput};
use skeleta::s3cover::{discriminant, galois_closure, inertia_case, Case, S3Options};
use skeleta::septree::{separate, Point};
use skeleta::valfield::{field, parse_series, print_series, roots_padic, Padic, Val, ValuedPoly, Q};
use skeleta::Error;

use common::*;

fn padic(e: u32, v0: i64, lead: u32, rest: Vec<u32>, exact: bool) -> Padic {
    let f = fd();
    let mut d = vec![f.from_int(lead as i64)];
    d.extend(rest.iter().map(|&x| f.from_int(x as i64)));
    let prec = (!exact).then(|| v0 + d.len() as i64 + 4);
    Padic::from_digits(f, e, v0, d, prec)
}

fn arb_padic() -> impl Strategy<Value = Padic> {
    (1u32..=3, -4i64..=4, 1u32..13, proptest::collection::vec(0u32..13, 0..6), any::<bool>())
        .prop_map(|(e, v0, lead, rest, exact)| padic(e, v0, lead, rest, exact))
}

fn arb_integral() -> impl Strategy<Value = Padic> {
    (0i64..=3, 1u32..13, proptest::collection::vec(0u32..13, 0..6)).prop_map(|(v0, lead, rest)| padic(1, v0, lead, rest, true))
}

fn fin(v: Val) -> Q {
    v.finite().expect("nonzero")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn valuation_is_multiplicative_and_ultrametric(x in arb_padic(), y in arb_padic()) {
        prop_assert_eq!(fin(x.mul(&y).val()), fin(x.val()) + fin(y.val()));
        let (vx, vy) = (fin(x.val()), fin(y.val()));
        let s = x.add(&y);
        if vx != vy {
            prop_assert_eq!(fin(s.val()), vx.min(vy));
        } else if let Val::Finite(vs) = s.val() {
            prop_assert!(vs >= vx);
        }
    }

    #[test]
    fn reduce_is_a_ring_homomorphism(x in arb_integral(), y in arb_integral()) {
        let (rx, ry) = (x.reduce().unwrap(), y.reduce().unwrap());
        prop_assert_eq!(x.add(&y).reduce().unwrap(), rx.add(&ry));
        prop_assert_eq!(x.mul(&y).reduce().unwrap(), rx.mul(&ry));
    }

    #[test]
    fn series_literals_round_trip(x in arb_padic()) {
        let back = parse_series(&print_series(&x), fd()).unwrap();
        prop_assert_eq!(print_series(&back), print_series(&x));
        prop_assert_eq!(back.val(), x.val());
        prop_assert_eq!(back.prec(), x.prec());
    }

    #[test]
    fn newton_slopes_are_root_valuations(
        planted in proptest::collection::vec((1i64..13, 0i64..4), 1..6),
    ) {
        let mut poly = ValuedPoly::one(fd());
        let mut want: Vec<Q> = Vec::new();
        for &(c, k) in &planted {
            let a = pim(c, k);
            poly = poly.mul(&ValuedPoly::new(fd(), vec![a.neg(), Padic::one(fd())]));
            want.push(Q::from(k));
        }
        let mut got: Vec<Q> = Vec::new();
        for (v, m) in poly.newton_polygon().unwrap().root_valuations() {
            got.extend(std::iter::repeat_n(v, m));
        }
        want.sort();
        got.sort();
        prop_assert_eq!(&got, &want);
        let mut from_roots: Vec<Q> = Vec::new();
        for (r, m) in roots_padic(&poly, 16).unwrap() {
            from_roots.extend(std::iter::repeat_n(fin(r.val()), m));
        }
        from_roots.sort();
        prop_assert_eq!(from_roots, want);
    }
}

// ------------------------------------------------------------------ graph

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laplacian_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_connected_graph(&mut rng, 10);
        let phi: Vec<Q> = (0..g.n_vertices()).map(|i| Q::from(6 * ((seed >> (i % 16)) as i64 % 7))).collect();
        let d = g.apply_laplacian(&phi).unwrap();
        let back = g.solve_laplacian(&d, 0).unwrap();
        prop_assert_eq!(g.apply_laplacian(&back).unwrap(), d);
    }

    #[test]
    fn genus_survives_refine_and_prune(seed in any::<u64>(), leaves in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = random_connected_graph(&mut rng, 8);
        for (i, v) in g.vertices.iter_mut().enumerate() {
            v.weight = (seed >> i) as u32 & 1;
        }
        let genus = g.total_genus().unwrap();
        if g.n_edges() > 0 {
            let l = g.edges[0].length;
            let r = g.refine(0, &[l / 2, l / 2]).unwrap();
            prop_assert_eq!(r.total_genus().unwrap(), genus);
        }
        let mut h = g.clone();
        for i in 0..leaves {
            let w = h.add_vertex(0);
            h.add_edge(i % g.n_vertices(), w, Q::from(1));
        }
        prop_assert_eq!(h.total_genus().unwrap(), genus);
        prop_assert_eq!(h.prune_leaves().total_genus().unwrap(), genus);
        prop_assert_eq!(g.minimal_skeleton().total_genus().unwrap(), genus);
    }
}

// ------------------------------------------------------------------ septree

fn arb_points() -> impl Strategy<Value = Vec<Padic>> {
    proptest::collection::vec(proptest::collection::vec(0u32..4, 1..5), 2..7).prop_map(|ds| {
        let mut pts: Vec<Padic> = Vec::new();
        for d in ds {
            let f = fd();
            let x = Padic::from_digits(f, 1, 0, d.iter().map(|&c| f.from_int(c as i64)).collect(), None);
            if !pts.iter().any(|p| p.sub(&x).is_exact_zero()) {
                pts.push(x);
            }
        }
        pts
    })
}

fn meet(tree: &skeleta::septree::SeparatingTree, mut a: usize, mut b: usize) -> usize {
    let depth = |mut v: usize| {
        let mut d = 0;
        while let Some(p) = tree.vertices[v].parent {
            v = p;
            d += 1;
        }
        d
    };
    let (mut da, mut db) = (depth(a), depth(b));
    while da > db {
        a = tree.vertices[a].parent.unwrap();
        da -= 1;
    }
    while db > da {
        b = tree.vertices[b].parent.unwrap();
        db -= 1;
    }
    while a != b {
        a = tree.vertices[a].parent.unwrap();
        b = tree.vertices[b].parent.unwrap();
    }
    a
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn tree_heights_are_pairwise_valuations(pts in arb_points()) {
        prop_assume!(pts.len() >= 2);
        let marked: Vec<Point> = pts.iter().cloned().map(Point::Finite).collect();
        let tree = separate(&marked).unwrap();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let m = meet(&tree, tree.reduction[i].0, tree.reduction[j].0);
                prop_assert_eq!(pts[i].sub(&pts[j]).val(), Val::Finite(tree.vertices[m].height));
            }
        }
    }

    #[test]
    fn tree_ignores_point_order(pts in arb_points(), seed in any::<u64>()) {
        let mut marked: Vec<Point> = pts.into_iter().map(Point::Finite).collect();
        marked.push(Point::Infinity);
        let a = separate(&marked).unwrap();
        marked.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let b = separate(&marked).unwrap();
        prop_assert!(iso_check(&a.graph, &b.graph).unwrap());
    }

    #[test]
    fn charts_reproduce_reductions(pts in arb_points()) {
        let marked: Vec<Point> = pts.iter().cloned().map(Point::Finite).collect();
        let tree = separate(&marked).unwrap();
        for (i, x) in pts.iter().enumerate() {
            let (v, c) = tree.reduction[i];
            prop_assert_eq!(tree.chart_param(v).coordinate_of(x).unwrap(), c);
        }
    }
}

// ------------------------------------------------------------------ kummer

fn arb_superelliptic() -> impl Strategy<Value = (u64, FactoredFn)> {
    (
        prop_oneof![Just(2u64), Just(3), Just(4), Just(6)],
        proptest::collection::vec((1i64..13, 1i64..=3), 1..5),
        0usize..4,
    )
        .prop_map(|(n, special, c)| {
            let mut pts: Vec<Padic> = vec![zero()];
            for (a, k) in special {
                let x = pim(a, k);
                if !pts.iter().any(|p| p.sub(&x).is_exact_zero()) {
                    pts.push(x);
                }
            }
            (n, unit_roots(pts, c))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn assembled_covers_are_harmonic_and_consistent((n, f) in arb_superelliptic()) {
        let s = match superelliptic(n, &SuperellipticInput::Factored(f.clone()), &SuperellipticOptions::default()) {
            Ok(s) => s,
            Err(Error::Input(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let cov = &s.cover;
        prop_assert!(cov.harmonic_degrees().iter().all(|&d| d == n));
        prop_assert_eq!(cov.cover.total_genus().unwrap() as u32, s.genus);
        let q = cov.quotient_by_power(1).unwrap();
        prop_assert!(iso_check(&q.graph, &cov.base).unwrap());
        // orbit-stabilizer on the graph action
        let group = cov.group();
        let orbits = quotient(&cov.cover, &group, skeleta::graph::LengthMode::Verbatim).unwrap();
        if orbits.subdivided.is_none() {
            let mut sums = vec![0usize; orbits.graph.n_edges()];
            for (e, &c) in orbits.edge_class.iter().enumerate() {
                sums[c] += group.iter().filter(|g| g.edge[e] == e).count();
            }
            prop_assert!(sums.iter().all(|&x| x == group.len()));
        }
        let t = twisting_values(&s.tree, &f, &s.data).unwrap();
        let z = fd().zeta(n).unwrap();
        for v in 0..s.tree.n_vertices() {
            let g = assemble_cover(&s.tree.graph, &s.data, Some(&t.gauge(&s.tree.graph, v, &z))).unwrap();
            prop_assert!(iso_check(&g.cover, &cov.cover).unwrap());
        }
    }
}

// ------------------------------------------------------------------ s3cover

#[test]
fn trichotomy_is_total() {
    for vp in -12..=12i64 {
        for vq in -12..=12i64 {
            for vd in -24..=24i64 {
                let ic = inertia_case(vp, vq, vd);
                let hits = [3 * vp > 2 * vq, 3 * vp < 2 * vq, 3 * vp == 2 * vq];
                assert_eq!(hits.iter().filter(|&&h| h).count(), 1);
                let expect = match ic.case {
                    Case::I => hits[0],
                    Case::II => hits[1],
                    Case::III => hits[2],
                };
                assert!(expect && [1, 2, 3].contains(&ic.order));
            }
        }
    }
}

/// Ramification index of the splitting field of w^6 + 2 sqrt(27) q w^3 - 4 p^3 over F_13((pi)).
fn closure_ramification(p: &Padic, q: &Padic) -> u64 {
    let mut f = fd();
    loop {
        let s27 = f.from_int(27).nth_root(2).expect("27 is a square mod 13");
        let (pe, qe) = (p.embed(f), q.embed(f));
        let c3 = qe.scale(&s27).mul(&Padic::from_int(f, 2));
        let c0 = pe.pow(3).mul(&Padic::from_int(f, -4));
        let z = Padic::zero(f);
        let poly = ValuedPoly::new(f, vec![c0, z.clone(), z.clone(), c3, z.clone(), z, Padic::one(f)]);
        match roots_padic(&poly, 24) {
            Ok(roots) => {
                let mut e = 1u64;
                for (r, _) in roots {
                    let re = r.e() as u64;
                    let v0 = r.v0().unwrap();
                    let mut g = re;
                    for (i, d) in r.digits().iter().enumerate() {
                        if !d.is_zero() {
                            g = num_integer::gcd(g, (v0 + i as i64).unsigned_abs());
                        }
                    }
                    e = num_integer::lcm(e, re / g.max(1));
                }
                return e;
            }
            Err(Error::NoRootInResidueField(d)) => f = field(13, f.m * d).unwrap(),
            Err(e) => panic!("{e}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(160))]

    #[test]
    fn inertia_matches_closure_oracle(a in 1i64..13, b in 1i64..13, vp in -6i64..=6, vq in -6i64..=6) {
        let p = pim(a, vp);
        let q = pim(b, vq);
        let delta = p.pow(3).mul(&Padic::from_int(fd(), 4)).add(&q.pow(2).mul(&Padic::from_int(fd(), 27)));
        let vd = delta.val();
        prop_assume!(!vd.is_infinite());
        let vd = fin(vd).to_integer();
        prop_assert_eq!(inertia_case(vp, vq, vd).order, closure_ramification(&p, &q));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn genus_ledger_holds_on_random_curves(
        pc in 1i64..13, pk in 0i64..=2, pd in 0usize..=3,
        qc in 1i64..13, qk in 0i64..=2, qd in 1usize..=4, qc0 in 1i64..13, qk0 in 1i64..=3,
    ) {
        let p = format!("{pc}*pi^{pk}*x^{pd}");
        let q = format!("x^{qd}*{qc}*pi^{qk}+{qc0}*pi^{qk0}");
        let (pp, qq) = (poly(&p), poly(&q));
        prop_assume!(!discriminant(&pp, &qq).is_zero());
        match galois_closure(&pp, &qq, &S3Options { precision: 32, point_leaves: None }) {
            Ok(r) => {
                prop_assert!(r.ledger.check().is_ok(), "{p}, {q}: {:?}", r.ledger);
                let d = &r.quadratic.cover;
                prop_assert!(iso_check(&r.closure.quotient_by_power(1).unwrap().graph, &d.cover).unwrap());
                prop_assert!(iso_check(&r.full_quotient().unwrap().graph, &r.quadratic.tree.graph).unwrap());
            }
            Err(Error::Input(_)) | Err(Error::Unsupported(_)) => {}
            Err(e) => return Err(TestCaseError::fail(format!("{p}, {q}: {e}"))),
        }
    }
}
