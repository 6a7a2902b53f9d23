use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::sample::Index;
use tropskel::potential::solve_slope;
use tropskel::skeleton::{build_tate_skeleton, Edge, Ray, SkeletonKind, Tangent, Vertex};
use tropskel::tropicalize::trop_map;
use tropskel::{Divisor, Error, Rat, Skeleton};

fn vertex(i: usize) -> Vertex {
    Vertex { label: format!("v{i}"), ball: None, position: None }
}

/// A tree with `parents.len() + 1` vertices, vertex `i + 1` hanging off an
/// earlier vertex, and one ray per entry of `rays`.
fn tree(parents: &[(Index, i64, i64)], rays: &[Index]) -> Skeleton {
    let n = parents.len() + 1;
    let edges = parents
        .iter()
        .enumerate()
        .map(|(i, (p, num, den))| Edge { u: p.index(i + 1), v: i + 1, length: Rat::new(*num, *den) })
        .collect();
    let rays = rays.iter().enumerate().map(|(i, b)| Ray { base: b.index(n), puncture: format!("x{i}") }).collect();
    Skeleton::from_parts(SkeletonKind::Graph, (0..n).map(vertex).collect(), edges, rays, 0).unwrap()
}

/// Total order of the punctures whose rays sit on the `v` side of edge `e`.
fn far_side_degree(sk: &Skeleton, div: &Divisor, e: usize) -> i64 {
    let mut side = BTreeSet::from([sk.edges[e].v]);
    let mut stack = vec![sk.edges[e].v];
    while let Some(x) = stack.pop() {
        for (i, f) in sk.edges.iter().enumerate() {
            if i == e {
                continue;
            }
            for (a, b) in [(f.u, f.v), (f.v, f.u)] {
                if a == x && side.insert(b) {
                    stack.push(b);
                }
            }
        }
    }
    sk.rays.iter().filter(|r| side.contains(&r.base)).map(|r| div.order(&r.puncture)).sum()
}

/// A random tree and a degree-zero divisor on its punctures.
fn tree_strategy() -> impl Strategy<Value = (Skeleton, Divisor)> {
    (
        prop::collection::vec((any::<Index>(), 1i64..10, 1i64..5), 0..8),
        prop::collection::vec((any::<Index>(), -4i64..=4), 2..9),
    )
        .prop_map(|(parents, rays)| {
            let sk = tree(&parents, &rays.iter().map(|(b, _)| *b).collect::<Vec<_>>());
            let mut orders: Vec<i64> = rays.iter().map(|(_, n)| *n).collect();
            let last = orders.len() - 1;
            orders[last] -= orders.iter().sum::<i64>();
            let div = Divisor::new(sk.rays.iter().map(|r| r.puncture.clone()).zip(orders));
            (sk, div)
        })
}

/// Circle of length `l` with punctures `p{i}` at the given fractions of `l`
/// and `o` at 0. Each order list becomes a degree-zero divisor; when
/// `principal`, puncture `fix{j}` (order 1) is placed so that the positions
/// weighted by orders sum to zero modulo `l`. Returns each divisor with that
/// weighted sum reduced modulo `l`.
fn tate_case(l: &Rat, spots: &[(i64, i64)], order_sets: &[Vec<i64>], principal: bool) -> (Skeleton, Vec<(Divisor, Rat)>) {
    let mut punctures: Vec<(String, Rat)> = spots.iter().enumerate().map(|(i, (a, b))| (format!("p{i}"), l * &Rat::new(*a, *b))).collect();
    punctures.push(("o".into(), Rat::zero()));
    let mut divisors = Vec::new();
    for (j, orders) in order_sets.iter().enumerate() {
        let mut d: Vec<(String, i64)> = orders.iter().enumerate().map(|(i, n)| (format!("p{i}"), *n)).collect();
        let deg: i64 = orders.iter().sum();
        let sum: Rat = orders.iter().zip(&punctures).map(|(n, (_, x))| Rat::from_int(*n) * x).sum();
        if principal {
            punctures.push((format!("fix{j}"), (-&sum).rem_euclid(l)));
            d.push((format!("fix{j}"), 1));
            d.push(("o".into(), -deg - 1));
        } else {
            d.push(("o".into(), -deg));
        }
        divisors.push(Divisor::new(d));
    }
    let sk = build_tate_skeleton(l, &punctures).unwrap();
    let weighted = divisors
        .into_iter()
        .map(|d| {
            let total: Rat = d
                .orders()
                .iter()
                .map(|(p, n)| Rat::from_int(*n) * &punctures.iter().find(|(q, _)| q == p).unwrap().1)
                .sum();
            (d, total.rem_euclid(l))
        })
        .collect();
    (sk, weighted)
}

type TateInput = (Rat, Vec<(i64, i64)>, Vec<i64>, Vec<i64>);

fn tate_strategy() -> impl Strategy<Value = TateInput> {
    ((1i64..20, 1i64..5), prop::collection::vec((0i64..12, 1i64..7), 1..6)).prop_flat_map(|((a, b), spots)| {
        let n = spots.len();
        let spots: Vec<(i64, i64)> = spots.into_iter().map(|(x, y)| (x % y, y)).collect();
        (
            Just(Rat::new(a, b)),
            Just(spots),
            prop::collection::vec(-3i64..=3, n),
            prop::collection::vec(-3i64..=3, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tree_slopes_are_far_side_degrees((sk, div) in tree_strategy()) {
        let f = solve_slope(&sk, &div).unwrap();
        for e in 0..sk.edges.len() {
            prop_assert_eq!(f.edge_slopes[e], far_side_degree(&sk, &div, e));
        }
        for (i, r) in sk.rays.iter().enumerate() {
            prop_assert_eq!(f.ray_slopes[i], div.order(&r.puncture));
        }
        for v in 0..sk.vertices.len() {
            prop_assert_eq!(f.change_of_slope(&sk, v), 0);
        }
    }

    #[test]
    fn tree_values_integrate_slopes((sk, div) in tree_strategy()) {
        let f = solve_slope(&sk, &div).unwrap();
        prop_assert!(f.values[sk.base_vertex].is_zero());
        for v in 0..sk.vertices.len() {
            prop_assert_eq!(f.evaluate(&sk, v), f.values[v].clone());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn tate_principal_divisors((l, spots, o1, _) in tate_strategy()) {
        let (sk, ds) = tate_case(&l, &spots, &[o1], true);
        let (div, defect) = &ds[0];
        prop_assert!(defect.is_zero());
        let f = solve_slope(&sk, div).unwrap();
        for v in 0..sk.vertices.len() {
            prop_assert_eq!(f.change_of_slope(&sk, v), 0);
        }
        // Around the circle the increments cancel.
        let around: Rat = sk.edges.iter().zip(&f.edge_slopes).map(|(e, s)| Rat::from_int(*s) * &e.length).sum();
        prop_assert!(around.is_zero());
        for (i, e) in sk.edges.iter().enumerate() {
            prop_assert_eq!(&f.values[e.v] - &f.values[e.u], Rat::from_int(f.edge_slopes[i]) * &e.length);
        }
    }

    #[test]
    fn tate_principality_matches_abel_jacobi((l, spots, o1, _) in tate_strategy()) {
        let (sk, ds) = tate_case(&l, &spots, &[o1], false);
        let (div, defect) = &ds[0];
        match solve_slope(&sk, div) {
            Ok(_) => prop_assert!(defect.is_zero()),
            Err(Error::NonPrincipalOnTate { .. }) => prop_assert!(!defect.is_zero()),
            Err(e) => prop_assert!(false, "unexpected error {}", e),
        }
    }

    #[test]
    fn tate_superposition((l, spots, o1, o2) in tate_strategy()) {
        let (sk, ds) = tate_case(&l, &spots, &[o1, o2], true);
        let f1 = solve_slope(&sk, &ds[0].0).unwrap();
        let f2 = solve_slope(&sk, &ds[1].0).unwrap();
        let sum = solve_slope(&sk, &ds[0].0.add(&ds[1].0)).unwrap();
        prop_assert_eq!(sum, f1.add(&f2));
    }

    #[test]
    fn subdivision_leaves_the_image_unchanged(
        (l, spots, o1, o2) in tate_strategy(),
        pick in any::<Index>(),
        (a, b) in (1i64..7, 2i64..8),
    ) {
        let (sk, ds) = tate_case(&l, &spots, &[o1, o2], true);
        let e = pick.index(sk.edges.len());
        let pos = &sk.edges[e].length * &Rat::new(a % b, b);
        prop_assume!(pos.is_positive());
        let fine = sk.subdivide(e, &pos).unwrap();
        let coarse: Vec<_> = ds.iter().map(|(d, _)| solve_slope(&sk, d).unwrap()).collect();
        let refined: Vec<_> = ds.iter().map(|(d, _)| solve_slope(&fine, d).unwrap()).collect();
        for (f, g) in coarse.iter().zip(&refined) {
            for v in 0..sk.vertices.len() {
                prop_assert_eq!(&f.values[v], &g.values[v]);
            }
            prop_assert_eq!(g.edge_slopes[e], f.edge_slopes[e]);
            prop_assert_eq!(g.edge_slopes[sk.edges.len()], f.edge_slopes[e]);
        }
        let (a, _) = trop_map(&sk, &coarse).unwrap();
        let (b, _) = trop_map(&fine, &refined).unwrap();
        prop_assert_eq!(a.canonical(), b.canonical());
    }
}

#[test]
fn tangent_conventions() {
    let edges = vec![Edge { u: 0, v: 1, length: Rat::from_int(2) }];
    let rays = vec![Ray { base: 0, puncture: "zero".into() }, Ray { base: 1, puncture: "pole".into() }];
    let sk = Skeleton::from_parts(SkeletonKind::Graph, vec![vertex(0), vertex(1)], edges, rays, 0).unwrap();
    let f = solve_slope(&sk, &Divisor::new([("zero", 2), ("pole", -2)])).unwrap();
    assert_eq!(f.outgoing_slope(Tangent::Edge { edge: 0, forward: true }), -2);
    assert_eq!(f.outgoing_slope(Tangent::Edge { edge: 0, forward: false }), 2);
    assert_eq!(f.values[1], Rat::from_int(-4));
}
